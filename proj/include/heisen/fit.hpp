#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heisen {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y ~ slope*x + intercept.
inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 matching points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = m * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit f;
    f.slope = (m * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / m;
    return f;
}

/// Slope of log(y) against log(t); y must be positive.
inline double loglog_slope(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> lt(t.size()), ly(y.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("loglog_slope: data must be positive");
        lt[i] = std::log(t[i]);
        ly[i] = std::log(y[i]);
    }
    return least_squares(lt, ly).slope;
}

/// Slope of log(y) against t (exponential rate fit).
inline double exp_rate(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::invalid_argument("exp_rate: data must be positive");
        ly[i] = std::log(y[i]);
    }
    return least_squares(t, ly).slope;
}

}  // namespace heisen
