#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heisen {

/// A point (x, y, s) of the Heisenberg group H_n in global coordinates.
/// The complex form is z = x + iy; s is the central coordinate.
struct GroupPoint {
    std::vector<double> x;
    std::vector<double> y;
    double s = 0.0;

    GroupPoint() = default;
    GroupPoint(std::vector<double> x_, std::vector<double> y_, double s_)
        : x(std::move(x_)), y(std::move(y_)), s(s_) {
        if (x.size() != y.size())
            throw std::invalid_argument("GroupPoint: x and y must have equal length");
    }

    /// Convenience constructor for n = 1.
    GroupPoint(double x1, double y1, double s_) : x{x1}, y{y1}, s(s_) {}

    std::size_t n() const { return x.size(); }

    double z_norm_sq() const {
        double r2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) r2 += x[j] * x[j] + y[j] * y[j];
        return r2;
    }
};

/// Im<z, zt> with the Hermitian product <z, zt> = sum_j z_j conj(zt_j),
/// so Im(z_j conj(zt_j)) = y_j*xt_j - x_j*yt_j.
inline double im_hermitian(const GroupPoint& p, const GroupPoint& q) {
    if (p.n() != q.n())
        throw std::invalid_argument("im_hermitian: dimension mismatch");
    double im = 0.0;
    for (std::size_t j = 0; j < p.n(); ++j)
        im += p.y[j] * q.x[j] - p.x[j] * q.y[j];
    return im;
}

/// Group product (z,s)*(zt,st) = (z+zt, s+st+Im<z,zt>/2).
inline GroupPoint group_mul(const GroupPoint& p, const GroupPoint& q) {
    if (p.n() != q.n())
        throw std::invalid_argument("group_mul: dimension mismatch");
    GroupPoint r;
    r.x.resize(p.n());
    r.y.resize(p.n());
    for (std::size_t j = 0; j < p.n(); ++j) {
        r.x[j] = p.x[j] + q.x[j];
        r.y[j] = p.y[j] + q.y[j];
    }
    r.s = p.s + q.s + 0.5 * im_hermitian(p, q);
    return r;
}

/// Group inverse: (z,s)^{-1} = (-z,-s) since <z,-z> is real.
inline GroupPoint group_inverse(const GroupPoint& p) {
    GroupPoint r = p;
    for (std::size_t j = 0; j < p.n(); ++j) {
        r.x[j] = -r.x[j];
        r.y[j] = -r.y[j];
    }
    r.s = -r.s;
    return r;
}

/// Anisotropic dilation delta_r(z,s) = (r^{1/2} z, r s), r > 0.
inline GroupPoint dilate(double r, const GroupPoint& p) {
    if (!(r > 0.0))
        throw std::invalid_argument("dilate: scale must be positive");
    const double sq = std::sqrt(r);
    GroupPoint q = p;
    for (std::size_t j = 0; j < p.n(); ++j) {
        q.x[j] *= sq;
        q.y[j] *= sq;
    }
    q.s *= r;
    return q;
}

}  // namespace heisen
