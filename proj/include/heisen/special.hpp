#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "heisen/group.hpp"

namespace heisen {

/// Laguerre truncation cap shared across the library. Quadrature grids
/// never exceed this k (slowly converging profiles need k in the
/// thousands near lambda = 0).
inline constexpr int kLaguerreCap = 4096;

/// Normalized Laguerre polynomial L_k^{alpha}(x) / binom(k+alpha, k),
/// equal to 1 at x = 0. Three-term recurrence, stable for x >= 0.
inline double laguerre_normalized(int k, int alpha, double x) {
    if (k < 0) throw std::invalid_argument("laguerre_normalized: k must be >= 0");
    if (k > kLaguerreCap) throw std::invalid_argument("laguerre_normalized: k exceeds cap");
    if (alpha < 0) throw std::invalid_argument("laguerre_normalized: alpha must be >= 0");
    double prev = 1.0;  // M_0
    if (k == 0) return prev;
    double cur = (1.0 + alpha - x) / (1.0 + alpha);  // M_1
    for (int m = 1; m < k; ++m) {
        // (m+alpha+1) M_{m+1} = (2m+alpha+1-x) M_m - m M_{m-1}
        const double next = ((2.0 * m + alpha + 1.0 - x) * cur - m * prev) / (m + alpha + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

/// Power series for J_nu, adequate up to |x| ~ 12.
inline double bessel_j_series(int nu, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int m = 1; m <= nu; ++m) term *= half / m;  // (x/2)^nu / nu!
    double sum = term;
    const double q = -half * half;
    for (int m = 1; m < 80; ++m) {
        term *= q / (m * (m + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
    }
    return sum;
}

}  // namespace detail

/// Bessel function of the first kind, integer order nu >= 0.
/// Power series for |x| <= 12; std::cyl_bessel_j beyond.
inline double bessel_j(int nu, double x) {
    if (nu < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    const double ax = std::abs(x);
    double v;
    if (ax <= 12.0) {
        v = detail::bessel_j_series(nu, ax);
    } else {
        v = std::cyl_bessel_j(static_cast<double>(nu), ax);
    }
    // J_nu(-x) = (-1)^nu J_nu(x)
    if (x < 0.0 && (nu % 2) == 1) v = -v;
    return v;
}

/// Spherical function phi_{lambda,k}(z,s) =
/// e^{i lambda s} L_k^{n-1}(|lambda||z|^2/2) e^{-|lambda||z|^2/4}.
inline std::complex<double> phi(double lambda, int k, int n, const GroupPoint& p) {
    if (lambda == 0.0)
        throw std::invalid_argument("phi: lambda must be nonzero (use eta for the lambda=0 ray)");
    if (static_cast<int>(p.n()) != n) throw std::invalid_argument("phi: dimension mismatch");
    const double al = std::abs(lambda);
    const double r2 = p.z_norm_sq();
    const double lag = laguerre_normalized(k, n - 1, 0.5 * al * r2);
    const double radial = lag * std::exp(-0.25 * al * r2);
    return std::polar(1.0, lambda * p.s) * radial;
}

/// Radial form of phi_{lambda,k} as a function of r = |z| (s factored out).
inline double phi_radial(double lambda, int k, int n, double r) {
    const double al = std::abs(lambda);
    const double r2 = r * r;
    return laguerre_normalized(k, n - 1, 0.5 * al * r2) * std::exp(-0.25 * al * r2);
}

/// eta_r(z,s) = 2^{n-1}(n-1)! J_{n-1}(r|z|) / (r|z|)^{n-1}; the value at
/// r|z| = 0 is the series limit 1. Independent of s.
inline double eta(double r, int n, const GroupPoint& p) {
    if (r < 0.0) throw std::invalid_argument("eta: r must be >= 0");
    if (static_cast<int>(p.n()) != n) throw std::invalid_argument("eta: dimension mismatch");
    const double a = r * std::sqrt(p.z_norm_sq());
    if (a == 0.0) return 1.0;
    // 2^{n-1}(n-1)! J_{n-1}(a)/a^{n-1}; for small a use the series of the
    // ratio to avoid 0/0 amplification.
    const int nu = n - 1;
    if (a < 1e-4) {
        // J_nu(a)/a^nu = (1/2)^nu / nu! * (1 - a^2/(4(nu+1)) + ...)
        double lead = 1.0;
        for (int m = 1; m <= nu; ++m) lead *= 0.5 / m;
        return std::pow(2.0, nu) * std::tgamma(nu + 1.0) * lead *
               (1.0 - a * a / (4.0 * (nu + 1.0)));
    }
    return std::pow(2.0, nu) * std::tgamma(nu + 1.0) * bessel_j(nu, a) / std::pow(a, nu);
}

}  // namespace heisen
