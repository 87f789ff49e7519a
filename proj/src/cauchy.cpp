#include "heisen/cauchy.hpp"

#include <cmath>
#include <stdexcept>

namespace heisen {

std::complex<double> SpectralMultiplier::factor(const SpectralGrid& grid, std::size_t node, int k,
                                                double t) const {
    if (kind == Kind::heat) {
        const double x = std::abs(grid.lambdas[node]) * (2.0 * k + grid.n);
        return std::exp(-x * t);
    }
    if (!Jhat.grid.compatible(grid))
        throw std::invalid_argument("SpectralMultiplier: grid mismatch with hat J");
    return std::exp((Jhat.at(node, k) - 1.0) * t);
}

SpectralCoefficients example_kernel_spectral(const SpectralGrid& grid) {
    SpectralCoefficients c = SpectralCoefficients::zeros(grid);
    c.real_origin = true;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        const double al = std::abs(grid.lambdas[node]);
        for (int k = 0; k <= grid.K_max; ++k)
            c.at(node, k) = std::exp(-al * (2.0 * k + grid.n));
    }
    return c;
}

SpectralCoefficients evolve_spectral(const SpectralCoefficients& u0, const SpectralMultiplier& m,
                                     double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolve_spectral: t must be >= 0");
    SpectralCoefficients out = u0;
    for (std::size_t node = 0; node < u0.grid.node_count(); ++node)
        for (int k = 0; k <= u0.grid.K_max; ++k)
            out.at(node, k) *= m.factor(u0.grid, node, k, t);
    return out;
}

FundamentalSplit fundamental_solution_split(const SpectralCoefficients& Jhat, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("fundamental_solution_split: t must be > 0");
    FundamentalSplit out;
    out.atom_mass = std::exp(-t);
    out.smooth_part = Jhat;
    for (std::size_t node = 0; node < Jhat.grid.node_count(); ++node)
        for (int k = 0; k <= Jhat.grid.K_max; ++k)
            out.smooth_part.at(node, k) =
                out.atom_mass * (std::exp(Jhat.at(node, k) * t) - 1.0);
    return out;
}

OriginExtrapolation extrapolate_to_zero(const SpectralCoefficients& u0) {
    const SpectralGrid& g = u0.grid;
    // the two smallest positive nodes; the grid is signed ascending, so the
    // positive half starts at node_count()/2
    const std::size_t half = g.node_count() / 2;
    if (g.node_count() < 4 || g.lambdas[half] <= 0.0 || g.lambdas[half - 1] >= 0.0)
        throw std::invalid_argument("extrapolate_to_zero: need a symmetric grid with >= 2 nodes per side");
    const double l1 = g.lambdas[half];
    const double l2 = g.lambdas[half + 1];
    const double d = l2 * l2 - l1 * l1;
    OriginExtrapolation out;
    out.u0_at_zero.resize(g.K_max + 1);
    for (int k = 0; k <= g.K_max; ++k) {
        // average +-lambda to enforce evenness, then fit a + b lambda^2
        const std::complex<double> v1 = 0.5 * (u0.at(half, k) + u0.at(half - 1, k));
        const std::complex<double> v2 = 0.5 * (u0.at(half + 1, k) + u0.at(half - 2, k));
        const std::complex<double> a = (l2 * l2 * v1 - l1 * l1 * v2) / d;
        out.u0_at_zero[k] = a;
        const double scale = std::max({std::abs(v1), std::abs(v2), 1e-300});
        out.max_rel_disagreement =
            std::max(out.max_rel_disagreement, std::abs(v1 - v2) / scale);
    }
    return out;
}

SpectralCoefficients asymptotic_profile(const SpectralCoefficients& u0) {
    const OriginExtrapolation ex = extrapolate_to_zero(u0);
    SpectralCoefficients G = SpectralCoefficients::zeros(u0.grid);
    G.real_origin = u0.real_origin;
    for (std::size_t node = 0; node < u0.grid.node_count(); ++node) {
        const double al = std::abs(u0.grid.lambdas[node]);
        for (int k = 0; k <= u0.grid.K_max; ++k)
            G.at(node, k) = std::exp(-al * (2.0 * k + u0.grid.n)) * ex.u0_at_zero[k];
    }
    return G;
}

double profile_lp_norm(const RadialProfile& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("profile_lp_norm: p must be >= 1");
    const double omega = sphere_area(f.n);
    const double hr = f.hr(), hs = f.hs();
    double acc = 0.0;
    for (int i = 0; i < f.Nr; ++i) {
        const double rw = std::pow(f.r(i), 2 * f.n - 1) * hr;
        double srow = 0.0;
        for (int j = 0; j < f.Ns; ++j) {
            double w = hs;
            if (j == 0 || j == f.Ns - 1) w *= 0.5;
            srow += std::pow(std::abs(f.at(i, j)), p) * w;
        }
        acc += rw * srow;
    }
    return std::pow(omega * acc, 1.0 / p);
}

namespace {

double fit_loglog(const std::vector<double>& t, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = std::log(t[i]), v = std::log(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

DecayTable sup_norm_decay(const SpectralCoefficients& u0hat, const SpectralMultiplier& m,
                          const std::vector<double>& times, const RadialProfile& skeleton) {
    DecayTable out;
    const double power = u0hat.grid.n + 1.0;
    std::vector<double> ts, ns;
    for (double t : times) {
        const SpectralCoefficients ut = evolve_spectral(u0hat, m, t);
        const RadialProfile u = inverse(ut, skeleton);
        DecayRow row;
        row.t = t;
        row.norm = u.max_abs();
        row.scaled = std::pow(t, power) * row.norm;
        out.rows.push_back(row);
        if (t > 0.0 && row.norm > 0.0) {
            ts.push_back(t);
            ns.push_back(row.norm);
        }
    }
    if (ts.size() >= 2) out.fitted_slope = fit_loglog(ts, ns);
    return out;
}

LpTable lp_decay(const SpectralCoefficients& u0hat, const SpectralMultiplier& m, double p,
                 const std::vector<double>& times, const RadialProfile& skeleton, double u0_l2) {
    if (!(p > 2.0)) throw std::invalid_argument("lp_decay: p must be > 2");
    LpTable out;
    std::vector<double> ts, direct, interp;
    for (double t : times) {
        const SpectralCoefficients ut = evolve_spectral(u0hat, m, t);
        const RadialProfile u = inverse(ut, skeleton);
        LpRow row;
        row.t = t;
        row.direct_norm = profile_lp_norm(u, p);
        row.interp_bound =
            std::pow(u0_l2, 2.0 / p) * std::pow(u.max_abs(), (p - 2.0) / p);
        out.rows.push_back(row);
        if (t > 0.0 && row.direct_norm > 0.0 && row.interp_bound > 0.0) {
            ts.push_back(t);
            direct.push_back(row.direct_norm);
            interp.push_back(row.interp_bound);
        }
    }
    if (ts.size() >= 2) {
        out.direct_slope = fit_loglog(ts, direct);
        out.interp_slope = fit_loglog(ts, interp);
    }
    return out;
}

}  // namespace heisen
