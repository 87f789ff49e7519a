#pragma once

#include <optional>

#include "heisen/transform.hpp"

namespace heisen {

/// Evolution multiplier on the spectrum: either the nonlocal semigroup
/// e^{(hat J(lambda,k) - 1) t} for a kernel transform hat J, or the heat
/// semigroup e^{-|lambda|(2k+n) t}.
struct SpectralMultiplier {
    enum class Kind { nonlocal, heat };
    Kind kind = Kind::heat;
    SpectralCoefficients Jhat;  // used by the nonlocal kind

    static SpectralMultiplier heat_multiplier() { return {Kind::heat, {}}; }
    static SpectralMultiplier nonlocal_multiplier(SpectralCoefficients jhat) {
        return {Kind::nonlocal, std::move(jhat)};
    }

    std::complex<double> factor(const SpectralGrid& grid, std::size_t node, int k,
                                double t) const;
};

/// hat J(lambda,k) = e^{-|lambda|(2k+n)} on the grid: the transform of the
/// model kernel whose expansion is 1 - |lambda|(2k+n) + o(|lambda|(2k+n)).
SpectralCoefficients example_kernel_spectral(const SpectralGrid& grid);

/// Pointwise multiplication hat u(t) = m(lambda,k,t) hat u0.
SpectralCoefficients evolve_spectral(const SpectralCoefficients& u0, const SpectralMultiplier& m,
                                     double t);

/// Fundamental solution split w(t) = e^{-t} delta_0 + nu(t):
/// atom mass e^{-t}, smooth part hat nu = e^{-t}(e^{hat J t} - 1).
struct FundamentalSplit {
    double atom_mass = 0.0;
    SpectralCoefficients smooth_part;
};
FundamentalSplit fundamental_solution_split(const SpectralCoefficients& Jhat, double t);

/// Even-in-lambda quadratic extrapolation of hat u0(lambda, k) to lambda=0
/// from the two smallest positive nodes; also reports the relative
/// disagreement between the two nodes (profile-extrapolation diagnostic).
struct OriginExtrapolation {
    std::vector<std::complex<double>> u0_at_zero;  // per k
    double max_rel_disagreement = 0.0;
};
OriginExtrapolation extrapolate_to_zero(const SpectralCoefficients& u0);

/// Asymptotic profile coefficients hat G(lambda,k) = e^{-|lambda|(2k+n)} hat u0(0,k).
SpectralCoefficients asymptotic_profile(const SpectralCoefficients& u0);

/// L^p norm on the profile grid with the radial volume element
/// omega_{2n-1} r^{2n-1} dr ds (midpoint in r, trapezoid in s).
double profile_lp_norm(const RadialProfile& f, double p);

struct DecayRow {
    double t = 0.0;
    double norm = 0.0;
    double scaled = 0.0;  // t^{n+1} * norm
};
struct DecayTable {
    std::vector<DecayRow> rows;
    double fitted_slope = 0.0;  // log-log least squares over all rows
};

/// Synthesizes u(t) = inverse(m(t) hat u0) on the skeleton grid for each
/// time and records the sup norm over the grid.
DecayTable sup_norm_decay(const SpectralCoefficients& u0hat, const SpectralMultiplier& m,
                          const std::vector<double>& times, const RadialProfile& skeleton);

struct LpRow {
    double t = 0.0;
    double direct_norm = 0.0;   // grid-quadrature L^p norm of u(t)
    double interp_bound = 0.0;  // ||u0||_2^{2/p} ||u(t)||_inf^{(p-2)/p}
};
struct LpTable {
    std::vector<LpRow> rows;
    double direct_slope = 0.0;
    double interp_slope = 0.0;
};

/// L^p decay table for p > 2: both the directly measured norm and the
/// two-point interpolation bound between L^2 of the data and the measured
/// sup norm (the quantity the L^p statement is derived from).
LpTable lp_decay(const SpectralCoefficients& u0hat, const SpectralMultiplier& m, double p,
                 const std::vector<double>& times, const RadialProfile& skeleton, double u0_l2);

}  // namespace heisen
