#pragma once

#include <complex>
#include <vector>

#include "heisen/radial.hpp"

namespace heisen {

/// Quadrature grid on the Heisenberg fan: a symmetric set {+-lambda_i} of
/// nodes with weights for integrals against the Plancherel measure
/// |lambda|^n dlambda, and a Laguerre truncation K_max.
/// The lambda=0 / eta ray carries no Plancherel mass and is excluded.
struct SpectralGrid {
    int n = 1;
    int K_max = 0;
    std::vector<double> lambdas;  // signed, ascending, no zero
    std::vector<double> weights;  // per node, include the |lambda|^n factor
    // Per-node Laguerre truncation: keep only |lambda|(2k+n) <= energy_cutoff.
    // This is where the spectrum of smooth profiles lives; beyond it the
    // quadrature cannot resolve the Laguerre oscillation on a fixed (r,s)
    // grid and would only contribute aliasing noise.
    double energy_cutoff = 0.0;  // 0 = no cutoff

    std::size_t node_count() const { return lambdas.size(); }

    /// Largest k retained at a node (inclusive).
    int k_cut(std::size_t node) const {
        if (energy_cutoff <= 0.0) return K_max;
        const double al = std::abs(lambdas[node]);
        const double kf = 0.5 * (energy_cutoff / al - n);
        if (kf < 0.0) return 0;
        if (kf >= K_max) return K_max;
        return static_cast<int>(kf);
    }

    /// Uniform nodes j*delta, j=1..N, mirrored to negative lambda.
    /// Trapezoid weights on [lambda_min, lambda_max] plus a closure term
    /// for the omitted [0, lambda_min) sliver (O(lambda_min^{n+1})).
    static SpectralGrid uniform(int n, double lambda_max, int n_lambda, int k_max,
                                double energy_cutoff = 0.0);

    /// Arbitrary positive nodes (mirrored) with caller-supplied weights
    /// for the positive side.
    static SpectralGrid from_positive_nodes(int n, const std::vector<double>& pos_nodes,
                                            const std::vector<double>& pos_weights, int k_max);

    bool compatible(const SpectralGrid& o) const {
        return n == o.n && K_max == o.K_max && lambdas == o.lambdas &&
               energy_cutoff == o.energy_cutoff;
    }
};

/// Values on the spectrum grid: hat f(lambda_i, k), k = 0..K_max.
struct SpectralCoefficients {
    SpectralGrid grid;
    std::vector<std::complex<double>> values;  // [node][k], k fastest
    bool real_origin = false;  // originating profile was real-valued

    std::complex<double>& at(std::size_t node, int k) {
        return values[node * (grid.K_max + 1) + k];
    }
    const std::complex<double>& at(std::size_t node, int k) const {
        return values[node * (grid.K_max + 1) + k];
    }

    static SpectralCoefficients zeros(const SpectralGrid& grid);

    double max_abs() const;
};

/// Forward spherical transform of a U(n)-invariant profile, reduced to the
/// 2D quadrature
///   hat f(lambda,k) = omega_{2n-1} int f(r,s) e^{-i lambda s}
///                     L_k^{n-1}(|lambda| r^2/2) e^{-|lambda| r^2/4} r^{2n-1} dr ds.
SpectralCoefficients forward(const RadialProfile& f, const SpectralGrid& grid);

/// Plancherel inversion evaluated on the (r,s) grid of `skeleton`:
///   f(z,s) = (2 pi)^{-(n+1)} sum_k binom(k+n-1,k)
///            int hat f(lambda,k) phi_{lambda,k}(z,s) |lambda|^n dlambda.
RadialProfile inverse(const SpectralCoefficients& c, const RadialProfile& skeleton);

/// L^1(Sigma) norm: sum_k int |g(lambda,k)| |lambda|^n dlambda.
double sigma_norm(const SpectralCoefficients& c);

/// Surface area of the unit sphere of R^{2n}: omega_{2n-1} = 2 pi^n / (n-1)!.
double sphere_area(int n);

/// Multiplicity * normalization applied per k in the inversion.
double inversion_multiplicity(int k, int n);

}  // namespace heisen
