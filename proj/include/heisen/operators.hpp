#pragma once

#include <Eigen/Dense>

#include "heisen/kernel.hpp"
#include "heisen/lattice.hpp"

namespace heisen {

/// Left-invariant Heisenberg Laplacian in global coordinates,
///   L u = sum_j (u_{x_j x_j} + u_{y_j y_j})
///       + (1/4) sum_j (x_j^2 + y_j^2) u_{ss}
///       + sum_j (x_j u_{y_j s} - y_j u_{x_j s}),
/// discretized with centered second differences; each mixed derivative is
/// the composition of centered first differences. Nodes within one cell of
/// the lattice boundary are set to 0 (no one-sided stencils).
Field heisenberg_laplacian_apply(const LatticeDomain& lat, const Field& u);

/// Left group convolution (J * u)(p) = sum_q J(p q^{-1}) u(q) h^{2n+1}
/// over lattice nodes q (u is extended by 0 outside the lattice).
/// For n = 1 the sum is restricted to the support window of J; skipped
/// terms are exactly zero, so the result is bitwise identical to the
/// full double loop with the same ascending-q summation order.
Field group_convolve(const KernelSpec& J, const LatticeDomain& lat, const Field& u);

/// Reference double loop over all (p, q), ascending flat order.
Field group_convolve_bruteforce(const KernelSpec& J, const LatticeDomain& lat, const Field& u);

/// Dense collocation matrix over the Omega nodes (ascending flat order):
///   K[a][b] = J(p_a q_b^{-1}) h^{2n+1}.
/// For s-symmetric U(n)-invariant J this matrix is symmetric, since the
/// convolution argument satisfies J(q p^{-1}) = J((p q^{-1})^{-1}) = J(p q^{-1}).
struct KernelMatrix {
    Eigen::MatrixXd K;
    std::vector<std::size_t> nodes;  // flat lattice indices of the rows/cols
    double max_asymmetry = 0.0;      // max |K - K^T| entry, as built
};

KernelMatrix build_kernel_matrix(const KernelSpec& J, const LatticeDomain& lat);

}  // namespace heisen
