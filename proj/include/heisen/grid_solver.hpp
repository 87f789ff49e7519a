#pragma once

#include <cstdint>
#include <functional>

#include "heisen/operators.hpp"

namespace heisen {

enum class TimeScheme { exact_expm, rk4, euler, picard };

/// Solution snapshots on the Omega nodes of a lattice.
struct Trajectory {
    std::vector<std::size_t> nodes;  // flat lattice indices, ascending
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

/// Exterior (collar) data g(p, t); an empty function means g = 0.
using BoundaryData = std::function<double(const GroupPoint&, double)>;

/// Linear evolution u' = A u + b(t) with output at the requested times.
/// exact_expm uses the augmented-matrix exponential (constant b only);
/// euler/rk4 subdivide each output interval into steps of length <= dt;
/// picard iterates the integral map u -> u0 + int_0^t (A u + b) on windows
/// of length t0 with (C+1) t0 < 1, until successive iterates differ by
/// < 1e-12 in the max-over-time L1 norm.
Trajectory evolve_linear(const Eigen::MatrixXd& A,
                         const std::function<Eigen::VectorXd(double)>& forcing,
                         bool forcing_constant, const Eigen::VectorXd& u0,
                         const std::vector<double>& out_times, TimeScheme scheme, double dt,
                         double picard_C);

/// Dirichlet problem u' = J*u - u on Omega with exterior nodes pinned to g.
Trajectory solve_dirichlet(const KernelSpec& J, const LatticeDomain& lat,
                           const Eigen::VectorXd& u0, const BoundaryData& g,
                           const std::vector<double>& out_times, TimeScheme scheme, double dt);

/// Neumann problem u' = int_Omega J(...)(u(q) - u(p)) dq on Omega.
Trajectory solve_neumann(const KernelSpec& J, const LatticeDomain& lat,
                         const Eigen::VectorXd& u0, const std::vector<double>& out_times,
                         TimeScheme scheme, double dt);

/// Discrete mass sum_Omega u * h^{2n+1}.
double trajectory_mass(const LatticeDomain& lat, const Eigen::VectorXd& state);

struct ComparisonReport {
    double min_difference = 0.0;  // most negative value of (super - sub)
};
ComparisonReport check_comparison(const Trajectory& traj_super, const Trajectory& traj_sub);

/// Precomputed difference-form operator
///   (L~ v)(p) = (1/eps^2) sum_q J^eps(p q^{-1}) (v(q) - v(p)) h^{2n+1}
/// over the Omega nodes; rows index the full lattice field.
struct RescaledOperator {
    double eps = 1.0;
    std::vector<std::size_t> omega;
    std::vector<double> diag;  // (1/eps^2) * row sum of J^eps * h^{2n+1}
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

    /// out[a] = L~ v at omega[a], reading v on the full lattice.
    void apply(const std::vector<double>& full_field, std::vector<double>& out) const;
};

/// Builds the operator for J^eps = rescaled_kernel(J, eps); enforces the
/// resolution rule of >= 6 lattice cells across each support axis.
RescaledOperator build_rescaled_operator(const KernelSpec& J, double eps,
                                         const LatticeDomain& lat);

/// One-shot evaluation of the operator above; returns a full-lattice field
/// holding L~ v at Omega nodes and 0 elsewhere.
Field apply_rescaled_operator(const KernelSpec& J, double eps, const LatticeDomain& lat,
                              const Field& v);

/// Explicit integration of u' = L~ u on Omega with exterior pinned to g;
/// requires dt <= 0.1 eps^2 (stiffness of the 1/eps^2 operator).
Trajectory solve_rescaled_dirichlet(const KernelSpec& J, double eps, const LatticeDomain& lat,
                                    const Eigen::VectorXd& u0, const BoundaryData& g,
                                    const std::vector<double>& out_times, double dt);

}  // namespace heisen
