#pragma once

#include "heisen/grid_solver.hpp"

namespace heisen {

enum class HeatScheme { explicit_euler, implicit_euler };

/// Largest stable explicit step for the Laplacian stencil on this lattice:
/// 0.9 / max over Omega nodes of (sum of second-difference center weights
/// plus the drift-slack |x|/(h_y h_s) + |y|/(h_x h_s) from the mixed terms).
double heat_stable_dt(const LatticeDomain& lat);

/// Degenerate-parabolic Dirichlet problem v' = L v on Omega with v = g on
/// the boundary-adjacent exterior nodes. Explicit mode enforces the
/// stability bound; implicit Euler factors the dense (I - dt L) once.
Trajectory solve_heat_dirichlet(const LatticeDomain& lat, const Eigen::VectorXd& u0,
                                const BoundaryData& g, const std::vector<double>& out_times,
                                HeatScheme scheme, double dt);

/// Smooth test field with a hand-computed Laplacian (consistency oracle).
struct SmoothTestField {
    std::string name;
    std::function<double(const GroupPoint&)> value;
    std::function<double(const GroupPoint&)> laplacian;
};

/// Catalog of the standard test fields {1, x, y, s, x^2, gaussian} (n = 1).
SmoothTestField make_test_field(const std::string& name);

/// Table of (eps, sup_Omega |L~_eps v - L v|) with L v analytic.
std::vector<std::pair<double, double>> consistency_error(const KernelSpec& J,
                                                         const std::vector<double>& eps_list,
                                                         const SmoothTestField& v,
                                                         const LatticeDomain& lat);

/// Supersolution barrier |u^eps - v| <= K1 eps^alpha t + K2 eps, checked on
/// per-time sup errors; ratio = max over times of err / bound.
struct BarrierReport {
    double max_ratio = 0.0;
    bool violated = false;
};
BarrierReport barrier_check(const std::vector<double>& times, const std::vector<double>& sup_err,
                            double K1, double K2, double eps, double alpha);

}  // namespace heisen
