#pragma once

#include "heisen/grid_solver.hpp"

namespace heisen {

struct EigenResult {
    double value = 0.0;        // rate, 1/time units
    Eigen::VectorXd vector;    // eigenfunction on Omega, L2-normalized
    double residual = 0.0;     // ||A v - value v||_2
};

/// lambda_1 = smallest eigenvalue of A = I - K on Omega (zero extension
/// outside Omega; when int J = 1 the Rayleigh quotient over H_n x H_n of a
/// function vanishing outside Omega reduces algebraically to
/// <(I-K)u, u>_Omega, which is what this solves). Shifted inverse
/// iteration with dense LU; eigenfunction sign-normalized positive.
EigenResult dirichlet_principal(const KernelMatrix& km);

/// beta_1 = second-smallest eigenvalue of the Neumann generator
/// A_N u(p) = sum_q K[p][q](u(p) - u(q)); the smallest is 0 with constant
/// eigenvector, removed by deflation.
EigenResult neumann_gap(const KernelMatrix& km);

/// Fits the empirical decay rate of ||u(t)||_2 (Dirichlet) or
/// ||u(t) - M||_2 (Neumann, M = mean state) from the trajectory tail and
/// checks the L2 bound ||u(t)|| <= e^{-rate t} ||u(0)|| with slack 1+1e-6.
struct DecayReport {
    double fitted_rate = 0.0;   // positive = decay
    double max_bound_ratio = 0.0;  // max over times of ||u(t)|| / (e^{-rate t}||u0||)
};
DecayReport verify_decay(const Trajectory& traj, double rate, bool neumann);

}  // namespace heisen
