#pragma once

#include <cmath>
#include <stdexcept>

#include "heisen/group.hpp"

namespace heisen {

enum class KernelShape { product_bump, ball_bump };

/// A concrete kernel J(z,s) = c * b(|z|/R_z) * b(s/R_s) with the C^1 bump
/// b(t) = (1-t^2)^2 on |t| <= 1, satisfying (H) (unit mass) and the
/// symmetry/moment hypotheses: J >= 0, continuous, compact support,
/// J(z,s) = J(z,-s), U(n)-invariant, and equal second moments
/// int J x_j^2 = int J y_j^2 = int J s^2 = C1.
struct KernelSpec {
    int n = 1;
    KernelShape shape = KernelShape::ball_bump;
    double Rz = 0.0;         // support radius in |z|
    double Rs = 0.0;         // support half-width in s
    double amplitude = 0.0;  // c = J(0,0)
    double mass = 0.0;       // int J (1 for built kernels, 2/C1 for rescaled)
    double C1 = 0.0;         // common second moment of the built (eps=1) kernel
    double eps = 1.0;        // rescale parameter (1 = as built)
    double s_offset = 0.0;   // nonzero only in negative-control tests

    static double bump(double t) {
        const double a = std::abs(t);
        if (a >= 1.0) return 0.0;
        const double u = 1.0 - a * a;
        return u * u;
    }

    double evaluate(double z_norm, double s) const {
        return amplitude * bump(z_norm / Rz) * bump((s - s_offset) / Rs);
    }

    double evaluate(const GroupPoint& p) const {
        return evaluate(std::sqrt(p.z_norm_sq()), p.s);
    }

    double value_at_origin() const { return evaluate(0.0, 0.0); }

    /// Reach of the kernel in s around a point with |z| = znorm, accounting
    /// for the group shift -Im<z,zt>/2 in the convolution argument.
    double s_reach(double z_norm) const {
        return Rs + std::abs(s_offset) + 0.5 * z_norm * Rz;
    }
};

/// Build a kernel of the given shape and z-radius: the s half-width R_s is
/// solved by bisection so that int J s^2 = int J x_1^2, then the amplitude
/// normalizes the mass to 1 (hypothesis (H)).
KernelSpec build_kernel(int n, KernelShape shape, double Rz);

/// Rescaled kernel J^eps(z,s) = (2 C1^{-1} / eps^{2n+2}) J(z/eps, s/eps^2);
/// support radii scale as (eps Rz, eps^2 Rs), total mass is 2/C1.
KernelSpec rescaled_kernel(const KernelSpec& J, double eps);

}  // namespace heisen
