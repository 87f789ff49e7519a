#include "heisen/kernel.hpp"

#include <cmath>
#include <numbers>

#include "heisen/transform.hpp"  // sphere_area

namespace heisen {

namespace {

/// int_0^1 t^m (1-t^2)^2 dt.
double bump_moment(int m) {
    return 1.0 / (m + 1) - 2.0 / (m + 3) + 1.0 / (m + 5);
}

/// int_{R^{2n}} b(|z|/Rz) dz.
double z_mass(int n, double Rz) {
    return sphere_area(n) * std::pow(Rz, 2 * n) * bump_moment(2 * n - 1);
}

/// int_{R^{2n}} b(|z|/Rz) x_1^2 dz  (= the y_1^2 moment by symmetry).
double z_second_moment(int n, double Rz) {
    return sphere_area(n) * std::pow(Rz, 2 * n + 2) * bump_moment(2 * n + 1) / (2.0 * n);
}

/// int_R b(s/Rs) ds and int_R b(s/Rs) s^2 ds.
double s_mass(double Rs) { return 2.0 * Rs * bump_moment(0); }
double s_second_moment(double Rs) { return 2.0 * std::pow(Rs, 3) * bump_moment(2); }

}  // namespace

KernelSpec build_kernel(int n, KernelShape shape, double Rz) {
    if (n < 1) throw std::invalid_argument("build_kernel: n must be >= 1");
    if (!(Rz > 0.0)) throw std::invalid_argument("build_kernel: Rz must be positive");
    if (shape == KernelShape::product_bump && n != 1)
        throw std::invalid_argument(
            "build_kernel: product_bump is only U(n)-invariant for n = 1; use ball_bump");

    // Moment matching: f(Rs) = int J s^2 - int J x_1^2 (with c = 1) is
    // strictly increasing in Rs; bisect to machine precision.
    auto moment_gap = [&](double Rs) {
        return z_mass(n, Rz) * s_second_moment(Rs) - z_second_moment(n, Rz) * s_mass(Rs);
    };
    double lo = 1e-8 * Rz, hi = 16.0 * Rz;
    if (!(moment_gap(lo) < 0.0) || !(moment_gap(hi) > 0.0))
        throw std::runtime_error("build_kernel: moment matching bracket failed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (moment_gap(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * Rz) break;
    }
    const double Rs = 0.5 * (lo + hi);

    KernelSpec J;
    J.n = n;
    J.shape = shape;
    J.Rz = Rz;
    J.Rs = Rs;
    const double total = z_mass(n, Rz) * s_mass(Rs);
    J.amplitude = 1.0 / total;
    J.mass = 1.0;
    J.C1 = z_second_moment(n, Rz) * s_mass(Rs) / total;
    J.eps = 1.0;
    return J;
}

KernelSpec rescaled_kernel(const KernelSpec& J, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("rescaled_kernel: eps must be positive");
    if (J.eps != 1.0 || J.mass != 1.0)
        throw std::invalid_argument("rescaled_kernel: expects an unscaled unit-mass kernel");
    KernelSpec Je = J;
    Je.Rz = eps * J.Rz;
    Je.Rs = eps * eps * J.Rs;
    Je.amplitude = (2.0 / J.C1) * std::pow(eps, -(2 * J.n + 2)) * J.amplitude;
    Je.mass = 2.0 / J.C1;
    Je.eps = eps;
    Je.s_offset = eps * eps * J.s_offset;
    return Je;
}

}  // namespace heisen
