#include <cmath>
#include <random>

#include "doctest.h"
#include "heisen/experiments.hpp"
#include "heisen/heat.hpp"
#include "heisen/kernel.hpp"
#include "heisen/lattice.hpp"
#include "heisen/operators.hpp"

using namespace heisen;

namespace {

LatticeDomain unit_box(int omega_cells, int collar_cells, double halfwidth = 1.0) {
    return make_box_lattice(1, {halfwidth, halfwidth, halfwidth},
                            {omega_cells, omega_cells, omega_cells},
                            {collar_cells, collar_cells, collar_cells});
}

/// Max |Lu - analytic| over nodes at least `margin` cells from the lattice
/// boundary (where the centered stencil is valid).
double laplacian_error(const LatticeDomain& lat, const SmoothTestField& tf) {
    const Field u = sample_real_field(lat, tf.value);
    const Field lap = heisenberg_laplacian_apply(lat, u);
    double err = 0.0;
    for (std::size_t f = 0; f < lat.node_count(); ++f) {
        const auto mi = lat.multi_index(f);
        bool interior = true;
        for (std::size_t a = 0; a < lat.dim(); ++a)
            if (mi[a] < 1 || mi[a] >= lat.axes[a].count - 1) interior = false;
        if (!interior) continue;
        err = std::max(err, std::abs(lap.values[f] - tf.laplacian(lat.point(f))));
    }
    return err;
}

}  // namespace

TEST_CASE("lattice Laplacian: exact on low-degree fields") {
    const LatticeDomain lat = unit_box(7, 1);
    for (const char* name : {"one", "x", "y", "s", "x2"}) {
        CAPTURE(name);
        CHECK(laplacian_error(lat, make_test_field(name)) < 1e-10);
    }
}

TEST_CASE("lattice Laplacian: second-order on a Gaussian") {
    const SmoothTestField tf = make_test_field("gaussian");
    double errs[2];
    int which = 0;
    for (int m : {9, 17}) {  // h and h/2 over the same box
        errs[which++] = laplacian_error(unit_box(m, 1), tf);
    }
    CHECK(errs[0] < 0.5);
    CHECK(errs[0] / errs[1] > 3.0);
}

TEST_CASE("group convolution: windowed equals brute force bitwise") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    const LatticeDomain lat = make_kernel_lattice(J, {0.6, 0.6, 0.6}, {5, 5, 5});
    std::mt19937 rng(123456u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(lat.node_count());
    for (auto& v : u.values) v = dist(rng);
    const Field fast = group_convolve(J, lat, u);
    const Field slow = group_convolve_bruteforce(J, lat, u);
    REQUIRE(fast.values.size() == slow.values.size());
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
        REQUIRE(fast.values[i] == slow.values[i]);  // bitwise
    }
}

TEST_CASE("kernel matrix: symmetric as built, asymmetric negative control") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    const LatticeDomain lat = make_kernel_lattice(J, {0.5, 0.5, 0.5}, {4, 4, 4});
    const KernelMatrix km = build_kernel_matrix(J, lat);
    CHECK(km.max_asymmetry == 0.0);
    CHECK(km.K.rows() == static_cast<Eigen::Index>(lat.omega_count()));
    // every entry nonnegative, diagonal positive
    CHECK(km.K.minCoeff() >= 0.0);
    CHECK(km.K.diagonal().minCoeff() > 0.0);

    // breaking J(z,s) = J(z,-s) must break the symmetry of the matrix
    KernelSpec Jbad = J;
    Jbad.s_offset = 0.3 * J.Rs;
    const KernelMatrix kmbad = build_kernel_matrix(Jbad, lat);
    CHECK(kmbad.max_asymmetry > 1e-6);
}

TEST_CASE("kernel reach bound covers the group shift") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    // if J(p q^{-1}) != 0 then |s_p - s_q| <= s_reach(|z_q|): spot-check by
    // scanning products against the bound
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const GroupPoint q(dist(rng), dist(rng), dist(rng));
        const GroupPoint p(dist(rng), dist(rng), dist(rng));
        const GroupPoint arg = group_mul(p, group_inverse(q));
        if (J.evaluate(arg) != 0.0) {
            CHECK(std::abs(p.s - q.s) <= J.s_reach(std::sqrt(q.z_norm_sq())) + 1e-12);
        }
    }
}

TEST_CASE("convolution acts as a spectral multiplier") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    const auto f = [](double r, double s) { return std::exp(-r * r - s * s); };
    const MultiplierCheckResult res =
        convolution_multiplier_check(f, J, 3.0, 4.0, 24, 33, 6.0, 64, 48);
    CHECK(res.fhat_max > 1.0);
    CHECK(res.max_discrepancy <= 5e-3 * res.fhat_max);
}

TEST_CASE("kernel lattice: collar swallows the kernel support") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    const LatticeDomain lat = make_kernel_lattice(J, {0.5, 0.5, 0.5}, {4, 4, 4});
    lat.validate();
    CHECK(lat.omega_count() == 64);
    // the collar must reach at least Rz beyond Omega in x and y
    CHECK(lat.axes[0].min <= -0.5 - J.Rz + 1e-12);
    CHECK(lat.axes[0].max() >= 0.5 + J.Rz - 1e-12);
    // and at least s_reach at the farthest Omega |z| corner in s (the group
    // shift grows with |z| of the evaluation point)
    const double zc = std::hypot(0.5, 0.5);
    CHECK(lat.axes[2].max() >= 0.5 + J.s_reach(zc) - 1e-12);
}
