#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "heisen/fit.hpp"
#include "heisen/group.hpp"
#include "heisen/io.hpp"
#include "heisen/kernel.hpp"
#include "heisen/lattice.hpp"
#include "heisen/radial.hpp"
#include "heisen/special.hpp"

using namespace heisen;

namespace {
bool points_equal(const GroupPoint& a, const GroupPoint& b, double tol = 0.0) {
    if (a.n() != b.n()) return false;
    for (std::size_t j = 0; j < a.n(); ++j)
        if (std::abs(a.x[j] - b.x[j]) > tol || std::abs(a.y[j] - b.y[j]) > tol) return false;
    return std::abs(a.s - b.s) <= tol;
}
}  // namespace

TEST_CASE("group: identity, inverse, associativity") {
    const GroupPoint e(0.0, 0.0, 0.0);
    const GroupPoint p(0.3, -1.2, 0.7);
    const GroupPoint q(-0.5, 0.25, -0.1);
    const GroupPoint r(1.0, 2.0, -3.0);

    CHECK(points_equal(group_mul(p, e), p));
    CHECK(points_equal(group_mul(e, p), p));
    CHECK(points_equal(group_mul(p, group_inverse(p)), e, 1e-16));
    CHECK(points_equal(group_mul(group_inverse(p), p), e, 1e-16));
    CHECK(points_equal(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)), 1e-15));
}

TEST_CASE("group: central twist oracle") {
    // (1,0,0)*(0,1,0): Im<z,zt> = y*xt - x*yt = -1, so s = -1/2
    const GroupPoint p(1.0, 0.0, 0.0);
    const GroupPoint q(0.0, 1.0, 0.0);
    const GroupPoint pq = group_mul(p, q);
    const GroupPoint qp = group_mul(q, p);
    CHECK(pq.s == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(qp.s == doctest::Approx(0.5).epsilon(1e-15));
    // commutator lands on the center
    const GroupPoint comm =
        group_mul(group_mul(p, q), group_mul(group_inverse(p), group_inverse(q)));
    CHECK(comm.x[0] == doctest::Approx(0.0));
    CHECK(comm.y[0] == doctest::Approx(0.0));
    CHECK(comm.s == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("group: dilations are automorphisms") {
    const GroupPoint p(0.4, -0.9, 1.3);
    const GroupPoint q(-1.1, 0.6, -0.2);
    for (double t : {0.25, 1.0, 7.5}) {
        CHECK(points_equal(dilate(t, group_mul(p, q)), group_mul(dilate(t, p), dilate(t, q)),
                           1e-14));
    }
    CHECK_THROWS(dilate(0.0, p));
    CHECK_THROWS(dilate(-1.0, p));
}

TEST_CASE("group: n = 2 arithmetic") {
    const GroupPoint p({1.0, 0.5}, {0.0, -1.0}, 0.2);
    const GroupPoint q({0.0, 2.0}, {1.0, 1.0}, -0.4);
    const GroupPoint pq = group_mul(p, q);
    // Im<z,zt> = sum_j (y_j xt_j - x_j yt_j) = (0*0 - 1*1) + (-1*2 - 0.5*1) = -3.5
    CHECK(pq.s == doctest::Approx(0.2 - 0.4 - 1.75).epsilon(1e-15));
    CHECK(pq.x[1] == doctest::Approx(2.5));
}

TEST_CASE("lattice: index roundtrip and geometry") {
    LatticeDomain lat = make_box_lattice(1, {1.0, 1.0, 0.5}, {5, 5, 3}, {2, 2, 4});
    lat.validate();
    CHECK(lat.axes[0].count == 9);
    CHECK(lat.axes[2].count == 11);
    CHECK(lat.omega_count() == 5 * 5 * 3);
    CHECK(lat.cell_volume() == doctest::Approx(0.5 * 0.5 * 0.5));
    for (std::size_t f : {std::size_t{0}, std::size_t{17}, lat.node_count() - 1}) {
        CHECK(lat.flat_index(lat.multi_index(f)) == f);
    }
    // the center node sits at the origin
    const GroupPoint c = lat.point(std::vector<int>{4, 4, 5});
    CHECK(c.x[0] == doctest::Approx(0.0));
    CHECK(c.s == doctest::Approx(0.0));
}

TEST_CASE("special: normalized Laguerre oracles") {
    // M_k(0) = 1 for any k, alpha
    for (int k : {0, 1, 5, 40}) CHECK(laguerre_normalized(k, 0, 0.0) == doctest::Approx(1.0));
    // alpha = 0: L_1 = 1 - x, L_2 = 1 - 2x + x^2/2, L_3 = 1 - 3x + 3x^2/2 - x^3/6
    for (double x : {0.3, 1.7, 4.0}) {
        CHECK(laguerre_normalized(1, 0, x) == doctest::Approx(1.0 - x).epsilon(1e-14));
        CHECK(laguerre_normalized(2, 0, x) ==
              doctest::Approx(1.0 - 2.0 * x + 0.5 * x * x).epsilon(1e-14));
        CHECK(laguerre_normalized(3, 0, x) ==
              doctest::Approx(1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0).epsilon(1e-13));
        // alpha = 1: L_1^1(x) = 2 - x, binom(2,1) = 2
        CHECK(laguerre_normalized(1, 1, x) == doctest::Approx(1.0 - 0.5 * x).epsilon(1e-14));
    }
    CHECK_THROWS(laguerre_normalized(-1, 0, 1.0));
    CHECK_THROWS(laguerre_normalized(kLaguerreCap + 1, 0, 1.0));
}

TEST_CASE("special: Bessel oracles and branch consistency") {
    CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0));
    CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0));
    // first zero of J_0
    CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-12);
    // parity J_nu(-x) = (-1)^nu J_nu(x)
    CHECK(bessel_j(1, -3.0) == doctest::Approx(-bessel_j(1, 3.0)).epsilon(1e-14));
    CHECK(bessel_j(2, -3.0) == doctest::Approx(bessel_j(2, 3.0)).epsilon(1e-14));
    // series and library branches agree near the switch point
    for (int nu : {0, 1, 3}) {
        CHECK(detail::bessel_j_series(nu, 11.9) ==
              doctest::Approx(std::cyl_bessel_j(nu, 11.9)).epsilon(1e-11));
    }
}

TEST_CASE("special: bounded spherical functions") {
    const GroupPoint p(0.7, -0.4, 0.9);
    for (double lam : {-2.0, 0.5}) {
        for (int k : {0, 1, 6}) {
            CHECK(std::abs(phi(lam, k, 1, p)) <= 1.0 + 1e-12);
        }
    }
    CHECK(phi(1.0, 0, 1, GroupPoint(0.0, 0.0, 0.0)) == std::complex<double>(1.0, 0.0));
    CHECK(eta(0.0, 1, p) == doctest::Approx(1.0));
    // eta is |eta| <= 1 and independent of s
    CHECK(eta(2.0, 1, p) == doctest::Approx(eta(2.0, 1, GroupPoint(0.7, -0.4, -5.0))));
    CHECK(std::abs(eta(3.0, 1, p)) <= 1.0 + 1e-12);
    CHECK_THROWS(phi(0.0, 0, 1, p));
}

TEST_CASE("radial: polar Laplacian matches analytic values") {
    // f = e^{-r^2 - s^2}, n = 1: f_rr + f_r/r = (4r^2 - 4) f, so
    // L f = (4r^2 - 4) f + (r^2/4)(4s^2 - 2) f
    const auto fn = [](double r, double s) { return std::exp(-r * r - s * s); };
    const auto lfn = [](double r, double s) {
        const double f = std::exp(-r * r - s * s);
        return (4.0 * r * r - 4.0) * f + 0.25 * r * r * (4.0 * s * s - 2.0) * f;
    };
    double errs[2];
    int which = 0;
    for (int N : {64, 128}) {
        const RadialProfile f = RadialProfile::sample(1, 4.0, 4.0, N, N + 1, fn);
        const RadialProfile lap = radial_laplacian_apply(f);
        double err = 0.0;
        for (int i = 0; i < f.Nr - 1; ++i)
            for (int j = 1; j < f.Ns - 1; ++j)
                err = std::max(err, std::abs(lap.at(i, j).real() - lfn(f.r(i), f.s(j))));
        errs[which++] = err;
    }
    CHECK(errs[0] < 0.05);
    // second-order convergence
    CHECK(errs[0] / errs[1] > 3.0);
}

TEST_CASE("kernel: hypothesis checks by independent quadrature") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 1.0);
    CHECK(J.Rz == doctest::Approx(1.0));
    CHECK(J.Rs == doctest::Approx(std::sqrt(7.0 / 8.0)).epsilon(1e-12));
    // dense midpoint quadrature over the support box
    const int N = 200;
    double mass = 0.0, mx2 = 0.0, my2 = 0.0, ms2 = 0.0;
    const double hx = 2.0 * J.Rz / N, hs = 2.0 * J.Rs / N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double x = -J.Rz + (i + 0.5) * hx;
            const double y = -J.Rz + (j + 0.5) * hx;
            const double r = std::sqrt(x * x + y * y);
            for (int m = 0; m < N; ++m) {
                const double s = -J.Rs + (m + 0.5) * hs;
                const double v = J.evaluate(r, s) * hx * hx * hs;
                mass += v;
                mx2 += x * x * v;
                my2 += y * y * v;
                ms2 += s * s * v;
            }
        }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(mx2 == doctest::Approx(my2).epsilon(1e-6));
    CHECK(mx2 == doctest::Approx(ms2).epsilon(1e-3));  // the defining moment balance
    CHECK(mx2 == doctest::Approx(J.C1).epsilon(1e-3));
    // support and positivity
    CHECK(J.evaluate(1.0001 * J.Rz, 0.0) == 0.0);
    CHECK(J.evaluate(0.0, 1.0001 * J.Rs) == 0.0);
    CHECK(J.value_at_origin() > 0.0);
    CHECK_THROWS(build_kernel(2, KernelShape::product_bump, 1.0));
    CHECK_THROWS(build_kernel(1, KernelShape::ball_bump, 0.0));
}

TEST_CASE("kernel: parabolic rescaling") {
    const KernelSpec J = build_kernel(1, KernelShape::ball_bump, 4.0);
    CHECK(J.C1 == doctest::Approx(2.0).epsilon(1e-10));  // Rz = 4 gives C1 = Rz^2/8 = 2
    const double eps = 0.25;
    const KernelSpec Je = rescaled_kernel(J, eps);
    CHECK(Je.Rz == doctest::Approx(eps * J.Rz));
    CHECK(Je.Rs == doctest::Approx(eps * eps * J.Rs));
    CHECK(Je.mass == doctest::Approx(2.0 / J.C1).epsilon(1e-12));
    // amplitude scale (2/C1) eps^{-(2n+2)}
    CHECK(Je.amplitude ==
          doctest::Approx(J.amplitude * (2.0 / J.C1) * std::pow(eps, -4.0)).epsilon(1e-12));
    CHECK_THROWS(rescaled_kernel(Je, 0.5));  // only unit-mass base kernels rescale
}

TEST_CASE("fit: least squares and derived slopes") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v - 0.75);
    const LineFit f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(-0.75).epsilon(1e-13));

    std::vector<double> p;
    for (double v : x) p.push_back(3.0 * std::pow(v, -1.5));
    CHECK(loglog_slope(x, p) == doctest::Approx(-1.5).epsilon(1e-12));

    std::vector<double> e;
    for (double v : x) e.push_back(0.7 * std::exp(-0.35 * v));
    CHECK(exp_rate(x, e) == doctest::Approx(-0.35).epsilon(1e-12));
    CHECK_THROWS(loglog_slope({1.0, 2.0}, {1.0, -1.0}));
}

TEST_CASE("io: config parse, strict types, echo roundtrip") {
    const Config cfg = parse_config_string(
        "# heading comment\n"
        "experiment = eigen\n"
        "tol = 1e-3   # inline comment\n"
        "count = 42\n"
        "\n");
    CHECK(config_get(cfg, "experiment", std::string()) == "eigen");
    CHECK(config_get(cfg, "tol", 0.0) == doctest::Approx(1e-3));
    CHECK(config_get(cfg, "count", 0) == 42);
    CHECK_THROWS(config_get(cfg, "experiment", 0.0));  // not a number
    CHECK_THROWS(parse_config_string("novalue\n"));

    const auto tmp = std::filesystem::temp_directory_path() / "heisen_cfg_test.echo";
    write_config(tmp.string(), cfg);
    const Config back = parse_config_file(tmp.string());
    CHECK(back == cfg);
    std::filesystem::remove(tmp);
}

TEST_CASE("io: format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0, -0.0, 42.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("io: csv writes are deterministic") {
    CsvTable t;
    t.columns = {"a", "b"};
    t.add_row({1.0 / 3.0, -2.0});
    t.add_row({0.1, 5e-15});
    namespace fs = std::filesystem;
    const auto p1 = fs::temp_directory_path() / "heisen_csv_1.csv";
    const auto p2 = fs::temp_directory_path() / "heisen_csv_2.csv";
    write_csv(p1.string(), t);
    write_csv(p2.string(), t);
    std::ifstream f1(p1), f2(p2);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CHECK(b1.str() == b2.str());
    CHECK(b1.str().rfind("a,b\n", 0) == 0);
    fs::remove(p1);
    fs::remove(p2);
}
