#include "heisen/heat.hpp"

#include <cmath>

namespace heisen {

namespace {

std::vector<std::size_t> axis_strides(const LatticeDomain& lat) {
    std::vector<std::size_t> stride(lat.dim());
    std::size_t acc = 1;
    for (std::size_t a = lat.dim(); a-- > 0;) {
        stride[a] = acc;
        acc *= static_cast<std::size_t>(lat.axes[a].count);
    }
    return stride;
}

/// Stencil row of the Heisenberg Laplacian at an interior node, as
/// (neighbor flat index, weight) pairs including the center.
struct StencilRow {
    std::vector<std::pair<std::size_t, double>> entries;
};

StencilRow laplacian_row(const LatticeDomain& lat, std::size_t f,
                         const std::vector<std::size_t>& stride) {
    const int n = lat.n;
    const auto idx = lat.multi_index(f);
    for (std::size_t a = 0; a < lat.dim(); ++a)
        if (idx[a] < 1 || idx[a] > lat.axes[a].count - 2)
            throw std::invalid_argument("laplacian_row: stencil exits lattice");
    const GroupPoint p = lat.point(idx);
    const std::size_t ss = stride[2 * n];
    const double hs = lat.axes[2 * n].h;
    StencilRow row;
    auto add = [&](std::size_t g, double w) { row.entries.emplace_back(g, w); };
    double center = 0.0;
    for (int j = 0; j < n; ++j) {
        const std::size_t sx = stride[j], sy = stride[n + j];
        const double hx = lat.axes[j].h, hy = lat.axes[n + j].h;
        add(f + sx, 1.0 / (hx * hx));
        add(f - sx, 1.0 / (hx * hx));
        add(f + sy, 1.0 / (hy * hy));
        add(f - sy, 1.0 / (hy * hy));
        center += -2.0 / (hx * hx) - 2.0 / (hy * hy);
        const double cy = p.x[j] / (4.0 * hy * hs);  // + x u_{y s}
        add(f + sy + ss, cy);
        add(f + sy - ss, -cy);
        add(f - sy + ss, -cy);
        add(f - sy - ss, cy);
        const double cx = -p.y[j] / (4.0 * hx * hs);  // - y u_{x s}
        add(f + sx + ss, cx);
        add(f + sx - ss, -cx);
        add(f - sx + ss, -cx);
        add(f - sx - ss, cx);
    }
    const double z2 = p.z_norm_sq();
    add(f + ss, 0.25 * z2 / (hs * hs));
    add(f - ss, 0.25 * z2 / (hs * hs));
    center += -0.5 * z2 / (hs * hs);
    add(f, center);
    return row;
}

}  // namespace

double heat_stable_dt(const LatticeDomain& lat) {
    lat.validate();
    const auto stride = axis_strides(lat);
    const double hs = lat.axes[2 * lat.n].h;
    double worst = 0.0;
    for (std::size_t f = 0; f < lat.node_count(); ++f) {
        if (!lat.mask[f]) continue;
        const GroupPoint p = lat.point(f);
        double c = 0.0;
        for (int j = 0; j < lat.n; ++j) {
            const double hx = lat.axes[j].h, hy = lat.axes[lat.n + j].h;
            c += 2.0 / (hx * hx) + 2.0 / (hy * hy);
            c += std::abs(p.x[j]) / (hy * hs) + std::abs(p.y[j]) / (hx * hs);  // drift slack
        }
        c += 0.5 * p.z_norm_sq() / (hs * hs);
        worst = std::max(worst, c);
    }
    return 0.9 / worst;
}

Trajectory solve_heat_dirichlet(const LatticeDomain& lat, const Eigen::VectorXd& u0,
                                const BoundaryData& g, const std::vector<double>& out_times,
                                HeatScheme scheme, double dt) {
    lat.validate();
    if (out_times.empty()) throw std::invalid_argument("solve_heat_dirichlet: no output times");
    const auto stride = axis_strides(lat);
    const auto omega = lat.omega_nodes();
    const std::size_t m = omega.size();
    if (static_cast<std::size_t>(u0.size()) != m)
        throw std::invalid_argument("solve_heat_dirichlet: u0 size mismatch");

    std::vector<StencilRow> rows(m);
    for (std::size_t a = 0; a < m; ++a) rows[a] = laplacian_row(lat, omega[a], stride);

    const double dt_max = heat_stable_dt(lat);
    if (scheme == HeatScheme::explicit_euler) {
        if (!(dt > 0.0)) dt = dt_max;
        if (dt > dt_max * (1.0 + 1e-12))
            throw std::invalid_argument("solve_heat_dirichlet: stability violation in explicit mode");
    } else if (!(dt > 0.0)) {
        throw std::invalid_argument("solve_heat_dirichlet: implicit mode needs dt > 0");
    }

    std::vector<std::size_t> exterior;
    std::vector<GroupPoint> ext_pts;
    for (std::size_t f = 0; f < lat.node_count(); ++f)
        if (!lat.mask[f]) {
            exterior.push_back(f);
            ext_pts.push_back(lat.point(f));
        }
    std::vector<double> field(lat.node_count(), 0.0);
    auto refresh_exterior = [&](double t) {
        if (!g) return;
        for (std::size_t i = 0; i < exterior.size(); ++i)
            field[exterior[i]] = g(ext_pts[i], t);
    };
    for (std::size_t a = 0; a < m; ++a) field[omega[a]] = u0[static_cast<Eigen::Index>(a)];

    // implicit mode: dense I - h*L over Omega columns, factored per distinct
    // step length (each output interval is subdivided into equal steps
    // h <= dt, so h can differ between intervals)
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    std::vector<std::size_t> flat_to_omega(lat.node_count(), static_cast<std::size_t>(-1));
    for (std::size_t a = 0; a < m; ++a) flat_to_omega[omega[a]] = a;
    double factored_h = -1.0;
    auto ensure_factored = [&](double h) {
        if (h == factored_h) return;
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                                      static_cast<Eigen::Index>(m));
        for (std::size_t a = 0; a < m; ++a)
            for (const auto& [gidx, w] : rows[a].entries)
                if (flat_to_omega[gidx] != static_cast<std::size_t>(-1))
                    M(static_cast<Eigen::Index>(a),
                      static_cast<Eigen::Index>(flat_to_omega[gidx])) -= h * w;
        lu.compute(M);
        factored_h = h;
    };

    Trajectory traj;
    traj.nodes.assign(omega.begin(), omega.end());
    traj.times = out_times;
    std::vector<double> lv(m);
    double t = 0.0;
    for (double tout : out_times) {
        const double span = tout - t;
        const int steps = span > 0.0 ? static_cast<int>(std::ceil(span / dt - 1e-12)) : 0;
        const double h = steps > 0 ? span / steps : 0.0;
        for (int sstep = 0; sstep < steps; ++sstep) {
            if (scheme == HeatScheme::explicit_euler) {
                refresh_exterior(t);
                for (std::size_t a = 0; a < m; ++a) {
                    double acc = 0.0;
                    for (const auto& [gidx, w] : rows[a].entries) acc += w * field[gidx];
                    lv[a] = acc;
                }
                for (std::size_t a = 0; a < m; ++a) field[omega[a]] += h * lv[a];
            } else {
                // backward Euler: (I - h L) v^{m+1} = v^m + h * (boundary part at t+h)
                ensure_factored(h);
                refresh_exterior(t + h);
                Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
                for (std::size_t a = 0; a < m; ++a) {
                    double b = 0.0;
                    for (const auto& [gidx, w] : rows[a].entries)
                        if (flat_to_omega[gidx] == static_cast<std::size_t>(-1))
                            b += w * field[gidx];
                    rhs[static_cast<Eigen::Index>(a)] = field[omega[a]] + h * b;
                }
                const Eigen::VectorXd next = lu.solve(rhs);
                for (std::size_t a = 0; a < m; ++a)
                    field[omega[a]] = next[static_cast<Eigen::Index>(a)];
            }
            t += h;
        }
        t = tout;
        Eigen::VectorXd state(static_cast<Eigen::Index>(m));
        for (std::size_t a = 0; a < m; ++a) state[static_cast<Eigen::Index>(a)] = field[omega[a]];
        traj.states.push_back(std::move(state));
    }
    return traj;
}

SmoothTestField make_test_field(const std::string& name) {
    SmoothTestField f;
    f.name = name;
    if (name == "one") {
        f.value = [](const GroupPoint&) { return 1.0; };
        f.laplacian = [](const GroupPoint&) { return 0.0; };
    } else if (name == "x") {
        f.value = [](const GroupPoint& p) { return p.x[0]; };
        f.laplacian = [](const GroupPoint&) { return 0.0; };
    } else if (name == "y") {
        f.value = [](const GroupPoint& p) { return p.y[0]; };
        f.laplacian = [](const GroupPoint&) { return 0.0; };
    } else if (name == "s") {
        f.value = [](const GroupPoint& p) { return p.s; };
        f.laplacian = [](const GroupPoint&) { return 0.0; };
    } else if (name == "x2") {
        f.value = [](const GroupPoint& p) { return p.x[0] * p.x[0]; };
        f.laplacian = [](const GroupPoint&) { return 2.0; };
    } else if (name == "gaussian") {
        // v = e^{-(x^2+y^2+s^2)}; the mixed drift terms cancel:
        // L v = [(4x^2-2) + (4y^2-2) + (x^2+y^2)(s^2 - 1/2)] v
        f.value = [](const GroupPoint& p) {
            return std::exp(-(p.z_norm_sq() + p.s * p.s));
        };
        f.laplacian = [](const GroupPoint& p) {
            const double x = p.x[0], y = p.y[0], s = p.s;
            const double v = std::exp(-(x * x + y * y + s * s));
            return ((4.0 * x * x - 2.0) + (4.0 * y * y - 2.0) +
                    (x * x + y * y) * (s * s - 0.5)) *
                   v;
        };
    } else {
        throw std::invalid_argument("make_test_field: unknown field " + name);
    }
    return f;
}

std::vector<std::pair<double, double>> consistency_error(const KernelSpec& J,
                                                         const std::vector<double>& eps_list,
                                                         const SmoothTestField& v,
                                                         const LatticeDomain& lat) {
    lat.validate();
    Field vf = sample_field<double>(lat, v.value);
    const auto omega = lat.omega_nodes();
    std::vector<std::pair<double, double>> table;
    for (double eps : eps_list) {
        const Field lv = apply_rescaled_operator(J, eps, lat, vf);
        double sup = 0.0;
        for (std::size_t f : omega)
            sup = std::max(sup, std::abs(lv.values[f] - v.laplacian(lat.point(f))));
        table.emplace_back(eps, sup);
    }
    return table;
}

BarrierReport barrier_check(const std::vector<double>& times, const std::vector<double>& sup_err,
                            double K1, double K2, double eps, double alpha) {
    if (times.size() != sup_err.size())
        throw std::invalid_argument("barrier_check: size mismatch");
    BarrierReport rep;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double bound = K1 * std::pow(eps, alpha) * times[i] + K2 * eps;
        if (bound <= 0.0) {
            if (sup_err[i] > 0.0) rep.violated = true;
            continue;
        }
        rep.max_ratio = std::max(rep.max_ratio, sup_err[i] / bound);
    }
    if (rep.max_ratio > 1.0) rep.violated = true;
    return rep;
}

}  // namespace heisen
