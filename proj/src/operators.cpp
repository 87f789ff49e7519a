#include "heisen/operators.hpp"

#include <algorithm>
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

}  // namespace

Field heisenberg_laplacian_apply(const LatticeDomain& lat, const Field& u) {
    lat.validate();
    if (u.values.size() != lat.node_count())
        throw std::invalid_argument("heisenberg_laplacian_apply: field size mismatch");
    const int n = lat.n;
    const auto stride = axis_strides(lat);
    const std::size_t ss = stride[2 * n];
    const double hs = lat.axes[2 * n].h;

    Field out(lat.node_count(), 0.0);
    out.t = u.t;
    const double* v = u.values.data();

    for (std::size_t f = 0; f < lat.node_count(); ++f) {
        const auto idx = lat.multi_index(f);
        bool interior = true;
        for (std::size_t a = 0; a < lat.dim(); ++a)
            if (idx[a] < 1 || idx[a] > lat.axes[a].count - 2) {
                interior = false;
                break;
            }
        if (!interior) continue;

        const GroupPoint p = lat.point(idx);
        double acc = 0.0;
        double z2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const std::size_t sx = stride[j], sy = stride[n + j];
            const double hx = lat.axes[j].h, hy = lat.axes[n + j].h;
            acc += (v[f + sx] - 2.0 * v[f] + v[f - sx]) / (hx * hx);
            acc += (v[f + sy] - 2.0 * v[f] + v[f - sy]) / (hy * hy);
            z2 += p.x[j] * p.x[j] + p.y[j] * p.y[j];
            // mixed terms: centered first differences composed
            const double u_ys = ((v[f + sy + ss] - v[f + sy - ss]) -
                                 (v[f - sy + ss] - v[f - sy - ss])) /
                                (4.0 * hy * hs);
            const double u_xs = ((v[f + sx + ss] - v[f + sx - ss]) -
                                 (v[f - sx + ss] - v[f - sx - ss])) /
                                (4.0 * hx * hs);
            acc += p.x[j] * u_ys - p.y[j] * u_xs;
        }
        acc += 0.25 * z2 * (v[f + ss] - 2.0 * v[f] + v[f - ss]) / (hs * hs);
        out.values[f] = acc;
    }
    return out;
}

Field group_convolve_bruteforce(const KernelSpec& J, const LatticeDomain& lat, const Field& u) {
    lat.validate();
    if (u.values.size() != lat.node_count())
        throw std::invalid_argument("group_convolve: field size mismatch");
    const double vol = lat.cell_volume();
    Field out(lat.node_count(), 0.0);
    out.t = u.t;
    const std::size_t N = lat.node_count();
    for (std::size_t fp = 0; fp < N; ++fp) {
        const GroupPoint p = lat.point(fp);
        double acc = 0.0;
        for (std::size_t fq = 0; fq < N; ++fq) {
            const GroupPoint q = lat.point(fq);
            const GroupPoint d = group_mul(p, group_inverse(q));
            acc += J.evaluate(d) * u.values[fq] * vol;
        }
        out.values[fp] = acc;
    }
    return out;
}

Field group_convolve(const KernelSpec& J, const LatticeDomain& lat, const Field& u) {
    if (lat.n != 1 || J.n != 1) return group_convolve_bruteforce(J, lat, u);
    lat.validate();
    if (u.values.size() != lat.node_count())
        throw std::invalid_argument("group_convolve: field size mismatch");
    const double vol = lat.cell_volume();
    const Axis& ax = lat.axes[0];
    const Axis& ay = lat.axes[1];
    const Axis& as = lat.axes[2];
    const std::size_t N = lat.node_count();
    Field out(N, 0.0);
    out.t = u.t;
    const double* uv = u.values.data();

    auto window = [](const Axis& a, double center, double radius, int& lo, int& hi) {
        lo = std::max(0, static_cast<int>(std::ceil((center - radius - a.min) / a.h - 1e-12)));
        hi = std::min(a.count - 1,
                      static_cast<int>(std::floor((center + radius - a.min) / a.h + 1e-12)));
    };

    std::size_t fp = 0;
    for (int ipx = 0; ipx < ax.count; ++ipx)
        for (int ipy = 0; ipy < ay.count; ++ipy)
            for (int ips = 0; ips < as.count; ++ips, ++fp) {
                const double px = ax.coord(ipx), py = ay.coord(ipy), ps = as.coord(ips);
                int x_lo, x_hi, y_lo, y_hi;
                window(ax, px, J.Rz, x_lo, x_hi);
                window(ay, py, J.Rz, y_lo, y_hi);
                double acc = 0.0;
                for (int iqx = x_lo; iqx <= x_hi; ++iqx) {
                    const double qx = ax.coord(iqx);
                    const double dx = px - qx;
                    for (int iqy = y_lo; iqy <= y_hi; ++iqy) {
                        const double qy = ay.coord(iqy);
                        const double dy = py - qy;
                        const double r2 = dx * dx + dy * dy;
                        if (r2 > J.Rz * J.Rz) continue;  // J = 0 on the whole s column
                        const double znorm = std::sqrt(r2);
                        // s argument of p q^{-1}: ps - qs - Im<z_p, z_q>/2
                        const double shift = 0.5 * (py * qx - px * qy);
                        // |s_arg - s_offset| <= Rs  =>  qs in [c - Rs, c + Rs]
                        const double c = ps - shift - J.s_offset;
                        int s_lo, s_hi;
                        window(as, c, J.Rs, s_lo, s_hi);
                        const std::size_t base =
                            (static_cast<std::size_t>(iqx) * ay.count + iqy) * as.count;
                        for (int iqs = s_lo; iqs <= s_hi; ++iqs) {
                            const double s_arg = ps - as.coord(iqs) - shift;
                            acc += J.evaluate(znorm, s_arg) * uv[base + iqs] * vol;
                        }
                    }
                }
                out.values[fp] = acc;
            }
    return out;
}

KernelMatrix build_kernel_matrix(const KernelSpec& J, const LatticeDomain& lat) {
    lat.validate();
    if (J.n != lat.n) throw std::invalid_argument("build_kernel_matrix: dimension mismatch");
    KernelMatrix km;
    km.nodes = lat.omega_nodes();
    const std::size_t m = km.nodes.size();
    const double vol = lat.cell_volume();
    km.K.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    std::vector<GroupPoint> pts(m);
    for (std::size_t a = 0; a < m; ++a) pts[a] = lat.point(km.nodes[a]);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const GroupPoint d = group_mul(pts[a], group_inverse(pts[b]));
            km.K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                J.evaluate(d) * vol;
        }
    km.max_asymmetry = (km.K - km.K.transpose()).cwiseAbs().maxCoeff();
    return km;
}

}  // namespace heisen
