#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "heisen/group.hpp"

namespace heisen {

/// One lattice axis: uniform nodes min + i*h, i = 0..count-1.
struct Axis {
    double min = 0.0;
    double h = 0.0;
    int count = 0;

    double coord(int i) const { return min + i * h; }
    double max() const { return min + (count - 1) * h; }
};

/// Uniform box lattice in R^{2n+1} with an Omega-membership mask.
/// Axis order is [x_1..x_n, y_1..y_n, s]; the s axis is fastest-varying
/// in the flat node index.
struct LatticeDomain {
    int n = 1;
    std::vector<Axis> axes;          // size 2n+1
    std::vector<std::uint8_t> mask;  // 1 = Omega node, 0 = collar/exterior

    std::size_t dim() const { return axes.size(); }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (const auto& a : axes) c *= static_cast<std::size_t>(a.count);
        return c;
    }

    /// Cell volume h_1*...*h_{2n+1}.
    double cell_volume() const {
        double v = 1.0;
        for (const auto& a : axes) v *= a.h;
        return v;
    }

    std::size_t flat_index(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (std::size_t a = 0; a < axes.size(); ++a)
            f = f * static_cast<std::size_t>(axes[a].count) + static_cast<std::size_t>(idx[a]);
        return f;
    }

    std::vector<int> multi_index(std::size_t flat) const {
        std::vector<int> idx(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            idx[a] = static_cast<int>(flat % static_cast<std::size_t>(axes[a].count));
            flat /= static_cast<std::size_t>(axes[a].count);
        }
        return idx;
    }

    GroupPoint point(const std::vector<int>& idx) const {
        GroupPoint p;
        p.x.resize(n);
        p.y.resize(n);
        for (int j = 0; j < n; ++j) {
            p.x[j] = axes[j].coord(idx[j]);
            p.y[j] = axes[n + j].coord(idx[n + j]);
        }
        p.s = axes[2 * n].coord(idx[2 * n]);
        return p;
    }

    GroupPoint point(std::size_t flat) const { return point(multi_index(flat)); }

    std::size_t omega_count() const {
        return static_cast<std::size_t>(std::accumulate(mask.begin(), mask.end(), std::size_t{0}));
    }

    /// Indices of Omega nodes in ascending flat order.
    std::vector<std::size_t> omega_nodes() const {
        std::vector<std::size_t> out;
        out.reserve(omega_count());
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) out.push_back(i);
        return out;
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("LatticeDomain: n must be >= 1");
        if (axes.size() != static_cast<std::size_t>(2 * n + 1))
            throw std::invalid_argument("LatticeDomain: axes must have 2n+1 entries");
        for (const auto& a : axes)
            if (!(a.h > 0.0) || a.count < 1)
                throw std::invalid_argument("LatticeDomain: axis spacing must be positive, count >= 1");
        if (mask.size() != node_count())
            throw std::invalid_argument("LatticeDomain: mask size mismatch");
        if (omega_count() == 0)
            throw std::invalid_argument("LatticeDomain: mask is empty");
    }
};

/// Build a box lattice: Omega is the centered box of `omega_cells` nodes per
/// axis, surrounded by a collar of `collar_cells` nodes per axis (per side).
inline LatticeDomain make_box_lattice(int n, const std::vector<double>& omega_halfwidth,
                                      const std::vector<int>& omega_cells,
                                      const std::vector<int>& collar_cells) {
    const std::size_t d = static_cast<std::size_t>(2 * n + 1);
    if (omega_halfwidth.size() != d || omega_cells.size() != d || collar_cells.size() != d)
        throw std::invalid_argument("make_box_lattice: per-axis vectors must have 2n+1 entries");
    LatticeDomain lat;
    lat.n = n;
    lat.axes.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
        const int m = omega_cells[a];
        const int c = collar_cells[a];
        if (m < 1 || c < 0) throw std::invalid_argument("make_box_lattice: bad cell counts");
        const double h = 2.0 * omega_halfwidth[a] / (m > 1 ? (m - 1) : 1);
        lat.axes[a].h = h;
        lat.axes[a].count = m + 2 * c;
        lat.axes[a].min = -omega_halfwidth[a] - c * h;
    }
    lat.mask.assign(lat.node_count(), 0);
    std::vector<int> idx(d, 0);
    for (std::size_t f = 0; f < lat.mask.size(); ++f) {
        auto mi = lat.multi_index(f);
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a) {
            if (mi[a] < collar_cells[a] || mi[a] >= collar_cells[a] + omega_cells[a]) {
                inside = false;
                break;
            }
        }
        lat.mask[f] = inside ? 1 : 0;
    }
    lat.validate();
    return lat;
}

/// Real- or complex-valued function on the nodes of a LatticeDomain.
template <typename T>
struct BasicField {
    std::vector<T> values;
    double t = 0.0;

    BasicField() = default;
    explicit BasicField(std::size_t count, T fill = T{}) : values(count, fill) {}
};

using Field = BasicField<double>;
using FieldC = BasicField<std::complex<double>>;

template <typename T, typename F>
BasicField<T> sample_field(const LatticeDomain& lat, F&& fn) {
    BasicField<T> f(lat.node_count());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(lat.point(i));
    return f;
}

inline Field sample_real_field(const LatticeDomain& lat, const std::function<double(const GroupPoint&)>& fn) {
    return sample_field<double>(lat, fn);
}

}  // namespace heisen
