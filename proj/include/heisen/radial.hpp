#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace heisen {

/// U(n)-invariant function sampled on an (r, s) half-plane grid.
/// r nodes are cell midpoints (j+1/2)*hr, j = 0..Nr-1 (so the even
/// reflection r -> -r maps the first node onto itself); s nodes are
/// uniform and symmetric about 0, endpoints included.
struct RadialProfile {
    int n = 1;
    double r_max = 0.0;
    double s_max = 0.0;
    int Nr = 0;
    int Ns = 0;
    double tail_tol = 1e-12;  // declared bound on |f| at the grid edge
    std::vector<std::complex<double>> values;  // row-major [ir][is]

    double hr() const { return r_max / Nr; }
    double hs() const { return 2.0 * s_max / (Ns - 1); }
    double r(int i) const { return (i + 0.5) * hr(); }
    double s(int j) const { return -s_max + j * hs(); }

    std::complex<double>& at(int ir, int is) { return values[static_cast<std::size_t>(ir) * Ns + is]; }
    const std::complex<double>& at(int ir, int is) const {
        return values[static_cast<std::size_t>(ir) * Ns + is];
    }

    static RadialProfile zeros(int n, double r_max, double s_max, int Nr, int Ns) {
        if (n < 1 || Nr < 2 || Ns < 3 || !(r_max > 0) || !(s_max > 0))
            throw std::invalid_argument("RadialProfile: bad grid parameters");
        RadialProfile p;
        p.n = n;
        p.r_max = r_max;
        p.s_max = s_max;
        p.Nr = Nr;
        p.Ns = Ns;
        p.values.assign(static_cast<std::size_t>(Nr) * Ns, {0.0, 0.0});
        return p;
    }

    static RadialProfile sample(int n, double r_max, double s_max, int Nr, int Ns,
                                const std::function<double(double, double)>& fn) {
        RadialProfile p = zeros(n, r_max, s_max, Nr, Ns);
        double edge = 0.0;
        for (int i = 0; i < Nr; ++i)
            for (int j = 0; j < Ns; ++j) {
                const double v = fn(p.r(i), p.s(j));
                p.at(i, j) = v;
                if (i == Nr - 1 || j == 0 || j == Ns - 1) edge = std::max(edge, std::abs(v));
            }
        p.tail_tol = std::max(edge, 1e-300);
        return p;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Heisenberg Laplacian in polar-radial form for U(n)-invariant data:
/// L f = f_rr + (2n-1)/r f_r + (r^2/4) f_ss
/// (the z-part is the flat Laplacian on R^{2n} of a radial function; the
/// drift terms vanish on U(n)-invariant data).
/// Centered differences; the r=0 side uses the even extension
/// f(-r,s) = f(r,s), the outer r and both s edges are one-sided copies
/// (marked invalid by returning 0 there; callers compare on the interior).
inline RadialProfile radial_laplacian_apply(const RadialProfile& f) {
    RadialProfile out = f;
    const double hr = f.hr(), hs = f.hs();
    for (int i = 0; i < f.Nr; ++i) {
        const double r = f.r(i);
        for (int j = 0; j < f.Ns; ++j) {
            if (i == f.Nr - 1 || j == 0 || j == f.Ns - 1) {
                out.at(i, j) = 0.0;
                continue;
            }
            // even reflection across r=0: node 0's inner neighbor is itself
            const std::complex<double> fm = (i == 0) ? f.at(0, j) : f.at(i - 1, j);
            const std::complex<double> fc = f.at(i, j);
            const std::complex<double> fp = f.at(i + 1, j);
            std::complex<double> lap = (fp - 2.0 * fc + fm) / (hr * hr);
            lap += (2.0 * f.n - 1.0) / r * (fp - fm) / (2.0 * hr);
            lap += 0.25 * r * r * (f.at(i, j + 1) - 2.0 * fc + f.at(i, j - 1)) / (hs * hs);
            out.at(i, j) = lap;
        }
    }
    return out;
}

}  // namespace heisen
