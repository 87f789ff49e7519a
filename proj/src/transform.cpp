#include "heisen/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heisen/special.hpp"

namespace heisen {

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
}

double inversion_multiplicity(int k, int n) {
    // binom(k+n-1, k) * (2 pi)^{-(n+1)}
    double b = 1.0;
    for (int m = 1; m < n; ++m) b *= static_cast<double>(k + m) / m;
    return b * std::pow(2.0 * std::numbers::pi, -(n + 1));
}

SpectralGrid SpectralGrid::uniform(int n, double lambda_max, int n_lambda, int k_max,
                                   double energy_cutoff) {
    if (n < 1 || n_lambda < 3 || !(lambda_max > 0))
        throw std::invalid_argument("SpectralGrid: bad parameters");
    if (k_max < 0 || k_max > kLaguerreCap)
        throw std::invalid_argument("SpectralGrid: K_max out of range");
    const double d = lambda_max / n_lambda;
    std::vector<double> nodes(n_lambda), w(n_lambda);
    for (int j = 0; j < n_lambda; ++j) {
        const double lam = (j + 1) * d;
        nodes[j] = lam;
        w[j] = d * std::pow(lam, n);
    }
    w.back() *= 0.5;  // trapezoid outer end
    // Inner closure for the omitted sliver [0, lambda_min): fit
    // F(lambda) ~ a/lambda + b through the two innermost nodes and
    // integrate a lambda^{n-1} + b lambda^n exactly. The 1/lambda branch
    // matters because k-summed inversion integrands can approach a
    // summable 1/lambda divergence at the origin; a one-node closure
    // would incur an O(lambda_min) error there.
    const double dn1 = std::pow(d, n + 1);
    w.front() = 0.5 * d * std::pow(d, n) + 2.0 * dn1 / n - dn1 / (n + 1.0);
    w[1] += -2.0 * dn1 / n + 2.0 * dn1 / (n + 1.0);
    SpectralGrid g = from_positive_nodes(n, nodes, w, k_max);
    g.energy_cutoff = energy_cutoff;
    return g;
}

SpectralGrid SpectralGrid::from_positive_nodes(int n, const std::vector<double>& pos_nodes,
                                               const std::vector<double>& pos_weights,
                                               int k_max) {
    if (pos_nodes.size() != pos_weights.size() || pos_nodes.empty())
        throw std::invalid_argument("SpectralGrid: node/weight size mismatch");
    for (std::size_t j = 0; j < pos_nodes.size(); ++j) {
        if (!(pos_nodes[j] > 0.0) || !(pos_weights[j] > 0.0))
            throw std::invalid_argument("SpectralGrid: nodes and weights must be positive");
        if (j > 0 && pos_nodes[j] <= pos_nodes[j - 1])
            throw std::invalid_argument("SpectralGrid: nodes must be ascending");
    }
    SpectralGrid g;
    g.n = n;
    g.K_max = k_max;
    const std::size_t N = pos_nodes.size();
    g.lambdas.resize(2 * N);
    g.weights.resize(2 * N);
    for (std::size_t j = 0; j < N; ++j) {
        g.lambdas[N - 1 - j] = -pos_nodes[j];
        g.weights[N - 1 - j] = pos_weights[j];
        g.lambdas[N + j] = pos_nodes[j];
        g.weights[N + j] = pos_weights[j];
    }
    return g;
}

SpectralCoefficients SpectralCoefficients::zeros(const SpectralGrid& grid) {
    SpectralCoefficients c;
    c.grid = grid;
    c.values.assign(grid.node_count() * (grid.K_max + 1), {0.0, 0.0});
    return c;
}

double SpectralCoefficients::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

SpectralCoefficients forward(const RadialProfile& f, const SpectralGrid& grid) {
    if (f.n != grid.n) throw std::invalid_argument("forward: dimension mismatch");
    const int n = f.n, Nr = f.Nr, Ns = f.Ns, K = grid.K_max;
    const int alpha = n - 1;
    const double hr = f.hr(), hs = f.hs();
    const double omega = sphere_area(n);

    SpectralCoefficients out = SpectralCoefficients::zeros(grid);
    out.real_origin = true;
    for (const auto& v : f.values)
        if (v.imag() != 0.0) {
            out.real_origin = false;
            break;
        }

    // Euler-Maclaurin endpoint correction at r = 0 for the midpoint rule.
    // The radial integrand is odd (r times a smooth function of r^2), so
    // the midpoint sum has error -h^2/24 g'(0) + 7h^4/5760 g'''(0) - ...;
    // fitting A rho + B rho^3 + C rho^5 through the three innermost nodes
    // (rho = r/h) turns the correction into fixed extra weights there.
    double corr[3] = {0.0, 0.0, 0.0};
    if (Nr >= 3) {
        const double rho[3] = {0.5, 1.5, 2.5};
        double V[3][3], Vinv[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) V[i][j] = std::pow(rho[i], 2 * j + 1);
        const double det = V[0][0] * (V[1][1] * V[2][2] - V[1][2] * V[2][1]) -
                           V[0][1] * (V[1][0] * V[2][2] - V[1][2] * V[2][0]) +
                           V[0][2] * (V[1][0] * V[2][1] - V[1][1] * V[2][0]);
        Vinv[0][0] = (V[1][1] * V[2][2] - V[1][2] * V[2][1]) / det;
        Vinv[0][1] = (V[0][2] * V[2][1] - V[0][1] * V[2][2]) / det;
        Vinv[0][2] = (V[0][1] * V[1][2] - V[0][2] * V[1][1]) / det;
        Vinv[1][0] = (V[1][2] * V[2][0] - V[1][0] * V[2][2]) / det;
        Vinv[1][1] = (V[0][0] * V[2][2] - V[0][2] * V[2][0]) / det;
        Vinv[1][2] = (V[0][2] * V[1][0] - V[0][0] * V[1][2]) / det;
        Vinv[2][0] = (V[1][0] * V[2][1] - V[1][1] * V[2][0]) / det;
        Vinv[2][1] = (V[0][1] * V[2][0] - V[0][0] * V[2][1]) / det;
        Vinv[2][2] = (V[0][0] * V[1][1] - V[0][1] * V[1][0]) / det;
        for (int i = 0; i < 3; ++i)
            corr[i] =
                -(Vinv[0][i] / 24.0 - 7.0 * Vinv[1][i] / 960.0 + 31.0 * Vinv[2][i] / 8064.0);
    }

    std::vector<std::complex<double>> g(Nr);
    std::vector<std::complex<double>> es(Ns);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        const double lam = grid.lambdas[node];
        const double al = std::abs(lam);
        // s integral (trapezoid, halved endpoints)
        for (int j = 0; j < Ns; ++j) {
            double w = hs;
            if (j == 0 || j == Ns - 1) w *= 0.5;
            es[j] = std::polar(w, -lam * f.s(j));
        }
        for (int i = 0; i < Nr; ++i) {
            std::complex<double> acc{0.0, 0.0};
            const std::complex<double>* row = &f.values[static_cast<std::size_t>(i) * Ns];
            for (int j = 0; j < Ns; ++j) acc += row[j] * es[j];
            g[i] = acc;
        }
        // r integral with the Laguerre recurrence fused over k
        const int Kc = grid.k_cut(node);
        std::complex<double>* coeff = &out.values[node * (K + 1)];
        for (int i = 0; i < Nr; ++i) {
            const double r = f.r(i);
            const double x = 0.5 * al * r * r;
            double fac = omega * hr * std::pow(r, 2 * n - 1) * std::exp(-0.25 * al * r * r);
            if (i < 3) fac *= 1.0 + corr[i];
            const std::complex<double> base = fac * g[i];
            double prev = 1.0;
            coeff[0] += base;
            if (Kc == 0) continue;
            double cur = (1.0 + alpha - x) / (1.0 + alpha);
            coeff[1] += base * cur;
            for (int k = 1; k < Kc; ++k) {
                const double next = ((2.0 * k + alpha + 1.0 - x) * cur - k * prev) / (k + alpha + 1.0);
                prev = cur;
                cur = next;
                coeff[k + 1] += base * cur;
            }
        }
    }
    return out;
}

RadialProfile inverse(const SpectralCoefficients& c, const RadialProfile& skeleton) {
    const SpectralGrid& grid = c.grid;
    if (skeleton.n != grid.n) throw std::invalid_argument("inverse: dimension mismatch");
    const int n = grid.n, K = grid.K_max, Nr = skeleton.Nr, Ns = skeleton.Ns;
    const int alpha = n - 1;

    std::vector<double> multw(K + 1);
    for (int k = 0; k <= K; ++k) multw[k] = inversion_multiplicity(k, n);

    RadialProfile out = skeleton;
    std::fill(out.values.begin(), out.values.end(), std::complex<double>{0.0, 0.0});

    // Coefficients below this relative floor cannot move the synthesis by
    // more than ~1e-13 of its scale; skipping them makes synthesizing
    // long-time semigroup states (where almost every mode has decayed to
    // zero) cheap without affecting the result at working precision.
    const double floor_abs = 1e-18 * c.max_abs();

    std::vector<std::complex<double>> h(Nr);
    std::vector<std::complex<double>> es(Ns);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        const double lam = grid.lambdas[node];
        const double al = std::abs(lam);
        const double w = grid.weights[node];
        const std::complex<double>* coeff = &c.values[node * (K + 1)];
        int Kc = grid.k_cut(node);
        while (Kc > 0 && std::abs(coeff[Kc]) <= floor_abs) --Kc;
        if (Kc == 0 && std::abs(coeff[0]) <= floor_abs) continue;
        for (int j = 0; j < Ns; ++j) es[j] = std::polar(1.0, lam * skeleton.s(j));
        // radial synthesis: h(r) = sum_k W_k c(lambda,k) M_k(x) e^{-|lambda| r^2/4}
        for (int i = 0; i < Nr; ++i) {
            const double r = skeleton.r(i);
            const double x = 0.5 * al * r * r;
            std::complex<double> acc = coeff[0] * multw[0];
            if (Kc > 0) {
                double prev = 1.0;
                double cur = (1.0 + alpha - x) / (1.0 + alpha);
                acc += coeff[1] * (multw[1] * cur);
                for (int k = 1; k < Kc; ++k) {
                    const double next =
                        ((2.0 * k + alpha + 1.0 - x) * cur - k * prev) / (k + alpha + 1.0);
                    prev = cur;
                    cur = next;
                    acc += coeff[k + 1] * (multw[k + 1] * cur);
                }
            }
            h[i] = acc * (w * std::exp(-0.25 * al * r * r));
        }
        for (int i = 0; i < Nr; ++i) {
            std::complex<double>* row = &out.values[static_cast<std::size_t>(i) * Ns];
            const std::complex<double> hi = h[i];
            for (int j = 0; j < Ns; ++j) row[j] += hi * es[j];
        }
    }
    return out;
}

double sigma_norm(const SpectralCoefficients& c) {
    const int K = c.grid.K_max;
    double total = 0.0;
    for (std::size_t node = 0; node < c.grid.node_count(); ++node) {
        const std::complex<double>* coeff = &c.values[node * (K + 1)];
        double ksum = 0.0;
        for (int k = 0; k <= K; ++k) ksum += std::abs(coeff[k]);
        total += c.grid.weights[node] * ksum;
    }
    return total;
}

}  // namespace heisen
