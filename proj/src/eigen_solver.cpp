#include "heisen/eigen_solver.hpp"

#include <cmath>

#include "heisen/fit.hpp"

namespace heisen {

namespace {

void require_symmetric(const KernelMatrix& km) {
    const double scale = std::max(1e-300, km.K.cwiseAbs().maxCoeff());
    if (km.max_asymmetry > 1e-12 * scale)
        throw std::invalid_argument("eigen solver: non-symmetric kernel matrix rejected");
}

/// Rayleigh-quotient (shifted inverse) iteration on symmetric M, starting
/// from v0, converging to the eigenpair nearest the initial shift. An
/// optional deflation direction is projected out at every step.
EigenResult rayleigh_iterate(const Eigen::MatrixXd& M, Eigen::VectorXd v, double shift,
                             const Eigen::VectorXd* deflate) {
    const Eigen::Index m = M.rows();
    auto project = [&](Eigen::VectorXd& w) {
        if (deflate) w -= (deflate->dot(w)) * (*deflate);
    };
    project(v);
    v.normalize();
    double value = shift;
    Eigen::VectorXd res;
    for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd S = M;
        S.diagonal().array() -= value;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
        Eigen::VectorXd w = lu.solve(v);
        if (!w.allFinite()) {
            // singular shift: nudge and retry
            value += 1e-12 + 1e-12 * std::abs(value);
            continue;
        }
        project(w);
        const double nrm = w.norm();
        if (nrm == 0.0) break;
        v = w / nrm;
        value = v.dot(M * v);
        res = M * v - value * v;
        if (deflate) res -= (deflate->dot(res)) * (*deflate);
        if (res.norm() <= 1e-13 * std::max(1.0, std::abs(value)) || res.norm() <= 1e-14) break;
    }
    EigenResult out;
    out.value = value;
    out.vector = v;
    out.residual = (M * v - value * v).norm();
    (void)m;
    return out;
}

}  // namespace

EigenResult dirichlet_principal(const KernelMatrix& km) {
    require_symmetric(km);
    const Eigen::Index m = km.K.rows();
    // power iteration on K locates the top of K's spectrum = bottom of I - K
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m).normalized();
    double mu = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd w = km.K * v;
        const double nrm = w.norm();
        if (nrm == 0.0) break;
        v = w / nrm;
        mu = v.dot(km.K * v);
    }
    Eigen::MatrixXd A = -km.K;
    A.diagonal().array() += 1.0;
    EigenResult out = rayleigh_iterate(A, v, 1.0 - mu, nullptr);
    if (out.vector.sum() < 0.0) out.vector = -out.vector;
    return out;
}

EigenResult neumann_gap(const KernelMatrix& km) {
    require_symmetric(km);
    const Eigen::Index m = km.K.rows();
    Eigen::MatrixXd M = -km.K;  // M = -A_N = diag(rowsum) - K, PSD
    M.diagonal() += km.K.rowwise().sum();
    const Eigen::VectorXd ones = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
    // start from a mean-zero ramp along the first coordinate of variation
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i) v[i] = static_cast<double>(i);
    v -= (ones.dot(v)) * ones;
    if (v.norm() == 0.0) throw std::invalid_argument("neumann_gap: degenerate start");
    v.normalize();
    // initial shift from a few deflated power steps on (cI - M)
    const double c = M.diagonal().maxCoeff() * 2.0 + 1.0;
    Eigen::VectorXd w = v;
    for (int it = 0; it < 60; ++it) {
        w = c * w - M * w;
        w -= (ones.dot(w)) * ones;
        const double nrm = w.norm();
        if (nrm == 0.0) break;
        w /= nrm;
    }
    const double shift = w.dot(M * w);
    EigenResult out = rayleigh_iterate(M, w, shift, &ones);
    return out;
}

DecayReport verify_decay(const Trajectory& traj, double rate, bool neumann) {
    if (traj.states.size() < 2) throw std::invalid_argument("verify_decay: need >= 2 snapshots");
    const Eigen::Index m = traj.states[0].size();
    std::vector<double> norms(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        Eigen::VectorXd u = traj.states[i];
        if (neumann) u.array() -= traj.states[i].sum() / static_cast<double>(m);
        norms[i] = u.norm();
    }
    DecayReport rep;
    rep.max_bound_ratio = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const double bound = std::exp(-rate * traj.times[i]) * norms[0];
        if (bound > 0.0) rep.max_bound_ratio = std::max(rep.max_bound_ratio, norms[i] / bound);
    }
    // fitted rate from the tail (second half of the samples)
    const std::size_t start = norms.size() / 2;
    std::vector<double> ts(traj.times.begin() + start, traj.times.end());
    std::vector<double> ns(norms.begin() + start, norms.end());
    rep.fitted_rate = -exp_rate(ts, ns);
    return rep;
}

}  // namespace heisen
