#include "tcq/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tcq/analytic.hpp"
#include "tcq/errors.hpp"
#include "tcq/exact.hpp"

namespace tcq {

namespace {

using cd = std::complex<double>;

QCoefficients q_from_level(const ZerothLevel& up, double t) {
    const double c1 = -up.d1 * up.d2;              // xi / (1 + xi^2)
    const double u = up.d1 * up.d1 - up.d2 * up.d2;  // (xi^2 - 1) / (xi^2 + 1)
    const double s = std::sin(up.theta * t);
    const double s2 = std::sin(2.0 * up.theta * t);
    QCoefficients q;
    q.q1_plus = 1.0 - 4.0 * c1 * u * s * s;
    q.q1_minus = 1.0 + 4.0 * c1 * u * s * s;
    const double re = 1.0 - 8.0 * c1 * c1 * s * s;
    q.q2_plus = cd(re, 2.0 * c1 * s2);
    q.q2_minus = cd(re, -2.0 * c1 * s2);
    return q;
}

Eigen::Matrix4cd x_matrix(const std::vector<double>& p, const std::vector<std::array<ZerothLevel, 2>>& ev,
                          const std::vector<std::array<ZerothLevel, 2>>& od, double t) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (size_t m = 0; m < p.size(); ++m) {
        for (int kk = 0; kk < 2; ++kk) {
            const double kap = kk == 0 ? 1.0 : -1.0;
            const double w = p[m] * (1.0 + kap * ((m & 1) ? -1.0 : 1.0)) / 4.0;
            if (w == 0.0) continue;
            const QCoefficients q = q_from_level(kk == 0 ? ev[m][0] : od[m][0], t);
            rho(0, 0) += w * q.q1_plus;
            rho(0, 3) += w * q.q2_plus;
            rho(3, 0) += w * q.q2_minus;
            rho(3, 3) += w * q.q1_minus;
        }
    }
    return rho;
}

void require_two_qubits(const ModelParams& params) {
    params.validate();
    if (params.n_qubits != 2) throw InvalidArgument("entanglement needs exactly two qubits");
}

QuantumState bell_initial_state(const ModelParams& params, double z, int cutoff) {
    QuantumState s = QuantumState::fock_zero(2, cutoff, QuantumState::Frame::Rotated);
    const Eigen::VectorXd c = coherent_amplitudes(z, cutoff);
    const double r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k <= cutoff; ++k) {
        s.amplitudes(s.fock_index(3, k)) = r * c(k);
        s.amplitudes(s.fock_index(0, k)) = r * c(k);
    }
    if (std::fabs(s.norm() - 1.0) > 1e-6) throw CutoffError("Bell preparation truncated by cutoff");
    (void)params;
    return s;
}

Eigen::Matrix4cd partial_trace_sx(const QuantumState& psi) {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            cd acc = 0.0;
            for (int k = 0; k <= psi.n_max; ++k)
                acc += psi.amplitudes(psi.fock_index(a, k)) * std::conj(psi.amplitudes(psi.fock_index(b, k)));
            r(a, b) = acc;
        }
    const Eigen::Matrix4cd u = sx_basis();
    return u.adjoint() * r * u;
}

}  // namespace

Eigen::Matrix4cd sx_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    // amplitude of a single qubit level (1 or 0) in |e> or |g>
    auto c = [h](bool g, int bit) { return (g && bit == 0) ? -h : h; };
    Eigen::Matrix4cd u;
    for (int col = 0; col < 4; ++col) {
        const bool g2 = col >= 2, g1 = (col & 1) != 0;  // (ee, eg, ge, gg)
        for (int s = 0; s < 4; ++s) u(s, col) = c(g2, (s >> 1) & 1) * c(g1, s & 1);
    }
    return u;
}

QCoefficients q_coefficients(const ModelParams& params, int m, Parity kappa, double t) {
    require_two_qubits(params);
    return q_from_level(zeroth_block(params, kappa, m)[0], t);
}

ReducedDensity reduced_density_analytic(const ModelParams& params, double z, double tau,
                                        int m_cutoff) {
    require_two_qubits(params);
    const auto p = poisson_weights(z, m_cutoff);
    std::vector<std::array<ZerothLevel, 2>> ev, od;
    for (int m = 0; m <= m_cutoff; ++m) {
        ev.push_back(zeroth_block(params, Parity::Even, m));
        od.push_back(zeroth_block(params, Parity::Odd, m));
    }
    return {x_matrix(p, ev, od, physical_time(params, tau)), tau, "analytic"};
}

double concurrence_analytic(const ModelParams& params, double z, double tau, int m_cutoff) {
    require_two_qubits(params);
    const auto p = poisson_weights(z, m_cutoff);
    const double t = physical_time(params, tau);
    cd acc = 0.0;
    for (int m = 0; m <= m_cutoff; ++m)
        for (Parity kap : {Parity::Even, Parity::Odd}) {
            const double w = p[m] * (1.0 + sign(kap) * ((m & 1) ? -1.0 : 1.0)) / 2.0;
            if (w == 0.0) continue;
            acc += w * q_from_level(zeroth_block(params, kap, m)[0], t).q2_plus;
        }
    return std::clamp(std::abs(acc), 0.0, 1.0);
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidArgument("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8) throw InvalidArgument("density matrix is not PSD");

    // round-off eigenvalues of a rank-deficient rho would otherwise leak in at sqrt(eps)
    Eigen::Vector4d lam = es.eigenvalues();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(lam.maxCoeff(), 0.0);
    for (int i = 0; i < 4; ++i) lam(i) = lam(i) > floor ? lam(i) : 0.0;
    const Eigen::Matrix4cd sq = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Matrix2cd sy;
    sy << 0.0, cd(0, -1), cd(0, 1), 0.0;
    Eigen::Matrix4cd yy;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) yy.block<2, 2>(2 * a, 2 * b) = sy(a, b) * sy;
    // sqrt(rho) rho~ sqrt(rho) = A A^+ with A = sqrt(rho) yy sqrt(rho)*, so the
    // lambdas are singular values of A
    const Eigen::Matrix4cd a = sq * yy * sq.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
    Eigen::Vector4d l = svd.singularValues();
    std::sort(l.data(), l.data() + 4, std::greater<double>());
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

double wootters_concurrence(const ReducedDensity& rho) { return wootters_concurrence(rho.rho); }

ReducedDensity reduced_density_oracle(const ModelParams& params, double z, double tau,
                                      int photon_cutoff) {
    require_two_qubits(params);
    if (photon_cutoff < 0) photon_cutoff = oracle_cutoff(params, z);
    const QuantumState psi0 = bell_initial_state(params, z, photon_cutoff);
    FockOracle oracle(params, photon_cutoff);
    const QuantumState psi = oracle.evolve(psi0, physical_time(params, tau));
    return {partial_trace_sx(psi), tau, "oracle"};
}

DynamicsTrace concurrence_trace(const ModelParams& params, double z,
                                const std::vector<double>& taus, const std::string& method,
                                int m_cutoff, int photon_cutoff) {
    require_two_qubits(params);
    DynamicsTrace tr;
    tr.times = taus;
    tr.observable = Observable::Concurrence;
    tr.method = method;
    if (method == "analytic") {
        const auto p = poisson_weights(z, m_cutoff);
        std::vector<std::array<ZerothLevel, 2>> ev, od;
        for (int m = 0; m <= m_cutoff; ++m) {
            ev.push_back(zeroth_block(params, Parity::Even, m));
            od.push_back(zeroth_block(params, Parity::Odd, m));
        }
        for (double tau : taus) {
            const Eigen::Matrix4cd rho = x_matrix(p, ev, od, physical_time(params, tau));
            tr.values.push_back(std::clamp(2.0 * std::abs(rho(0, 3)), 0.0, 1.0));
        }
    } else if (method == "oracle") {
        if (photon_cutoff < 0) photon_cutoff = oracle_cutoff(params, z);
        const QuantumState psi0 = bell_initial_state(params, z, photon_cutoff);
        FockOracle oracle(params, photon_cutoff);
        for (double tau : taus) {
            const QuantumState psi = oracle.evolve(psi0, physical_time(params, tau));
            tr.values.push_back(wootters_concurrence(partial_trace_sx(psi)));
        }
    } else {
        throw InvalidArgument("concurrence method must be analytic or oracle");
    }
    return tr;
}

}  // namespace tcq
