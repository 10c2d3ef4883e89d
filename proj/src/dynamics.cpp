#include "tcq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcq/analytic.hpp"
#include "tcq/errors.hpp"

namespace tcq {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_two_qubits(const ModelParams& params) {
    params.validate();
    if (params.n_qubits != 2) throw InvalidArgument("dynamics needs exactly two qubits");
}

// Both parity sectors of one adiabatic block.
struct Block {
    std::array<std::array<ZerothLevel, 2>, 2> lv;  // [kappa: 0 even, 1 odd][branch: 0 +, 1 -]
    int m;
};

Block make_block(const ModelParams& params, int m) {
    return {{zeroth_block(params, Parity::Even, m), zeroth_block(params, Parity::Odd, m)}, m};
}

std::array<double, 4> probabilities(const Block& blk, double t, ConfigBits initial) {
    const bool kept = (initial & 0b10) != 0;
    const int i0 = kept ? static_cast<int>(3 - initial) : static_cast<int>(initial);
    const double par_m = (blk.m & 1) ? -1.0 : 1.0;
    const double r2 = 1.0 / std::sqrt(2.0);

    std::array<cd, 4> amp{};
    for (int kk = 0; kk < 2; ++kk) {
        const double kap = kk == 0 ? 1.0 : -1.0;
        const double f = kept ? r2 : kap * par_m * r2;
        std::array<cd, 2> w{};
        for (const auto& z : blk.lv[kk]) {
            const double proj = i0 == 0 ? z.d1 : z.d2;
            const cd ph = std::polar(1.0, -z.energy * t);
            w[0] += proj * ph * z.d1;
            w[1] += proj * ph * z.d2;
        }
        for (int j = 0; j < 2; ++j) {
            const int kb = 3 - j;  // kept bits
            amp[kb] += f * w[j] * r2;
            amp[3 ^ kb] += f * kap * par_m * w[j] * r2;
        }
    }
    std::array<double, 4> p{};
    for (int s = 0; s < 4; ++s) p[s] = std::norm(amp[s]);
    return p;
}

BlockCoefficients coefficients(const Block& blk) {
    const ZerothLevel& ep = blk.lv[0][0];
    const ZerothLevel& op = blk.lv[1][0];
    BlockCoefficients c;
    c.c1_plus = -ep.d1 * ep.d2;
    c.c1_minus = -op.d1 * op.d2;
    c.c2 = ep.d1 * ep.d1 * op.d2 * op.d2 + ep.d2 * ep.d2 * op.d1 * op.d1;
    c.theta_plus = ep.theta;
    c.theta_minus = op.theta;
    return c;
}

double p10_formula(const BlockCoefficients& c, double t) {
    const double tp = c.theta_plus, tm = c.theta_minus;
    return 0.5 * (1.0 + c.c1_plus * c.c1_plus * (std::cos(2.0 * tp * t) - 1.0) +
                  c.c1_minus * c.c1_minus * (std::cos(2.0 * tm * t) - 1.0) +
                  (1.0 - c.c2) * std::cos((tp - tm) * t) + c.c2 * std::cos((tp + tm) * t));
}

double observable_value(const std::array<double, 4>& p, Observable obs) {
    switch (obs) {
        case Observable::P11: return p[3];
        case Observable::P10: return p[2];
        case Observable::P01: return p[1];
        case Observable::P00: return p[0];
        case Observable::Inversion: return p[3] + p[1] - p[2] - p[0];
        default: throw InvalidArgument("observable not available from populations");
    }
}

}  // namespace

std::string to_string(Observable o) {
    switch (o) {
        case Observable::P10: return "p10";
        case Observable::P11: return "p11";
        case Observable::P01: return "p01";
        case Observable::P00: return "p00";
        case Observable::Inversion: return "inversion";
        case Observable::Concurrence: return "concurrence";
    }
    return "?";
}

Observable observable_from_string(const std::string& s) {
    for (Observable o : {Observable::P10, Observable::P11, Observable::P01, Observable::P00,
                         Observable::Inversion, Observable::Concurrence})
        if (to_string(o) == s) return o;
    throw InvalidArgument("unknown observable '" + s + "'");
}

std::vector<double> time_grid(double tmin, double tmax, int samples) {
    if (samples < 1) throw InvalidArgument("time grid needs at least one sample");
    if (!(tmax >= tmin)) throw InvalidArgument("time grid needs tmax >= tmin");
    std::vector<double> g(samples);
    for (int k = 0; k < samples; ++k)
        g[k] = samples == 1 ? tmin : tmin + (tmax - tmin) * k / (samples - 1.0);
    return g;
}

double physical_time(const ModelParams& params, double tau) {
    if (!(params.omegas.at(0) > 0.0))
        throw InvalidArgument("time axis omega_1 t / 2 pi needs omega_1 > 0");
    return 2.0 * kPi * tau / params.omegas[0];
}

std::array<double, 4> block_probabilities(const ModelParams& params, int m, double t,
                                          ConfigBits initial) {
    require_two_qubits(params);
    if (initial > 3) throw InvalidArgument("initial config must be a two-qubit bit mask");
    return probabilities(make_block(params, m), t, initial);
}

BlockCoefficients block_coefficients(const ModelParams& params, int m) {
    require_two_qubits(params);
    return coefficients(make_block(params, m));
}

double p10_block(const ModelParams& params, int m, double t) {
    return p10_formula(block_coefficients(params, m), t);
}

std::vector<double> poisson_weights(double z, int m_cutoff) {
    if (m_cutoff < 0) throw InvalidArgument("m_cutoff must be >= 0");
    std::vector<double> p(m_cutoff + 1);
    double sum = 0.0;
    for (int m = 0; m <= m_cutoff; ++m) {
        p[m] = z == 0.0 ? (m == 0 ? 1.0 : 0.0)
                        : std::exp(-z * z + 2.0 * m * std::log(std::fabs(z)) - std::lgamma(m + 1.0));
        sum += p[m];
    }
    if (1.0 - sum > 1e-6)
        throw CutoffError("Poisson weight beyond m_cutoff exceeds 1e-6; raise m_cutoff");
    for (double& v : p) v /= sum;
    return p;
}

Equilibria coherent_equilibria(const ModelParams& params, const CoherentPrep& prep) {
    require_two_qubits(params);
    const auto p = poisson_weights(prep.z, prep.m_cutoff);
    Equilibria e;
    for (int m = 0; m <= prep.m_cutoff; ++m) {
        BlockCoefficients c = block_coefficients(params, m);
        e.b += p[m] * (c.c1_plus * c.c1_plus + c.c1_minus * c.c1_minus);
    }
    e.p10_p01 = 0.5 * (1.0 - e.b);
    e.p11_p00 = 0.5 * e.b;
    return e;
}

DynamicsTrace coherent_observable(const ModelParams& params, const CoherentPrep& prep,
                                  Observable obs, const std::vector<double>& taus) {
    require_two_qubits(params);
    if (obs == Observable::Concurrence)
        throw InvalidArgument("concurrence is not a population observable");
    const auto p = poisson_weights(prep.z, prep.m_cutoff);
    std::vector<Block> blocks;
    for (int m = 0; m <= prep.m_cutoff; ++m) blocks.push_back(make_block(params, m));

    DynamicsTrace tr;
    tr.times = taus;
    tr.observable = obs;
    tr.method = "zeroth";
    tr.values.reserve(taus.size());
    for (double tau : taus) {
        const double t = physical_time(params, tau);
        double v = 0.0;
        for (int m = 0; m <= prep.m_cutoff; ++m)
            v += p[m] * observable_value(probabilities(blocks[m], t, prep.initial_config), obs);
        tr.values.push_back(v);
    }
    return tr;
}

DynamicsTrace inversion(const ModelParams& params, const CoherentPrep& prep,
                        const std::vector<double>& taus) {
    require_two_qubits(params);
    if (prep.initial_config != 0b10) throw InvalidArgument("inversion formula assumes initial |10>");
    const auto p = poisson_weights(prep.z, prep.m_cutoff);
    std::vector<BlockCoefficients> cs;
    for (int m = 0; m <= prep.m_cutoff; ++m) cs.push_back(block_coefficients(params, m));

    DynamicsTrace tr;
    tr.times = taus;
    tr.observable = Observable::Inversion;
    tr.method = "zeroth";
    for (double tau : taus) {
        const double t = physical_time(params, tau);
        double v = 0.0;
        for (int m = 0; m <= prep.m_cutoff; ++m) {
            const auto& c = cs[m];
            v += p[m] * ((c.d() - 1.0) * std::cos((c.theta_plus - c.theta_minus) * t) -
                         c.d() * std::cos((c.theta_plus + c.theta_minus) * t));
        }
        tr.values.push_back(v);
    }
    return tr;
}

std::complex<double> revival_term(int k, double z, double beta1, double omega_arg, double t) {
    if (beta1 == 0.0) throw InvalidArgument("revival series needs beta1 != 0");
    const double b2 = beta1 * beta1;
    const double f = z * z * b2;
    const double mu = omega_arg * t * std::exp(-0.5 * b2);
    const double mu_k = 2.0 * kPi * k * (1.0 + 0.5 * f) / b2;
    const double pkf = kPi * k * f;
    const double den = 1.0 + pkf * pkf;
    const double phi_re = -(mu - mu_k) * (mu - mu_k) * f * b2 / (2.0 * den);
    const double phi_im = 0.5 * std::atan(pkf) + mu - z * z * (mu * b2 - 2.0 * kPi * k);
    return std::exp(cd(phi_re, phi_im)) / std::pow(den, 0.25);
}

double revival_series(double z, double beta1, double omega_arg, double t, int k_max) {
    if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
    cd s = 0.0;
    for (int k = 0; k <= k_max; ++k) s += revival_term(k, z, beta1, omega_arg, t);
    return s.real();
}

int revival_kmax(double z, double beta1, double omega_arg, const std::vector<double>& ts) {
    double tmax = 0.0;
    for (double t : ts) tmax = std::max(tmax, t);
    const double b2 = beta1 * beta1;
    const double mu_max = omega_arg * tmax * std::exp(-0.5 * b2);
    for (int k = 1; k <= 64; ++k) {
        const double mu_k = 2.0 * kPi * k * (1.0 + 0.5 * z * z * b2) / b2;
        if (mu_k <= mu_max) continue;  // this revival centre is inside the window
        double worst = 0.0;
        for (double t : ts) worst = std::max(worst, std::abs(revival_term(k, z, beta1, omega_arg, t)));
        if (worst < 1e-8) return k;
    }
    return 64;
}

DynamicsTrace revival_observable(const ModelParams& params, double z, Observable obs,
                                 const std::vector<double>& taus) {
    require_two_qubits(params);
    const auto kc = kept_configs(params);
    if (std::fabs(kc[1].kept.beta) > 1e-12)
        throw InvalidArgument("revival series needs homogeneous coupling (beta2 = 0)");
    if (obs != Observable::P10 && obs != Observable::Inversion)
        throw InvalidArgument("revival series covers p10 and inversion only");
    const double beta1 = kc[0].kept.beta;
    const double w1 = params.omegas[0];

    std::vector<double> ts;
    for (double tau : taus) ts.push_back(physical_time(params, tau));
    const int k1 = revival_kmax(z, beta1, w1, ts);
    const int k2 = revival_kmax(z, beta1, 2.0 * w1, ts);

    DynamicsTrace tr;
    tr.times = taus;
    tr.observable = obs;
    tr.method = "closed-form";
    for (double t : ts) {
        const double s1 = revival_series(z, beta1, w1, t, k1);
        if (obs == Observable::Inversion) {
            tr.values.push_back(-s1);
        } else {
            const double s2 = revival_series(z, beta1, 2.0 * w1, t, k2);
            tr.values.push_back(3.0 / 8.0 + 0.5 * s1 + 0.125 * s2);
        }
    }
    return tr;
}

QuantumState coherent_initial_state(const ModelParams& params, const CoherentPrep& prep,
                                    int cutoff) {
    params.validate();
    if (prep.initial_config >= static_cast<ConfigBits>(params.n_configs()))
        throw InvalidArgument("initial config out of range");
    const double alpha = prep.z - config_beta(params, prep.initial_config);
    QuantumState s = QuantumState::fock_zero(params.n_qubits, cutoff, QuantumState::Frame::Rotated);
    const Eigen::VectorXd c = coherent_amplitudes(alpha, cutoff);
    for (int k = 0; k <= cutoff; ++k)
        s.amplitudes(s.fock_index(static_cast<int>(prep.initial_config), k)) = c(k);
    if (1.0 - c.squaredNorm() > 1e-6)
        throw CutoffError("coherent amplitude " + std::to_string(alpha) + " does not fit in photon cutoff " +
                          std::to_string(cutoff));
    return s;
}

namespace {

void check_initial_norm(const QuantumState& initial) {
    if (std::fabs(initial.norm() - 1.0) > 1e-6)
        throw CutoffError("initial state not normalized within the photon cutoff");
}

}  // namespace

std::vector<QuantumState> propagate_oracle(const ModelParams& params, const QuantumState& initial,
                                           const std::vector<double>& times, int cutoff) {
    check_initial_norm(initial);
    FockOracle oracle(params, cutoff, initial.frame);
    std::vector<QuantumState> out;
    out.reserve(times.size());
    for (double t : times) {
        QuantumState s = oracle.evolve(initial, t);
        if (std::fabs(s.norm() - initial.norm()) > 1e-6) throw CutoffError("oracle norm drift");
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> config_populations(const QuantumState& psi) {
    std::vector<double> p(psi.n_configs(), 0.0);
    for (int s = 0; s < psi.n_configs(); ++s)
        for (int k = 0; k <= psi.n_max; ++k) p[s] += std::norm(psi.amplitudes(psi.fock_index(s, k)));
    return p;
}

DynamicsTrace oracle_observable(const ModelParams& params, const CoherentPrep& prep,
                                Observable obs, const std::vector<double>& taus, int cutoff) {
    require_two_qubits(params);
    if (cutoff < 0) cutoff = oracle_cutoff(params, prep.z);
    const QuantumState psi0 = coherent_initial_state(params, prep, cutoff);
    check_initial_norm(psi0);
    FockOracle oracle(params, cutoff);
    const Eigen::VectorXcd c = oracle.project(psi0);
    const Eigen::MatrixXcd v = oracle.vectors().cast<cd>();

    DynamicsTrace tr;
    tr.times = taus;
    tr.observable = obs;
    tr.method = "oracle";
    Eigen::VectorXcd ct(c.size());
    QuantumState psi = psi0;
    for (double tau : taus) {
        const double t = physical_time(params, tau);
        for (int k = 0; k < c.size(); ++k) ct(k) = c(k) * std::polar(1.0, -oracle.energies()(k) * t);
        psi.amplitudes.noalias() = v * ct;
        const auto pop = config_populations(psi);
        tr.values.push_back(observable_value({pop[0], pop[1], pop[2], pop[3]}, obs));
    }
    return tr;
}

}  // namespace tcq
