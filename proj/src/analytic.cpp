#include "tcq/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "tcq/errors.hpp"

namespace tcq {

namespace {

void require_two_qubits(const ModelParams& params, const char* what) {
    params.validate();
    if (params.n_qubits != 2) throw InvalidArgument(std::string(what) + " needs exactly two qubits");
}

double omega_at(const ModelParams& params, Parity kappa, int i, int m, int j, int n) {
    Truncation t;
    t.n_tr = std::max(m, n);
    return omega_element(params, t, kappa, i, m, j, n);
}

using cd = std::complex<double>;

// Closed-form roots; nullopt when the resolvent is degenerate or the result
// is visibly complex.
std::optional<std::array<double, 4>> ferrari(double b, double c, double d, double e) {
    const double scale = std::max({1.0, std::fabs(b), std::sqrt(std::fabs(c)),
                                   std::cbrt(std::fabs(d)), std::sqrt(std::sqrt(std::fabs(e)))});
    const double p = c - 3.0 * b * b / 8.0;
    const double q = (b * b * b - 4.0 * b * c + 8.0 * d) / 8.0;
    const double d0 = c * c - 3.0 * b * d + 12.0 * e;
    const double d1 = 2.0 * c * c * c - 9.0 * b * c * d + 27.0 * b * b * e + 27.0 * d * d - 72.0 * c * e;

    cd disc = std::sqrt(cd(d1 * d1 - 4.0 * d0 * d0 * d0, 0.0));
    cd big_q = std::pow((cd(d1, 0.0) + disc) / 2.0, 1.0 / 3.0);
    if (std::abs(big_q) < 1e-10) return std::nullopt;
    cd res = (big_q + cd(d0, 0.0) / big_q) / 3.0;
    if (std::fabs(res.imag()) > 1e-8 * scale * scale) return std::nullopt;
    double y_arg = -2.0 * p / 3.0 + res.real();
    if (y_arg < 0.0) {
        if (y_arg < -1e-10 * scale * scale) return std::nullopt;
        y_arg = 0.0;
    }
    const double y = 0.5 * std::sqrt(y_arg);
    if (std::fabs(y) < 1e-10) return std::nullopt;

    std::array<double, 4> r{};
    for (int gamma : {-1, +1}) {
        double arg = -(4.0 * y * y + 2.0 * p + gamma * q / y);
        if (arg < 0.0) {
            if (arg < -1e-8 * scale * scale) return std::nullopt;
            arg = 0.0;
        }
        double half = 0.5 * std::sqrt(arg);
        for (int s : {-1, +1})
            r[QuarticRoots::label(gamma, s)] = -b / 4.0 + gamma * y + s * half;
    }
    return r;
}

// Newton steps on the monic quartic; skipped whenever a step looks like a jump.
double polish(double x, double b, double c, double d, double e, double scale) {
    for (int it = 0; it < 3; ++it) {
        double f = (((x + b) * x + c) * x + d) * x + e;
        double fp = ((4.0 * x + 3.0 * b) * x + 2.0 * c) * x + d;
        if (fp == 0.0) break;
        double step = f / fp;
        if (!std::isfinite(step) || std::fabs(step) > 1e-6 * scale) break;
        x -= step;
    }
    return x;
}

}  // namespace

std::array<ZerothLevel, 2> zeroth_block(const ModelParams& params, Parity kappa, int m) {
    require_two_qubits(params, "zeroth_block");
    if (m < 0) throw InvalidArgument("zeroth_block: m must be >= 0");
    const auto kc = kept_configs(params);
    const double b1s = kc[0].kept.beta * kc[0].kept.beta;
    const double b2s = kc[1].kept.beta * kc[1].kept.beta;
    const double om = omega_at(params, kappa, 0, m, 1, m);
    const double h = 0.5 * (b2s - b1s);
    const double theta = std::sqrt(om * om + h * h);

    std::array<ZerothLevel, 2> out;
    for (int k = 0; k < 2; ++k) {
        const int br = k == 0 ? +1 : -1;
        ZerothLevel z;
        z.m = m;
        z.kappa = kappa;
        z.branch = br;
        z.theta = theta;
        z.omega = om;
        z.energy = m - 0.5 * (b1s + b2s) + br * theta;
        // xi = om / (h - br*theta); rewrite as -(h + br*theta)/om where the
        // direct denominator cancels
        const double den = h - br * theta;
        const double alt = h + br * theta;
        if (theta == 0.0) {
            z.xi = br > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        } else if (std::fabs(den) >= 0.5 * theta) {
            z.xi = om / den;
        } else if (om != 0.0) {
            z.xi = -alt / om;
        } else {
            z.xi = std::copysign(std::numeric_limits<double>::infinity(), -alt);
        }
        if (std::isinf(z.xi)) {
            z.d1 = 1.0;
            z.d2 = 0.0;
        } else {
            double nrm = std::sqrt(1.0 + z.xi * z.xi);
            z.d1 = z.xi / nrm;
            z.d2 = -1.0 / nrm;
        }
        out[k] = z;
    }
    return out;
}

std::vector<ZerothLevel> zeroth_spectrum(const ModelParams& params, Parity kappa, int m_max) {
    if (m_max < 0) throw InvalidArgument("zeroth_spectrum: m_max must be >= 0");
    std::vector<ZerothLevel> out;
    for (int m = 0; m <= m_max; ++m)
        for (const auto& z : zeroth_block(params, kappa, m)) out.push_back(z);
    std::stable_sort(out.begin(), out.end(),
                     [](const ZerothLevel& a, const ZerothLevel& b) { return a.energy < b.energy; });
    return out;
}

Eigen::Matrix4d first_order_block(const ModelParams& params, Parity kappa, int m) {
    require_two_qubits(params, "first_order_block");
    if (m < 0) throw InvalidArgument("first_order_block: m must be >= 0");
    const auto kc = kept_configs(params);
    const double b1s = kc[0].kept.beta * kc[0].kept.beta;
    const double b2s = kc[1].kept.beta * kc[1].kept.beta;
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 0) = m - b1s;
    a(1, 1) = m - b2s;
    a(2, 2) = m + 1 - b1s;
    a(3, 3) = m + 1 - b2s;
    a(0, 1) = a(1, 0) = omega_at(params, kappa, 0, m, 1, m);
    a(2, 3) = a(3, 2) = omega_at(params, kappa, 0, m + 1, 1, m + 1);
    a(0, 3) = a(3, 0) = omega_at(params, kappa, 0, m, 1, m + 1);
    a(1, 2) = a(2, 1) = omega_at(params, kappa, 1, m, 0, m + 1);
    return a;
}

QuarticCoeffs quartic_coeffs(const ModelParams& params, Parity kappa, int m) {
    const Eigen::Matrix4d a = first_order_block(params, kappa, m);
    const double e1 = a(0, 0), e2 = a(1, 1), f1 = a(2, 2), f2 = a(3, 3);
    const double om = a(0, 1), on = a(2, 3), omn = a(0, 3), onm = a(1, 2);

    QuarticCoeffs q;
    q.m = m;
    q.kappa = kappa;
    q.block = a;
    q.b = -e1 - e2 - f1 - f2;
    q.c = (e1 + e2) * (f1 + f2) + e1 * e2 + f1 * f2 - om * om - on * on - omn * omn - onm * onm;
    q.d = (e1 + f2) * onm * onm + (f1 + e2) * omn * omn + (om * om - e1 * e2) * (f1 + f2) +
          (e1 + e2) * (on * on - f1 * f2);
    q.e = a.determinant();
    return q;
}

QuarticCoeffs characteristic_quartic(const Eigen::Matrix4d& a) {
    const Eigen::Matrix4d a2 = a * a;
    const double t1 = a.trace(), t2 = a2.trace(), t3 = (a2 * a).trace();
    QuarticCoeffs q;
    q.b = -t1;
    q.c = 0.5 * (t1 * t1 - t2);
    q.d = -(t1 * t1 * t1 - 3.0 * t1 * t2 + 2.0 * t3) / 6.0;
    q.e = a.determinant();
    q.block = a;
    return q;
}

QuarticRoots solve_quartic(const QuarticCoeffs& q) {
    const double scale = std::max({1.0, std::fabs(q.b), std::sqrt(std::fabs(q.c)),
                                   std::cbrt(std::fabs(q.d)), std::sqrt(std::sqrt(std::fabs(q.e)))});
    QuarticRoots out;
    if (auto r = ferrari(q.b, q.c, q.d, q.e)) {
        for (int k = 0; k < 4; ++k) out.roots[k] = polish((*r)[k], q.b, q.c, q.d, q.e, scale);
        return out;
    }

    // degenerate resolvent: direct eigensolve, labels from a jittered closed form
    out.fallback = true;
    std::vector<double> ev;
    if (q.block) {
        Eigen::Matrix4d s = 0.5 * (*q.block + q.block->transpose());
        Eigen::VectorXd v = symmetric_eigen(s).values;
        ev.assign(v.data(), v.data() + 4);
    } else {
        Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
        comp(0, 0) = -q.b;
        comp(0, 1) = -q.c;
        comp(0, 2) = -q.d;
        comp(0, 3) = -q.e;
        comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
        Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
        for (int k = 0; k < 4; ++k) ev.push_back(es.eigenvalues()(k).real());
        std::sort(ev.begin(), ev.end());
    }

    auto jit = [](double v, double unit, double sgn) {
        return v + sgn * 1e-8 * std::max(std::fabs(v), unit);
    };
    auto r = ferrari(jit(q.b, scale, 1), jit(q.c, scale * scale, -1),
                     jit(q.d, scale * scale * scale, 1), jit(q.e, std::pow(scale, 4), -1));
    if (!r) {
        for (int k = 0; k < 4; ++k) out.roots[k] = ev[k];
        return out;
    }
    // greedy nearest assignment of eigenvalues to labels
    std::array<bool, 4> used{};
    std::array<bool, 4> done{};
    for (int round = 0; round < 4; ++round) {
        double best = std::numeric_limits<double>::infinity();
        int bl = -1, bk = -1;
        for (int l = 0; l < 4; ++l) {
            if (done[l]) continue;
            for (int k = 0; k < 4; ++k) {
                if (used[k]) continue;
                double g = std::fabs((*r)[l] - ev[k]);
                if (g < best) {
                    best = g;
                    bl = l;
                    bk = k;
                }
            }
        }
        out.roots[bl] = ev[bk];
        done[bl] = true;
        used[bk] = true;
    }
    return out;
}

std::vector<FirstOrderLevel> first_order_levels(const ModelParams& params, Parity kappa,
                                                int m_max) {
    if (m_max < 1) throw InvalidArgument("first order needs m_max >= 1");
    std::vector<FirstOrderLevel> out;
    for (int m = 0; m < m_max; ++m) {
        QuarticRoots r = solve_quartic(quartic_coeffs(params, kappa, m));
        for (int gamma : {-1, +1})
            for (int s : {-1, +1}) {
                FirstOrderLevel l;
                l.m = m;
                l.kappa = kappa;
                l.gamma = gamma;
                l.s = s;
                l.energy = r.at(gamma, s);
                l.fallback = r.fallback;
                l.pseudo = (m == 0) ? (gamma > 0 && s > 0) : (gamma == s);
                out.push_back(l);
            }
    }
    return out;
}

std::vector<FirstOrderLevel> first_order_spectrum(const ModelParams& params, Parity kappa,
                                                  int m_max) {
    std::vector<FirstOrderLevel> out;
    for (const auto& l : first_order_levels(params, kappa, m_max))
        if (!l.pseudo) out.push_back(l);
    std::stable_sort(out.begin(), out.end(), [](const FirstOrderLevel& a, const FirstOrderLevel& b) {
        return a.energy < b.energy;
    });
    return out;
}

SpectrumResult block_truncated_spectrum(const ModelParams& params, Parity kappa, int order,
                                        int m_max) {
    if (order < 0) throw InvalidArgument("block order must be >= 0");
    if (m_max < order) throw InvalidArgument("block spectrum needs m_max >= order");
    Truncation t;
    t.n_tr = m_max;
    const FoldedHamiltonian fh = build_folded_hamiltonian(params, kappa, t);
    const int K = fh.n_kept;
    const int w = K * (order + 1);

    SpectrumResult r;
    r.method = "block-" + std::to_string(order);
    r.n_qubits = params.n_qubits;
    r.n_tr = m_max;
    r.kept_betas = fh.betas;
    for (int m = 0; m + order <= m_max; ++m) {
        Eigen::VectorXd ev = symmetric_eigen(fh.matrix.block(m * K, m * K, w, w)).values;
        for (int k = 0; k < w; ++k) r.levels.push_back({ev(k), kappa, std::nullopt});
    }
    std::stable_sort(r.levels.begin(), r.levels.end(),
                     [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.energy < b.energy; });
    return r;
}

QuantumState pad_cutoff(const QuantumState& state, int cutoff) {
    if (state.basis != QuantumState::Basis::Fock) throw InvalidArgument("pad_cutoff: Fock state required");
    if (cutoff < state.n_max) throw InvalidArgument("pad_cutoff: cannot shrink the cutoff");
    QuantumState out = QuantumState::fock_zero(state.n_qubits, cutoff, state.frame);
    out.parity = state.parity;
    for (int s = 0; s < state.n_configs(); ++s)
        for (int k = 0; k <= state.n_max; ++k)
            out.amplitudes(out.fock_index(s, k)) = state.amplitudes(state.fock_index(s, k));
    return out;
}

double eigen_residual(const ModelParams& params, const QuantumState& state, double energy) {
    const QuantumState big = pad_cutoff(state, state.n_max + 1);
    const Eigen::MatrixXd h = fock_hamiltonian(params, big.n_max, big.frame);
    return (h.cast<cd>() * big.amplitudes - energy * big.amplitudes).norm();
}

QuantumState rotate_frame(const QuantumState& state) {
    if (state.basis != QuantumState::Basis::Fock) throw InvalidArgument("rotate_frame: Fock state required");
    const bool to_rotated = state.frame == QuantumState::Frame::Unrotated;
    QuantumState out = state;
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < state.n_qubits; ++j) {
        const int bit = 1 << j;
        for (int s = 0; s < state.n_configs(); ++s) {
            if (!(s & bit)) continue;  // visit each (|1>, |0>) pair once
            for (int k = 0; k <= state.n_max; ++k) {
                cd& a1 = out.amplitudes(out.fock_index(s, k));
                cd& a0 = out.amplitudes(out.fock_index(s ^ bit, k));
                cd u = a1, v = a0;
                if (to_rotated) {
                    a1 = r * (u + v);
                    a0 = r * (v - u);
                } else {
                    a1 = r * (u - v);
                    a0 = r * (u + v);
                }
            }
        }
    }
    out.frame = to_rotated ? QuantumState::Frame::Rotated : QuantumState::Frame::Unrotated;
    return out;
}

std::vector<QuasiExactState> quasi_exact_states(const ModelParams& params, const Truncation& trunc) {
    require_two_qubits(params, "quasi_exact_states");
    constexpr double tol = 1e-12;
    std::vector<QuasiExactState> out;
    const double g = params.couplings[0];
    if (std::fabs(params.couplings[0] - params.couplings[1]) > tol) return out;
    const double w1 = params.omegas[0], w2 = params.omegas[1];

    // config masks: bit 0 = qubit 1, bit 1 = qubit 2; label "q2 q1"
    constexpr int c00 = 0, c01 = 1, c10 = 2, c11 = 3;

    auto detuned = [&](const char* cond, double qmag, int ax, int ay, int lead) {
        QuasiExactState best;
        double best_res = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, double>> cands;
        for (double q : {qmag, -qmag}) {
            QuantumState s = QuantumState::fock_zero(2, 1, QuantumState::Frame::Unrotated);
            double nrm = std::sqrt(2.0 * q * q + 1.0);
            s.amplitudes(s.fock_index(ax, 1)) = q / nrm;
            s.amplitudes(s.fock_index(ay, 1)) = -q / nrm;
            s.amplitudes(s.fock_index(lead, 0)) = 1.0 / nrm;
            double res = eigen_residual(params, s, 1.0);
            cands.push_back({q, res});
            if (res < best_res) {
                best_res = res;
                best.state = s;
            }
        }
        best.condition = cond;
        best.energy = 1.0;
        best.q_candidates = cands;
        return best;
    };

    if (std::fabs(w1 + w2 - 2.0) <= tol && std::fabs(w1 - w2) > tol) {
        QuasiExactState s = detuned("symmetric-detuning", 2.0 * g / std::fabs(w1 - w2), c01, c10, c11);
        s.parity = Parity::Even;
        out.push_back(s);
    }
    if (std::fabs(std::fabs(w1 - w2) - 2.0) <= tol) {
        // the lone |0> component carries the qubit that sits higher
        int lead = w1 > w2 ? c01 : c10;
        QuasiExactState s = detuned("asymmetric-detuning", 2.0 * g / (w1 + w2), c00, c11, lead);
        s.parity = Parity::Odd;
        out.push_back(s);
    }
    if (std::fabs(w1 - w2) <= tol) {
        const double r = 1.0 / std::sqrt(2.0);
        for (int m = 0; m <= trunc.n_tr; ++m) {
            QuasiExactState s;
            s.condition = "singlet-ladder";
            s.ladder_m = m;
            s.energy = m;
            s.parity = (m & 1) ? Parity::Even : Parity::Odd;
            s.state = QuantumState::fock_zero(2, std::max(m, 1), QuantumState::Frame::Rotated);
            s.state.parity = s.parity;
            s.state.amplitudes(s.state.fock_index(c10, m)) = r;
            s.state.amplitudes(s.state.fock_index(c01, m)) = -r;
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace tcq
