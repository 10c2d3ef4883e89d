#include "tcq/exact.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcq/errors.hpp"

namespace tcq {

namespace {

constexpr double kMaxDim = 2e5;

ConfigBits full_mask(int n) { return (ConfigBits{1} << n) - 1; }

}  // namespace

FoldedHamiltonian build_folded_hamiltonian(const ModelParams& params, Parity kappa,
                                           const Truncation& trunc) {
    params.validate();
    if (trunc.n_tr < 0) throw InvalidArgument("n_tr must be >= 0");
    if (!(trunc.element_tol > 0.0)) throw InvalidArgument("element_tol must be positive");
    const int K = params.n_kept();
    const double dim_d = static_cast<double>(K) * (trunc.n_tr + 1);
    if (dim_d > kMaxDim) throw InvalidArgument("folded dimension exceeds 2e5");

    FoldedHamiltonian fh;
    fh.kappa = kappa;
    fh.n_tr = trunc.n_tr;
    fh.n_kept = K;
    const int nb = trunc.n_tr + 1;
    const int dim = K * nb;
    fh.matrix = Eigen::MatrixXd::Zero(dim, dim);

    const ConfigBits full = full_mask(params.n_qubits);
    const ConfigBits top = ConfigBits{1} << (params.n_qubits - 1);
    for (int i = 0; i < K; ++i) fh.betas.push_back(config_beta(params, full - ConfigBits(i)));

    for (int i = 0; i < K; ++i) {
        const ConfigBits bi = full - ConfigBits(i);
        for (int m = 0; m < nb; ++m)
            fh.matrix(fh.index(i, m), fh.index(i, m)) = m - fh.betas[i] * fh.betas[i];

        for (int b = 0; b < params.n_qubits; ++b) {
            const double w = -0.5 * params.omegas[b];
            if (w == 0.0) continue;
            const ConfigBits c = bi ^ (ConfigBits{1} << b);
            // either way the overlap argument is beta_i - beta_c
            const Eigen::MatrixXd t = overlap_table(fh.betas[i] - config_beta(params, c), nb);
            const bool direct = (c & top) != 0;
            const int j = direct ? static_cast<int>(full - c) : static_cast<int>(c);
            for (int m = 0; m < nb; ++m)
                for (int n = 0; n < nb; ++n) {
                    double f = direct ? 1.0 : sign(kappa) * ((n & 1) ? -1.0 : 1.0);
                    fh.matrix(fh.index(i, m), fh.index(j, n)) += w * f * t(m, n);
                }
        }
    }
    return fh;
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (int c = 0; c < vectors.cols(); ++c) {
        double mx = vectors.col(c).cwiseAbs().maxCoeff();
        for (int r = 0; r < vectors.rows(); ++r) {
            if (std::fabs(vectors(r, c)) >= mx * (1.0 - 1e-10)) {
                if (vectors(r, c) < 0.0) vectors.col(c) *= -1.0;
                break;
            }
        }
    }
}

EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigen: matrix not square");
    EigenDecomposition out;
    if (a.rows() == 0) return out;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidArgument("symmetric_eigen: matrix not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    fix_signs(out.vectors);
    return out;
}

std::vector<double> SpectrumResult::energies(std::optional<Parity> only) const {
    std::vector<double> e;
    for (const auto& l : levels)
        if (!only || l.parity == *only) e.push_back(l.energy);
    return e;
}

SpectrumResult solve_ed(const ModelParams& params, Parity kappa, const Truncation& trunc) {
    FoldedHamiltonian fh = build_folded_hamiltonian(params, kappa, trunc);
    EigenDecomposition ed = symmetric_eigen(fh.matrix);
    SpectrumResult r;
    r.method = "ed";
    r.n_qubits = params.n_qubits;
    r.n_tr = trunc.n_tr;
    r.kept_betas = fh.betas;
    r.levels.reserve(fh.dim());
    for (int k = 0; k < fh.dim(); ++k)
        r.levels.push_back({ed.values(k), kappa, Eigen::VectorXd(ed.vectors.col(k))});
    return r;
}

QuantumState displaced_state(const SpectrumResult& ed, int k) {
    if (k < 0 || k >= static_cast<int>(ed.levels.size()) || !ed.levels[k].coeffs)
        throw InvalidArgument("displaced_state: level has no coefficient vector");
    QuantumState s;
    s.n_qubits = ed.n_qubits;
    s.basis = QuantumState::Basis::Displaced;
    s.frame = QuantumState::Frame::Rotated;
    s.parity = ed.levels[k].parity;
    s.n_max = ed.n_tr;
    s.kept_betas = ed.kept_betas;
    s.amplitudes = ed.levels[k].coeffs->cast<std::complex<double>>();
    return s;
}

Eigen::MatrixXd fock_hamiltonian(const ModelParams& params, int cutoff,
                                 QuantumState::Frame frame) {
    params.validate();
    if (cutoff < 0) throw InvalidArgument("photon cutoff must be >= 0");
    const int S = params.n_configs();
    const int nb = cutoff + 1;
    const bool rotated = frame == QuantumState::Frame::Rotated;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(S * nb, S * nb);
    auto idx = [nb](int s, int k) { return s * nb + k; };

    for (int s = 0; s < S; ++s) {
        double zsum = 0.0;  // sum_j g_j sz_j  (rotated) or sum_j w_j/2 sz_j (unrotated)
        for (int j = 0; j < params.n_qubits; ++j) {
            double sz = ((s >> j) & 1) ? 1.0 : -1.0;
            zsum += rotated ? params.couplings[j] * sz : 0.5 * params.omegas[j] * sz;
        }
        for (int k = 0; k < nb; ++k) {
            h(idx(s, k), idx(s, k)) += k;
            if (rotated) {
                if (k + 1 < nb) {
                    double x = zsum * std::sqrt(k + 1.0);
                    h(idx(s, k), idx(s, k + 1)) += x;
                    h(idx(s, k + 1), idx(s, k)) += x;
                }
            } else {
                h(idx(s, k), idx(s, k)) += zsum;
            }
        }
        for (int j = 0; j < params.n_qubits; ++j) {
            int sf = s ^ (1 << j);
            for (int k = 0; k < nb; ++k) {
                if (rotated) {
                    h(idx(sf, k), idx(s, k)) += -0.5 * params.omegas[j];
                } else if (k + 1 < nb) {
                    double x = params.couplings[j] * std::sqrt(k + 1.0);
                    h(idx(sf, k + 1), idx(s, k)) += x;
                    h(idx(sf, k), idx(s, k + 1)) += x;
                }
            }
        }
    }
    return h;
}

Eigen::MatrixXd parity_operator(int n_qubits, int cutoff) {
    const int S = 1 << n_qubits;
    const int nb = cutoff + 1;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(S * nb, S * nb);
    for (int s = 0; s < S; ++s)
        for (int k = 0; k < nb; ++k)
            p((S - 1 - s) * nb + k, s * nb + k) = (k & 1) ? -1.0 : 1.0;
    return p;
}

int oracle_cutoff(const ModelParams& params, double z) {
    double bmax = 0.0;
    for (const auto& kp : kept_configs(params)) bmax = std::max(bmax, std::fabs(kp.kept.beta));
    double r = std::fabs(z) + bmax;
    return static_cast<int>(std::ceil(r * r + 8.0 * r + 20.0));
}

FockOracle::FockOracle(const ModelParams& params, int cutoff, QuantumState::Frame frame)
    : params_(params), cutoff_(cutoff), frame_(frame) {
    h_ = fock_hamiltonian(params, cutoff, frame);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_);
    if (es.info() != Eigen::Success) throw NumericalError("oracle eigensolver did not converge");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    const int n = dim();
    parities_.assign(n, Parity::Even);
    if (frame != QuantumState::Frame::Rotated) {
        fix_signs(vectors_);
        return;  // parity operator belongs to the rotated frame
    }

    const Eigen::MatrixXd pi = parity_operator(params.n_qubits, cutoff);
    // rotate each degenerate cluster onto parity eigenvectors
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n &&
               energies_(end) - energies_(end - 1) < 1e-8 * std::max(1.0, std::fabs(energies_(end))))
            ++end;
        if (end - start > 1) {
            Eigen::MatrixXd vc = vectors_.middleCols(start, end - start);
            Eigen::MatrixXd pc = vc.transpose() * pi * vc;
            pc = 0.5 * (pc + pc.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(pc);
            vectors_.middleCols(start, end - start) = vc * ps.eigenvectors();
        }
        start = end;
    }
    fix_signs(vectors_);
    for (int k = 0; k < n; ++k) {
        double p = vectors_.col(k).dot(pi * vectors_.col(k));
        if (std::fabs(std::fabs(p) - 1.0) > 1e-6)
            throw CutoffError("oracle eigenvector without definite parity; raise the photon cutoff");
        parities_[k] = p > 0 ? Parity::Even : Parity::Odd;
    }
}

QuantumState FockOracle::eigenstate(int k) const {
    QuantumState s = QuantumState::fock_zero(params_.n_qubits, cutoff_, frame_);
    s.amplitudes = vectors_.col(k).cast<std::complex<double>>();
    if (frame_ == QuantumState::Frame::Rotated) s.parity = parities_[k];
    return s;
}

SpectrumResult FockOracle::spectrum() const {
    SpectrumResult r;
    r.method = "fock-oracle";
    r.n_qubits = params_.n_qubits;
    for (int k = 0; k < dim(); ++k) r.levels.push_back({energies_(k), parities_[k], std::nullopt});
    return r;
}

Eigen::VectorXcd FockOracle::project(const QuantumState& psi) const {
    if (psi.basis != QuantumState::Basis::Fock || psi.n_max != cutoff_ ||
        psi.n_qubits != params_.n_qubits || psi.frame != frame_)
        throw InvalidArgument("oracle: state shape or frame does not match");
    return vectors_.transpose().cast<std::complex<double>>() * psi.amplitudes;
}

QuantumState FockOracle::evolve(const QuantumState& initial, double t) const {
    Eigen::VectorXcd c = project(initial);
    for (int k = 0; k < dim(); ++k) c(k) *= std::polar(1.0, -energies_(k) * t);
    QuantumState out = initial;
    out.amplitudes = vectors_.cast<std::complex<double>>() * c;
    return out;
}

SpectrumResult solve_fock_oracle(const ModelParams& params, int cutoff) {
    return FockOracle(params, cutoff).spectrum();
}

QuantumState to_fock_representation(const QuantumState& displaced, int cutoff) {
    if (displaced.basis != QuantumState::Basis::Displaced)
        throw InvalidArgument("to_fock_representation: state is not in the displaced basis");
    if (!displaced.parity) throw InvalidArgument("to_fock_representation: parity required");
    const int K = 1 << (displaced.n_qubits - 1);
    const int nb = displaced.n_max + 1;
    if (static_cast<int>(displaced.kept_betas.size()) != K ||
        displaced.amplitudes.size() != K * nb)
        throw InvalidArgument("to_fock_representation: inconsistent state shape");
    if (cutoff < 0) throw InvalidArgument("photon cutoff must be >= 0");

    QuantumState out = QuantumState::fock_zero(displaced.n_qubits, cutoff, displaced.frame);
    out.parity = displaced.parity;
    const ConfigBits full = full_mask(displaced.n_qubits);
    const double kap = sign(*displaced.parity);
    const double r2 = 1.0 / std::sqrt(2.0);
    const int size = std::max(cutoff + 1, nb);

    for (int i = 0; i < K; ++i) {
        const ConfigBits bi = full - ConfigBits(i);
        const ConfigBits bp = full ^ bi;
        // <k | m displaced by beta> = overlap(k, m, -beta)
        const Eigen::MatrixXd t = overlap_table(-displaced.kept_betas[i], size);
        Eigen::VectorXcd d(nb), dp(nb);
        for (int m = 0; m < nb; ++m) {
            d(m) = displaced.amplitudes(m * K + i);
            dp(m) = kap * ((m & 1) ? -1.0 : 1.0) * d(m);
        }
        for (int k = 0; k <= cutoff; ++k) {
            std::complex<double> a = 0.0, ap = 0.0;
            for (int m = 0; m < nb; ++m) {
                a += t(k, m) * d(m);
                // partner sits at -beta; overlap(k, m, beta) = (-1)^(k+m) overlap(k, m, -beta)
                ap += (((k + m) & 1) ? -t(k, m) : t(k, m)) * dp(m);
            }
            out.amplitudes(out.fock_index(static_cast<int>(bi), k)) = r2 * a;
            out.amplitudes(out.fock_index(static_cast<int>(bp), k)) = r2 * ap;
        }
    }
    double loss = std::fabs(displaced.norm() * displaced.norm() - out.norm() * out.norm());
    if (loss > 1e-4) throw CutoffError("photon cutoff too small for the displaced state");
    return out;
}

std::vector<int> match_levels(const std::vector<double>& prev, const std::vector<double>& next,
                              const std::function<double(int, int)>& fid) {
    struct Pair {
        double gap;
        int i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(prev.size() * next.size());
    for (int i = 0; i < static_cast<int>(prev.size()); ++i)
        for (int j = 0; j < static_cast<int>(next.size()); ++j)
            pairs.push_back({std::fabs(prev[i] - next[j]), i, j});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.gap < b.gap; });

    std::vector<int> out(prev.size(), -1);
    std::vector<bool> used(next.size(), false);
    for (const auto& p : pairs) {
        if (out[p.i] >= 0 || used[p.j]) continue;
        int best = p.j;
        if (fid) {
            double best_f = -1.0;
            for (int j = 0; j < static_cast<int>(next.size()); ++j) {
                if (used[j] || std::fabs(prev[p.i] - next[j]) > p.gap + 1e-4) continue;
                double f = fid(p.i, j);
                if (f > best_f) {
                    best_f = f;
                    best = j;
                }
            }
        }
        out[p.i] = best;
        used[best] = true;
    }
    return out;
}

}  // namespace tcq
