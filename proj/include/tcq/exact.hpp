// exact.hpp: parity-folded Hamiltonian in the displaced basis, its
// diagonalization, and a brute-force oracle in the plain qubit x Fock basis.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcq/model.hpp"
#include "tcq/state.hpp"

namespace tcq {

struct FoldedHamiltonian {
    Parity kappa{Parity::Even};
    int n_tr{0};
    int n_kept{0};
    std::vector<double> betas;  // kept-config displacements
    Eigen::MatrixXd matrix;     // index m * n_kept + i

    int dim() const { return static_cast<int>(matrix.rows()); }
    int index(int i, int m) const { return m * n_kept + i; }
};

/// Throws InvalidArgument if the folded dimension exceeds 2e5.
FoldedHamiltonian build_folded_hamiltonian(const ModelParams& params, Parity kappa,
                                           const Truncation& trunc);

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns; first entry of largest magnitude positive
};

/// Dense symmetric eigensolve. Rejects input whose asymmetry exceeds 1e-12 * max|A|.
EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& a);

/// Flip each column so its first largest-magnitude entry is positive.
void fix_signs(Eigen::MatrixXd& vectors);

struct SpectrumLevel {
    double energy{0.0};
    Parity parity{Parity::Even};
    std::optional<Eigen::VectorXd> coeffs;
};

struct SpectrumResult {
    std::string method;  // ed, fock-oracle, zeroth, first, block-k
    int n_qubits{2};
    int n_tr{0};
    std::vector<double> kept_betas;
    std::vector<SpectrumLevel> levels;  // ascending within each parity

    std::vector<double> energies(std::optional<Parity> only = std::nullopt) const;
};

SpectrumResult solve_ed(const ModelParams& params, Parity kappa, const Truncation& trunc);

/// Folded displaced-basis state for level `k` of an ED result.
QuantumState displaced_state(const SpectrumResult& ed, int k);

/// Rotated (Parity-conserving) or unrotated Hamiltonian in the basis s * (M+1) + k.
Eigen::MatrixXd fock_hamiltonian(const ModelParams& params, int cutoff,
                                 QuantumState::Frame frame = QuantumState::Frame::Rotated);

/// Pi = prod_j sx_j exp(i pi a^+a) in the same basis.
Eigen::MatrixXd parity_operator(int n_qubits, int cutoff);

/// Cutoff heuristic ceil((|z| + beta_max)^2 + 8 (|z| + beta_max) + 20).
int oracle_cutoff(const ModelParams& params, double z = 0.0);

class FockOracle {
public:
    FockOracle(const ModelParams& params, int cutoff,
               QuantumState::Frame frame = QuantumState::Frame::Rotated);

    int cutoff() const { return cutoff_; }
    int dim() const { return static_cast<int>(energies_.size()); }
    const ModelParams& params() const { return params_; }
    QuantumState::Frame frame() const { return frame_; }
    const Eigen::MatrixXd& hamiltonian() const { return h_; }
    const Eigen::VectorXd& energies() const { return energies_; }
    const Eigen::MatrixXd& vectors() const { return vectors_; }
    const std::vector<Parity>& parities() const { return parities_; }

    QuantumState eigenstate(int k) const;
    SpectrumResult spectrum() const;

    /// |psi(t)> = sum_k e^{-i E_k t} |v_k><v_k|psi(0)>.
    QuantumState evolve(const QuantumState& initial, double t) const;
    /// Expansion coefficients <v_k|psi>.
    Eigen::VectorXcd project(const QuantumState& psi) const;

private:
    ModelParams params_;
    int cutoff_;
    QuantumState::Frame frame_;
    Eigen::MatrixXd h_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
    std::vector<Parity> parities_;
};

/// All levels of the oracle in ascending order, tagged `fock-oracle`.
SpectrumResult solve_fock_oracle(const ModelParams& params, int cutoff);

/// Unfold a displaced-basis state onto the Fock basis with photon cutoff M.
/// Throws CutoffError if more than 1e-4 of the norm falls outside.
QuantumState to_fock_representation(const QuantumState& displaced, int cutoff);

/// Greedy nearest-energy assignment prev[i] -> next[result[i]] (-1 when
/// unmatched). Candidates within 1e-4 of the best gap are separated by
/// `fid(i, j)` when supplied.
std::vector<int> match_levels(const std::vector<double>& prev, const std::vector<double>& next,
                              const std::function<double(int, int)>& fid = {});

}  // namespace tcq
