// model.hpp: parameters, spin configurations and the displaced-Fock kernel
//
// Hamiltonian (rotated frame, hbar = 1):
//   H = wc a^+a + sum_j ( -w_j/2 sx_j + g_j (a^+ + a) sz_j )
//
// Spin configurations are bit masks: bit j set means qubit j+1 is in the
// sz = +1 state. Printed labels put the highest qubit first, so for two
// qubits "10" is qubit 2 up, qubit 1 down.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tcq {

using ConfigBits = std::uint32_t;

/// Global parity sector of Pi = prod_j sx_j exp(i pi a^+a).
enum class Parity : int { Even = 1, Odd = -1 };

inline int sign(Parity p) { return static_cast<int>(p); }
inline Parity other(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
std::string to_string(Parity p);

struct ModelParams {
    int n_qubits{2};
    double omega_c{1.0};            // output energy scale only; internal unit is 1
    std::vector<double> omegas;     // qubit splittings, units of omega_c
    std::vector<double> couplings;  // coupling strengths, units of omega_c

    static ModelParams two_qubit(double omega1, double omega2, double g1, double g2,
                                 double omega_c = 1.0);

    /// Throws InvalidArgument on size mismatch, n_qubits < 1 or omega_c <= 0.
    void validate() const;

    int n_configs() const { return 1 << n_qubits; }
    int n_kept() const { return 1 << (n_qubits - 1); }
};

struct SpinConfig {
    ConfigBits bits{0};
    double beta{0.0};  // sum_j (+-g_j), + for up

    std::string label(int n_qubits) const;
};

struct KeptPair {
    SpinConfig kept;     // highest bit set
    SpinConfig partner;  // bitwise complement
};

struct Truncation {
    int n_tr{48};
    double element_tol{1e-6};
};

/// Dimensionless displacement of a configuration.
double config_beta(const ModelParams& params, ConfigBits bits);

/// The 2^(N-1) configurations with the highest qubit up, in descending bit
/// order (|11>, |10> for two qubits), each paired with its complement.
std::vector<KeptPair> kept_configs(const ModelParams& params);

/// <m| D(beta_ij) |n> for D(x) = exp(x (a^+ - a)); equals the overlap of
/// Fock states displaced by beta_i and beta_j with beta_ij = beta_i - beta_j.
/// Evaluated through the associated Laguerre three-term recurrence.
double displaced_overlap(int m, int n, double beta_ij);

/// Table T(m, n) = displaced_overlap(m, n, beta_ij) for m, n < size.
Eigen::MatrixXd overlap_table(double beta_ij, int size);

/// Folded coupling between kept config i (quantum m) and kept config j
/// (quantum n) in parity sector kappa. Symmetric under (i,m) <-> (j,n).
double omega_element(const ModelParams& params, const Truncation& trunc, Parity kappa,
                     int i, int m, int j, int n);

}  // namespace tcq
