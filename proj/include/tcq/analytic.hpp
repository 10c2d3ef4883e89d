// analytic.hpp: closed-form spectra for two qubits (adiabatic and one-block
// coupling), numeric block-window spectra, and the quasi-exact eigenstates.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcq/exact.hpp"
#include "tcq/model.hpp"
#include "tcq/state.hpp"

namespace tcq {

// ---- adiabatic (zeroth order) ----

struct ZerothLevel {
    int m{0};
    Parity kappa{Parity::Even};
    int branch{+1};  // +1 upper, -1 lower
    double energy{0.0};
    double theta{0.0};
    double omega{0.0};  // Omega_m^kappa
    double xi{0.0};     // may be +-inf in the decoupled limit
    double d1{0.0}, d2{0.0};
};

/// Both branches for one (m, kappa); index 0 is the + branch.
std::array<ZerothLevel, 2> zeroth_block(const ModelParams& params, Parity kappa, int m);

/// Levels for m = 0..m_max, sorted ascending by energy.
std::vector<ZerothLevel> zeroth_spectrum(const ModelParams& params, Parity kappa, int m_max);

// ---- one-block coupling (first order) ----

struct QuarticCoeffs {
    int m{0};
    Parity kappa{Parity::Even};
    double b{0}, c{0}, d{0}, e{0};
    std::optional<Eigen::Matrix4d> block;  // source matrix when known
};

/// The 4x4 block over (1m, 2m, 1(m+1), 2(m+1)) of the folded matrix.
Eigen::Matrix4d first_order_block(const ModelParams& params, Parity kappa, int m);

QuarticCoeffs quartic_coeffs(const ModelParams& params, Parity kappa, int m);

/// Coefficients of det(A - E) = E^4 + b E^3 + c E^2 + d E + e for any 4x4 matrix.
QuarticCoeffs characteristic_quartic(const Eigen::Matrix4d& a);

struct QuarticRoots {
    // label order (gamma, s): (-,-), (-,+), (+,-), (+,+)
    std::array<double, 4> roots{};
    bool fallback{false};

    static int label(int gamma, int s) { return (gamma > 0 ? 2 : 0) + (s > 0 ? 1 : 0); }
    double at(int gamma, int s) const { return roots[label(gamma, s)]; }
};

QuarticRoots solve_quartic(const QuarticCoeffs& q);

struct FirstOrderLevel {
    int m{0};  // block pair (m, m+1)
    Parity kappa{Parity::Even};
    int gamma{+1}, s{+1};
    double energy{0.0};
    bool pseudo{false};
    bool fallback{false};
};

/// All 4 m_max labeled roots for blocks m = 0..m_max-1, pseudo flags set.
std::vector<FirstOrderLevel> first_order_levels(const ModelParams& params, Parity kappa,
                                                int m_max);

/// Kept (non-pseudo) levels only, ascending.
std::vector<FirstOrderLevel> first_order_spectrum(const ModelParams& params, Parity kappa,
                                                  int m_max);

// ---- numeric block windows ----

/// Eigenvalues of every (k+1)-quantum window m..m+k, m = 0..m_max-k, of the
/// folded matrix built at n_tr = m_max. Unfiltered, ascending, method "block-k".
SpectrumResult block_truncated_spectrum(const ModelParams& params, Parity kappa, int order,
                                        int m_max);

// ---- quasi-exact states ----

struct QuasiExactState {
    std::string condition;  // symmetric-detuning, asymmetric-detuning, singlet-ladder
    int ladder_m{-1};
    double energy{0.0};
    Parity parity{Parity::Even};
    QuantumState state;  // Fock basis, frame tagged
    // both signs of q tried for the detuned states: (q, residual)
    std::vector<std::pair<double, double>> q_candidates;
};

/// Empty when no condition holds to 1e-12. Singlet ladder runs m = 0..trunc.n_tr.
std::vector<QuasiExactState> quasi_exact_states(const ModelParams& params,
                                                const Truncation& trunc = {});

/// ||H psi - E psi|| in the state's own frame, with one spare photon so any
/// leakage out of the support is counted.
double eigen_residual(const ModelParams& params, const QuantumState& state, double energy);

/// Per-qubit rotation between the unrotated and rotated frames; toggles the tag.
QuantumState rotate_frame(const QuantumState& state);

/// Copy of a Fock state with the photon cutoff raised (zero padded).
QuantumState pad_cutoff(const QuantumState& state, int cutoff);

}  // namespace tcq
