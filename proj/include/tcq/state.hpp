// state.hpp: state vectors in the folded displaced basis or the plain Fock basis

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tcq/model.hpp"

namespace tcq {

struct QuantumState {
    enum class Basis { Displaced, Fock };
    enum class Frame { Rotated, Unrotated };

    int n_qubits{2};
    Basis basis{Basis::Fock};
    Frame frame{Frame::Rotated};
    std::optional<Parity> parity;

    // Displaced: n_max = n_tr, amplitudes indexed m * K + i over kept configs,
    //   kept_betas holds beta_i. Partners are implied by the parity.
    // Fock: n_max = photon cutoff M, amplitudes indexed s * (M + 1) + k with s
    //   the config bit mask.
    int n_max{0};
    std::vector<double> kept_betas;
    Eigen::VectorXcd amplitudes;

    int n_configs() const { return 1 << n_qubits; }
    int fock_index(int s, int k) const { return s * (n_max + 1) + k; }
    double norm() const { return amplitudes.norm(); }

    /// Fock-basis state with every amplitude zero.
    static QuantumState fock_zero(int n_qubits, int cutoff, Frame frame = Frame::Rotated);
};

/// <a|b> for two Fock-basis states of equal shape; throws InvalidArgument otherwise.
std::complex<double> inner(const QuantumState& a, const QuantumState& b);

/// Coherent amplitudes e^{-|z|^2/2} z^k / sqrt(k!), k = 0..cutoff, real z.
Eigen::VectorXd coherent_amplitudes(double z, int cutoff);

}  // namespace tcq
