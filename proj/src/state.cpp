#include "tcq/state.hpp"

#include <cmath>

#include "tcq/errors.hpp"

namespace tcq {

QuantumState QuantumState::fock_zero(int n_qubits, int cutoff, Frame frame) {
    if (n_qubits < 1 || cutoff < 0) throw InvalidArgument("fock_zero: bad shape");
    QuantumState s;
    s.n_qubits = n_qubits;
    s.basis = Basis::Fock;
    s.frame = frame;
    s.n_max = cutoff;
    s.amplitudes = Eigen::VectorXcd::Zero((1 << n_qubits) * (cutoff + 1));
    return s;
}

std::complex<double> inner(const QuantumState& a, const QuantumState& b) {
    if (a.basis != QuantumState::Basis::Fock || b.basis != QuantumState::Basis::Fock)
        throw InvalidArgument("inner product needs Fock-basis states");
    if (a.n_qubits != b.n_qubits || a.n_max != b.n_max)
        throw InvalidArgument("inner product: mismatched qubit count or cutoff");
    if (a.frame != b.frame) throw InvalidArgument("inner product: states in different frames");
    return a.amplitudes.dot(b.amplitudes);  // conjugates the first argument
}

Eigen::VectorXd coherent_amplitudes(double z, int cutoff) {
    Eigen::VectorXd c(cutoff + 1);
    double amp = std::exp(-0.5 * z * z);
    for (int k = 0; k <= cutoff; ++k) {
        c(k) = amp;
        amp *= z / std::sqrt(k + 1.0);
    }
    return c;
}

}  // namespace tcq
