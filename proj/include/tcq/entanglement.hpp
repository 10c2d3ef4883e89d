// entanglement.hpp: two-qubit reduced state under a Bell preparation
// (|11> + |00>)|z>/sqrt(2), adiabatic X-matrix form and exact partial trace.
//
// Reduced matrices are written in the sx eigenbasis |e> = (|1>+|0>)/sqrt2,
// |g> = (|1>-|0>)/sqrt2, ordered (ee, eg, ge, gg) with qubit 2 first.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcq/dynamics.hpp"
#include "tcq/model.hpp"

namespace tcq {

struct QCoefficients {
    std::complex<double> q1_plus{1.0}, q1_minus{1.0}, q2_plus{1.0}, q2_minus{1.0};
};

/// Coefficients of block m in sector kappa at physical time t.
QCoefficients q_coefficients(const ModelParams& params, int m, Parity kappa, double t);

struct ReducedDensity {
    Eigen::Matrix4cd rho;
    double time{0.0};  // tau units
    std::string method;
};

ReducedDensity reduced_density_analytic(const ModelParams& params, double z, double tau,
                                        int m_cutoff = 30);

/// |sum_m sum_kappa p(m)(1 + kappa(-1)^m)/2 q2^{kappa+}| clamped to [0, 1].
double concurrence_analytic(const ModelParams& params, double z, double tau, int m_cutoff = 30);

/// Wootters concurrence. Rejects non-Hermitian or clearly non-PSD input.
double wootters_concurrence(const ReducedDensity& rho);
double wootters_concurrence(const Eigen::Matrix4cd& rho);

/// Exact preparation propagated with the Fock oracle, field traced out.
ReducedDensity reduced_density_oracle(const ModelParams& params, double z, double tau,
                                      int photon_cutoff = -1);

/// Traces for a whole grid; method "analytic" or "oracle".
DynamicsTrace concurrence_trace(const ModelParams& params, double z,
                                const std::vector<double>& taus, const std::string& method,
                                int m_cutoff = 30, int photon_cutoff = -1);

/// Change of basis from config bits (index = bits) to (ee, eg, ge, gg).
Eigen::Matrix4cd sx_basis();

}  // namespace tcq
