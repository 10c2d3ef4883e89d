// dynamics.hpp: qubit populations and inversion under a displaced coherent
// field, adiabatic block formulas, the Gaussian revival series, and exact
// propagation through the Fock oracle.
//
// Time grids are given as tau = omega_1 t / 2 pi; physical t = 2 pi tau / omega_1.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "tcq/exact.hpp"
#include "tcq/model.hpp"
#include "tcq/state.hpp"

namespace tcq {

enum class Observable { P10, P11, P01, P00, Inversion, Concurrence };

std::string to_string(Observable o);
Observable observable_from_string(const std::string& s);

struct CoherentPrep {
    double z{3.0};
    ConfigBits initial_config{0b10};  // |q2 q1>
    int m_cutoff{30};
};

struct DynamicsTrace {
    std::vector<double> times;  // tau units
    std::vector<double> values;
    Observable observable{Observable::P10};
    std::string method;  // zeroth, closed-form, oracle, analytic
};

/// Uniform grid of `samples` points on [tmin, tmax] (tau units).
std::vector<double> time_grid(double tmin, double tmax, int samples = 2048);

/// Physical time for a tau value.
double physical_time(const ModelParams& params, double tau);

/// Populations of |11>,|10>,|01>,|00> ... indexed by config bits, for the
/// initial state |initial>|m>_{beta(initial)}, evolved inside the adiabatic
/// block m. Exact within that approximation; sums to one.
std::array<double, 4> block_probabilities(const ModelParams& params, int m, double t,
                                          ConfigBits initial = 0b10);

/// Four-frequency form for the |10> -> |10> return probability of block m.
double p10_block(const ModelParams& params, int m, double t);

struct BlockCoefficients {
    double c1_plus{0}, c1_minus{0}, c2{0};
    double theta_plus{0}, theta_minus{0};
    double d() const { return 2.0 * c1_plus * c1_minus + c2; }
};
BlockCoefficients block_coefficients(const ModelParams& params, int m);

/// Normalized Poisson weights for m <= m_cutoff. Throws CutoffError when the
/// raw weight beyond the cutoff exceeds 1e-6.
std::vector<double> poisson_weights(double z, int m_cutoff);

struct Equilibria {
    double b{0};           // sum_m sum_kappa p(m) (c1)^2
    double p10_p01{0.5};  // (1 - B)/2
    double p11_p00{0.0};  // B/2
};
Equilibria coherent_equilibria(const ModelParams& params, const CoherentPrep& prep);

/// Poisson-weighted sum of block formulas (method "zeroth").
DynamicsTrace coherent_observable(const ModelParams& params, const CoherentPrep& prep,
                                  Observable obs, const std::vector<double>& taus);

/// <sigma_1^z> from the closed two-frequency expression; initial |10> only.
DynamicsTrace inversion(const ModelParams& params, const CoherentPrep& prep,
                        const std::vector<double>& taus);

/// One term of the revival series; beta1 is the displacement of |11>.
std::complex<double> revival_term(int k, double z, double beta1, double omega_arg, double t);

/// S(t, omega) = Re sum_{k=0}^{k_max} revival_term.
double revival_series(double z, double beta1, double omega_arg, double t, int k_max);

/// Smallest k whose terms stay below 1e-8 for every sampled time; capped at 64.
int revival_kmax(double z, double beta1, double omega_arg, const std::vector<double>& ts);

/// Homogeneous closed forms: p10 = 3/8 + S(w1)/2 + S(2 w1)/8, inversion = -S(w1).
DynamicsTrace revival_observable(const ModelParams& params, double z, Observable obs,
                                 const std::vector<double>& taus);

/// |initial> (x) coherent(z - beta(initial)) in the plain Fock basis.
QuantumState coherent_initial_state(const ModelParams& params, const CoherentPrep& prep,
                                    int cutoff);

/// Exact states at physical times. Throws CutoffError if the initial state
/// loses more than 1e-6 of its norm to the cutoff, or the norm drifts.
std::vector<QuantumState> propagate_oracle(const ModelParams& params, const QuantumState& initial,
                                           const std::vector<double>& times, int cutoff);

/// Exact populations / inversion via the oracle (method "oracle").
DynamicsTrace oracle_observable(const ModelParams& params, const CoherentPrep& prep,
                                Observable obs, const std::vector<double>& taus, int cutoff = -1);

/// Reduce a Fock state to populations indexed by config bits.
std::vector<double> config_populations(const QuantumState& psi);

}  // namespace tcq
