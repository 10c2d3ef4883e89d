// analysis.hpp: parameter sweeps, fidelities, crossing detection, quasi-exact
// verification and truncation convergence.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcq/analytic.hpp"
#include "tcq/exact.hpp"
#include "tcq/model.hpp"
#include "tcq/state.hpp"

namespace tcq {

struct SweepSpec {
    std::string parameter{"g2"};  // g1, g2, beta1, omega1, omega2
    double lo{0.0}, hi{1.0};
    int steps{2};
    std::string method{"ed"};  // ed, fock-oracle, zeroth, first, block-K
    std::vector<Parity> parities{Parity::Even, Parity::Odd};
    int levels{12};
    // beta1 only: true sets g1 = g2 = beta1/2, false keeps g1 and sets g2 = beta1 - g1
    bool tied{false};
    int m_max{24};        // analytic / block methods
    int photon_cutoff{-1};  // fock-oracle; -1 picks the heuristic + levels
    int workers{0};       // 0 = hardware concurrency

    void validate() const;
};

/// Copy of `base` with the sweep parameter set to `value`.
ModelParams apply_parameter(const ModelParams& base, const SweepSpec& spec, double value);

struct SweepRow {
    double param{0.0};
    Parity parity{Parity::Even};
    std::vector<double> energies;  // ascending, at most spec.levels
    std::vector<int> track;        // curve label carried over from the previous point
};

struct SweepTable {
    ModelParams base;
    SweepSpec spec;
    Truncation trunc;
    std::string method;
    std::vector<SweepRow> rows;  // ordered by parameter, then parity as listed in spec
};

SweepTable sweep_spectrum(const ModelParams& base, const SweepSpec& spec, const Truncation& trunc);

/// |<a|b>|^2 for Fock-basis states of the same shape.
double fidelity(const QuantumState& a, const QuantumState& b);

/// Squared projection norm of `a` onto the span of orthonormal `subspace`.
double subspace_fidelity(const QuantumState& a, const std::vector<QuantumState>& subspace);

struct CrossingOptions {
    double gap_tol{1e-6};
    double fid_tol{0.01};
    double avoided_fid{0.9};
    double max_gap{0.02};   // only gap minima below this are examined
    double fid_step{1e-4};  // parameter offset for the fidelity probe
};

struct CrossingReport {
    double param{0.0};
    Parity parity{Parity::Even};
    int lower_level{0}, upper_level{1};
    double min_gap{0.0};
    double fidelity{0.0};
    std::string classification;  // crossing, avoided, ambiguous
    bool refined{true};
    std::string warning;
};

/// Needs a table produced with method "ed".
std::vector<CrossingReport> detect_crossings(const SweepTable& table, Parity parity,
                                             const CrossingOptions& opt = {});

struct QuasiExactCheck {
    QuasiExactState state;
    double residual{0.0};
    double membership_gap{0.0};
};

std::vector<QuasiExactCheck> verify_quasi_exact(const ModelParams& params, const Truncation& trunc,
                                                int max_ladder = -1);

struct ConvergenceRow {
    int n_tr{0};
    double max_shift{0.0};
    bool converged{false};
};

struct ConvergenceResult {
    int n_tr{-1};
    std::vector<ConvergenceRow> rows;
};

/// Smallest schedule entry whose lowest K levels move less than tol against
/// the next entry. Entries with fewer than K levels are skipped. Throws
/// ConvergenceError if the schedule runs out.
ConvergenceResult convergence_check(const ModelParams& params, Parity kappa,
                                    const std::vector<int>& schedule, int levels, double tol,
                                    double element_tol = 1e-6);

}  // namespace tcq
