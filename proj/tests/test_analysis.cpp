#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "tcq/analysis.hpp"
#include "tcq/errors.hpp"

using namespace tcq;

namespace {

SweepSpec beta_sweep(double lo, double hi, int steps, std::vector<Parity> par, int levels = 8) {
    SweepSpec s;
    s.parameter = "beta1";
    s.lo = lo;
    s.hi = hi;
    s.steps = steps;
    s.parities = std::move(par);
    s.levels = levels;
    s.tied = true;
    return s;
}

QuantumState random_state(std::mt19937& rng, int cutoff) {
    std::normal_distribution<double> nd;
    auto s = QuantumState::fock_zero(2, cutoff);
    for (int i = 0; i < s.amplitudes.size(); ++i) s.amplitudes(i) = {nd(rng), nd(rng)};
    s.amplitudes.normalize();
    return s;
}

double ed_level(const ModelParams& base, const SweepSpec& spec, double x, Parity k, int idx) {
    return solve_ed(apply_parameter(base, spec, x), k, Truncation{}).energies()[idx];
}

}  // namespace

TEST(Sweep, SpecValidation) {
    SweepSpec s;
    s.lo = 1.0;
    s.hi = 1.0;
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.hi = 2.0;
    s.steps = 1;
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.steps = 3;
    s.parameter = "gamma";
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.parameter = "g1";
    s.method = "block-x";
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.method = "block-2";
    EXPECT_NO_THROW(s.validate());
}

TEST(Sweep, ApplyParameter) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.3, 0.1);
    SweepSpec s;
    s.parameter = "beta1";
    auto p = apply_parameter(base, s, 0.8);
    EXPECT_DOUBLE_EQ(p.couplings[0], 0.3);
    EXPECT_DOUBLE_EQ(p.couplings[1], 0.5);
    s.tied = true;
    p = apply_parameter(base, s, 0.8);
    EXPECT_DOUBLE_EQ(p.couplings[0], 0.4);
    EXPECT_DOUBLE_EQ(p.couplings[1], 0.4);
    s.parameter = "omega2";
    EXPECT_DOUBLE_EQ(apply_parameter(base, s, 0.7).omegas[1], 0.7);
}

TEST(Sweep, SharedPointsGiveIdenticalRows) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.3, 0.0);
    SweepSpec a;
    a.parameter = "g2";
    a.lo = 0.0;
    a.hi = 0.4;
    a.steps = 5;
    SweepSpec b = a;
    b.hi = 0.8;
    b.steps = 9;
    auto ta = sweep_spectrum(base, a, Truncation{});
    auto tb = sweep_spectrum(base, b, Truncation{});
    ASSERT_EQ(ta.rows.size(), 10u);
    for (size_t r = 0; r < ta.rows.size(); ++r) {
        EXPECT_EQ(ta.rows[r].param, tb.rows[r].param);
        EXPECT_EQ(ta.rows[r].energies, tb.rows[r].energies);
    }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.3, 0.0);
    SweepSpec s;
    s.parameter = "g2";
    s.lo = 0.0;
    s.hi = 1.2;
    s.steps = 23;
    s.workers = 1;
    auto one = sweep_spectrum(base, s, Truncation{});
    s.workers = 5;
    auto five = sweep_spectrum(base, s, Truncation{});
    ASSERT_EQ(one.rows.size(), five.rows.size());
    for (size_t r = 0; r < one.rows.size(); ++r) {
        EXPECT_EQ(one.rows[r].param, five.rows[r].param);
        EXPECT_EQ(one.rows[r].parity, five.rows[r].parity);
        EXPECT_EQ(one.rows[r].energies, five.rows[r].energies);
        EXPECT_EQ(one.rows[r].track, five.rows[r].track);
    }
}

TEST(Sweep, MethodsAgreeWhereExpected) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.1, 0.0);
    SweepSpec s;
    s.parameter = "g2";
    s.lo = 0.0;
    s.hi = 0.2;
    s.steps = 5;
    s.levels = 8;
    auto ed = sweep_spectrum(base, s, Truncation{});
    s.method = "fock-oracle";
    auto fo = sweep_spectrum(base, s, Truncation{});
    for (size_t r = 0; r < ed.rows.size(); ++r)
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(ed.rows[r].energies[i], fo.rows[r].energies[i], 1e-8);
    // zeroth order sits close in the weak-coupling window
    s.method = "zeroth";
    auto z = sweep_spectrum(base, s, Truncation{});
    for (size_t r = 0; r < ed.rows.size(); ++r)
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(ed.rows[r].energies[i], z.rows[r].energies[i], 0.05);
}

TEST(Fidelity, BasicProperties) {
    std::mt19937 rng(79);
    auto a = random_state(rng, 6), b = random_state(rng, 6);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
    auto phased = a;
    phased.amplitudes *= std::polar(1.0, 0.7);
    EXPECT_NEAR(fidelity(phased, b), fidelity(a, b), 1e-14);
    auto e0 = QuantumState::fock_zero(2, 6), e1 = QuantumState::fock_zero(2, 6);
    e0.amplitudes(0) = 1.0;
    e1.amplitudes(1) = 1.0;
    EXPECT_EQ(fidelity(e0, e1), 0.0);
    EXPECT_THROW(fidelity(a, random_state(rng, 7)), InvalidArgument);
    EXPECT_GE(fidelity(a, b), 0.0);
    EXPECT_LE(fidelity(a, b), 1.0);
}

TEST(Fidelity, SubspaceProjection) {
    auto e0 = QuantumState::fock_zero(2, 3), e1 = e0, mix = e0;
    e0.amplitudes(0) = 1.0;
    e1.amplitudes(5) = 1.0;
    mix.amplitudes(0) = mix.amplitudes(5) = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(subspace_fidelity(mix, {e0, e1}), 1.0, 1e-15);
    EXPECT_NEAR(subspace_fidelity(mix, {e0}), 0.5, 1e-15);
}

TEST(Crossings, HomogeneousSweepNearOne) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.5, 0.5);
    auto spec = beta_sweep(0.9, 1.1, 81, {Parity::Even, Parity::Odd});
    auto table = sweep_spectrum(base, spec, Truncation{});
    std::vector<CrossingReport> all;
    for (Parity k : {Parity::Even, Parity::Odd}) {
        auto r = detect_crossings(table, k);
        all.insert(all.end(), r.begin(), r.end());
    }
    ASSERT_FALSE(all.empty());
    auto near = [&](double x) {
        double best = 1e9;
        for (const auto& c : all)
            if (c.classification == "crossing" && c.fidelity < 1e-3) best = std::min(best, std::fabs(c.param - x));
        return best;
    };
    EXPECT_LE(near(1.0004), 0.005);
    EXPECT_LE(near(0.9898), 0.005);
}

TEST(Crossings, DetunedSweeps) {
    auto sym = ModelParams::two_qubit(1.3, 0.7, 0.5, 0.5);
    auto ts = sweep_spectrum(sym, beta_sweep(0.9, 1.1, 81, {Parity::Even}), Truncation{});
    auto rs = detect_crossings(ts, Parity::Even);
    bool found = false;
    for (const auto& c : rs) found |= c.classification == "crossing" && std::fabs(c.param - 1.0251) <= 0.01;
    EXPECT_TRUE(found);

    auto asym = ModelParams::two_qubit(2.7, 0.7, 0.5, 0.5);
    auto ta = sweep_spectrum(asym, beta_sweep(0.85, 1.05, 81, {Parity::Odd}), Truncation{});
    auto ra = detect_crossings(ta, Parity::Odd);
    int hits = 0;
    for (const auto& c : ra) hits += c.classification == "crossing" && std::fabs(c.param - 0.944) <= 0.01;
    EXPECT_EQ(hits, 1);
}

TEST(Crossings, LieOnQuasiExactLines) {
    struct Case {
        double w1, w2, lo, hi;
        Parity k;
    };
    for (const Case& c : {Case{0.25, 0.25, 0.9, 1.1, Parity::Odd}, Case{0.25, 0.25, 0.9, 1.1, Parity::Even},
                          Case{1.3, 0.7, 0.9, 1.1, Parity::Even}, Case{2.7, 0.7, 0.85, 1.05, Parity::Odd}}) {
        auto base = ModelParams::two_qubit(c.w1, c.w2, 0.5, 0.5);
        auto spec = beta_sweep(c.lo, c.hi, 81, {c.k});
        auto table = sweep_spectrum(base, spec, Truncation{});
        for (const auto& r : detect_crossings(table, c.k)) {
            if (r.classification != "crossing") continue;
            const double e = ed_level(base, spec, r.param, c.k, r.lower_level);
            EXPECT_LE(std::fabs(e - std::round(e)), 1e-3) << c.w1 << " " << r.param << " E=" << e;
        }
    }
}

TEST(Crossings, StableUnderStepHalving) {
    auto base = ModelParams::two_qubit(1.3, 0.7, 0.5, 0.5);
    auto coarse = detect_crossings(sweep_spectrum(base, beta_sweep(0.9, 1.1, 41, {Parity::Even}), Truncation{}),
                                   Parity::Even);
    auto fine = detect_crossings(sweep_spectrum(base, beta_sweep(0.9, 1.1, 81, {Parity::Even}), Truncation{}),
                                 Parity::Even);
    ASSERT_EQ(coarse.size(), fine.size());
    for (size_t i = 0; i < coarse.size(); ++i) {
        EXPECT_NEAR(coarse[i].param, fine[i].param, 1e-4);
        EXPECT_EQ(coarse[i].classification, fine[i].classification);
    }
}

TEST(Crossings, ClassificationRule) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.5, 0.5);
    auto table = sweep_spectrum(base, beta_sweep(0.9, 1.1, 41, {Parity::Odd}), Truncation{});
    CrossingOptions opt;
    for (const auto& r : detect_crossings(table, Parity::Odd, opt)) {
        EXPECT_EQ(r.classification == "crossing", r.fidelity < opt.fid_tol && r.min_gap < opt.gap_tol);
        EXPECT_GE(r.fidelity, 0.0);
        EXPECT_LE(r.fidelity, 1.0 + 1e-12);
        EXPECT_EQ(r.upper_level, r.lower_level + 1);
    }
}

TEST(Crossings, AvoidedWhenCouplingsDiffer) {
    // g1 != g2 breaks the extra symmetry; same-parity levels repel
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.3, 0.0);
    SweepSpec s;
    s.parameter = "g2";
    s.lo = 0.0;
    s.hi = 1.2;
    s.steps = 121;
    s.levels = 8;
    s.parities = {Parity::Even};
    auto table = sweep_spectrum(base, s, Truncation{});
    for (const auto& r : detect_crossings(table, Parity::Even)) EXPECT_NE(r.classification, "crossing") << r.param;
}

TEST(Crossings, NeedsExactTable) {
    auto base = ModelParams::two_qubit(0.25, 0.25, 0.5, 0.5);
    auto spec = beta_sweep(0.9, 1.1, 5, {Parity::Odd});
    spec.method = "zeroth";
    auto table = sweep_spectrum(base, spec, Truncation{});
    EXPECT_THROW(detect_crossings(table, Parity::Odd), InvalidArgument);
}

TEST(Verify, SymmetricDetuning) {
    auto checks = verify_quasi_exact(ModelParams::two_qubit(1.3, 0.7, 0.2, 0.2), Truncation{});
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_LE(checks[0].residual, 1e-12);
    EXPECT_LE(checks[0].membership_gap, 1e-8);
}

TEST(Verify, SingletLadder) {
    auto checks = verify_quasi_exact(ModelParams::two_qubit(0.25, 0.25, 0.15, 0.15), Truncation{}, 5);
    ASSERT_EQ(checks.size(), 6u);
    for (const auto& c : checks) {
        EXPECT_LE(c.residual, 1e-12);
        EXPECT_LE(c.membership_gap, 1e-8);
    }
}

TEST(Verify, EmptyWithoutCondition) {
    EXPECT_TRUE(verify_quasi_exact(ModelParams::two_qubit(0.3, 0.2, 0.1, 0.2), Truncation{}).empty());
}

TEST(Convergence, FigureOneParameters) {
    const std::vector<int> schedule{8, 16, 24, 32, 40, 48, 56, 64, 72};
    for (double g2 : {-0.3, 0.0, 0.3, 0.6})
        for (Parity k : {Parity::Even, Parity::Odd}) {
            auto r = convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.3, g2), k, schedule, 12, 1e-8);
            EXPECT_LE(r.n_tr, 48) << g2;
        }
}

TEST(Convergence, DecoupledConvergesImmediately) {
    auto r = convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.0, 0.0), Parity::Even, {12, 16, 24}, 12, 1e-8);
    EXPECT_EQ(r.n_tr, 12);
}

TEST(Convergence, StrongerCouplingNeedsMore) {
    const std::vector<int> schedule{8, 16, 24, 32, 40, 48, 56, 64, 72, 80, 96, 112};
    auto weak = convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.3, 0.3), Parity::Even, schedule, 12, 1e-8);
    auto strong = convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.3, 1.5), Parity::Even, schedule, 12, 1e-8);
    EXPECT_GT(strong.n_tr, weak.n_tr);
}

TEST(Convergence, ScheduleExhausted) {
    EXPECT_THROW(convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.3, 1.5), Parity::Even, {8, 12}, 12, 1e-8),
                 ConvergenceError);
    EXPECT_THROW(convergence_check(ModelParams::two_qubit(0.25, 0.25, 0.3, 0.3), Parity::Even, {16, 8}, 12, 1e-8),
                 InvalidArgument);
}
