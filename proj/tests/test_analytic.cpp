#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tcq/analytic.hpp"
#include "tcq/errors.hpp"
#include "tcq/exact.hpp"

using namespace tcq;

namespace {

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> root_list(const QuarticRoots& r) { return sorted({r.roots.begin(), r.roots.end()}); }

QuarticCoeffs from_poly(double b, double c, double d, double e) {
    QuarticCoeffs q;
    q.b = b;
    q.c = c;
    q.d = d;
    q.e = e;
    return q;
}

ModelParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> w(0.0, 0.5), g(-0.6, 0.6);
    return ModelParams::two_qubit(w(rng), w(rng), g(rng), g(rng));
}

}  // namespace

TEST(Zeroth, DecoupledLimit) {
    auto p = ModelParams::two_qubit(0.25, 0.25, 0.0, 0.0);
    auto even = zeroth_block(p, Parity::Even, 0);
    EXPECT_NEAR(even[0].energy, 0.25, 1e-15);
    EXPECT_NEAR(even[1].energy, -0.25, 1e-15);
    auto odd = zeroth_block(p, Parity::Odd, 0);
    EXPECT_NEAR(odd[0].energy, 0.0, 1e-15);
    EXPECT_NEAR(odd[1].energy, 0.0, 1e-15);
    // degenerate xi: unit vectors
    EXPECT_NEAR(odd[0].d1 * odd[0].d1 + odd[0].d2 * odd[0].d2, 1.0, 1e-15);
    EXPECT_NEAR(std::fabs(odd[0].d1 * odd[1].d1 + odd[0].d2 * odd[1].d2), 0.0, 1e-15);
}

TEST(Zeroth, HomogeneousGround) {
    auto p = ModelParams::two_qubit(0.25, 0.25, 0.1, 0.1);
    auto blk = zeroth_block(p, Parity::Even, 0);
    EXPECT_NEAR(blk[0].omega, -0.245050, 1e-6);
    // -0.02 - sqrt(0.24505^2 + 0.02^2)
    const double expect = -0.02 - std::sqrt(blk[0].omega * blk[0].omega + 0.0004);
    EXPECT_NEAR(blk[1].energy, expect, 1e-14);
    EXPECT_NEAR(blk[1].energy, -0.265865, 1e-6);
    auto fo = solve_fock_oracle(p, 100).energies(Parity::Even);
    EXPECT_NEAR(blk[1].energy, fo[0], 2e-3);
}

TEST(Zeroth, VanishingCouplingGivesBareEnergies) {
    // omega = 0 in the homogeneous case: zeroth block collapses onto the diagonal
    auto p = ModelParams::two_qubit(0.0, 0.0, 0.15, 0.15);
    for (Parity k : {Parity::Even, Parity::Odd})
        for (int m = 0; m < 6; ++m) {
            auto blk = zeroth_block(p, k, m);
            auto e = sorted({blk[0].energy, blk[1].energy});
            EXPECT_NEAR(e[0], m - 0.09, 1e-14);
            EXPECT_NEAR(e[1], m, 1e-14);
        }
}

TEST(Zeroth, XiIdentities) {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_params(rng);
        for (Parity k : {Parity::Even, Parity::Odd})
            for (int m = 0; m < 10; ++m) {
                auto blk = zeroth_block(p, k, m);
                const double b1 = p.couplings[0] + p.couplings[1], b2 = p.couplings[1] - p.couplings[0];
                EXPECT_GE(blk[0].theta + 1e-15, std::fabs(b1 * b1 - b2 * b2) / 2);
                if (std::isfinite(blk[0].xi) && std::isfinite(blk[1].xi) && std::fabs(blk[0].omega) > 1e-12)
                    EXPECT_NEAR(blk[0].xi * blk[1].xi, -1.0, 1e-10);
                EXPECT_NEAR(blk[0].d1 * blk[0].d1, blk[1].d2 * blk[1].d2, 1e-12);
                EXPECT_NEAR(blk[0].d1 * blk[0].d1 + blk[0].d2 * blk[0].d2, 1.0, 1e-12);
                EXPECT_NEAR(blk[0].d1 * blk[1].d1 + blk[0].d2 * blk[1].d2, 0.0, 1e-12);
                // eigenvector of the 2x2 block
                auto h = build_folded_hamiltonian(p, k, Truncation{m, 1e-6});
                Eigen::Matrix2d b = h.matrix.block(h.index(0, m), h.index(0, m), 2, 2);
                for (const auto& lv : blk) {
                    Eigen::Vector2d v(lv.d1, lv.d2);
                    EXPECT_LT((b * v - lv.energy * v).norm(), 1e-12);
                }
            }
    }
}

TEST(Quartic, CoefficientsMatchCharacteristicPolynomial) {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_params(rng);
        for (Parity k : {Parity::Even, Parity::Odd})
            for (int m = 0; m < 6; ++m) {
                auto q = quartic_coeffs(p, k, m);
                auto c = characteristic_quartic(first_order_block(p, k, m));
                EXPECT_NEAR(q.b, c.b, 1e-10);
                EXPECT_NEAR(q.c, c.c, 1e-10);
                EXPECT_NEAR(q.d, c.d, 1e-10);
                EXPECT_NEAR(q.e, c.e, 1e-10);
            }
    }
}

TEST(Quartic, BlockIsFoldedSubmatrix) {
    auto p = ModelParams::two_qubit(0.2, 0.35, 0.4, -0.1);
    for (Parity k : {Parity::Even, Parity::Odd}) {
        auto h = build_folded_hamiltonian(p, k, Truncation{5, 1e-6});
        for (int m = 0; m < 5; ++m) {
            Eigen::Matrix4d b = first_order_block(p, k, m);
            EXPECT_LT((b - h.matrix.block(h.index(0, m), h.index(0, m), 4, 4)).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(Quartic, DecoupledDiagonal) {
    auto p = ModelParams::two_qubit(0.0, 0.0, 0.2, 0.05);
    auto q = quartic_coeffs(p, Parity::Even, 2);
    const double b1 = 0.25, b2 = -0.15;
    double eps[4] = {2 - b1 * b1, 2 - b2 * b2, 3 - b1 * b1, 3 - b2 * b2};
    EXPECT_NEAR(q.b, -(eps[0] + eps[1] + eps[2] + eps[3]), 1e-14);
    EXPECT_NEAR(q.e, eps[0] * eps[1] * eps[2] * eps[3], 1e-13);
}

TEST(Quartic, FactorsWithoutInterBlockCoupling) {
    // omega = 0 kills inter-block coupling; roots equal the two 2x2 block eigenvalues
    auto p = ModelParams::two_qubit(0.0, 0.0, 0.3, 0.1);
    for (int m = 0; m < 4; ++m) {
        auto r = root_list(solve_quartic(quartic_coeffs(p, Parity::Odd, m)));
        auto a = zeroth_block(p, Parity::Odd, m), b = zeroth_block(p, Parity::Odd, m + 1);
        auto e = sorted({a[0].energy, a[1].energy, b[0].energy, b[1].energy});
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(r[i], e[i], 1e-9);
    }
}

TEST(Quartic, ConstructedRoots) {
    auto r = root_list(solve_quartic(from_poly(-10, 35, -50, 24)));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r[i], i + 1.0, 1e-9);
    auto s = solve_quartic(from_poly(0, -2, 0, 1));
    auto v = root_list(s);
    EXPECT_NEAR(v[0], -1, 1e-7);
    EXPECT_NEAR(v[1], -1, 1e-7);
    EXPECT_NEAR(v[2], 1, 1e-7);
    EXPECT_NEAR(v[3], 1, 1e-7);
}

TEST(Quartic, RandomBlocksMatchEigensolver) {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int fallbacks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::Matrix4d a;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
        auto q = characteristic_quartic(a);
        q.block = a;
        auto r = solve_quartic(q);
        fallbacks += r.fallback;
        auto ev = symmetric_eigen(a).values;
        auto rl = root_list(r);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(rl[i], ev(i), 1e-10) << trial;
    }
    EXPECT_LT(fallbacks, 1000);
}

TEST(Quartic, PhysicalBlocksMatchEigensolver) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_params(rng);
        for (Parity k : {Parity::Even, Parity::Odd})
            for (int m = 0; m < 5; ++m) {
                auto r = root_list(solve_quartic(quartic_coeffs(p, k, m)));
                auto ev = symmetric_eigen(first_order_block(p, k, m)).values;
                for (int i = 0; i < 4; ++i) EXPECT_NEAR(r[i], ev(i), 1e-9);
            }
    }
}

TEST(FirstOrder, FilterCounts) {
    auto p = ModelParams::two_qubit(0.25, 0.25, 0.3, 0.5);
    for (Parity k : {Parity::Even, Parity::Odd}) {
        auto all = first_order_levels(p, k, 10);
        EXPECT_EQ(all.size(), 40u);
        auto kept = first_order_spectrum(p, k, 10);
        EXPECT_EQ(kept.size(), 21u);
        for (size_t i = 1; i < kept.size(); ++i) EXPECT_LE(kept[i - 1].energy, kept[i].energy);
        for (const auto& lv : all) {
            if (lv.m == 0) EXPECT_EQ(lv.pseudo, lv.gamma > 0 && lv.s > 0);
            else EXPECT_EQ(lv.pseudo, lv.gamma == lv.s);
        }
    }
}

TEST(FirstOrder, TracksEdInDeepCoupling) {
    for (double g2 : {0.0, 0.3, 0.6, 0.9, 1.2}) {
        auto p = ModelParams::two_qubit(0.25, 0.25, 0.3, g2);
        for (Parity k : {Parity::Even, Parity::Odd}) {
            auto ed = solve_ed(p, k, Truncation{60, 1e-6}).energies();
            std::vector<double> fo;
            for (const auto& lv : first_order_spectrum(p, k, 24)) fo.push_back(lv.energy);
            for (int i = 0; i < 12; ++i) {
                double best = 1e9;
                for (double e : fo) best = std::min(best, std::fabs(e - ed[i]));
                EXPECT_LE(best, 0.05) << "g2=" << g2 << " level " << i;
            }
        }
    }
}

TEST(FirstOrder, DeepCouplingPairs) {
    auto p = ModelParams::two_qubit(0.25, 0.25, 0.3, 1.4);
    auto even = first_order_spectrum(p, Parity::Even, 12);
    auto odd = first_order_spectrum(p, Parity::Odd, 12);
    // near-degenerate across parity in the deep regime
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(even[i].energy, odd[i].energy, 0.02);
}

TEST(BlockWindows, OrderZeroAndOneMatchClosedForms) {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_params(rng);
        for (Parity k : {Parity::Even, Parity::Odd}) {
            auto b0 = block_truncated_spectrum(p, k, 0, 8).energies();
            std::vector<double> z;
            for (const auto& lv : zeroth_spectrum(p, k, 8)) z.push_back(lv.energy);
            z = sorted(z);
            ASSERT_EQ(b0.size(), z.size());
            for (size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(b0[i], z[i], 1e-9);

            auto b1 = block_truncated_spectrum(p, k, 1, 8).energies();
            std::vector<double> f;
            for (const auto& lv : first_order_levels(p, k, 8)) f.push_back(lv.energy);
            f = sorted(f);
            ASSERT_EQ(b1.size(), f.size());
            for (size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(b1[i], f[i], 1e-9);
        }
    }
}

TEST(BlockWindows, FullWindowIsEd) {
    auto p = ModelParams::two_qubit(0.3, 0.2, 0.45, 0.2);
    auto b = block_truncated_spectrum(p, Parity::Even, 20, 20).energies();
    auto ed = solve_ed(p, Parity::Even, Truncation{20, 1e-6}).energies();
    ASSERT_EQ(b.size(), ed.size());
    for (size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(b[i], ed[i], 1e-12);
}

TEST(QuasiExact, SymmetricDetuning) {
    auto p = ModelParams::two_qubit(1.3, 0.7, 0.2, 0.2);
    auto st = quasi_exact_states(p);
    ASSERT_EQ(st.size(), 1u);
    EXPECT_EQ(st[0].condition, "symmetric-detuning");
    EXPECT_EQ(st[0].energy, 1.0);
    EXPECT_EQ(st[0].state.frame, QuantumState::Frame::Unrotated);
    EXPECT_LE(eigen_residual(p, st[0].state, 1.0), 1e-12);
    ASSERT_EQ(st[0].q_candidates.size(), 2u);
    double qa = std::fabs(st[0].q_candidates[0].first);
    EXPECT_NEAR(qa, 0.4 / 0.6, 1e-14);
    // exactly one sign works
    double r0 = st[0].q_candidates[0].second, r1 = st[0].q_candidates[1].second;
    EXPECT_LE(std::min(r0, r1), 1e-12);
    EXPECT_GT(std::max(r0, r1), 1e-3);
    EXPECT_NEAR(st[0].state.norm(), 1.0, 1e-14);
}

TEST(QuasiExact, AsymmetricDetuning) {
    auto p = ModelParams::two_qubit(2.7, 0.7, 0.2, 0.2);
    auto st = quasi_exact_states(p);
    ASSERT_EQ(st.size(), 1u);
    EXPECT_EQ(st[0].condition, "asymmetric-detuning");
    EXPECT_LE(eigen_residual(p, st[0].state, 1.0), 1e-12);
    EXPECT_NEAR(std::fabs(st[0].q_candidates[0].first), 0.4 / 3.4, 1e-14);
}

TEST(QuasiExact, SingletLadder) {
    auto p = ModelParams::two_qubit(0.25, 0.25, 0.15, 0.15);
    auto st = quasi_exact_states(p, Truncation{8, 1e-6});
    ASSERT_EQ(st.size(), 9u);
    Eigen::MatrixXd pi = parity_operator(2, 9);
    for (const auto& s : st) {
        EXPECT_EQ(s.condition, "singlet-ladder");
        EXPECT_EQ(s.energy, double(s.ladder_m));
        EXPECT_LE(eigen_residual(p, s.state, s.energy), 1e-12);
        EXPECT_EQ(s.parity, (s.ladder_m % 2) ? Parity::Even : Parity::Odd);
        auto padded = pad_cutoff(s.state, 9);
        Eigen::VectorXd v = padded.amplitudes.real();
        EXPECT_NEAR(v.dot(pi * v), sign(s.parity), 1e-14);
        for (int sbits = 0; sbits < 4; ++sbits)
            for (int k = 0; k <= s.state.n_max; ++k)
                if (k > std::max(s.ladder_m, 1)) EXPECT_EQ(std::abs(s.state.amplitudes(s.state.fock_index(sbits, k))), 0.0);
    }
}

TEST(QuasiExact, NoneWhenConditionsFail) {
    EXPECT_TRUE(quasi_exact_states(ModelParams::two_qubit(0.3, 0.25, 0.1, 0.12)).empty());
    EXPECT_TRUE(quasi_exact_states(ModelParams::two_qubit(1.3, 0.7, 0.2, 0.21)).empty());
}

TEST(RotateFrame, RoundTripAndSingleQubit) {
    std::mt19937 rng(47);
    std::normal_distribution<double> nd;
    auto s = QuantumState::fock_zero(2, 5, QuantumState::Frame::Unrotated);
    for (int i = 0; i < s.amplitudes.size(); ++i) s.amplitudes(i) = {nd(rng), nd(rng)};
    auto back = rotate_frame(rotate_frame(s));
    EXPECT_EQ(back.frame, s.frame);
    EXPECT_LT((back.amplitudes - s.amplitudes).norm(), 1e-14);

    ModelParams one{1, 1.0, {0.3}, {0.1}};
    auto u = QuantumState::fock_zero(1, 0, QuantumState::Frame::Unrotated);
    u.amplitudes(u.fock_index(1, 0)) = 1.0;
    auto r = rotate_frame(u);
    EXPECT_EQ(r.frame, QuantumState::Frame::Rotated);
    EXPECT_NEAR(r.amplitudes(r.fock_index(1, 0)).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r.amplitudes(r.fock_index(0, 0)).real(), -1 / std::sqrt(2.0), 1e-15);
}

TEST(RotateFrame, RotatedQuasiExactStateHasEnergyOne) {
    auto p = ModelParams::two_qubit(1.3, 0.7, 0.2, 0.2);
    auto st = quasi_exact_states(p).at(0);
    auto rot = pad_cutoff(rotate_frame(st.state), 12);
    Eigen::MatrixXd h = fock_hamiltonian(p, 12, QuantumState::Frame::Rotated);
    Eigen::VectorXcd v = rot.amplitudes;
    EXPECT_NEAR((v.adjoint() * h * v)(0).real(), 1.0, 1e-12);
    EXPECT_LE(eigen_residual(p, rot, 1.0), 1e-12);
}
