// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinboltz/collision.hpp"
#include "spinboltz/reference.hpp"
#include "support.hpp"

using namespace spinboltz;
using namespace spinboltz::testing;

namespace {

SpeciesBlocks random_blocks(std::mt19937_64& rng) {
    SpeciesBlocks b;
    for (auto& x : b) x = random_physical(rng);
    return b;
}

double blocks_diff(const SpeciesBlocks& x, const SpeciesBlocks& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) m = std::max(m, max_abs(x[i] - y[i]));
    return m;
}

double blocks_max(const SpeciesBlocks& x) {
    double m = 0.0;
    for (const auto& b : x) m = std::max(m, max_abs(b));
    return m;
}

}  // namespace

TEST(DissIntegrand, ZeroAndHalfFieldsVanish) {
    const Model model;
    SpeciesBlocks zero{}, half;
    half.fill(0.5 * SpinBlock::identity());
    EXPECT_EQ(blocks_max(diss_integrand(model.vop(), zero, zero, zero, zero)), 0.0);
    EXPECT_LE(blocks_max(diss_integrand(model.vop(), half, half, half, half)), 1e-15);
}

TEST(DissIntegrand, MatchesMatrixForm) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const InteractionSet v = random_interactions(rng);
        const VOp vop = build_vop(v);
        const auto w1 = random_blocks(rng), w2 = random_blocks(rng), w3 = random_blocks(rng), w4 = random_blocks(rng);
        const auto t = diss_integrand(vop, w1, w2, w3, w4);
        const auto m = reference::diss_integrand(v, w1, w2, w3, w4);
        EXPECT_LE(blocks_diff(t, m), 1e-12 * std::max(1.0, blocks_max(m))) << "trial " << trial;
    }
}

TEST(DissIntegrand, ParticleHoleAntisymmetry) {
    std::mt19937_64 rng(12);
    const VOp vop = build_vop(random_interactions(rng));
    auto w1 = random_blocks(rng), w2 = random_blocks(rng), w3 = random_blocks(rng), w4 = random_blocks(rng);
    const auto c = diss_integrand(vop, w1, w2, w3, w4);
    for (auto* w : {&w1, &w2, &w3, &w4})
        for (auto& b : *w) b = hole(b);
    const auto d = diss_integrand(vop, w1, w2, w3, w4);
    for (std::size_t s = 0; s < 4; ++s) EXPECT_LE(max_abs(c[s] + d[s]), 1e-13);
}

TEST(HeffIntegrand, MatchesNegatedMatrixForm) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const InteractionSet v = random_interactions(rng);
        const VOp vop = build_vop(v);
        const auto w2 = random_blocks(rng), w3 = random_blocks(rng), w4 = random_blocks(rng);
        const auto t = heff_integrand(vop, w2, w3, w4);
        auto m = reference::heff_integrand(v, w2, w3, w4);
        for (auto& b : m) b = -1.0 * b;
        EXPECT_LE(blocks_diff(t, m), 1e-12 * std::max(1.0, blocks_max(m))) << "trial " << trial;
    }
}

TEST(HeffIntegrand, InvariantUnderHoleSwap) {
    std::mt19937_64 rng(14);
    const VOp vop = build_vop(random_interactions(rng));
    auto w2 = random_blocks(rng), w3 = random_blocks(rng), w4 = random_blocks(rng);
    const auto h = heff_integrand(vop, w2, w3, w4);
    for (auto* w : {&w2, &w3, &w4})
        for (auto& b : *w) b = hole(b);
    EXPECT_LE(blocks_diff(h, heff_integrand(vop, w2, w3, w4)), 1e-13);
    for (const auto& b : h) EXPECT_LE(hermiticity_defect(b), 1e-13);
}

TEST(HeffIntegrand, EmptyOppositePairLeavesPartnerTerm) {
    std::mt19937_64 rng(15);
    const VOp vop = build_vop(random_interactions(rng));
    SpeciesBlocks w2{}, w4{};
    const auto w3 = random_blocks(rng);
    const auto h = heff_integrand(vop, w2, w3, w4);
    // species a: Tr_c[ vop vop^+ (1 (x) W_c) ] by direct index summation
    const PairBlock m = vop.matrix * adjoint(vop.matrix);
    SpinBlock want;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) want(s, t) += m(2 * s + k, 2 * t + l) * w3[2](l, k);
    EXPECT_LE(max_abs(h[0] - want), 1e-13);
}

TEST(KinematicFactor, LimitAtOrigin) {
    EXPECT_EQ(kinematic_factor(0.0, 1.0, 2.0, 3.0), 1.0);
    EXPECT_EQ(kinematic_factor(0.0, 0.0, 2.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(kinematic_factor(2.0, 1.0, 3.0, 4.0), 0.5);
    EXPECT_EQ(kinematic_factor(1.0, 2.0, 3.0, 4.0), 1.0);
}

class SmallGrid : public ::testing::Test {
protected:
    EnergyGrid grid{6, 0.3};
    std::mt19937_64 rng{21};
};

TEST_F(SmallGrid, DissOperatorMatchesQuadrupleLoop) {
    for (int trial = 0; trial < 5; ++trial) {
        const Model model(Masses{}, random_interactions(rng));
        const WignerField w = random_field(grid, rng);
        const WignerField fast = diss_operator(w, model);
        const WignerField slow = reference::diss_operator(w, model);
        EXPECT_LE(field_diff(fast, slow), 1e-12 * field_max(slow)) << "trial " << trial;
    }
}

TEST_F(SmallGrid, ConsOperatorMatchesTripleLoop) {
    for (int trial = 0; trial < 5; ++trial) {
        const Model model(Masses{}, random_interactions(rng));
        const WignerField w = random_field(grid, rng);
        const WignerField fast = cons_operator(w, model);
        const WignerField slow = reference::cons_operator(w, model);
        EXPECT_LE(field_diff(fast, slow), 1e-12 * field_max(slow)) << "trial " << trial;
        EXPECT_LE(field_diff(effective_hamiltonian(w, model), reference::effective_hamiltonian(w, model)),
                  1e-12 * field_max(reference::effective_hamiltonian(w, model)));
    }
}

TEST_F(SmallGrid, EnergyFormIsUniformRescale) {
    const Model model(Masses{}, random_interactions(rng));
    const WignerField w = random_field(grid, rng);
    CollisionOptions energy;
    energy.norm = Normalization::energy_form;
    const WignerField a = rhs(w, model), b = rhs(w, model, energy);
    const double k = std::pow(2.0 * std::numbers::pi, 3);
    WignerField scaled = a;
    for (auto& blk : scaled.blocks()) blk = k * blk;
    EXPECT_LE(field_diff(scaled, b), 1e-13 * field_max(b));
    WignerField slow = reference::diss_operator(w, model, Normalization::energy_form);
    slow.axpy(1.0, reference::cons_operator(w, model, Normalization::energy_form));
    EXPECT_LE(field_diff(b, slow), 1e-12 * field_max(b));
}

TEST_F(SmallGrid, ConsOperatorOnLargerGrid) {
    // the eps4 prefix sums cut at every shell; a grid with unequal masses exercises all cuts
    const Model model(Masses{{1.0, 0.3, 2.5, 0.7}}, random_interactions(rng));
    const WignerField w = random_field(EnergyGrid(9, 0.17), rng);
    const WignerField slow = reference::effective_hamiltonian(w, model);
    EXPECT_LE(field_diff(effective_hamiltonian(w, model), slow), 1e-12 * field_max(slow));
}

TEST_F(SmallGrid, OutputBlocksHermitian) {
    const Model model(Masses{}, random_interactions(rng));
    const WignerField w = random_field(grid, rng);
    const CollisionOutput c = collision(w, model);
    const double scale = field_max(c.total);
    for (const auto& b : c.total.blocks()) EXPECT_LE(hermiticity_defect(b), 1e-12 * scale);
    for (const auto& b : c.cons.blocks()) EXPECT_NEAR(trace(b).real(), 0.0, 1e-12 * scale);
}

TEST_F(SmallGrid, ScalarFieldHasNoConservativePart) {
    const Model model(Masses{}, random_interactions(rng));
    WignerField w(grid);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& b : w.blocks()) b = u(rng) * SpinBlock::identity();
    EXPECT_LE(field_max(cons_operator(w, model)), 1e-13 * std::max(1.0, field_max(effective_hamiltonian(w, model))));
}

TEST_F(SmallGrid, ThreadCountDoesNotChangeResult) {
    const Model model(Masses{}, random_interactions(rng));
    const WignerField w = random_field(EnergyGrid(12, 0.2), rng);
    CollisionOptions one, four;
    four.threads = 4;
    const WignerField a = rhs(w, model, one), b = rhs(w, model, four);
    EXPECT_EQ(field_diff(a, b), 0.0);
}

TEST_F(SmallGrid, GaugeCovariance) {
    const Model model(Masses{}, random_interactions(rng));
    const WignerField w = random_field(EnergyGrid(10, 0.3), rng);
    const GaugeRotation g = random_gauge(rng);
    const WignerField lhs = rhs(apply_gauge(g, w), model.gauged(g));
    const WignerField rhs_rot = apply_gauge(g, rhs(w, model));
    EXPECT_LE(field_diff(lhs, rhs_rot), 1e-11 * field_max(rhs_rot));
}

TEST(Collision, RejectsNonHermitianInput) {
    WignerField w(EnergyGrid(6, 0.5));
    w(Species::b, 2)(0, 1) = 0.3;
    EXPECT_THROW((void)rhs(w, Model()), ValidationError);
}
