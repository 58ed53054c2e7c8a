// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinboltz/equilibrium.hpp"
#include "spinboltz/integrator.hpp"
#include "support.hpp"

using namespace spinboltz;
using namespace spinboltz::testing;

namespace {

WignerField moderate_field(const EnergyGrid& g, std::mt19937_64& rng) {
    WignerField w(g);
    for (auto& b : w.blocks()) b = random_physical(rng, 0.2, 0.8);
    return w;
}

WignerField advance(WignerField w, double dt, int steps, const Model& m) {
    for (int k = 0; k < steps; ++k) w = midpoint_step(w, dt, m);
    return w;
}

}  // namespace

TEST(StepConfig, Validation) {
    StepConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.steps(), 1000);
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), ValidationError);
    c.dt = 0.3;
    EXPECT_THROW(c.validate(), ValidationError);  // 1 is not a multiple of 0.3
    c.dt = 2.0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.stride = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.t_end = -1.0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.dt = 0.1;
    c.t_end = 0.7;  // 7 steps despite binary rounding
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.steps(), 7);
}

TEST(MidpointStep, EmptyFieldIsAFixedPoint) {
    const WignerField w(EnergyGrid(12, 0.3));
    EXPECT_EQ(field_diff(midpoint_step(w, 0.1, Model()), w), 0.0);
}

TEST(MidpointStep, EquilibriumIsAFixedPoint) {
    EquilibriumParams p;
    p.beta = 0.8;
    p.nu = {0.3, 0.1, -0.2};
    const WignerField w = fermi_dirac(p, EnergyGrid(30, 0.4));
    EXPECT_LE(field_diff(midpoint_step(w, 1e-2, Model()), w), 1e-15);
}

TEST(MidpointStep, LocalErrorIsThirdOrder) {
    std::mt19937_64 rng(1);
    const Model m;
    const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
    auto defect = [&](double dt) { return field_diff(midpoint_step(w, dt, m), advance(w, dt / 2, 2, m)); };
    const double r = defect(2e-3) / defect(1e-3);
    EXPECT_NEAR(std::log2(r), 3.0, 0.2);
}

TEST(MidpointStep, GlobalErrorIsSecondOrder) {
    std::mt19937_64 rng(2);
    const Model m;
    const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
    const double t = 0.02;
    const WignerField ref = advance(w, t / 64, 64, m);
    const double e1 = field_diff(advance(w, t / 4, 4, m), ref);
    const double e2 = field_diff(advance(w, t / 8, 8, m), ref);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(MidpointStep, PreservesLinearInvariants) {
    std::mt19937_64 rng(3);
    const Model models[] = {Model(), Model(Masses{}, zero_frame_interactions()), Model(Masses{}, random_interactions(rng))};
    for (const Model& m : models) {
        const Classification c = classify_vop(m.vop());
        const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
        const auto before = evaluate_conserved(w, m.masses(), c).values;
        const auto after = evaluate_conserved(midpoint_step(w, 1e-3, m), m.masses(), c).values;
        for (std::size_t i = 0; i < before.size(); ++i)
            EXPECT_NEAR(after[i], before[i], 1e-12 * std::max(1.0, std::abs(before[i]))) << to_string(c.variant) << " " << i;
    }
}

TEST(MidpointStep, GuardRejectsLargeSteps) {
    std::mt19937_64 rng(4);
    WignerField w(EnergyGrid(12, 0.3));
    for (auto& b : w.blocks()) b = random_physical(rng, 0.0, 0.05);
    try {
        (void)midpoint_step(w, 50.0, Model(), {}, 1.5);
        FAIL() << "expected GuardError";
    } catch (const GuardError& e) {
        EXPECT_EQ(e.exit_code(), 4);
        EXPECT_NE(std::string(e.what()).find("reduce dt"), std::string::npos);
    }
}

TEST(Run, ZeroDurationRecordsTheInitialState) {
    std::mt19937_64 rng(5);
    const Model m;
    const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
    StepConfig cfg;
    cfg.t_end = 0.0;
    RunOptions opt;
    opt.classification = classify_vop(m.vop());
    const Trajectory tr = run(w, cfg, m, opt);
    ASSERT_EQ(tr.samples.size(), 1u);
    EXPECT_EQ(tr.samples[0].t, 0.0);
    EXPECT_EQ(tr.samples[0].entropy, entropy(w, m.masses()));
    EXPECT_EQ(tr.samples[0].production, entropy_production(w, m));
    EXPECT_EQ(tr.step_entropy.size(), 1u);
    EXPECT_EQ(field_diff(tr.final_state, w), 0.0);
}

TEST(Run, EquilibriumStartStaysPut) {
    EquilibriumParams p;
    p.beta = 0.8;
    p.nu = {0.3, 0.1, -0.2};
    const Model m;
    const WignerField w = fermi_dirac(p, EnergyGrid(30, 0.4));
    StepConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    cfg.stride = 2;
    RunOptions opt;
    opt.classification = classify_vop(m.vop());
    opt.equilibrium = w;
    const Trajectory tr = run(w, cfg, m, opt);
    ASSERT_EQ(tr.samples.size(), 6u);
    for (const Sample& s : tr.samples) {
        EXPECT_NEAR(s.entropy, tr.samples[0].entropy, 1e-12 * tr.samples[0].entropy);
        EXPECT_LE(std::abs(s.production), 1e-12);
        EXPECT_LE(s.l1_equilibrium, 1e-12);
        for (std::size_t i = 0; i < s.conserved.size(); ++i)
            EXPECT_NEAR(s.conserved[i], tr.samples[0].conserved[i], 1e-12 * std::max(1.0, std::abs(s.conserved[i])));
    }
}

TEST(Run, SamplingAndMonotoneEntropy) {
    std::mt19937_64 rng(6);
    const Model m;
    const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
    StepConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.025;
    cfg.stride = 10;
    RunOptions opt;
    opt.classification = classify_vop(m.vop());
    opt.paired_diss = true;
    int seen = 0;
    opt.on_sample = [&](const Sample&, const WignerField&) { ++seen; };
    const Trajectory tr = run(w, cfg, m, opt);
    ASSERT_EQ(tr.samples.size(), 4u);  // steps 0, 10, 20 and the final 25
    EXPECT_EQ(seen, 4);
    EXPECT_DOUBLE_EQ(tr.samples[1].t, 0.01);
    EXPECT_DOUBLE_EQ(tr.samples.back().t, 0.025);
    EXPECT_EQ(tr.step_entropy.size(), 26u);
    for (std::size_t k = 1; k < tr.step_entropy.size(); ++k) EXPECT_GE(tr.step_entropy[k], tr.step_entropy[k - 1] - 1e-12);
    EXPECT_EQ(tr.samples[0].l1_diss, 0.0);
    EXPECT_GT(tr.samples.back().l1_diss, 0.0);
    ASSERT_TRUE(tr.final_diss.has_value());
}

TEST(Run, EntropyToleranceIsEnforced) {
    std::mt19937_64 rng(7);
    const Model m;
    const WignerField w = moderate_field(EnergyGrid(12, 0.3), rng);
    StepConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2e-3;
    RunOptions opt;
    opt.entropy_tolerance = -1e6;  // demands an impossible increase per step
    EXPECT_THROW((void)run(w, cfg, m, opt), InvariantError);
}

TEST(Run, RejectsUnphysicalStartAndMismatchedGrids) {
    const Model m;
    WignerField w(EnergyGrid(12, 0.3));
    w(Species::a, 2) = SpinBlock::diag(1.5, 0.0);
    EXPECT_THROW((void)run(w, StepConfig{}, m), ValidationError);
    RunOptions opt;
    opt.equilibrium = WignerField(EnergyGrid(13, 0.3));
    EXPECT_THROW((void)run(WignerField(EnergyGrid(12, 0.3)), StepConfig{}, m, opt), ValidationError);
}
