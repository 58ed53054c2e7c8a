// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "spinboltz/config.hpp"

using namespace spinboltz;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

}  // namespace

TEST(Config, DefaultsFromEmptyInput) {
    const RunConfig c = parse("");
    EXPECT_EQ(c.model.preset, ModelPreset::beta_decay);
    EXPECT_EQ(c.n, 56);
    EXPECT_EQ(c.h, 0.25);
    EXPECT_EQ(c.step.dt, 1e-3);
    EXPECT_EQ(c.initial.kind, InitialKind::analytic);
    EXPECT_EQ(c.model.norm, Normalization::momentum_space);
    EXPECT_FALSE(c.classify.gauge.has_value());
}

TEST(Config, WriteThenParseIsIdempotent) {
    const RunConfig c = parse(
        "[model]\npreset = zero-frame-rotated-eq48\nmasses = 1 0.5 0.25 2\nnormalization = energy-form\n"
        "[grid]\nn = 40\nh = 0.3\n"
        "[integrator]\ndt = 0.01\nt_end = 0.5\nstride = 5\npaired_diss = true\nquadrature = trapezoid\n"
        "[initial]\nstate = fermi-dirac\nclass = ZeroOuterFrame\nbeta = 1.25\nnu_a = 0.1\nnu_b = -0.2\nnu_c = 0.3\n"
        "c_ac = 0.05\nc_bd = -0.07\n"
        "[fit]\nrefinement = 2\nseed = 9\n[output]\ndir = somewhere\nsnapshot_stride = 10\n[run]\nthreads = 3\n");
    const std::string once = to_text(c);
    const std::string twice = to_text(parse(once));
    EXPECT_EQ(once, twice);
    const RunConfig r = parse(once);
    EXPECT_EQ(r.model.preset, ModelPreset::zero_frame_rotated_eq48);
    EXPECT_EQ(r.model.masses.m[3], 2.0);
    EXPECT_EQ(r.model.norm, Normalization::energy_form);
    EXPECT_EQ(r.rule, QuadratureRule::trapezoid);
    EXPECT_TRUE(r.paired_diss);
    EXPECT_EQ(r.initial.params.variant, StructureClass::zero_outer_frame);
    EXPECT_EQ(r.initial.params.c_bd, -0.07);
    EXPECT_EQ(r.threads, 3);
}

TEST(Config, CustomMatricesAndGaugeRoundTrip) {
    const RunConfig c = parse(
        "[model]\npreset = custom\nv_ab = 1 0 0 2\nv_cd = 1 0 0 1\nv_ad = 0 1 1 0\nv_cb = 1 0.5 0.5 1\n"
        "[gauge]\nu_a = 1 0 0 1\nu_b = 0 1 1 0\nu_c = 1 0 0 1\nu_d = 0 1 0 0 0 0 1 0\n");
    EXPECT_EQ(c.model.preset, ModelPreset::custom);
    EXPECT_EQ(c.model.custom.ab(1, 1), cplx(2.0, 0.0));
    ASSERT_TRUE(c.classify.gauge.has_value());
    EXPECT_EQ((*c.classify.gauge)[Species::d](0, 0), cplx(0.0, 1.0));
    const RunConfig r = parse(to_text(c));
    EXPECT_EQ(max_abs(r.model.custom.cb - c.model.custom.cb), 0.0);
    EXPECT_EQ(max_abs((*r.classify.gauge)[Species::b] - (*c.classify.gauge)[Species::b]), 0.0);
}

TEST(Config, PresetsBuildTheExpectedOperators) {
    ModelConfig m;
    m.preset = ModelPreset::zero_frame_eq44;
    EXPECT_EQ(max_abs(config_vop(m).matrix - build_vop(zero_frame_interactions()).matrix), 0.0);
    m.preset = ModelPreset::zero_frame_rotated_eq48;
    const VOp want = apply_gauge(rotated_frame_gauge(), build_vop(zero_frame_interactions()));
    EXPECT_LE(max_abs(config_vop(m).matrix - want.matrix), 1e-15);
    m.vop = PairBlock::identity();
    EXPECT_THROW((void)build_model(m), ValidationError);
}

TEST(Config, Rejections) {
    const char* bad[] = {
        "[nonsense]\nx = 1\n",
        "[model]\nnormalization = sideways\n",
        "[model]\nv_ab = 1 0 0 1\n",
        "[model]\npreset = custom\nv_ab = 1 0 0\n",
        "[model]\nmasses = 1 2 3\n",
        "[model]\npreset = unknown\n",
        "[grid]\nn = 4\n",
        "[grid]\nh = -1\n",
        "[integrator]\ndt = 0.3\n",
        "[integrator]\nquadrature = simpson\n",
        "[initial]\nstate = guess\n",
        "[initial]\nstate = uniform\nlevel = 2\n",
        "[initial]\nstate = file\npath = /nonexistent/w.csv\n",
        "[classify]\ntolerance = 1e-2\n",
        "[gauge]\nu_a = 2 0 0 1\n",
        "[run]\nthreads = 0\n",
    };
    for (const char* text : bad) EXPECT_THROW((void)parse(text), ValidationError) << text;
}

TEST(Config, MissingFile) { EXPECT_THROW((void)load_config("/nonexistent/run.ini"), ValidationError); }
