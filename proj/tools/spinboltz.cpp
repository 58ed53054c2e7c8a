// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

// spinboltz command-line driver.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinboltz/checks.hpp"
#include "spinboltz/config.hpp"
#include "spinboltz/conservation.hpp"
#include "spinboltz/entropy.hpp"
#include "spinboltz/equilibrium.hpp"
#include "spinboltz/initial.hpp"
#include "spinboltz/integrator.hpp"

namespace fs = std::filesystem;
using namespace spinboltz;

namespace {

constexpr const char* kTrajectoryHelp =
    "trajectory.csv columns, in order:\n"
    "  t, S, sigma, <conserved quantities of the class>, l1_eq[, l1_diss]\n"
    "conserved quantities, by class:\n"
    "  General:         tr_rho, tr_rho_ab, tr_rho_ad, energy\n"
    "  DiagonalPattern: ... , rho_uu, rho_dd\n"
    "  IdentityFamily:  ... , rho_uu, rho_dd, re_rho_ud, im_rho_ud\n"
    "  ZeroOuterFrame:  ... , rho_uu, rho_dd, sz_rho_ac\n"
    "l1_diss is present when integrator.paired_diss = true.\n"
    "Exit codes: 0 ok, 1 internal error, 2 invalid input, 3 fit failure,\n"
    "4 step rejected by the eigenvalue guard, 5 invariant failure.";

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

/// Writes to stdout and to a report file.
class Report {
public:
    explicit Report(const fs::path& path) : file_(path) {
        if (!file_) throw ValidationError("cannot write '" + path.string() + "'");
    }
    template <class T>
    Report& operator<<(const T& x) {
        std::cout << x;
        file_ << x;
        return *this;
    }

private:
    std::ofstream file_;
};

struct Common {
    std::string config;
    std::string out;
    int threads = 0;
};

RunConfig load(const Common& c) {
    RunConfig cfg = load_config(c.config);
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (c.threads > 0) cfg.threads = c.threads;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string params_text(const EquilibriumParams& p) {
    std::ostringstream os;
    os << "beta = " << num(p.beta) << "\nnu_a = " << num(p.nu[0]) << "\nnu_b = " << num(p.nu[1]) << "\nnu_c = " << num(p.nu[2])
       << "\nnu_d = " << num(p.nu_d()) << '\n';
    if (p.variant == StructureClass::zero_outer_frame)
        os << "c_ac = " << num(p.c_ac) << "\nc_bd = " << num(p.c_bd) << '\n';
    else if (p.variant != StructureClass::general)
        os << "c = " << num(p.c_ac) << '\n';
    return os.str();
}

std::string fit_table(const FitResult& f) {
    std::ostringstream os;
    os << "quantity,target,achieved,relative_residual\n";
    double scale = 1.0;
    for (double t : f.target) scale = std::max(scale, std::abs(t));
    for (std::size_t i = 0; i < f.names.size(); ++i)
        os << to_string(f.names[i]) << ',' << num(f.target[i]) << ',' << num(f.achieved[i]) << ','
           << num(std::abs(f.achieved[i] - f.target[i]) / scale) << '\n';
    return os.str();
}

int cmd_simulate(const Common& common) {
    const RunConfig cfg = load(common);
    const fs::path out(cfg.out_dir);
    if (cfg.snapshot_stride % cfg.step.stride != 0)
        throw ValidationError("output.snapshot_stride must be a multiple of integrator.stride");
    {
        std::ofstream f(out / "config.ini");
        write_config(f, cfg);
    }
    const EnergyGrid grid = cfg.grid();
    const Model model = build_model(cfg.model);
    int clamped = 0;
    const WignerField w0 = build_state(state_spec(cfg.initial), grid, &clamped);
    const Classification cls = classify_vop(model.vop(), cfg.classify.tolerance, cfg.classify.gauge);
    const FitResult fit = fit_equilibrium(w0, model.masses(), cls, cfg.fit);
    const WignerField weq = fermi_dirac(fit.params, grid);

    RunOptions opt;
    opt.collision.rule = cfg.rule;
    opt.collision.norm = cfg.model.norm;
    opt.collision.threads = cfg.threads;
    opt.classification = cls;
    opt.equilibrium = weq;
    opt.paired_diss = cfg.paired_diss;

    std::ofstream csv(out / "trajectory.csv");
    csv << "t,S,sigma";
    for (Functional f : conserved_functionals(cls.variant)) csv << ',' << to_string(f);
    csv << ",l1_eq" << (cfg.paired_diss ? ",l1_diss" : "") << '\n';
    const long steps = cfg.step.steps();
    opt.on_sample = [&](const Sample& s, const WignerField& w) {
        csv << num(s.t) << ',' << num(s.entropy) << ',' << num(s.production);
        for (double q : s.conserved) csv << ',' << num(q);
        csv << ',' << num(s.l1_equilibrium);
        if (cfg.paired_diss) csv << ',' << num(s.l1_diss);
        csv << '\n';
        csv.flush();
        const long k = std::lround(s.t / cfg.step.dt);
        if (k == 0 || k == steps || (cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0)) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%08ld.csv", k);
            write_snapshot((out / name).string(), w);
        }
    };

    const Trajectory tr = run(w0, cfg.step, model, opt);

    std::vector<ConservedVector> samples;
    for (const auto& s : tr.samples) samples.push_back({tr.names, s.conserved});
    const std::vector<double> drift = drift_report(samples);
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < tr.step_entropy.size(); ++k) min_step = std::min(min_step, tr.step_entropy[k] - tr.step_entropy[k - 1]);

    Report rep(out / "summary.txt");
    rep << "class = " << to_string(cls.variant) << '\n'
        << "gauge = " << (cls.gauge ? "given" : "none") << '\n'
        << "grid = " << grid.size() << " shells, h = " << num(grid.spacing()) << '\n'
        << "steps = " << steps << ", dt = " << num(cfg.step.dt) << '\n'
        << "initial blocks clamped = " << clamped << '\n'
        << "\n[fitted equilibrium]\n" << params_text(fit.params) << "fit residual = " << num(fit.residual) << '\n'
        << "\n[drift]\n";
    for (std::size_t i = 0; i < drift.size(); ++i) rep << to_string(tr.names[i]) << " = " << num(drift[i]) << '\n';
    rep << "\n[entropy]\nS(0) = " << num(tr.samples.front().entropy) << "\nS(end) = " << num(tr.samples.back().entropy)
        << "\nS(equilibrium) = " << num(entropy(weq, model.masses())) << '\n';
    if (steps > 0) rep << "smallest step change = " << num(min_step) << '\n';
    rep << "\n[distance to equilibrium]\nl1(0) = " << num(tr.samples.front().l1_equilibrium)
        << "\nl1(end) = " << num(tr.samples.back().l1_equilibrium) << '\n';
    return 0;
}

int cmd_fit(const Common& common, const std::string& forced) {
    const RunConfig cfg = load(common);
    if (cfg.initial.kind == InitialKind::file && cfg.fit_refinement != 1)
        throw ValidationError("a tabulated initial state cannot be refined; set fit.refinement = 1");
    const EnergyGrid grid = cfg.grid().refined(cfg.fit_refinement);
    const Model model = build_model(cfg.model);
    const WignerField w0 = build_state(state_spec(cfg.initial), grid);
    const Classification actual = classify_vop(model.vop(), cfg.classify.tolerance, cfg.classify.gauge);
    Classification cls = actual;
    if (!forced.empty()) cls.variant = structure_class_from_string(forced);

    const FitResult fit = fit_equilibrium(w0, model.masses(), cls, cfg.fit);
    Report rep(fs::path(cfg.out_dir) / "fit.txt");
    rep << "class = " << to_string(cls.variant) << (forced.empty() ? "" : " (forced)") << '\n'
        << "grid = " << grid.size() << " shells, h = " << num(grid.spacing()) << '\n'
        << params_text(fit.params) << "residual = " << num(fit.residual) << "\niterations = " << fit.iterations
        << "\nattempts = " << fit.attempts << "\n\n" << fit_table(fit);

    // The fitted state must also carry the model's own conserved quantities and be stationary.
    const WignerField weq = fermi_dirac(fit.params, grid);
    const ConservedVector want = evaluate_conserved(w0, model.masses(), actual);
    const ConservedVector got = evaluate_conserved(weq, model.masses(), actual);
    double scale = 1.0, worst = 0.0;
    for (double t : want.values) scale = std::max(scale, std::abs(t));
    for (std::size_t i = 0; i < want.values.size(); ++i) worst = std::max(worst, std::abs(got.values[i] - want.values[i]) / scale);
    CollisionOptions co;
    co.norm = cfg.model.norm;
    co.threads = cfg.threads;
    const double stat = stationarity_residual(weq, model, co) / std::max(field_max(rhs(w0, model, co)), 1e-300);
    rep << "\nmodel class = " << to_string(actual.variant) << "\nmodel invariants residual = " << num(worst)
        << "\nrelative stationarity residual = " << num(stat) << '\n';
    const double limit = 1e-8;
    if (worst > limit || stat > limit)
        throw FitError("the fitted state does not match the conserved quantities or stationarity of the model", std::max(worst, stat));
    return 0;
}

int cmd_classify(const Common& common) {
    const RunConfig cfg = load(common);
    const VOp vop = config_vop(cfg.model);
    const Classification c = classify_vop(vop, cfg.classify.tolerance, cfg.classify.gauge);
    Report rep(fs::path(cfg.out_dir) / "classify.txt");
    rep << to_string(c.variant) << '\n'
        << "identity_family_residual = " << num(c.residuals.identity_family) << '\n'
        << "zero_outer_frame_residual = " << num(c.residuals.zero_outer_frame) << '\n'
        << "diagonal_pattern_residual = " << num(c.residuals.diagonal_pattern) << '\n'
        << "gauge = " << (c.gauge ? "given" : "none") << '\n'
        << "conserved =";
    for (Functional f : conserved_functionals(c.variant)) rep << ' ' << to_string(f);
    rep << '\n';
    return 0;
}

int cmd_check(const Common& common) {
    const RunConfig cfg = load(common);
    const Model model = build_model(cfg.model);
    CheckOptions opt;
    opt.threads = cfg.threads;
    opt.rule = cfg.rule;
    opt.norm = cfg.model.norm;
    opt.gauge = cfg.classify.gauge;
    const auto results = run_checks(model, cfg.grid(), opt);
    Report rep(fs::path(cfg.out_dir) / "check.txt");
    bool ok = true;
    for (const auto& r : results) {
        std::ostringstream limit;
        limit << (r.lower_bound ? ">= " : "<= ") << r.limit;
        rep << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << num(r.value) << " (" << limit.str() << ")\n";
        ok = ok && r.pass;
    }
    if (!ok) throw InvariantError("invariant check failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-resolved quantum Boltzmann solver for four fermion species"};
    app.require_subcommand(1);
    app.footer(kTrajectoryHelp);
    Common common;
    std::string forced;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "output directory (overrides output.dir)");
        sub->add_option("--threads", common.threads, "worker threads (overrides run.threads)")->check(CLI::Range(1, 1024));
    };
    auto* sim = app.add_subcommand("simulate", "integrate the kinetic equation and write trajectory.csv, snapshots and summary.txt");
    sim->footer(kTrajectoryHelp);
    add_common(sim);
    auto* fit = app.add_subcommand("fit-equilibrium", "fit the Fermi-Dirac equilibrium of the initial state on the refined grid");
    add_common(fit);
    fit->add_option("--class", forced, "use this structure class instead of the classified one")
        ->check(CLI::IsMember({"General", "DiagonalPattern", "IdentityFamily", "ZeroOuterFrame"}));
    auto* cls = app.add_subcommand("classify", "report the structure class of the interaction operator");
    add_common(cls);
    auto* chk = app.add_subcommand("check", "run the invariant suite and report pass/fail per property");
    add_common(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) return cmd_simulate(common);
        if (*fit) return cmd_fit(common, forced);
        if (*cls) return cmd_classify(common);
        return cmd_check(common);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
