// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Takes several minutes on one core.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "spinboltz/checks.hpp"
#include "spinboltz/entropy.hpp"
#include "spinboltz/equilibrium.hpp"
#include "spinboltz/initial.hpp"
#include "spinboltz/integrator.hpp"

using namespace spinboltz;

namespace {

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string lines[10];

bool report(int k, bool pass, const std::string& detail) {
    lines[k] = "criterion " + std::to_string(k) + ": " + (pass ? "PASS" : "FAIL") + "  " + detail;
    std::fprintf(stderr, "[done] criterion %d\n", k);
    return pass;
}

void progress(const char* what) { std::fprintf(stderr, "[running] %s\n", what); }

std::string fmt(const char* f, auto... x) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, x...);
    return buf;
}

/// Coefficient of determination of the least-squares line through (x, y).
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy * sxy / (sxx * syy);
}

double max_off_diagonal(const WignerField& w, Species s, const SpinBlock& u) {
    double m = 0.0;
    for (int j = 0; j < w.size(); ++j) m = std::max(m, std::abs((adjoint(u) * w(s, j) * u)(0, 1)));
    return m;
}

RunOptions options(const Model& model, const WignerField& w0, const std::optional<GaugeRotation>& gauge = {}) {
    RunOptions opt;
    opt.collision.threads = threads();
    opt.classification = classify_vop(model.vop(), 1e-12, gauge);
    const FitResult fit = fit_equilibrium(w0, model.masses(), opt.classification);
    opt.equilibrium = fermi_dirac(fit.params, w0.grid());
    return opt;
}

// Criteria 1, 2 and 9 share one paired beta-decay run.
void beta_decay_run(bool& ok) {
    const Model model;
    const EnergyGrid grid(56, 0.25);
    const WignerField w0 = appendix_b_state(grid);
    RunOptions opt = options(model, w0);
    opt.paired_diss = true;
    const SpinBlock rho0 = total_density(w0, model.masses());
    double rho_drift = 0.0;
    opt.on_sample = [&](const Sample&, const WignerField& w) {
        rho_drift = std::max(rho_drift, max_abs(total_density(w, model.masses()) - rho0) / std::max(1.0, max_abs(rho0)));
    };
    const StepConfig cfg{1e-3, 1.0, 10, true};
    std::optional<Trajectory> tr;
    std::string failure;
    try {
        tr.emplace(run(w0, cfg, model, opt));
    } catch (const Error& e) {
        failure = e.what();
    }
    if (!tr) {
        for (int k : {1, 2, 9}) report(k, false, "run aborted: " + failure);
        ok = false;
        return;
    }

    std::vector<ConservedVector> cv;
    for (const auto& s : tr->samples) cv.push_back({tr->names, s.conserved});
    const auto drift = drift_report(cv);
    double worst = rho_drift;
    std::string detail;
    for (std::size_t i = 0; i < drift.size(); ++i) {
        const Functional f = tr->names[i];
        if (f == Functional::total_trace || f == Functional::trace_ab || f == Functional::trace_ad || f == Functional::energy) {
            worst = std::max(worst, drift[i]);
            detail += fmt("%s %.2e, ", to_string(f).c_str(), drift[i]);
        }
    }
    detail += fmt("full rho %.2e (limit 1e-9)", rho_drift);
    ok &= report(1, worst <= 1e-9, detail);

    double min_step = INFINITY;
    for (std::size_t k = 1; k < tr->step_entropy.size(); ++k)
        min_step = std::min(min_step, tr->step_entropy[k] - tr->step_entropy[k - 1]);
    const double s_eq = entropy(*opt.equilibrium, model.masses());
    // late-time window: the last quarter of the run
    std::vector<double> t, y;
    bool below = true;
    for (const auto& s : tr->samples)
        if (s.t >= 0.75 * cfg.t_end - 1e-12) {
            below = below && s.entropy < s_eq;
            t.push_back(s.t);
            y.push_back(std::log(std::max(s_eq - s.entropy, 1e-300)));
        }
    const double r2 = below ? r_squared(t, y) : 0.0;
    const double s0 = tr->samples.front().entropy, s1 = tr->samples.back().entropy;
    const bool saturating = s1 > s0 && s1 <= s_eq;
    ok &= report(2, min_step >= -1e-12 && saturating && r2 >= 0.99,
                 fmt("smallest step change of S %.2e (limit -1e-12), S %.4f -> %.4f of S_eq %.4f, R^2 of log(S_eq - S) on [0.75, 1] = %.4f "
                     "(limit 0.99)",
                     min_step, s0, s1, s_eq, r2));

    std::size_t peak = 0;
    for (std::size_t k = 0; k < tr->samples.size(); ++k)
        if (tr->samples[k].l1_diss > tr->samples[peak].l1_diss) peak = k;
    const double max_d = tr->samples[peak].l1_diss, end_d = tr->samples.back().l1_diss;
    const double scale = tr->samples.front().l1_equilibrium;
    bool decaying = true;
    const std::size_t tail = tr->samples.size() * 3 / 4;
    for (std::size_t k = std::max(tail, peak + 1); k < tr->samples.size(); ++k)
        decaying = decaying && tr->samples[k].l1_diss <= tr->samples[k - 1].l1_diss;
    const bool interior = peak > 0 && peak + 1 < tr->samples.size();
    ok &= report(9, std::isfinite(max_d) && max_d <= scale && interior && decaying && end_d <= 0.5 * max_d,
                 fmt("max L1(W, W_diss) %.4f at t = %.3f (bound L1(W0, W_eq) = %.2f), %.4f at t = 1, "
                     "non-increasing over the last quarter: %s",
                     max_d, tr->samples[peak].t, scale, end_d, decaying ? "yes" : "no"));
}

void temperature(bool& ok) {
    const Model model;
    const Classification cls = classify_vop(model.vop());
    const EnergyGrid base(56, 0.25);
    const double b4 = fit_equilibrium(appendix_b_state(base.refined(4)), model.masses(), cls).params.beta;
    const double b8 = fit_equilibrium(appendix_b_state(base.refined(8)), model.masses(), cls).params.beta;
    ok &= report(3, std::abs(b4 - 0.8193) <= 0.01 && std::abs(b4 - b8) <= 2e-3,
                 fmt("beta(h/4) = %.5f (want 0.8193 +- 0.01), beta(h/8) = %.5f, change %.2e (limit 2e-3)", b4, b8,
                     std::abs(b4 - b8)));
}

// Criteria 4 and 5: the unrotated zero-outer-frame model.
void zero_frame_run(bool& ok) {
    const Model model(Masses{}, zero_frame_interactions());
    const WignerField w0 = appendix_b_state(EnergyGrid(56, 0.25));
    RunOptions opt = options(model, w0);
    const double sz0 = trace(pauli::z * density_matrix(w0, model.masses(), Species::a)).real();
    double sz_swing = 0.0;
    opt.on_sample = [&](const Sample&, const WignerField& w) {
        sz_swing = std::max(sz_swing, std::abs(trace(pauli::z * density_matrix(w, model.masses(), Species::a)).real() - sz0));
    };
    const StepConfig cfg{0.05, 160.0, 20, true};
    const Trajectory tr = run(w0, cfg, model, opt);

    // transient: the first 5% of the run
    double worst_rise = 0.0;
    for (std::size_t k = 1; k < tr.samples.size(); ++k)
        if (tr.samples[k - 1].t >= 0.05 * cfg.t_end)
            worst_rise = std::max(worst_rise, tr.samples[k].l1_equilibrium - tr.samples[k - 1].l1_equilibrium);
    const double l0 = tr.samples.front().l1_equilibrium, l1 = tr.samples.back().l1_equilibrium;
    ok &= report(4, worst_rise <= 0.0 && l1 < 1e-3 * l0,
                 fmt("L1 %.4f -> %.3e at t = %.0f, ratio %.2e (limit 1e-3), largest rise after t = %.0f: %.2e", l0, l1,
                     cfg.t_end, l1 / l0, 0.05 * cfg.t_end, worst_rise));

    std::vector<ConservedVector> cv;
    for (const auto& s : tr.samples) cv.push_back({tr.names, s.conserved});
    const auto drift = drift_report(cv);
    const auto it = std::find(tr.names.begin(), tr.names.end(), Functional::sigma_z_ac);
    const double sz_drift = it == tr.names.end() ? INFINITY : drift[static_cast<std::size_t>(it - tr.names.begin())];
    ok &= report(5, sz_drift <= 1e-9 && sz_swing >= 1e-3,
                 fmt("drift of tr[sz(rho_a + rho_c)] %.2e (limit 1e-9), max |tr[sz rho_a](t) - tr[sz rho_a](0)| = %.4f "
                     "(limit >= 1e-3)",
                     sz_drift, sz_swing));
}

void rotated_run(bool& ok) {
    const GaugeRotation g = rotated_frame_gauge();
    const Model model = Model(Masses{}, zero_frame_interactions()).gauged(g);
    const WignerField w0 = appendix_b_state(EnergyGrid(56, 0.25));
    const RunOptions opt = options(model, w0, g);
    const Trajectory tr = run(w0, StepConfig{0.05, 160.0, 200, true}, model, opt);
    const double canonical = max_off_diagonal(tr.final_state, Species::b, SpinBlock::identity());
    const double pattern = max_off_diagonal(tr.final_state, Species::b, g[Species::b]);
    ok &= report(6, opt.classification.variant == StructureClass::zero_outer_frame && canonical >= 1e-3 && pattern <= 1e-6,
                 fmt("class %s, at t = 160 max |W^b_12| = %.4f (limit >= 1e-3), in the rotated frame %.2e (limit 1e-6)",
                     to_string(opt.classification.variant).c_str(), canonical, pattern));
}

void oracles(bool& ok) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    const Model models[] = {Model(), Model(Masses{}, zero_frame_interactions()), Model(Masses{}, random_interactions(rng))};
    CheckOptions opt;
    opt.threads = threads();
    bool pass = true;
    double worst[3] = {0.0, 0.0, 0.0};
    for (const Model& m : models) {
        const auto r = oracle_checks(m, 0.25, opt);
        for (std::size_t i = 0; i < 3; ++i) {
            pass = pass && r[i].pass;
            worst[i] = std::max(worst[i], r[i].value);
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok &= report(7, pass && secs <= 60.0,
                 fmt("n = 6, 100 fields x 3 models: integrand %.2e, diss %.2e, cons %.2e (limit 1e-12), %.1f s", worst[0],
                     worst[1], worst[2], secs));
}

void detailed_balance(bool& ok) {
    const Model model;
    const Classification cls = classify_vop(model.vop());
    CollisionOptions co;
    co.threads = threads();
    double res[2] = {0.0, 0.0}, sigma = 0.0;
    int k = 0;
    // the same energy span at h and h/2
    for (const EnergyGrid& g : {EnergyGrid(56, 0.25), EnergyGrid(111, 0.125)}) {
        const WignerField w0 = appendix_b_state(g);
        const WignerField weq = fermi_dirac(fit_equilibrium(w0, model.masses(), cls).params, g);
        res[k++] = stationarity_residual(weq, model, co) / field_max(rhs(w0, model, co));
        sigma = std::max(sigma, std::abs(entropy_production(weq, model, co.threads)));
    }
    {
        const EnergyGrid g(28, 0.5);
        const WignerField weq = fermi_dirac(fit_equilibrium(appendix_b_state(g), model.masses(), cls).params, g);
        sigma = std::max(sigma, std::abs(entropy_production(weq, model, co.threads)));
    }
    // Both residuals at round-off means the discrete state is exactly stationary.
    const bool floor = res[0] <= 1e-12 && res[1] <= 1e-12;
    const double ratio = res[0] / res[1];
    ok &= report(8, (ratio >= 2.0 || floor) && sigma <= 1e-12,
                 fmt("relative stationarity residual %.2e (h), %.2e (h/2), ratio %.2f (limit 2, or both at the 1e-12 "
                     "round-off floor), max |sigma| %.2e over h = 0.5, 0.25, 0.125 (limit 1e-12)",
                     res[0], res[1], ratio, sigma));
}

}  // namespace

int main() {
    bool ok = true;
    try {
        progress("oracle comparisons");
        oracles(ok);
        progress("equilibrium fits");
        temperature(ok);
        detailed_balance(ok);
        progress("beta-decay run, t in [0, 1]");
        beta_decay_run(ok);
        progress("zero-frame run, t in [0, 160]");
        zero_frame_run(ok);
        progress("rotated zero-frame run, t in [0, 160]");
        rotated_run(ok);
    } catch (const std::exception& e) {
        std::printf("aborted: %s\n", e.what());
        return 1;
    }
    for (int k = 1; k <= 9; ++k) std::printf("%s\n", lines[k].c_str());
    std::printf("%s\n", ok ? "all criteria pass" : "some criteria fail");
    return ok ? 0 : 1;
}
