// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrator.hpp
 * @brief Explicit midpoint time stepping with a physicality guard, and a
 * driver that records diagnostics along the trajectory.
 */

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinboltz/collision.hpp"
#include "spinboltz/conservation.hpp"
#include "spinboltz/entropy.hpp"
#include "spinboltz/error.hpp"
#include "spinboltz/grid.hpp"

namespace spinboltz {

struct StepConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int stride = 10;  ///< steps between recorded samples
    bool include_cons = true;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be non-negative");
        if (t_end > 0.0 && dt > t_end) throw ValidationError("dt must not exceed t_end");
        if (stride < 1) throw ValidationError("stride must be at least 1");
        const double k = t_end / dt;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
            throw ValidationError("t_end must be an integer multiple of dt");
    }
    [[nodiscard]] long steps() const { return std::lround(t_end / dt); }
};

/**
 * One explicit midpoint step W + dt rhs(W + dt/2 rhs(W)). Both stages are
 * re-hermitized; eigenvalues at most 1e-9 outside [0, 1] are clamped after the
 * full step. Larger excursions beyond 1e-6 raise GuardError.
 */
[[nodiscard]] inline WignerField midpoint_step(const WignerField& w, double dt, const Model& model,
                                               const CollisionOptions& opt = {}, double t = 0.0) {
    WignerField mid = w;
    mid.axpy(0.5 * dt, rhs(w, model, opt));
    mid.hermitize();
    WignerField next = w;
    next.axpy(dt, rhs(mid, model, opt));
    next.hermitize();
    const Excursion e = worst_excursion(next);
    if (e.amount > kRejectTol) {
        std::ostringstream os;
        os.precision(17);
        os << "step rejected at t = " << t << ": eigenvalue " << e.eigenvalue << " of species " << tag(e.species)
           << " at shell " << e.shell << " is outside [0, 1]; reduce dt";
        throw GuardError(os.str(), index(e.species), e.shell, t, e.eigenvalue);
    }
    clamp_eigenvalues(next);
    return next;
}

/// Diagnostics recorded every `stride` steps.
struct Sample {
    double t = 0.0;
    double entropy = 0.0;
    double production = 0.0;
    std::vector<double> conserved;
    double l1_equilibrium = std::numeric_limits<double>::quiet_NaN();
    double l1_diss = std::numeric_limits<double>::quiet_NaN();  ///< distance to the companion run without C_cons
};

struct Trajectory {
    explicit Trajectory(WignerField w0) : final_state(std::move(w0)) {}

    std::vector<Functional> names;
    std::vector<Sample> samples;
    std::vector<double> step_entropy;  ///< S after every step, starting with S(0)
    WignerField final_state;
    std::optional<WignerField> final_diss;
};

struct RunOptions {
    CollisionOptions collision;  ///< include_cons is taken from StepConfig
    Classification classification;
    std::optional<WignerField> equilibrium;  ///< target of the L1 column
    bool paired_diss = false;                ///< integrate a companion run without C_cons
    bool record_production = true;
    double entropy_tolerance = 1e-12;  ///< plus a round-off floor of 1e-14 |S|
    /// Called with every recorded sample and the field at that time.
    std::function<void(const Sample&, const WignerField&)> on_sample;
};

/**
 * Integrates from 0 to cfg.t_end. Sample times are k dt, not accumulated.
 * A drop of the entropy by more than opt.entropy_tolerance + 1e-14 |S| in any
 * step raises InvariantError.
 */
[[nodiscard]] inline Trajectory run(const WignerField& w0, const StepConfig& cfg, const Model& model,
                                    const RunOptions& opt = {}) {
    cfg.validate();
    validate_physical(w0, "initial state");
    if (opt.equilibrium) w0.require_same_grid(*opt.equilibrium);
    const Masses& m = model.masses();

    CollisionOptions full = opt.collision;
    full.include_cons = cfg.include_cons;
    CollisionOptions diss_only = opt.collision;
    diss_only.include_cons = false;

    Trajectory tr(w0);
    tr.names = conserved_functionals(opt.classification.variant);
    WignerField w = w0;
    std::optional<WignerField> wd;
    if (opt.paired_diss) wd = w0;

    auto record = [&](long k, double s) {
        Sample smp;
        smp.t = static_cast<double>(k) * cfg.dt;
        smp.entropy = s;
        if (opt.record_production) smp.production = entropy_production(w, model, opt.collision.threads, opt.collision.norm);
        smp.conserved = evaluate_conserved(w, m, opt.classification).values;
        if (opt.equilibrium) smp.l1_equilibrium = l1_distance(w, *opt.equilibrium, m);
        if (wd) smp.l1_diss = l1_distance(w, *wd, m);
        if (opt.on_sample) opt.on_sample(smp, w);
        tr.samples.push_back(std::move(smp));
    };

    double s_prev = entropy(w, m);
    tr.step_entropy.push_back(s_prev);
    record(0, s_prev);
    const long steps = cfg.steps();
    for (long k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k - 1) * cfg.dt;
        w = midpoint_step(w, cfg.dt, model, full, t);
        if (wd) *wd = midpoint_step(*wd, cfg.dt, model, diss_only, t);
        const double s = entropy(w, m);
        if (s < s_prev - opt.entropy_tolerance - 1e-14 * std::abs(s_prev)) {
            std::ostringstream os;
            os.precision(17);
            os << "entropy decreased by " << s_prev - s << " in the step ending at t = " << static_cast<double>(k) * cfg.dt;
            throw InvariantError(os.str());
        }
        tr.step_entropy.push_back(s);
        s_prev = s;
        if (k % cfg.stride == 0 || k == steps) record(k, s);
    }
    tr.final_state = w;
    tr.final_diss = wd;
    return tr;
}

}  // namespace spinboltz
