// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file checks.hpp
 * @brief Property suite behind `spinboltz check`: oracle equivalences,
 * conservation at the RHS level, the H-theorem on random states, gauge
 * covariance and detailed balance.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spinboltz/collision.hpp"
#include "spinboltz/conservation.hpp"
#include "spinboltz/entropy.hpp"
#include "spinboltz/equilibrium.hpp"
#include "spinboltz/random.hpp"
#include "spinboltz/reference.hpp"

namespace spinboltz {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;  ///< worst observed quantity
    double limit = 0.0;
    bool lower_bound = false;  ///< value must be >= limit instead of <= limit
};

struct CheckOptions {
    int oracle_fields = 100;  ///< random fields on the n = 6 grid
    int samples = 20;         ///< random fields on the configured grid
    unsigned seed = 2026;
    int threads = 1;
    QuadratureRule rule = QuadratureRule::rectangle;
    Normalization norm = Normalization::momentum_space;
    std::optional<GaugeRotation> gauge;
};

namespace detail {

inline double relative(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

inline CheckResult verdict(std::string name, double value, double limit) {
    return {std::move(name), value <= limit, value, limit};
}

}  // namespace detail

/// Tensor integrand vs the matrix form, and both operators vs brute-force loops, on n = 6.
[[nodiscard]] inline std::vector<CheckResult> oracle_checks(const Model& model, double h, const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const EnergyGrid micro(6, h);
    double integrand = 0.0, diss = 0.0, cons = 0.0;
    for (int k = 0; k < opt.oracle_fields; ++k) {
        SpeciesBlocks b[4];
        for (auto& bl : b)
            for (auto& x : bl) x = random_physical(rng);
        const auto t = diss_integrand(model.vop(), b[0], b[1], b[2], b[3]);
        const auto m = reference::diss_integrand(model.interactions(), b[0], b[1], b[2], b[3]);
        double d = 0.0, scale = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            d = std::max(d, max_abs(t[s] - m[s]));
            scale = std::max(scale, max_abs(m[s]));
        }
        integrand = std::max(integrand, detail::relative(d, std::max(scale, 1.0)));

        const WignerField w = random_field(micro, rng);
        CollisionOptions co;
        co.norm = opt.norm;
        co.threads = opt.threads;
        const WignerField slow_d = reference::diss_operator(w, model, opt.norm);
        diss = std::max(diss, detail::relative(field_diff(diss_operator(w, model, co), slow_d), field_max(slow_d)));
        const WignerField slow_c = reference::cons_operator(w, model, opt.norm);
        cons = std::max(cons, detail::relative(field_diff(cons_operator(w, model, opt.threads, opt.norm), slow_c),
                                               std::max(field_max(slow_c), 1e-300)));
    }
    return {detail::verdict("integrand tensor form = matrix form", integrand, 1e-12),
            detail::verdict("diss_operator = quadruple loop (n=6)", diss, 1e-12),
            detail::verdict("cons_operator = triple loop (n=6)", cons, 1e-12)};
}

/**
 * Conserved functionals of rhs(W) for random W: each must vanish relative to
 * the same functional built from |C| entrywise.
 */
[[nodiscard]] inline CheckResult conservation_check(const Model& model, const EnergyGrid& grid, const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    const Classification cls = classify_vop(model.vop(), 1e-12, opt.gauge);
    CollisionOptions co;
    co.rule = opt.rule;
    co.norm = opt.norm;
    co.threads = opt.threads;
    double worst = 0.0;
    for (int k = 0; k < opt.samples; ++k) {
        const WignerField w = random_field(grid, rng);
        const WignerField c = rhs(w, model, co);
        const ConservedVector q = evaluate_conserved(c, model.masses(), cls);
        // scale: weighted sum of |C| with the energy weight included
        double scale = 0.0;
        for (Species s : kAllSpecies)
            for (int j = 0; j < grid.size(); ++j)
                scale += moment_weight(grid, model.masses()[s], j) * (1.0 + grid.energy(j)) * max_abs(c(s, j));
        for (double v : q.values) worst = std::max(worst, detail::relative(std::abs(v), scale));
    }
    return detail::verdict("conserved functionals of rhs vanish (" + to_string(cls.variant) + ")", worst, 1e-12);
}

/// sigma >= -1e-12 on random fields, and sigma equals -sum w tr[(log W - log(1-W)) C_diss].
[[nodiscard]] inline std::vector<CheckResult> h_theorem_checks(const Model& model, const EnergyGrid& grid,
                                                               const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed + 2);
    CollisionOptions co;
    co.include_cons = false;
    co.norm = opt.norm;
    co.threads = opt.threads;
    double min_sigma = std::numeric_limits<double>::infinity();
    double mismatch = 0.0;
    for (int k = 0; k < opt.samples; ++k) {
        // keep eigenvalues inside the log clamp so both expressions see the same state
        WignerField w(grid);
        for (auto& b : w.blocks()) b = random_physical(rng, 1e-6, 1.0 - 1e-6);
        const double sigma = entropy_production(w, model, opt.threads, opt.norm);
        const double rate = entropy_rate(w, diss_operator(w, model, co), model.masses());
        min_sigma = std::min(min_sigma, sigma);
        mismatch = std::max(mismatch, std::abs(sigma - rate) / std::max(std::abs(rate), 1e-300));
    }
    return {CheckResult{"entropy production non-negative", min_sigma >= -1e-12, min_sigma, -1e-12, true},
            detail::verdict("entropy production = dS/dt of C_diss", mismatch, 1e-9)};
}

[[nodiscard]] inline CheckResult gauge_check(const Model& model, double h, const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed + 3);
    const EnergyGrid small(10, h);
    CollisionOptions co;
    co.norm = opt.norm;
    co.threads = opt.threads;
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        const WignerField w = random_field(small, rng);
        const GaugeRotation g = random_gauge(rng);
        const WignerField lhs = rhs(apply_gauge(g, w), model.gauged(g), co);
        const WignerField rot = apply_gauge(g, rhs(w, model, co));
        worst = std::max(worst, detail::relative(field_diff(lhs, rot), field_max(rot)));
    }
    return detail::verdict("gauge covariance of rhs", worst, 1e-11);
}

/// rhs and entropy production at random Fermi-Dirac states of the model's class.
[[nodiscard]] inline std::vector<CheckResult> detailed_balance_checks(const Model& model, const EnergyGrid& grid,
                                                                      const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed + 4);
    std::uniform_real_distribution<double> beta(0.5, 2.0), nu(-1.0, 2.0), c(-0.5, 0.5);
    const Classification cls = classify_vop(model.vop(), 1e-12, opt.gauge);
    CollisionOptions co;
    co.norm = opt.norm;
    co.threads = opt.threads;
    double stat = 0.0, sigma = 0.0;
    for (int k = 0; k < 3; ++k) {
        EquilibriumParams p;
        p.variant = cls.variant;
        p.beta = beta(rng);
        p.nu = {nu(rng), nu(rng), nu(rng)};
        if (cls.variant != StructureClass::general) p.c_ac = c(rng);
        if (cls.variant == StructureClass::zero_outer_frame) p.c_bd = c(rng);
        if (cls.variant == StructureClass::identity_family) {
            const SpinBlock u = random_unitary(rng);
            p.basis.fill(u);
        }
        if (cls.gauge)
            for (Species s : kAllSpecies) p.basis[static_cast<std::size_t>(index(s))] = (*cls.gauge)[s] * p.basis[static_cast<std::size_t>(index(s))];
        const WignerField weq = fermi_dirac(p, grid);
        // scale: the dissipative rate of a generic state on the same grid
        const WignerField probe = rhs(random_field(grid, rng), model, co);
        stat = std::max(stat, detail::relative(stationarity_residual(weq, model, co), field_max(probe)));
        sigma = std::max(sigma, std::abs(entropy_production(weq, model, opt.threads, opt.norm)));
    }
    return {detail::verdict("Fermi-Dirac states of the class are stationary", stat, 1e-12),
            detail::verdict("entropy production vanishes at Fermi-Dirac states", sigma, 1e-12)};
}

/// Every check, in report order.
[[nodiscard]] inline std::vector<CheckResult> run_checks(const Model& model, const EnergyGrid& grid, const CheckOptions& opt) {
    std::vector<CheckResult> r = oracle_checks(model, grid.spacing(), opt);
    r.push_back(conservation_check(model, grid, opt));
    for (auto& x : h_theorem_checks(model, grid, opt)) r.push_back(std::move(x));
    r.push_back(gauge_check(model, grid.spacing(), opt));
    for (auto& x : detailed_balance_checks(model, grid, opt)) r.push_back(std::move(x));
    return r;
}

}  // namespace spinboltz
