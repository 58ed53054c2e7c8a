// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file initial.hpp
 * @brief Initial states: the analytic reference state used in the
 * simulations, Fermi-Dirac states, constant fills and tabulated files.
 */

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>

#include "spinboltz/equilibrium.hpp"
#include "spinboltz/grid.hpp"
#include "spinboltz/special.hpp"

namespace spinboltz {

/// Analytic Wigner blocks of all four species at energy e.
[[nodiscard]] inline SpeciesBlocks analytic_state_blocks(double e) {
    using namespace special;
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    const double pi = std::numbers::pi;
    auto block = [](double up, C off, double down) {
        SpinBlock b;
        b(0, 0) = up;
        b(0, 1) = off;
        b(1, 0) = std::conj(off);
        b(1, 1) = down;
        return b;
    };

    SpeciesBlocks w;
    w[0] = block(2.5 * std::exp(-2.0 * e) * std::pow(e * e + 0.25, 2),
                 42.0 * std::exp(2.0 * i * (e - 1.0 / 3.0) - 0.5 * std::pow(e - 15.0 / 4.0, 2) - 2.0 * e),
                 erfc(e - 6.0) * std::exp(-2.0 * e / 3.0) * atan(e + 1.0) * (2.0 * erf(e / 2.0) + 1.0 / 8.0) *
                     (2.0 + 0.5 * std::sin(3.0 * e)) / 6.0);
    w[1] = block(2.0 / 3.0 * (2.0 + std::sin(2.0 * e)) / (2.0 + gamma(1.0 + e)),
                 0.5 * zeta(C(1.0, 0.5) * e) * std::exp(-2.0 * e), std::exp(-(1.0 + 2.0 * e / 3.0)));
    w[2] = block(2.0 / 3.0 * erfc(e / 2.0) * (e * e + 0.8) * (0.6 + e * e / 6.0),
                 0.5 * std::exp(-1.5 * e) * (1.0 + erf(e - 2.0)) * erfc(e - 6.0) *
                     (0.4 - i * e + 4.0 * (1.0 + i) * e * std::pow(std::sin(e), 2)),
                 erfc(e - 6.0) * std::exp(-e / 2.0) * (1.0 + std::pow(std::sin(e), 2)) / (3.0 + 0.6 * e));
    w[3] = block(3.0 / (4.0 * pi) * erfc(e - 7.0) * std::exp(-e / 2.0) * si(6.0 * e + 0.5),
                 erfc(e - 6.0) * std::exp(i * pi * 6.0 / 7.0 - 1.5 * e) * std::sqrt(e) * (15.0 - 18.0 * e + 3.0 * e * e) / 24.0,
                 airy_ai(e - 1.0));
    return w;
}

/**
 * The analytic reference state on `grid`. Eigenvalues within 1e-9 outside
 * [0, 1] are clamped and counted in `clamped`; excursions beyond 1e-6 are a
 * ValidationError.
 */
[[nodiscard]] inline WignerField appendix_b_state(const EnergyGrid& grid, int* clamped = nullptr) {
    if (grid.max_energy() < 12.0) throw ValidationError("analytic state needs a grid reaching at least eps = 12");
    WignerField w(grid);
    for (int j = 0; j < grid.size(); ++j) {
        const SpeciesBlocks b = analytic_state_blocks(grid.energy(j));
        for (Species s : kAllSpecies) w(s, j) = b[static_cast<std::size_t>(index(s))];
    }
    validate_physical(w, "analytic initial state");
    const int n = clamp_eigenvalues(w);
    if (clamped) *clamped = n;
    return w;
}

struct AppendixBState {};
struct FermiDiracState {
    EquilibriumParams params;
};
struct UniformFill {
    double level = 0.5;
};
struct CustomState {
    std::string path;
};

using StateSpec = std::variant<AppendixBState, FermiDiracState, UniformFill, CustomState>;

[[nodiscard]] inline WignerField build_state(const StateSpec& spec, const EnergyGrid& grid, int* clamped = nullptr) {
    WignerField w(grid);
    if (clamped) *clamped = 0;
    if (std::holds_alternative<AppendixBState>(spec)) {
        w = appendix_b_state(grid, clamped);
    } else if (const auto* fd = std::get_if<FermiDiracState>(&spec)) {
        w = fermi_dirac(fd->params, grid);
    } else if (const auto* u = std::get_if<UniformFill>(&spec)) {
        for (auto& b : w.blocks()) b = u->level * SpinBlock::identity();
    } else {
        w = read_snapshot(std::get<CustomState>(spec).path, grid);
    }
    validate_physical(w, "initial state");
    return w;
}

}  // namespace spinboltz
