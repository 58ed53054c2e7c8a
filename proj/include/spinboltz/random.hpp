// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file random.hpp
 * @brief Random unitaries, physical blocks, fields and interaction sets for
 * property checks.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

/// Haar-distributed 2x2 unitary.
inline SpinBlock random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> v(0.0, 1.0);
    const double theta = std::acos(std::sqrt(v(rng)));
    const double a = u(rng), b = u(rng), c = u(rng);
    const cplx e1 = std::polar(1.0, a), e2 = std::polar(1.0, b), e3 = std::polar(1.0, c);
    SpinBlock m;
    m(0, 0) = e1 * std::cos(theta);
    m(0, 1) = e2 * std::sin(theta);
    m(1, 0) = -e3 * std::conj(e2) * std::sin(theta);
    m(1, 1) = e3 * std::conj(e1) * std::cos(theta);
    return m;
}

/// Hermitian block with eigenvalues drawn from [lo, hi].
inline SpinBlock random_physical(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> v(lo, hi);
    const SpinBlock u = random_unitary(rng);
    return hermitian_part(u * SpinBlock::diag(v(rng), v(rng)) * adjoint(u));
}

inline SpinBlock random_hermitian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    return SpinBlock::hermitian(v(rng), v(rng), v(rng), v(rng));
}

inline SpinBlock random_matrix(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    SpinBlock m;
    for (auto& x : m.e) x = {v(rng), v(rng)};
    return m;
}

inline WignerField random_field(const EnergyGrid& g, std::mt19937_64& rng) {
    WignerField w(g);
    for (auto& b : w.blocks()) b = random_physical(rng);
    return w;
}

/// Full-rank random real interaction set.
inline InteractionSet random_interactions(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    InteractionSet s;
    for (SpinBlock* m : {&s.ab, &s.cd, &s.ad, &s.cb}) {
        do {
            *m = SpinBlock::real(v(rng), v(rng), v(rng), v(rng));
        } while (std::abs(det(*m)) < 0.1);
    }
    return s;
}

inline GaugeRotation random_gauge(std::mt19937_64& rng) {
    GaugeRotation g;
    for (auto& u : g.u) u = random_unitary(rng);
    return g;
}

}  // namespace spinboltz
