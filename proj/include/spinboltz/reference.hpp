// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reference.hpp
 * @brief Slow reference evaluations of the collision operator.
 *
 * Integrands are built from 8x8 block matrices (all four species on the
 * diagonal) with the pair-interaction matrices V= and Vx, the species swap Y
 * and the blockwise trace. Operators are brute-force loops over every grid
 * quadruple. Nothing here shares code with collision.hpp except the types.
 */

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "spinboltz/collision.hpp"
#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz::reference {

using Mat8 = Eigen::Matrix<cplx, 8, 8>;

inline void put_block(Mat8& m, int r, int c, const SpinBlock& b) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(2 * r + i, 2 * c + j) = b(i, j);
}

[[nodiscard]] inline SpinBlock get_block(const Mat8& m, int r, int c) {
    SpinBlock b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b(i, j) = m(2 * r + i, 2 * c + j);
    return b;
}

[[nodiscard]] inline Mat8 block_diag(const SpeciesBlocks& w) {
    Mat8 m = Mat8::Zero();
    for (int s = 0; s < 4; ++s) put_block(m, s, s, w[static_cast<std::size_t>(s)]);
    return m;
}

/// V= couples a-b and c-d; Vx couples a-d and c-b. Lower blocks are adjoints.
[[nodiscard]] inline Mat8 v_direct(const InteractionSet& v) {
    Mat8 m = Mat8::Zero();
    put_block(m, 0, 1, v.ab);
    put_block(m, 1, 0, adjoint(v.ab));
    put_block(m, 2, 3, v.cd);
    put_block(m, 3, 2, adjoint(v.cd));
    return m;
}

[[nodiscard]] inline Mat8 v_cross(const InteractionSet& v) {
    Mat8 m = Mat8::Zero();
    put_block(m, 0, 3, v.ad);
    put_block(m, 3, 0, adjoint(v.ad));
    put_block(m, 2, 1, v.cb);
    put_block(m, 1, 2, adjoint(v.cb));
    return m;
}

/// Swaps (a, b) <-> (c, d).
[[nodiscard]] inline Mat8 species_swap() {
    Mat8 m = Mat8::Zero();
    put_block(m, 0, 2, SpinBlock::identity());
    put_block(m, 1, 3, SpinBlock::identity());
    put_block(m, 2, 0, SpinBlock::identity());
    put_block(m, 3, 1, SpinBlock::identity());
    return m;
}

/// Replaces each diagonal 2x2 block by its trace times the identity; drops off-diagonal blocks.
[[nodiscard]] inline Mat8 block_trace(const Mat8& x) {
    Mat8 m = Mat8::Zero();
    for (int s = 0; s < 4; ++s) {
        const cplx t = x(2 * s, 2 * s) + x(2 * s + 1, 2 * s + 1);
        m(2 * s, 2 * s) = t;
        m(2 * s + 1, 2 * s + 1) = t;
    }
    return m;
}

/// Diagonal blocks of A_quad + A_tr for momenta 1..4.
[[nodiscard]] inline SpeciesBlocks diss_integrand(const InteractionSet& v, const SpeciesBlocks& b1, const SpeciesBlocks& b2,
                                                  const SpeciesBlocks& b3, const SpeciesBlocks& b4) {
    const Mat8 I = Mat8::Identity();
    const Mat8 vd = v_direct(v), vx = v_cross(v), y = species_swap();
    const Mat8 w1 = block_diag(b1), w2 = block_diag(b2), w3 = block_diag(b3), w4 = block_diag(b4);
    const Mat8 h1 = I - w1, h2 = I - w2, h3 = I - w3, h4 = I - w4;

    Mat8 quad = h1 * vd * w2 * vx * h3 * vd * w4 * vx - w1 * vd * h2 * vx * w3 * vd * h4 * vx +
                h1 * vx * w4 * vd * h3 * vx * w2 * vd - w1 * vx * h4 * vd * w3 * vx * h2 * vd;
    quad += Mat8(quad.adjoint());

    auto hc = [](const Mat8& m) { return Mat8(m + m.adjoint()); };
    const Mat8 tr = hc(h1 * vd * w2 * vd) * block_trace(y * h3 * vd * w4 * vd * y) -
                    hc(w1 * vd * h2 * vd) * block_trace(y * w3 * vd * h4 * vd * y) +
                    hc(h1 * vx * w4 * vx) * block_trace(y * h3 * vx * w2 * vx * y) -
                    hc(w1 * vx * h4 * vx) * block_trace(y * w3 * vx * h2 * vx * y);

    const Mat8 total = quad + tr;
    SpeciesBlocks out;
    for (int s = 0; s < 4; ++s) out[static_cast<std::size_t>(s)] = get_block(total, s, s);
    return out;
}

/// Diagonal blocks of the matrix-form effective-Hamiltonian integrand, with its overall minus signs.
[[nodiscard]] inline SpeciesBlocks heff_integrand(const InteractionSet& v, const SpeciesBlocks& b2, const SpeciesBlocks& b3,
                                                  const SpeciesBlocks& b4) {
    const Mat8 I = Mat8::Identity();
    const Mat8 vd = v_direct(v), vx = v_cross(v), y = species_swap();
    const Mat8 w2 = block_diag(b2), w3 = block_diag(b3), w4 = block_diag(b4);
    const Mat8 h2 = I - w2, h3 = I - w3, h4 = I - w4;

    const Mat8 total = -(vd * w2 * vx * h3 * vd * w4 * vx) - vx * w4 * vd * h3 * vx * w2 * vd -
                       vd * h2 * vx * w3 * vd * h4 * vx - vx * h4 * vd * w3 * vx * h2 * vd -
                       vd * w2 * vd * block_trace(y * h3 * vd * w4 * vd * y) -
                       vd * h2 * vd * block_trace(y * w3 * vd * h4 * vd * y) -
                       vx * w4 * vx * block_trace(y * h3 * vx * w2 * vx * y) -
                       vx * h4 * vx * block_trace(y * w3 * vx * h2 * vx * y);
    SpeciesBlocks out;
    for (int s = 0; s < 4; ++s) out[static_cast<std::size_t>(s)] = get_block(total, s, s);
    return out;
}

/// Masses seen by the component of species s at positions 1..4.
[[nodiscard]] inline std::array<double, 4> component_masses(const Masses& m, Species s) {
    // partners of s in the order (1, 2, 3, 4) under the species permutations
    static constexpr std::array<std::array<int, 4>, 4> order{{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
    std::array<double, 4> r{};
    for (std::size_t k = 0; k < 4; ++k) r[k] = m.m[static_cast<std::size_t>(order[static_cast<std::size_t>(index(s))][k])];
    return r;
}

/// sqrt(min(m_i eps_i) / (m_1 eps_1)); at eps_1 = 0 the limit value (1 unless another energy vanishes).
[[nodiscard]] inline double d_factor(const std::array<double, 4>& mass, const std::array<double, 4>& eps) {
    const double me1 = mass[0] * eps[0];
    const double others = std::min({mass[1] * eps[1], mass[2] * eps[2], mass[3] * eps[3]});
    if (me1 == 0.0) return others > 0.0 ? 1.0 : 0.0;
    return std::sqrt(std::min(me1, others) / me1);
}

[[nodiscard]] inline SpeciesBlocks blocks_at(const WignerField& w, int j) {
    SpeciesBlocks b;
    for (Species s : kAllSpecies) b[static_cast<std::size_t>(index(s))] = w(s, j);
    return b;
}

/// Dissipative operator by direct summation over all on-shell grid quadruples.
[[nodiscard]] inline WignerField diss_operator(const WignerField& w, const Model& model,
                                                  Normalization norm = Normalization::momentum_space) {
    const int n = w.size();
    const double h = w.grid().spacing();
    const double pi = std::numbers::pi;
    std::array<std::array<double, 4>, 4> mass{};
    for (Species s : kAllSpecies) mass[static_cast<std::size_t>(index(s))] = component_masses(model.masses(), s);
    WignerField out(w.grid());
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3) {
                const int i4 = i1 - i2 + i3;
                if (i4 < 0 || i4 >= n) continue;
                const auto c = diss_integrand(model.interactions(), blocks_at(w, i1), blocks_at(w, i2), blocks_at(w, i3),
                                              blocks_at(w, i4));
                for (Species s : kAllSpecies) {
                    const auto& ms = mass[static_cast<std::size_t>(index(s))];
                    const double d = d_factor(ms, {h * i1, h * i2, h * i3, h * i4});
                    const double pref = pi * std::pow(2.0 * pi, 3) * ms[1] * ms[2] * ms[3] * h * h;
                    out(s, i1) += (rate_scale(norm) * pref * d) * c[static_cast<std::size_t>(index(s))];
                }
            }
    return out;
}

/// Effective Hamiltonian by direct summation over all non-resonant grid triples.
/// The matrix-form integrand enters with a flipped sign so the result matches the tensor convention.
[[nodiscard]] inline WignerField effective_hamiltonian(const WignerField& w, const Model& model,
                                                          Normalization norm = Normalization::momentum_space) {
    const int n = w.size();
    const double h = w.grid().spacing();
    const double pi = std::numbers::pi;
    std::array<std::array<double, 4>, 4> mass{};
    for (Species s : kAllSpecies) mass[static_cast<std::size_t>(index(s))] = component_masses(model.masses(), s);
    WignerField out(w.grid());
    for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3)
            for (int i4 = 0; i4 < n; ++i4) {
                const auto c = heff_integrand(model.interactions(), blocks_at(w, i2), blocks_at(w, i3), blocks_at(w, i4));
                for (int i1 = 0; i1 < n; ++i1) {
                    const int gap = i1 - i2 + i3 - i4;
                    if (gap == 0) continue;
                    for (Species s : kAllSpecies) {
                        const auto& ms = mass[static_cast<std::size_t>(index(s))];
                        const double d = d_factor(ms, {h * i1, h * i2, h * i3, h * i4});
                        const double pref = 2.0 * std::pow(2.0 * pi, 2) * ms[1] * ms[2] * ms[3] * h * h * h;
                        out(s, i1) -= (rate_scale(norm) * pref * d / (h * gap)) * c[static_cast<std::size_t>(index(s))];
                    }
                }
            }
    return out;
}

[[nodiscard]] inline WignerField cons_operator(const WignerField& w, const Model& model,
                                               Normalization norm = Normalization::momentum_space) {
    const WignerField hm = reference::effective_hamiltonian(w, model, norm);
    WignerField out(w.grid());
    for (Species s : kAllSpecies)
        for (int j = 0; j < w.size(); ++j) {
            const SpinBlock& hb = hm(s, j);
            const SpinBlock& wb = w(s, j);
            out(s, j) = cplx{0.0, -1.0} * (hb * wb - wb * hb);
        }
    return out;
}

}  // namespace spinboltz::reference
