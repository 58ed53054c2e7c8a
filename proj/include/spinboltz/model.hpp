// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Four-species model: masses, dispersion, interaction matrices, the 4x4
 * interaction operator and per-species gauge rotations.
 *
 * The interaction operator acts from the (b, d) pair space to the (a, c) pair
 * space:  vop = (V_ab (x) V_cd) + (V_ad (x) V_cb) * swap.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "spinboltz/error.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

enum class Species : int { a = 0, b = 1, c = 2, d = 3 };

inline constexpr std::array<Species, 4> kAllSpecies{Species::a, Species::b, Species::c, Species::d};
inline constexpr int kNumSpecies = 4;

[[nodiscard]] constexpr int index(Species s) noexcept { return static_cast<int>(s); }

[[nodiscard]] constexpr char tag(Species s) noexcept { return "abcd"[index(s)]; }

[[nodiscard]] inline Species species_from_tag(std::string_view t) {
    if (t.size() == 1 && t[0] >= 'a' && t[0] <= 'd') return static_cast<Species>(t[0] - 'a');
    throw ValidationError("unknown species tag '" + std::string(t) + "'");
}

/// Masses of species a, b, c, d in natural units.
struct Masses {
    std::array<double, 4> m{1.0, 0.8, 0.2, 0.5};

    [[nodiscard]] double operator[](Species s) const noexcept { return m[static_cast<std::size_t>(index(s))]; }

    void validate() const {
        for (double x : m)
            if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("species masses must be finite and positive");
    }
    [[nodiscard]] double product() const noexcept { return m[0] * m[1] * m[2] * m[3]; }
};

/// |p| = sqrt(2 m eps), the inverse of the dispersion eps = |p|^2 / 2m.
[[nodiscard]] inline double momentum_from_energy(double mass, double energy) {
    if (energy < 0.0) throw ValidationError("momentum_from_energy: negative energy");
    return std::sqrt(2.0 * mass * energy);
}

struct InteractionSet {
    SpinBlock ab = SpinBlock::identity();
    SpinBlock cd = SpinBlock::identity();
    SpinBlock ad = SpinBlock::identity();
    SpinBlock cb = SpinBlock::identity();

    /// Rejects rank-deficient matrices. Returns true if any entry carries an
    /// imaginary part above 1e-12 (allowed, e.g. after a complex gauge rotation).
    bool validate() const {
        bool complex_entries = false;
        const std::array<std::pair<const char*, const SpinBlock*>, 4> all{
            {{"V_ab", &ab}, {"V_cd", &cd}, {"V_ad", &ad}, {"V_cb", &cb}}};
        for (const auto& [name, v] : all) {
            if (std::abs(det(*v)) <= 1e-12) throw ValidationError(std::string(name) + " is rank deficient");
            for (const auto& x : v->e) complex_entries = complex_entries || std::abs(x.imag()) > 1e-12;
        }
        return complex_entries;
    }
};

/// The 4x4 interaction operator (rows: a (x) c, columns: b (x) d).
struct VOp {
    PairBlock matrix;
};

[[nodiscard]] inline VOp build_vop(const InteractionSet& v) {
    v.validate();
    return {tensor(v.ab, v.cd) + tensor(v.ad, v.cb) * PairBlock::swap()};
}

/// Beta-decay couplings with species map a:n, b:p, c:nu, d:e.
[[nodiscard]] inline InteractionSet beta_decay_interactions(double c_v, double c_a) {
    InteractionSet v;
    v.ab = (c_v - c_a) * SpinBlock::identity();
    v.cd = SpinBlock::identity();
    v.ad = SpinBlock::identity();
    v.cb = (2.0 * c_a) * SpinBlock::identity();
    v.validate();
    return v;
}

/**
 * Diagonal interaction matrices whose operator has the zero outer frame with
 * middle block [[-5/8, 1/3], [-1/4, 2/15]].
 */
[[nodiscard]] inline InteractionSet zero_frame_interactions() {
    InteractionSet v;
    v.ab = SpinBlock::identity();
    v.cd = SpinBlock::diag(2.0 / 15.0, -5.0 / 8.0);
    v.ad = SpinBlock::diag(1.0, 15.0 / 8.0);
    v.cb = SpinBlock::diag(-2.0 / 15.0, 1.0 / 3.0);
    return v;
}

[[nodiscard]] inline SpinBlock rotation(double phi) noexcept {
    return SpinBlock::real(std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi));
}

/// One fixed unitary per species.
struct GaugeRotation {
    std::array<SpinBlock, 4> u{SpinBlock::identity(), SpinBlock::identity(), SpinBlock::identity(), SpinBlock::identity()};

    [[nodiscard]] const SpinBlock& operator[](Species s) const noexcept { return u[static_cast<std::size_t>(index(s))]; }
    [[nodiscard]] SpinBlock& operator[](Species s) noexcept { return u[static_cast<std::size_t>(index(s))]; }

    void validate() const {
        for (const auto& x : u)
            if (unitarity_defect(x) > 1e-12) throw ValidationError("gauge rotation is not unitary");
    }

    [[nodiscard]] GaugeRotation inverse() const {
        GaugeRotation g;
        for (std::size_t i = 0; i < 4; ++i) g.u[i] = adjoint(u[i]);
        return g;
    }

    [[nodiscard]] bool is_identity() const noexcept {
        for (const auto& x : u)
            if (max_abs(x - SpinBlock::identity()) != 0.0) return false;
        return true;
    }
};

/// Gauge used with the rotated zero-frame example: U_b is a rotation by pi/5.
[[nodiscard]] inline GaugeRotation rotated_frame_gauge() {
    GaugeRotation g;
    g[Species::b] = rotation(std::numbers::pi / 5.0);
    return g;
}

/// V_xy -> U_x V_xy U_y^dagger.
[[nodiscard]] inline InteractionSet apply_gauge(const GaugeRotation& g, const InteractionSet& v) {
    g.validate();
    InteractionSet r;
    r.ab = g[Species::a] * v.ab * adjoint(g[Species::b]);
    r.cd = g[Species::c] * v.cd * adjoint(g[Species::d]);
    r.ad = g[Species::a] * v.ad * adjoint(g[Species::d]);
    r.cb = g[Species::c] * v.cb * adjoint(g[Species::b]);
    return r;
}

/// vop -> (U_a (x) U_c) vop (U_b (x) U_d)^dagger.
[[nodiscard]] inline VOp apply_gauge(const GaugeRotation& g, const VOp& v) {
    g.validate();
    return {tensor(g[Species::a], g[Species::c]) * v.matrix * adjoint(tensor(g[Species::b], g[Species::d]))};
}

/// Complete physical model. The operator is cached; it is the only way the
/// interaction enters the dynamics.
class Model {
public:
    Model() : Model(Masses{}, beta_decay_interactions(1.0, -1.255)) {}
    Model(Masses masses, InteractionSet v) : masses_(masses), v_(v), vop_(build_vop(v)) { masses_.validate(); }

    [[nodiscard]] const Masses& masses() const noexcept { return masses_; }
    [[nodiscard]] const InteractionSet& interactions() const noexcept { return v_; }
    [[nodiscard]] const VOp& vop() const noexcept { return vop_; }

    [[nodiscard]] Model gauged(const GaugeRotation& g) const { return Model(masses_, apply_gauge(g, v_)); }

private:
    Masses masses_;
    InteractionSet v_;
    VOp vop_;
};

}  // namespace spinboltz
