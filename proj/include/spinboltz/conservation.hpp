// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file conservation.hpp
 * @brief Structure classes of the interaction operator and the conserved
 * moment functionals that come with each class.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

enum class StructureClass { general, diagonal_pattern, identity_family, zero_outer_frame };

[[nodiscard]] inline std::string to_string(StructureClass c) {
    switch (c) {
        case StructureClass::general: return "General";
        case StructureClass::diagonal_pattern: return "DiagonalPattern";
        case StructureClass::identity_family: return "IdentityFamily";
        case StructureClass::zero_outer_frame: return "ZeroOuterFrame";
    }
    return "?";
}

[[nodiscard]] inline StructureClass structure_class_from_string(const std::string& s) {
    for (auto c : {StructureClass::general, StructureClass::diagonal_pattern, StructureClass::identity_family,
                   StructureClass::zero_outer_frame})
        if (to_string(c) == s) return c;
    throw ValidationError("unknown structure class '" + s + "'");
}

/// Largest entry that violates each pattern.
struct PatternResiduals {
    double identity_family = 0.0;
    double zero_outer_frame = 0.0;
    double diagonal_pattern = 0.0;
};

struct Classification {
    StructureClass variant = StructureClass::general;
    PatternResiduals residuals;
    /// Gauge g with vop = g . vop_pattern; the pattern (and the extra
    /// conserved quantities) live in the frame U^dagger W U.
    std::optional<GaugeRotation> gauge;
};

[[nodiscard]] inline PatternResiduals pattern_residuals(const PairBlock& v) {
    PatternResiduals r;
    // least squares fit v ~ x 1 + y T: <1,1> = <T,T> = 4, <1,T> = 2
    const PairBlock t = PairBlock::swap();
    const cplx p = trace(v), q = trace(adjoint(t) * v);
    const cplx x = (4.0 * p - 2.0 * q) / 12.0;
    const cplx y = (4.0 * q - 2.0 * p) / 12.0;
    r.identity_family = max_abs(v - x * PairBlock::identity() - y * t);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double a = std::abs(v(i, j));
            const bool frame = i == 0 || i == 3 || j == 0 || j == 3;
            const bool diag_star = (i == j) || ((i == 1 || i == 2) && (j == 1 || j == 2));
            if (frame) r.zero_outer_frame = std::max(r.zero_outer_frame, a);
            if (!diag_star) r.diagonal_pattern = std::max(r.diagonal_pattern, a);
        }
    }
    return r;
}

/**
 * Tests identity family, zero outer frame and diagonal pattern in that order.
 * With a gauge the tests run on (U_a (x) U_c)^dagger vop (U_b (x) U_d).
 */
[[nodiscard]] inline Classification classify_vop(const VOp& vop, double tol = 1e-12,
                                                 const std::optional<GaugeRotation>& gauge = std::nullopt) {
    if (!(tol >= 1e-14 && tol <= 1e-6)) throw ValidationError("pattern tolerance must lie in [1e-14, 1e-6]");
    const VOp v = gauge ? apply_gauge(gauge->inverse(), vop) : vop;
    Classification c;
    c.residuals = pattern_residuals(v.matrix);
    c.gauge = gauge;
    if (c.residuals.identity_family <= tol * std::max(1.0, max_abs(v.matrix)))
        c.variant = StructureClass::identity_family;
    else if (c.residuals.zero_outer_frame <= tol)
        c.variant = StructureClass::zero_outer_frame;
    else if (c.residuals.diagonal_pattern <= tol)
        c.variant = StructureClass::diagonal_pattern;
    return c;
}

enum class Functional {
    total_trace,     ///< tr rho
    trace_ab,        ///< tr(rho_a + rho_b)
    trace_ad,        ///< tr(rho_a + rho_d)
    energy,          ///< total energy
    rho_up_up,       ///< rho_{up up}
    rho_down_down,   ///< rho_{down down}
    rho_re_up_down,  ///< Re rho_{up down}
    rho_im_up_down,  ///< Im rho_{up down}
    sigma_z_ac       ///< tr sigma_z (rho_a + rho_c)
};

[[nodiscard]] inline std::string to_string(Functional f) {
    switch (f) {
        case Functional::total_trace: return "tr_rho";
        case Functional::trace_ab: return "tr_rho_ab";
        case Functional::trace_ad: return "tr_rho_ad";
        case Functional::energy: return "energy";
        case Functional::rho_up_up: return "rho_uu";
        case Functional::rho_down_down: return "rho_dd";
        case Functional::rho_re_up_down: return "re_rho_ud";
        case Functional::rho_im_up_down: return "im_rho_ud";
        case Functional::sigma_z_ac: return "sz_rho_ac";
    }
    return "?";
}

[[nodiscard]] inline std::vector<Functional> conserved_functionals(StructureClass c) {
    std::vector<Functional> f{Functional::total_trace, Functional::trace_ab, Functional::trace_ad, Functional::energy};
    switch (c) {
        case StructureClass::general: break;
        case StructureClass::diagonal_pattern:
            f.insert(f.end(), {Functional::rho_up_up, Functional::rho_down_down});
            break;
        case StructureClass::identity_family:
            f.insert(f.end(), {Functional::rho_up_up, Functional::rho_down_down, Functional::rho_re_up_down,
                               Functional::rho_im_up_down});
            break;
        case StructureClass::zero_outer_frame:
            f.insert(f.end(), {Functional::rho_up_up, Functional::rho_down_down, Functional::sigma_z_ac});
            break;
    }
    return f;
}

struct ConservedVector {
    std::vector<Functional> names;
    std::vector<double> values;
};

/// Moments shared by all functionals, computed once.
struct Moments {
    std::array<SpinBlock, 4> rho;
    double energy = 0.0;

    Moments(const WignerField& w, const Masses& m) {
        for (Species s : kAllSpecies) rho[static_cast<std::size_t>(index(s))] = density_matrix(w, m, s);
        energy = total_energy(w, m);
    }
    [[nodiscard]] const SpinBlock& operator[](Species s) const noexcept { return rho[static_cast<std::size_t>(index(s))]; }

    [[nodiscard]] double value(Functional f) const {
        using S = Species;
        const SpinBlock total = rho[0] + rho[1] + rho[2] + rho[3];
        switch (f) {
            case Functional::total_trace: return trace(total).real();
            case Functional::trace_ab: return trace((*this)[S::a] + (*this)[S::b]).real();
            case Functional::trace_ad: return trace((*this)[S::a] + (*this)[S::d]).real();
            case Functional::energy: return energy;
            case Functional::rho_up_up: return total(0, 0).real();
            case Functional::rho_down_down: return total(1, 1).real();
            case Functional::rho_re_up_down: return total(0, 1).real();
            case Functional::rho_im_up_down: return total(0, 1).imag();
            case Functional::sigma_z_ac: return trace(pauli::z * ((*this)[S::a] + (*this)[S::c])).real();
        }
        return 0.0;
    }
};

/// Values of the class's functionals, in the pattern frame if the class carries a gauge.
[[nodiscard]] inline ConservedVector evaluate_conserved(const WignerField& w, const Masses& m, const Classification& c) {
    const Moments mom(c.gauge ? apply_gauge(c.gauge->inverse(), w) : w, m);
    ConservedVector v{conserved_functionals(c.variant), {}};
    for (Functional f : v.names) v.values.push_back(mom.value(f));
    return v;
}

/// Maximum of |Q(t) - Q(0)| / max(|Q(0)|, 1) per functional over a sequence of samples.
[[nodiscard]] inline std::vector<double> drift_report(std::span<const ConservedVector> samples) {
    if (samples.empty()) return {};
    const auto& q0 = samples.front().values;
    std::vector<double> drift(q0.size(), 0.0);
    for (const auto& s : samples) {
        if (s.values.size() != q0.size()) throw ValidationError("drift_report: samples of different length");
        for (std::size_t i = 0; i < q0.size(); ++i)
            drift[i] = std::max(drift[i], std::abs(s.values[i] - q0[i]) / std::max(std::abs(q0[i]), 1.0));
    }
    return drift;
}

}  // namespace spinboltz
