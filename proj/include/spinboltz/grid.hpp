// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file grid.hpp
 * @brief Uniform energy grid, the Wigner field stored on it, and the isotropic
 * 3D moment functionals.
 *
 * Moments use the plain d^3p measure written in energy variables,
 * d^3p = 4 pi m |p| d(eps), discretized with weight w_j = 4 pi m sqrt(2 m eps_j) h.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spinboltz/error.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

class EnergyGrid {
public:
    EnergyGrid(int n, double h) : n_(n), h_(h) {
        if (n < 4) throw ValidationError("energy grid needs at least 4 shells");
        if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("grid spacing must be positive");
    }

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double energy(int j) const noexcept { return h_ * j; }
    [[nodiscard]] double max_energy() const noexcept { return h_ * (n_ - 1); }

    /// Same energy range with spacing h / factor.
    [[nodiscard]] EnergyGrid refined(int factor) const { return {factor * (n_ - 1) + 1, h_ / factor}; }

    friend bool operator==(const EnergyGrid& x, const EnergyGrid& y) noexcept { return x.n_ == y.n_ && x.h_ == y.h_; }

private:
    int n_;
    double h_;
};

/// Moment weight of shell j for a species of the given mass.
[[nodiscard]] inline double moment_weight(const EnergyGrid& g, double mass, int j) noexcept {
    return 4.0 * std::numbers::pi * mass * std::sqrt(2.0 * mass * g.energy(j)) * g.spacing();
}

struct MomentWeights {
    std::array<std::vector<double>, 4> w;

    MomentWeights(const EnergyGrid& g, const Masses& m) {
        for (Species s : kAllSpecies) {
            auto& ws = w[static_cast<std::size_t>(index(s))];
            ws.resize(static_cast<std::size_t>(g.size()));
            for (int j = 0; j < g.size(); ++j) ws[static_cast<std::size_t>(j)] = moment_weight(g, m[s], j);
        }
    }
    [[nodiscard]] double operator()(Species s, int j) const noexcept {
        return w[static_cast<std::size_t>(index(s))][static_cast<std::size_t>(j)];
    }
};

/// Physicality window for occupation eigenvalues.
inline constexpr double kRejectTol = 1e-6;
inline constexpr double kClampTol = 1e-9;

/// Four species of 2x2 Wigner blocks on every shell.
class WignerField {
public:
    explicit WignerField(EnergyGrid grid)
        : grid_(grid), blocks_(static_cast<std::size_t>(kNumSpecies * grid.size())) {}

    [[nodiscard]] const EnergyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] int size() const noexcept { return grid_.size(); }

    [[nodiscard]] SpinBlock& operator()(Species s, int j) noexcept { return blocks_[slot(s, j)]; }
    [[nodiscard]] const SpinBlock& operator()(Species s, int j) const noexcept { return blocks_[slot(s, j)]; }

    [[nodiscard]] std::vector<SpinBlock>& blocks() noexcept { return blocks_; }
    [[nodiscard]] const std::vector<SpinBlock>& blocks() const noexcept { return blocks_; }

    /// this += s * other
    WignerField& axpy(double s, const WignerField& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += s * other.blocks_[i];
        return *this;
    }

    void require_same_grid(const WignerField& other) const {
        if (!(grid_ == other.grid_)) throw ValidationError("Wigner fields live on different grids");
    }

    void hermitize() noexcept {
        for (auto& b : blocks_) b = hermitian_part(b);
    }

    [[nodiscard]] double max_hermiticity_defect() const noexcept {
        double d = 0.0;
        for (const auto& b : blocks_) d = std::max(d, hermiticity_defect(b));
        return d;
    }

private:
    [[nodiscard]] std::size_t slot(Species s, int j) const noexcept {
        return static_cast<std::size_t>(index(s) * grid_.size() + j);
    }

    EnergyGrid grid_;
    std::vector<SpinBlock> blocks_;
};

/// Largest block max-norm across a field.
[[nodiscard]] inline double field_max(const WignerField& w) {
    double m = 0.0;
    for (const auto& b : w.blocks()) m = std::max(m, max_abs(b));
    return m;
}

/// Largest entry of the difference of two fields on the same grid.
[[nodiscard]] inline double field_diff(const WignerField& x, const WignerField& y) {
    x.require_same_grid(y);
    double m = 0.0;
    for (std::size_t i = 0; i < x.blocks().size(); ++i) m = std::max(m, max_abs(x.blocks()[i] - y.blocks()[i]));
    return m;
}

/// Location and value of the worst eigenvalue excursion outside [0, 1].
struct Excursion {
    Species species = Species::a;
    int shell = -1;
    double eigenvalue = 0.0;
    double amount = 0.0;  ///< distance outside [0, 1]; 0 if none
};

[[nodiscard]] inline Excursion worst_excursion(const WignerField& w) {
    Excursion worst;
    for (Species s : kAllSpecies) {
        for (int j = 0; j < w.size(); ++j) {
            for (double lam : eigenvalues(w(s, j))) {
                const double out = lam < 0.0 ? -lam : (lam > 1.0 ? lam - 1.0 : 0.0);
                if (out > worst.amount) worst = {s, j, lam, out};
            }
        }
    }
    return worst;
}

/// Throws if any eigenvalue is outside [-1e-6, 1 + 1e-6] or any block is non-Hermitian.
inline void validate_physical(const WignerField& w, const std::string& context) {
    if (w.max_hermiticity_defect() > kHermitianTol) throw ValidationError(context + ": non-Hermitian Wigner block");
    const Excursion e = worst_excursion(w);
    if (e.amount > kRejectTol) {
        throw ValidationError(context + ": eigenvalue " + std::to_string(e.eigenvalue) + " of species " + tag(e.species) +
                              " at shell " + std::to_string(e.shell) + " is outside [0, 1]");
    }
}

/**
 * Moves eigenvalues that lie within `window` outside [0, 1] back onto the
 * boundary. Returns the number of blocks changed.
 */
inline int clamp_eigenvalues(WignerField& w, double window = kClampTol) {
    int changed = 0;
    for (auto& b : w.blocks()) {
        const auto ev = eigenvalues(b);
        if (ev[0] >= 0.0 && ev[1] <= 1.0) continue;
        if (ev[0] < -window || ev[1] > 1.0 + window) continue;
        const Spectrum sp = eig_hermitian(b);
        b = std::clamp(sp.lambda[0], 0.0, 1.0) * sp.proj[0] + std::clamp(sp.lambda[1], 0.0, 1.0) * sp.proj[1];
        b = hermitian_part(b);
        ++changed;
    }
    return changed;
}

/// W -> U W U^dagger per species.
[[nodiscard]] inline WignerField apply_gauge(const GaugeRotation& g, const WignerField& w) {
    g.validate();
    WignerField r = w;
    for (Species s : kAllSpecies)
        for (int j = 0; j < w.size(); ++j) r(s, j) = g[s] * w(s, j) * adjoint(g[s]);
    return r;
}

[[nodiscard]] inline std::pair<InteractionSet, WignerField> apply_gauge(const GaugeRotation& g, const InteractionSet& v,
                                                                        const WignerField& w) {
    return {apply_gauge(g, v), apply_gauge(g, w)};
}

[[nodiscard]] inline SpinBlock density_matrix(const WignerField& w, const Masses& m, Species s) {
    SpinBlock rho;
    for (int j = 0; j < w.size(); ++j) rho += moment_weight(w.grid(), m[s], j) * w(s, j);
    return rho;
}

[[nodiscard]] inline SpinBlock total_density(const WignerField& w, const Masses& m) {
    SpinBlock rho;
    for (Species s : kAllSpecies) rho += density_matrix(w, m, s);
    return rho;
}

[[nodiscard]] inline double total_energy(const WignerField& w, const Masses& m) {
    double e = 0.0;
    for (Species s : kAllSpecies)
        for (int j = 0; j < w.size(); ++j)
            e += moment_weight(w.grid(), m[s], j) * w.grid().energy(j) * trace(w(s, j)).real();
    return e;
}

/// Weighted sum of trace norms (sum of |eigenvalues|) of the block differences.
[[nodiscard]] inline double l1_distance(const WignerField& x, const WignerField& y, const Masses& m) {
    x.require_same_grid(y);
    double d = 0.0;
    for (Species s : kAllSpecies) {
        for (int j = 0; j < x.size(); ++j) {
            const auto ev = eigenvalues(hermitian_part(x(s, j) - y(s, j)));
            d += moment_weight(x.grid(), m[s], j) * (std::abs(ev[0]) + std::abs(ev[1]));
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Snapshot CSV: species,eps,re_w11,re_w22,re_w12,im_w12
// ---------------------------------------------------------------------------

inline constexpr const char* kSnapshotHeader = "species,eps,re_w11,re_w22,re_w12,im_w12";

inline void write_snapshot(std::ostream& os, const WignerField& w) {
    os << kSnapshotHeader << '\n' << std::setprecision(17);
    for (Species s : kAllSpecies) {
        for (int j = 0; j < w.size(); ++j) {
            const SpinBlock& b = w(s, j);
            os << tag(s) << ',' << w.grid().energy(j) << ',' << b(0, 0).real() << ',' << b(1, 1).real() << ','
               << b(0, 1).real() << ',' << b(0, 1).imag() << '\n';
        }
    }
}

inline void write_snapshot(const std::string& path, const WignerField& w) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write snapshot '" + path + "'");
    write_snapshot(os, w);
}

/// Reads a snapshot onto `grid`. Every (species, shell) must appear exactly once.
[[nodiscard]] inline WignerField read_snapshot(std::istream& is, const EnergyGrid& grid) {
    WignerField w(grid);
    std::vector<int> seen(static_cast<std::size_t>(kNumSpecies * grid.size()), 0);
    std::string line;
    if (!std::getline(is, line) || line.rfind("species", 0) != 0) throw ValidationError("snapshot: missing header row");
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> cols;
        while (std::getline(ss, field, ',')) cols.push_back(field);
        if (cols.size() != 6) throw ValidationError("snapshot line " + std::to_string(lineno) + ": expected 6 columns");
        const Species s = species_from_tag(cols[0]);
        double v[5];
        for (int k = 0; k < 5; ++k) {
            try {
                v[k] = std::stod(cols[static_cast<std::size_t>(k + 1)]);
            } catch (const std::exception&) {
                throw ValidationError("snapshot line " + std::to_string(lineno) + ": bad number");
            }
        }
        const double jf = v[0] / grid.spacing();
        const int j = static_cast<int>(std::lround(jf));
        if (j < 0 || j >= grid.size() || std::abs(jf - j) > 1e-9)
            throw ValidationError("snapshot line " + std::to_string(lineno) + ": energy is not on the grid");
        w(s, j) = SpinBlock::hermitian(v[1], v[2], v[3], v[4]);
        ++seen[static_cast<std::size_t>(index(s) * grid.size() + j)];
    }
    for (int c : seen)
        if (c != 1) throw ValidationError("snapshot does not cover every (species, shell) exactly once");
    return w;
}

[[nodiscard]] inline WignerField read_snapshot(const std::string& path, const EnergyGrid& grid) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot read snapshot '" + path + "'");
    return read_snapshot(is, grid);
}

}  // namespace spinboltz
