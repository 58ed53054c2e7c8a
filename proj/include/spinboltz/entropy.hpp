// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file entropy.hpp
 * @brief Entropy S = -sum w tr[W log W + (1-W) log(1-W)] and its production rate.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinboltz/collision.hpp"
#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/parallel.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline constexpr double kLogClamp = 1e-12;

/// -lambda log lambda - (1 - lambda) log(1 - lambda), 0 at the endpoints.
[[nodiscard]] inline double mode_entropy(double lambda) noexcept {
    const double l = std::clamp(lambda, 0.0, 1.0);
    double s = 0.0;
    if (l > 0.0) s -= l * std::log(l);
    if (l < 1.0) s -= (1.0 - l) * std::log1p(-l);
    return s;
}

[[nodiscard]] inline double entropy(const WignerField& w, const Masses& m) {
    CompensatedSum s;
    for (Species sp : kAllSpecies)
        for (int j = 0; j < w.size(); ++j) {
            const auto ev = eigenvalues(w(sp, j));
            s.add(moment_weight(w.grid(), m[sp], j) * (mode_entropy(ev[0]) + mode_entropy(ev[1])));
        }
    return s.value();
}

/// log(lambda / (1 - lambda)) with lambda clamped to [delta, 1 - delta].
[[nodiscard]] inline double collision_invariant(double lambda) noexcept {
    const double l = std::clamp(lambda, kLogClamp, 1.0 - kLogClamp);
    return std::log(l) - std::log1p(-l);
}

namespace detail {

struct Eigen2 {
    double lambda[2];
    SpinBlock basis;  ///< columns are eigenvectors
};

[[nodiscard]] inline Eigen2 eigen2(const SpinBlock& b) {
    const Spectrum sp = eig_hermitian(b);
    return {{std::clamp(sp.lambda[0], kLogClamp, 1.0 - kLogClamp), std::clamp(sp.lambda[1], kLogClamp, 1.0 - kLogClamp)},
            eigenbasis(b)};
}

}  // namespace detail

/**
 * Entropy production as a sum over every on-shell grid quadruple and spin
 * configuration of 2 log(G/L) (G - L) |<1 3|vop|2 4>|^2, where G and L are the
 * gain and loss occupation products in the local eigenbases. The weight is
 * the collision quadrature weight times the moment weight, so the result
 * equals dS/dt of the dissipative flow.
 */
[[nodiscard]] inline double entropy_production(const WignerField& w, const Model& model, int threads = 1,
                                        Normalization norm = Normalization::momentum_space) {
    const int n = w.size();
    const double h = w.grid().spacing();
    const Masses& m = model.masses();
    std::array<std::vector<detail::Eigen2>, 4> eig;
    std::array<std::vector<double>, 4> mom;
    for (Species s : kAllSpecies) {
        const auto si = static_cast<std::size_t>(index(s));
        for (int j = 0; j < n; ++j) {
            eig[si].push_back(detail::eigen2(w(s, j)));
            mom[si].push_back(momentum_from_energy(m[s], w.grid().energy(j)));
        }
    }
    const double pi = std::numbers::pi;
    const double omega0 = rate_scale(norm) * 2.0 * 4.0 * pi * pi * std::pow(2.0 * pi, 3) * m.product() * h * h * h;

    std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
    parallel_for(n, threads, [&](int i1) {
        CompensatedSum acc;
        const auto& e1 = eig[0][static_cast<std::size_t>(i1)];
        for (int i3 = 0; i3 < n; ++i3) {
            const auto& e3 = eig[2][static_cast<std::size_t>(i3)];
            const PairBlock left = adjoint(tensor(e1.basis, e3.basis)) * model.vop().matrix;
            const int lo = std::max(0, i1 + i3 - (n - 1));
            const int hi = std::min(n - 1, i1 + i3);
            for (int i2 = lo; i2 <= hi; ++i2) {
                const int i4 = i1 + i3 - i2;
                const double pmin = std::min({mom[0][static_cast<std::size_t>(i1)], mom[1][static_cast<std::size_t>(i2)],
                                              mom[2][static_cast<std::size_t>(i3)], mom[3][static_cast<std::size_t>(i4)]});
                if (pmin == 0.0) continue;
                const auto& e2 = eig[1][static_cast<std::size_t>(i2)];
                const auto& e4 = eig[3][static_cast<std::size_t>(i4)];
                const PairBlock v = left * tensor(e2.basis, e4.basis);
                double sum = 0.0;
                for (int s1 = 0; s1 < 2; ++s1)
                    for (int s3 = 0; s3 < 2; ++s3)
                        for (int s2 = 0; s2 < 2; ++s2)
                            for (int s4 = 0; s4 < 2; ++s4) {
                                const double amp = std::norm(v(2 * s1 + s3, 2 * s2 + s4));
                                if (amp == 0.0) continue;
                                const double l1 = e1.lambda[s1], l2 = e2.lambda[s2], l3 = e3.lambda[s3], l4 = e4.lambda[s4];
                                const double g = (1.0 - l1) * l2 * (1.0 - l3) * l4;
                                const double l = l1 * (1.0 - l2) * l3 * (1.0 - l4);
                                const double lg = (std::log(l2) + std::log(l4) + std::log1p(-l1) + std::log1p(-l3)) -
                                                  (std::log(l1) + std::log(l3) + std::log1p(-l2) + std::log1p(-l4));
                                sum += lg * (g - l) * amp;
                            }
                acc.add(omega0 * pmin * sum);
            }
        }
        partial[static_cast<std::size_t>(i1)] = acc.value();
    });
    CompensatedSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

/// -sum w tr[(log W - log(1 - W)) C] for a given rate field C.
[[nodiscard]] inline double entropy_rate(const WignerField& w, const WignerField& c, const Masses& m) {
    w.require_same_grid(c);
    CompensatedSum acc;
    for (Species s : kAllSpecies)
        for (int j = 0; j < w.size(); ++j) {
            const Spectrum sp = eig_hermitian(w(s, j));
            const SpinBlock phi = collision_invariant(sp.lambda[0]) * sp.proj[0] + collision_invariant(sp.lambda[1]) * sp.proj[1];
            acc.add(-moment_weight(w.grid(), m[s], j) * trace(phi * c(s, j)).real());
        }
    return acc.value();
}

struct EntropyReport {
    double entropy = 0.0;
    double production = 0.0;
};

}  // namespace spinboltz
