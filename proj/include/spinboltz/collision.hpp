// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file collision.hpp
 * @brief Collision operator on the energy grid: the dissipative part and the
 * Vlasov-type commutator with the effective Hamiltonian.
 *
 * Every species component is written in tensor form around the interaction
 * operator K, which is vop for a and c (row side) and vop^dagger for b and d.
 * For the (a,a) component:
 *
 *   R_gain = Tr_c[ vop (W_b2 (x) W_d4) vop^+ (1 (x) ~W_c3) ]
 *   R_loss = Tr_c[ vop (~W_b2 (x) ~W_d4) vop^+ (1 (x) W_c3) ]
 *   diss   = {~W_a1, R_gain} - {W_a1, R_loss}
 *   heff   = R_gain + R_loss
 *
 * with ~W = 1 - W. The other components follow from the species permutations
 * (a b)(c d), (a c)(b d), (a d)(b c). Shell 1 always carries the component's
 * own species and shell 3 its partner on the same side of vop.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinboltz/error.hpp"
#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"
#include "spinboltz/parallel.hpp"
#include "spinboltz/spinalg.hpp"

namespace spinboltz {

/// Blocks of all four species at one momentum.
using SpeciesBlocks = std::array<SpinBlock, 4>;

/// Role of each species inside one component of the collision operator.
struct Channel {
    Species self;
    Species partner;  ///< same side of vop, sits at shell 3
    Species slot2;    ///< opposite side, sits at shell 2
    Species slot4;    ///< opposite side, sits at shell 4
    bool self_first;  ///< self is the first tensor factor on its side
    bool row_side;    ///< self is on the (a, c) side, so K = vop
};

[[nodiscard]] constexpr Channel channel(Species s) noexcept {
    switch (s) {
        case Species::a: return {Species::a, Species::c, Species::b, Species::d, true, true};
        case Species::b: return {Species::b, Species::d, Species::a, Species::c, true, false};
        case Species::c: return {Species::c, Species::a, Species::d, Species::b, false, true};
        case Species::d: return {Species::d, Species::b, Species::c, Species::a, false, false};
    }
    return {};
}

namespace detail {

[[nodiscard]] inline const SpinBlock& at(const SpeciesBlocks& b, Species s) noexcept {
    return b[static_cast<std::size_t>(index(s))];
}

/// Tr over the partner factor of K P K^+ (partner block Y inserted on the traced factor).
[[nodiscard]] inline SpinBlock reduce(const PairBlock& k, const PairBlock& p, const SpinBlock& y, bool self_first) noexcept {
    const PairBlock m = k * p * adjoint(k);
    SpinBlock r;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            cplx acc{};
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    acc += (self_first ? m(2 * a + i, 2 * b + j) : m(2 * i + a, 2 * j + b)) * y(j, i);
                }
            }
            r(a, b) = acc;
        }
    }
    return r;
}

/// Opposite-side pair product in tensor-factor order, from slot-2 and slot-4 blocks.
[[nodiscard]] inline PairBlock pair_product(const SpinBlock& w2, const SpinBlock& w4, bool self_first) noexcept {
    return self_first ? tensor(w2, w4) : tensor(w4, w2);
}

/// Hermitian block as four reals: w00, w11, Re w01, Im w01.
using HermParams = std::array<double, 4>;

[[nodiscard]] inline HermParams params(const SpinBlock& w) noexcept {
    return {w(0, 0).real(), w(1, 1).real(), 0.5 * (w(0, 1).real() + w(1, 0).real()),
            0.5 * (w(0, 1).imag() - w(1, 0).imag())};
}

inline constexpr HermParams kIdentityParams{1.0, 1.0, 0.0, 0.0};

/// Entry (i, j) of the block with parameters q.
[[nodiscard]] inline cplx entry(const double* q, int i, int j, int stride) noexcept {
    if (i == j) return q[i * stride];
    const double re = q[2 * stride];
    const double im = q[3 * stride];
    return i == 0 ? cplx{re, im} : cplx{re, -im};
}

/**
 * Rebuilds sum_{mu,nu} o[mu][nu] B_mu (x) B_nu from parameter outer-product
 * coefficients, where index mu belongs to slot 2. If the self species is the
 * second factor the slots swap places in the tensor product.
 */
[[nodiscard]] inline PairBlock pair_from_params(const std::array<double, 16>& o, bool self_first) noexcept {
    // q[(i,j)][nu] = sum_mu L(i,j)[mu] o[mu][nu]  (slot-2 index contracted)
    std::array<std::array<cplx, 4>, 4> q{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int nu = 0; nu < 4; ++nu) q[static_cast<std::size_t>(2 * i + j)][static_cast<std::size_t>(nu)] = entry(&o[static_cast<std::size_t>(nu)], i, j, 4);
        }
    }
    PairBlock p;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const auto& qij = q[static_cast<std::size_t>(2 * i + j)];
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    cplx v = k == l ? qij[static_cast<std::size_t>(k)]
                                    : (k == 0 ? qij[2] + cplx{0.0, 1.0} * qij[3] : qij[2] - cplx{0.0, 1.0} * qij[3]);
                    if (self_first) {
                        p(2 * i + k, 2 * j + l) = v;  // slot2 (x) slot4
                    } else {
                        p(2 * k + i, 2 * l + j) = v;  // slot4 (x) slot2
                    }
                }
            }
        }
    }
    return p;
}

}  // namespace detail

/**
 * Integrand of the dissipative operator in tensor form for all four species.
 * w1..w4 hold every species' block at momenta 1..4; component s reads its own
 * block from w1, its partner from w3 and the opposite pair from w2, w4.
 */
[[nodiscard]] inline SpeciesBlocks diss_integrand(const VOp& vop, const SpeciesBlocks& w1, const SpeciesBlocks& w2,
                                                  const SpeciesBlocks& w3, const SpeciesBlocks& w4) {
    using detail::at;
    SpeciesBlocks out;
    const PairBlock vdag = adjoint(vop.matrix);
    for (Species s : kAllSpecies) {
        const Channel ch = channel(s);
        const PairBlock& k = ch.row_side ? vop.matrix : vdag;
        const SpinBlock& self = at(w1, s);
        const SpinBlock& partner = at(w3, ch.partner);
        const SpinBlock& x2 = at(w2, ch.slot2);
        const SpinBlock& x4 = at(w4, ch.slot4);
        const SpinBlock rg = detail::reduce(k, detail::pair_product(x2, x4, ch.self_first), hole(partner), ch.self_first);
        const SpinBlock rl =
            detail::reduce(k, detail::pair_product(hole(x2), hole(x4), ch.self_first), partner, ch.self_first);
        out[static_cast<std::size_t>(index(s))] = anticommutator(hole(self), rg) - anticommutator(self, rl);
    }
    return out;
}

/// Integrand of the effective Hamiltonian in tensor form; invariant under W <-> 1 - W.
[[nodiscard]] inline SpeciesBlocks heff_integrand(const VOp& vop, const SpeciesBlocks& w2, const SpeciesBlocks& w3,
                                                  const SpeciesBlocks& w4) {
    using detail::at;
    SpeciesBlocks out;
    const PairBlock vdag = adjoint(vop.matrix);
    for (Species s : kAllSpecies) {
        const Channel ch = channel(s);
        const PairBlock& k = ch.row_side ? vop.matrix : vdag;
        const SpinBlock& partner = at(w3, ch.partner);
        const SpinBlock& x2 = at(w2, ch.slot2);
        const SpinBlock& x4 = at(w4, ch.slot4);
        out[static_cast<std::size_t>(index(s))] =
            detail::reduce(k, detail::pair_product(x2, x4, ch.self_first), hole(partner), ch.self_first) +
            detail::reduce(k, detail::pair_product(hole(x2), hole(x4), ch.self_first), partner, ch.self_first);
    }
    return out;
}

/// Quadrature used for the (eps2, eps4) plane of the dissipative operator.
enum class QuadratureRule {
    rectangle,  ///< uniform h^2 per grid pair; conserves to round-off
    trapezoid   ///< half weight on the domain boundary; breaks the discrete interchange symmetry
};

/**
 * Overall constant of both collision parts. The momentum-space integrals carry
 * 1/(2 pi)^3 per loop; the energy-variable forms drop it, which makes every
 * rate (2 pi)^3 larger and is the same as measuring time in units (2 pi)^3
 * longer.
 */
enum class Normalization {
    momentum_space,  ///< C_diss = pi (M/m) int D A / (2 pi)^3 scaled to energy variables
    energy_form      ///< (2 pi)^3 times the momentum-space rates
};

[[nodiscard]] inline double rate_scale(Normalization n) noexcept {
    return n == Normalization::energy_form ? 1.0 : 1.0 / std::pow(2.0 * std::numbers::pi, 3);
}

struct CollisionOptions {
    bool include_cons = true;
    QuadratureRule rule = QuadratureRule::rectangle;
    Normalization norm = Normalization::momentum_space;
    int threads = 1;
};

[[nodiscard]] inline double diss_prefactor(const Masses& m, Species s) noexcept {
    return std::numbers::pi * std::pow(2.0 * std::numbers::pi, 3) * m.product() / m[s];
}

[[nodiscard]] inline double cons_prefactor(const Masses& m, Species s) noexcept {
    return 2.0 * std::pow(2.0 * std::numbers::pi, 2) * m.product() / m[s];
}

/**
 * Kinematic factor min(|p1|..|p4|) / |p1|. At eps1 = 0 the eps1 -> 0 limit is
 * used: 1 if the other three momenta are nonzero, 0 otherwise.
 */
[[nodiscard]] inline double kinematic_factor(double p1, double p2, double p3, double p4) noexcept {
    const double others = std::min({p2, p3, p4});
    if (p1 == 0.0) return others > 0.0 ? 1.0 : 0.0;
    return std::min(p1, others) / p1;
}

namespace detail {

/// Per-species lookup tables shared by both operators.
struct FieldTables {
    int n;
    std::array<std::vector<double>, 4> p;  ///< |p| per shell
    /// Parameters of W (index 0..3) and of 1 - W (4..7), structure-of-arrays per shell.
    std::array<std::array<std::vector<double>, 8>, 4> q;

    FieldTables(const WignerField& w, const Masses& m) : n(w.size()) {
        for (Species s : kAllSpecies) {
            const auto si = static_cast<std::size_t>(index(s));
            p[si].resize(static_cast<std::size_t>(n));
            for (auto& v : q[si]) v.resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                p[si][jj] = momentum_from_energy(m[s], w.grid().energy(j));
                const HermParams wp = params(w(s, j));
                const HermParams hp = params(hole(w(s, j)));
                for (std::size_t mu = 0; mu < 4; ++mu) {
                    q[si][mu][jj] = wp[mu];
                    q[si][4 + mu][jj] = hp[mu];
                }
            }
        }
    }
    [[nodiscard]] const std::vector<double>& mom(Species s) const noexcept { return p[static_cast<std::size_t>(index(s))]; }
    [[nodiscard]] double par(Species s, std::size_t mu, int j) const noexcept {
        return q[static_cast<std::size_t>(index(s))][mu][static_cast<std::size_t>(j)];
    }
    [[nodiscard]] const double* row(Species s, std::size_t mu) const noexcept {
        return q[static_cast<std::size_t>(index(s))][mu].data();
    }
};

inline void require_hermitian(const WignerField& w) {
    for (const auto& b : w.blocks()) {
        for (const auto& x : b.e)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw ValidationError("Wigner field has non-finite entries");
        if (hermiticity_defect(b) > kHermitianTol * std::max(1.0, max_abs(b)))
            throw ValidationError("Wigner field has non-Hermitian blocks");
    }
}

/// Dissipative component of species s at shell i1.
inline SpinBlock diss_block(const WignerField& w, const FieldTables& t, const PairBlock& vop, const PairBlock& vdag,
                            const Masses& m, QuadratureRule rule, double scale, Species s, int i1) {
    const Channel ch = channel(s);
    const PairBlock& k = ch.row_side ? vop : vdag;
    const int n = t.n;
    const double p1 = t.mom(s)[static_cast<std::size_t>(i1)];
    const auto& p2v = t.mom(ch.slot2);
    const auto& p3v = t.mom(ch.partner);
    const auto& p4v = t.mom(ch.slot4);
    auto edge = [n](int i) { return i == 0 || i == n - 1 ? 0.5 : 1.0; };

    SpinBlock rg, rl;
    for (int i3 = 0; i3 < n; ++i3) {
        std::array<double, 16> og{}, ol{};
        bool any = false;
        const int lo = std::max(0, i1 + i3 - (n - 1));
        const int hi = std::min(n - 1, i1 + i3);
        for (int i2 = lo; i2 <= hi; ++i2) {
            const int i4 = i1 + i3 - i2;
            double weight = kinematic_factor(p1, p2v[static_cast<std::size_t>(i2)], p3v[static_cast<std::size_t>(i3)],
                                             p4v[static_cast<std::size_t>(i4)]);
            if (rule == QuadratureRule::trapezoid) weight *= edge(i2) * edge(i4) * edge(i3);
            if (weight == 0.0) continue;
            any = true;
            for (std::size_t mu = 0; mu < 4; ++mu) {
                const double wg = weight * t.par(ch.slot2, mu, i2);
                const double wl = weight * t.par(ch.slot2, 4 + mu, i2);
                for (std::size_t nu = 0; nu < 4; ++nu) {
                    og[4 * mu + nu] += wg * t.par(ch.slot4, nu, i4);
                    ol[4 * mu + nu] += wl * t.par(ch.slot4, 4 + nu, i4);
                }
            }
        }
        if (!any) continue;
        const SpinBlock& partner = w(ch.partner, i3);
        rg += reduce(k, pair_from_params(og, ch.self_first), hole(partner), ch.self_first);
        rl += reduce(k, pair_from_params(ol, ch.self_first), partner, ch.self_first);
    }
    const SpinBlock& self = w(s, i1);
    const double h = w.grid().spacing();
    return (scale * diss_prefactor(m, s) * h * h) * (anticommutator(hole(self), rg) - anticommutator(self, rl));
}

/**
 * Prefix sums over eps4 of gap(k - i4) and gap(k - i4) W4_mu, plain and
 * weighted by |p4|, for every gap offset k = i1 - i2 + i3. Momenta grow with
 * the shell index, so min(pm, |p4|) splits the eps4 sum at one cut.
 */
struct GapSums {
    int n = 0;
    std::vector<double> plain, weighted;  ///< [(k + n - 1) (n + 1) + c] * 5 + component

    GapSums(const FieldTables& t, Species s4, const std::vector<double>& inv_gap) : n(t.n) {
        const std::size_t rows = static_cast<std::size_t>(3 * n - 2), cols = static_cast<std::size_t>(n + 1);
        plain.assign(rows * cols * 5, 0.0);
        weighted.assign(rows * cols * 5, 0.0);
        const auto& p4 = t.mom(s4);
        for (int k = -(n - 1); k <= 2 * (n - 1); ++k) {
            std::array<double, 5> u{}, v{};
            for (int c = 0; c <= n; ++c) {
                const std::size_t at = ((static_cast<std::size_t>(k + n - 1)) * cols + static_cast<std::size_t>(c)) * 5;
                std::copy(u.begin(), u.end(), plain.begin() + static_cast<std::ptrdiff_t>(at));
                std::copy(v.begin(), v.end(), weighted.begin() + static_cast<std::ptrdiff_t>(at));
                if (c == n) break;
                const double g = inv_gap[static_cast<std::size_t>(k - c + 2 * (n - 1))];
                const double pc = p4[static_cast<std::size_t>(c)];
                u[0] += g;
                v[0] += g * pc;
                for (std::size_t mu = 0; mu < 4; ++mu) {
                    const double x = g * t.par(s4, mu, c);
                    u[mu + 1] += x;
                    v[mu + 1] += x * pc;
                }
            }
        }
    }
    [[nodiscard]] const double* plain_at(int k, int c) const noexcept {
        return plain.data() + (static_cast<std::size_t>(k + n - 1) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(c)) * 5;
    }
    [[nodiscard]] const double* weighted_at(int k, int c) const noexcept {
        return weighted.data() + (static_cast<std::size_t>(k + n - 1) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(c)) * 5;
    }
};

/**
 * Effective Hamiltonian of species s at shell i1. Resonant grid points
 * (eps1 - eps2 + eps3 - eps4 = 0) are omitted from the principal value sum.
 * The hole pair is expanded as (1 - A) (x) (1 - B) = 1 - A(x)1 - 1(x)B + A(x)B
 * and the eps4 sum comes from GapSums, so the cost is O(n^3 log n).
 */
inline SpinBlock heff_block(const WignerField& w, const FieldTables& t, const PairBlock& vop, const PairBlock& vdag,
                            const Masses& m, const std::array<GapSums, 4>& sums, double scale, Species s, int i1) {
    const Channel ch = channel(s);
    const PairBlock& k = ch.row_side ? vop : vdag;
    const GapSums& gs = sums[static_cast<std::size_t>(index(ch.slot4))];
    const int n = t.n;
    const double p1 = t.mom(s)[static_cast<std::size_t>(i1)];
    const auto& p2v = t.mom(ch.slot2);
    const auto& p3v = t.mom(ch.partner);
    const auto& p4v = t.mom(ch.slot4);

    SpinBlock hg, hl;
    for (int i3 = 0; i3 < n; ++i3) {
        std::array<double, 16> o{};
        double s0 = 0.0;
        std::array<double, 4> s2{}, s4{};
        bool any = false;
        for (int i2 = 0; i2 < n; ++i2) {
            const double pm = std::min(p2v[static_cast<std::size_t>(i2)], p3v[static_cast<std::size_t>(i3)]);
            const int kk = i1 - i2 + i3;
            // tv[0] = sum_i4 D gap, tv[1 + mu] = sum_i4 D gap W4_mu
            std::array<double, 5> tv{};
            if (p1 > 0.0) {
                const double pm1 = std::min(pm, p1);
                const int cut = static_cast<int>(std::lower_bound(p4v.begin(), p4v.end(), pm1) - p4v.begin());
                const double* un = gs.plain_at(kk, n);
                const double* uc = gs.plain_at(kk, cut);
                const double* vc = gs.weighted_at(kk, cut);
                for (std::size_t c = 0; c < 5; ++c) tv[c] = (pm1 * (un[c] - uc[c]) + vc[c]) / p1;
            } else if (pm > 0.0) {
                const double* un = gs.plain_at(kk, n);
                const double* u1 = gs.plain_at(kk, 1);
                for (std::size_t c = 0; c < 5; ++c) tv[c] = un[c] - u1[c];
            } else {
                continue;
            }
            any = true;
            s0 += tv[0];
            for (std::size_t mu = 0; mu < 4; ++mu) {
                const double f = t.par(ch.slot2, mu, i2);
                s2[mu] += tv[0] * f;
                s4[mu] += tv[mu + 1];
                for (std::size_t nu = 0; nu < 4; ++nu) o[4 * mu + nu] += f * tv[nu + 1];
            }
        }
        if (!any) continue;
        std::array<double, 16> ol;
        for (std::size_t mu = 0; mu < 4; ++mu)
            for (std::size_t nu = 0; nu < 4; ++nu)
                ol[4 * mu + nu] = s0 * kIdentityParams[mu] * kIdentityParams[nu] - s2[mu] * kIdentityParams[nu] -
                                  kIdentityParams[mu] * s4[nu] + o[4 * mu + nu];
        const SpinBlock& partner = w(ch.partner, i3);
        hg += reduce(k, pair_from_params(o, ch.self_first), hole(partner), ch.self_first);
        hl += reduce(k, pair_from_params(ol, ch.self_first), partner, ch.self_first);
    }
    const double h = w.grid().spacing();
    return (scale * cons_prefactor(m, s) * h * h * h) * (hg + hl);
}

}  // namespace detail

/// Collision operator split into its two parts; total = diss + cons.
struct CollisionOutput {
    WignerField total;
    WignerField diss;
    WignerField cons;
};

/// 1 / (h k) for k = eps1 - eps2 + eps3 - eps4 in units of h, 0 on resonance.
[[nodiscard]] inline std::vector<double> inverse_gaps(const EnergyGrid& g) {
    const int n = g.size();
    std::vector<double> inv(static_cast<std::size_t>(4 * (n - 1) + 1), 0.0);
    for (int k = -2 * (n - 1); k <= 2 * (n - 1); ++k)
        if (k != 0) inv[static_cast<std::size_t>(k + 2 * (n - 1))] = 1.0 / (g.spacing() * k);
    return inv;
}

[[nodiscard]] inline WignerField diss_operator(const WignerField& w, const Model& model, const CollisionOptions& opt = {}) {
    detail::require_hermitian(w);
    const detail::FieldTables t(w, model.masses());
    const PairBlock vdag = adjoint(model.vop().matrix);
    WignerField out(w.grid());
    const int n = w.size();
    parallel_for(kNumSpecies * n, opt.threads, [&](int task) {
        const Species s = kAllSpecies[static_cast<std::size_t>(task / n)];
        out(s, task % n) = detail::diss_block(w, t, model.vop().matrix, vdag, model.masses(), opt.rule, rate_scale(opt.norm), s,
                                           task % n);
    });
    return out;
}

/// Effective Hamiltonian of every species and shell.
[[nodiscard]] inline WignerField effective_hamiltonian(const WignerField& w, const Model& model, int threads = 1,
                                                       Normalization norm = Normalization::momentum_space) {
    detail::require_hermitian(w);
    const detail::FieldTables t(w, model.masses());
    const PairBlock vdag = adjoint(model.vop().matrix);
    const std::vector<double> inv = inverse_gaps(w.grid());
    const std::array<detail::GapSums, 4> sums{detail::GapSums(t, Species::a, inv), detail::GapSums(t, Species::b, inv),
                                              detail::GapSums(t, Species::c, inv), detail::GapSums(t, Species::d, inv)};
    WignerField out(w.grid());
    const int n = w.size();
    parallel_for(kNumSpecies * n, threads, [&](int task) {
        const Species s = kAllSpecies[static_cast<std::size_t>(task / n)];
        out(s, task % n) =
            detail::heff_block(w, t, model.vop().matrix, vdag, model.masses(), sums, rate_scale(norm), s, task % n);
    });
    return out;
}

/// -i [H_eff, W] per block.
[[nodiscard]] inline WignerField cons_operator(const WignerField& w, const Model& model, int threads = 1,
                                               Normalization norm = Normalization::momentum_space) {
    const WignerField h = effective_hamiltonian(w, model, threads, norm);
    WignerField out(w.grid());
    for (Species s : kAllSpecies)
        for (int j = 0; j < w.size(); ++j) out(s, j) = cplx{0.0, -1.0} * commutator(h(s, j), w(s, j));
    return out;
}

[[nodiscard]] inline CollisionOutput collision(const WignerField& w, const Model& model, const CollisionOptions& opt = {}) {
    CollisionOutput r{WignerField(w.grid()), diss_operator(w, model, opt), WignerField(w.grid())};
    if (opt.include_cons) r.cons = cons_operator(w, model, opt.threads, opt.norm);
    r.total = r.diss;
    r.total.axpy(1.0, r.cons);
    return r;
}

/// Right-hand side dW/dt.
[[nodiscard]] inline WignerField rhs(const WignerField& w, const Model& model, const CollisionOptions& opt = {}) {
    if (!opt.include_cons) return diss_operator(w, model, opt);
    return collision(w, model, opt).total;
}

}  // namespace spinboltz
