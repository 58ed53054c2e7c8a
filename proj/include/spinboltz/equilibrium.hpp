// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file equilibrium.hpp
 * @brief Fermi-Dirac fields and the fit of (beta, chemical potentials) to the
 * conserved quantities of a given state.
 *
 * Chemical potentials are mu^alpha_sigma = nu^alpha + c^alpha s_sigma with
 * s = +1, -1 for the two basis states and nu^d = nu^a - nu^b + nu^c.
 * General: c = 0. DiagonalPattern and IdentityFamily: one common c.
 * ZeroOuterFrame: c^a = c^c, c^b = c^d.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "spinboltz/collision.hpp"
#include "spinboltz/conservation.hpp"
#include "spinboltz/error.hpp"
#include "spinboltz/grid.hpp"
#include "spinboltz/model.hpp"

namespace spinboltz {

struct EquilibriumParams {
    StructureClass variant = StructureClass::general;
    double beta = 1.0;
    std::array<double, 3> nu{};  ///< nu^a, nu^b, nu^c
    double c_ac = 0.0;           ///< spin shift of a and c (the common shift outside ZeroOuterFrame)
    double c_bd = 0.0;           ///< spin shift of b and d (ZeroOuterFrame only)
    /// Per-species spin basis; column sigma is |alpha; sigma>.
    std::array<SpinBlock, 4> basis{SpinBlock::identity(), SpinBlock::identity(), SpinBlock::identity(),
                                   SpinBlock::identity()};

    [[nodiscard]] double nu_d() const noexcept { return nu[0] - nu[1] + nu[2]; }
    [[nodiscard]] double nu_of(Species s) const noexcept {
        return s == Species::d ? nu_d() : nu[static_cast<std::size_t>(index(s))];
    }
};

/// Number of free parameters of each class.
[[nodiscard]] constexpr int parameter_count(StructureClass c) noexcept {
    switch (c) {
        case StructureClass::general: return 4;
        case StructureClass::diagonal_pattern: return 5;
        case StructureClass::identity_family: return 5;
        case StructureClass::zero_outer_frame: return 6;
    }
    return 0;
}

using ChemicalPotentials = std::array<std::array<double, 2>, 4>;

namespace detail {

[[nodiscard]] inline ChemicalPotentials raw_potentials(const EquilibriumParams& p) {
    ChemicalPotentials mu{};
    for (Species s : kAllSpecies) {
        double c = 0.0;
        if (p.variant == StructureClass::zero_outer_frame)
            c = (s == Species::a || s == Species::c) ? p.c_ac : p.c_bd;
        else if (p.variant != StructureClass::general)
            c = p.c_ac;
        const auto si = static_cast<std::size_t>(index(s));
        mu[si][0] = p.nu_of(s) + c;
        mu[si][1] = p.nu_of(s) - c;
    }
    return mu;
}

}  // namespace detail

/**
 * Chemical-potential table. With `vop_in_basis` (the operator expressed in
 * the parameters' spin bases) every configuration with a nonzero amplitude
 * must satisfy mu^a_1 - mu^b_2 + mu^c_3 - mu^d_4 = 0.
 */
[[nodiscard]] inline ChemicalPotentials chemical_potentials(const EquilibriumParams& p,
                                                            const PairBlock* vop_in_basis = nullptr, double tol = 1e-12) {
    const ChemicalPotentials mu = detail::raw_potentials(p);
    if (vop_in_basis) {
        const double scale = max_abs(*vop_in_basis);
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                for (int s3 = 0; s3 < 2; ++s3)
                    for (int s4 = 0; s4 < 2; ++s4) {
                        if (std::abs((*vop_in_basis)(2 * s1 + s3, 2 * s2 + s4)) <= 1e-12 * scale) continue;
                        const double f = mu[0][static_cast<std::size_t>(s1)] - mu[1][static_cast<std::size_t>(s2)] +
                                         mu[2][static_cast<std::size_t>(s3)] - mu[3][static_cast<std::size_t>(s4)];
                        if (std::abs(f) > tol * std::max(1.0, std::abs(mu[0][0])))
                            throw ValidationError("chemical potentials violate the detailed-balance condition");
                    }
    }
    return mu;
}

/// The operator written in the per-species bases of p: (U_a (x) U_c)^dagger vop (U_b (x) U_d).
[[nodiscard]] inline PairBlock vop_in_basis(const VOp& vop, const EquilibriumParams& p) {
    return adjoint(tensor(p.basis[0], p.basis[2])) * vop.matrix * tensor(p.basis[1], p.basis[3]);
}

/// (e^x + 1)^-1 without overflow.
[[nodiscard]] inline double fermi_function(double x) noexcept {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(x) + 1.0);
}

[[nodiscard]] inline WignerField fermi_dirac(const EquilibriumParams& p, const EnergyGrid& grid) {
    if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw ValidationError("fermi_dirac: beta must be positive");
    const ChemicalPotentials mu = detail::raw_potentials(p);
    WignerField w(grid);
    for (Species s : kAllSpecies) {
        const auto si = static_cast<std::size_t>(index(s));
        const SpinBlock& u = p.basis[si];
        for (int j = 0; j < grid.size(); ++j) {
            const double e = grid.energy(j);
            const SpinBlock d = SpinBlock::diag(fermi_function(p.beta * (e - mu[si][0])), fermi_function(p.beta * (e - mu[si][1])));
            w(s, j) = hermitian_part(u * d * adjoint(u));
        }
    }
    return w;
}

struct FitOptions {
    double tolerance = 1e-10;  ///< on the relative residual
    int max_iterations = 200;
    int restarts = 10;
    unsigned seed = 12345;
};

struct FitResult {
    EquilibriumParams params;
    std::vector<Functional> names;
    std::vector<double> target;
    std::vector<double> achieved;
    double residual = 0.0;  ///< max |achieved - target| / max(|target|_inf, 1)
    int iterations = 0;
    int attempts = 0;
};

namespace detail {

/// Conserved functionals of a Fermi-Dirac state, evaluated in its own spin frame.
class FermiDiracMoments {
public:
    FermiDiracMoments(const EnergyGrid& g, const Masses& m, StructureClass variant)
        : grid_(g), variant_(variant), names_(conserved_functionals(variant)) {
        for (Species s : kAllSpecies) {
            auto& ws = weights_[static_cast<std::size_t>(index(s))];
            for (int j = 0; j < g.size(); ++j) ws.push_back(moment_weight(g, m[s], j));
        }
    }

    [[nodiscard]] const std::vector<Functional>& names() const noexcept { return names_; }

    [[nodiscard]] EquilibriumParams unpack(const Eigen::VectorXd& x, const EquilibriumParams& proto) const {
        EquilibriumParams p = proto;
        p.variant = variant_;
        p.beta = x[0];
        p.nu = {x[1], x[2], x[3]};
        p.c_ac = x.size() > 4 ? x[4] : 0.0;
        p.c_bd = x.size() > 5 ? x[5] : 0.0;
        return p;
    }

    [[nodiscard]] Eigen::VectorXd values(const EquilibriumParams& p) const {
        const ChemicalPotentials mu = raw_potentials(p);
        std::array<std::array<double, 2>, 4> n{};
        double energy = 0.0;
        for (std::size_t s = 0; s < 4; ++s)
            for (std::size_t sig = 0; sig < 2; ++sig)
                for (int j = 0; j < grid_.size(); ++j) {
                    const double e = grid_.energy(j);
                    const double f = weights_[s][static_cast<std::size_t>(j)] * fermi_function(p.beta * (e - mu[s][sig]));
                    n[s][sig] += f;
                    energy += e * f;
                }
        auto tr = [&](std::size_t s) { return n[s][0] + n[s][1]; };
        Eigen::VectorXd v(static_cast<Eigen::Index>(names_.size()));
        for (std::size_t i = 0; i < names_.size(); ++i) {
            double x = 0.0;
            switch (names_[i]) {
                case Functional::total_trace: x = tr(0) + tr(1) + tr(2) + tr(3); break;
                case Functional::trace_ab: x = tr(0) + tr(1); break;
                case Functional::trace_ad: x = tr(0) + tr(3); break;
                case Functional::energy: x = energy; break;
                case Functional::rho_up_up: x = n[0][0] + n[1][0] + n[2][0] + n[3][0]; break;
                case Functional::rho_down_down: x = n[0][1] + n[1][1] + n[2][1] + n[3][1]; break;
                case Functional::rho_re_up_down:
                case Functional::rho_im_up_down: x = 0.0; break;
                case Functional::sigma_z_ac: x = n[0][0] - n[0][1] + n[2][0] - n[2][1]; break;
            }
            v[static_cast<Eigen::Index>(i)] = x;
        }
        return v;
    }

private:
    EnergyGrid grid_;
    StructureClass variant_;
    std::vector<Functional> names_;
    std::array<std::vector<double>, 4> weights_;
};

}  // namespace detail

/**
 * Spin frame in which the equilibrium is diagonal: the class gauge if any,
 * and for the identity family additionally the eigenbasis of the total spin
 * density of `w` in that frame.
 */
[[nodiscard]] inline std::array<SpinBlock, 4> equilibrium_frame(const WignerField& w, const Masses& m,
                                                                const Classification& c) {
    std::array<SpinBlock, 4> frame;
    for (Species s : kAllSpecies) frame[static_cast<std::size_t>(index(s))] = c.gauge ? (*c.gauge)[s] : SpinBlock::identity();
    if (c.variant == StructureClass::identity_family) {
        const WignerField wf = c.gauge ? apply_gauge(c.gauge->inverse(), w) : w;
        const SpinBlock e = eigenbasis(hermitian_part(total_density(wf, m)));
        for (auto& f : frame) f = f * e;
    }
    return frame;
}

/**
 * Damped Gauss-Newton fit of the class parameters so that the Fermi-Dirac
 * state on the grid of `w0` reproduces the conserved quantities of `w0`.
 * Jacobian by central differences. Throws FitError if no start converges.
 */
[[nodiscard]] inline FitResult fit_equilibrium(const WignerField& w0, const Masses& masses, const Classification& cls,
                                               const FitOptions& opt = {}) {
    EquilibriumParams proto;
    proto.variant = cls.variant;
    proto.basis = equilibrium_frame(w0, masses, cls);

    // targets in the equilibrium frame
    GaugeRotation to_frame;
    for (std::size_t i = 0; i < 4; ++i) to_frame.u[i] = adjoint(proto.basis[i]);
    const Moments mom(apply_gauge(to_frame, w0), masses);
    const detail::FermiDiracMoments model(w0.grid(), masses, cls.variant);
    const auto& names = model.names();
    Eigen::VectorXd target(static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < names.size(); ++i) target[static_cast<Eigen::Index>(i)] = mom.value(names[i]);
    const double scale = std::max(target.cwiseAbs().maxCoeff(), 1.0);

    const int np = parameter_count(cls.variant);
    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return (model.values(model.unpack(x, proto)) - target) / scale;
    };

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> log_beta(std::log(0.1), std::log(10.0));
    FitResult best;
    best.residual = std::numeric_limits<double>::infinity();
    int total_iterations = 0;

    for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(np);
        x[0] = attempt == 0 ? 1.0 : std::exp(log_beta(rng));
        Eigen::VectorXd r = residual(x);
        double norm = r.norm();
        for (int it = 0; it < opt.max_iterations && r.cwiseAbs().maxCoeff() > opt.tolerance; ++it) {
            ++total_iterations;
            Eigen::MatrixXd jac(r.size(), np);
            for (int k = 0; k < np; ++k) {
                const double step = 1e-6 * std::max(std::abs(x[k]), 1.0);
                Eigen::VectorXd xp = x, xm = x;
                xp[k] += step;
                xm[k] -= step;
                if (k == 0 && xm[0] <= 0.0) xm[0] = x[0];
                jac.col(k) = (residual(xp) - residual(xm)) / (xp[k] - xm[k]);
            }
            const Eigen::VectorXd dx = jac.completeOrthogonalDecomposition().solve(-r);
            double lambda = 1.0;
            bool improved = false;
            for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
                Eigen::VectorXd xn = x + lambda * dx;
                if (!(xn[0] > 0.0)) continue;
                const Eigen::VectorXd rn = residual(xn);
                if (rn.allFinite() && rn.norm() < norm) {
                    x = xn;
                    r = rn;
                    norm = rn.norm();
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        const double res = r.cwiseAbs().maxCoeff();
        if (res < best.residual) {
            best.params = model.unpack(x, proto);
            best.residual = res;
        }
        if (res <= opt.tolerance) {
            best.attempts = attempt + 1;
            break;
        }
        best.attempts = attempt + 1;
    }
    best.iterations = total_iterations;
    best.names = names;
    best.target.assign(target.data(), target.data() + target.size());
    const Eigen::VectorXd ach = model.values(best.params);
    best.achieved.assign(ach.data(), ach.data() + ach.size());
    if (!(best.residual <= opt.tolerance))
        throw FitError("equilibrium fit did not converge (best relative residual " + std::to_string(best.residual) + ")",
                       best.residual);
    return best;
}

/// Largest block max-norm of the collision operator at `weq`.
[[nodiscard]] inline double stationarity_residual(const WignerField& weq, const Model& model, const CollisionOptions& opt = {}) {
    const WignerField c = rhs(weq, model, opt);
    double m = 0.0;
    for (const auto& b : c.blocks()) m = std::max(m, max_abs(b));
    return m;
}

}  // namespace spinboltz
