// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spinalg.hpp
 * @brief Fixed-size complex linear algebra on one spin (2x2) and on a pair of
 * spins (4x4).
 *
 * Pair basis order is |up up>, |up down>, |down up>, |down down>, i.e. the pair
 * index of (i, k) is 2*i + k with up = 0.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "spinboltz/error.hpp"

namespace spinboltz {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major.
struct SpinBlock {
    std::array<cplx, 4> e{};

    constexpr cplx& operator()(int i, int j) noexcept { return e[static_cast<std::size_t>(2 * i + j)]; }
    constexpr const cplx& operator()(int i, int j) const noexcept { return e[static_cast<std::size_t>(2 * i + j)]; }

    static constexpr SpinBlock zero() noexcept { return {}; }
    static constexpr SpinBlock identity() noexcept { return {{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}}}; }
    static constexpr SpinBlock diag(double a, double d) noexcept { return {{cplx{a}, cplx{}, cplx{}, cplx{d}}}; }
    static constexpr SpinBlock real(double m00, double m01, double m10, double m11) noexcept {
        return {{cplx{m00}, cplx{m01}, cplx{m10}, cplx{m11}}};
    }
    /// Hermitian block from its four real parameters.
    static constexpr SpinBlock hermitian(double w00, double w11, double re01, double im01) noexcept {
        return {{cplx{w00}, cplx{re01, im01}, cplx{re01, -im01}, cplx{w11}}};
    }

    SpinBlock& operator+=(const SpinBlock& o) noexcept {
        for (std::size_t i = 0; i < 4; ++i) e[i] += o.e[i];
        return *this;
    }
    SpinBlock& operator-=(const SpinBlock& o) noexcept {
        for (std::size_t i = 0; i < 4; ++i) e[i] -= o.e[i];
        return *this;
    }
    SpinBlock& operator*=(cplx s) noexcept {
        for (auto& x : e) x *= s;
        return *this;
    }
    SpinBlock& operator*=(double s) noexcept {
        for (auto& x : e) x *= s;
        return *this;
    }
};

inline SpinBlock operator+(SpinBlock a, const SpinBlock& b) noexcept { return a += b; }
inline SpinBlock operator-(SpinBlock a, const SpinBlock& b) noexcept { return a -= b; }
inline SpinBlock operator*(SpinBlock a, double s) noexcept { return a *= s; }
inline SpinBlock operator*(double s, SpinBlock a) noexcept { return a *= s; }
inline SpinBlock operator*(cplx s, SpinBlock a) noexcept { return a *= s; }

inline SpinBlock operator*(const SpinBlock& a, const SpinBlock& b) noexcept {
    SpinBlock r;
    r(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
    r(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
    r(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
    r(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
    return r;
}

[[nodiscard]] inline SpinBlock adjoint(const SpinBlock& a) noexcept {
    return {{std::conj(a(0, 0)), std::conj(a(1, 0)), std::conj(a(0, 1)), std::conj(a(1, 1))}};
}

[[nodiscard]] inline cplx trace(const SpinBlock& a) noexcept { return a(0, 0) + a(1, 1); }

[[nodiscard]] inline cplx det(const SpinBlock& a) noexcept { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

/// 1 - a, the hole counterpart of an occupation block.
[[nodiscard]] inline SpinBlock hole(const SpinBlock& a) noexcept { return SpinBlock::identity() - a; }

[[nodiscard]] inline SpinBlock anticommutator(const SpinBlock& a, const SpinBlock& b) noexcept { return a * b + b * a; }

[[nodiscard]] inline SpinBlock commutator(const SpinBlock& a, const SpinBlock& b) noexcept { return a * b - b * a; }

[[nodiscard]] inline double max_abs(const SpinBlock& a) noexcept {
    double m = 0.0;
    for (const auto& x : a.e) m = std::max(m, std::abs(x));
    return m;
}

/// Largest deviation |a(i,j) - conj(a(j,i))|.
[[nodiscard]] inline double hermiticity_defect(const SpinBlock& a) noexcept {
    return std::max({std::abs(a(0, 0).imag()), std::abs(a(1, 1).imag()), std::abs(a(0, 1) - std::conj(a(1, 0)))});
}

[[nodiscard]] inline SpinBlock hermitian_part(const SpinBlock& m) noexcept {
    SpinBlock r;
    r(0, 0) = m(0, 0).real();
    r(1, 1) = m(1, 1).real();
    r(0, 1) = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

namespace pauli {
inline constexpr SpinBlock x = SpinBlock::real(0.0, 1.0, 1.0, 0.0);
inline constexpr SpinBlock y{{cplx{}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{}}};
inline constexpr SpinBlock z = SpinBlock::diag(1.0, -1.0);
}  // namespace pauli

/// Spectral decomposition m = lambda[0] * proj[0] + lambda[1] * proj[1], lambda[0] <= lambda[1].
struct Spectrum {
    std::array<double, 2> lambda{};
    std::array<SpinBlock, 2> proj{};
};

inline constexpr double kHermitianTol = 1e-12;

/**
 * Closed-form spectrum of a Hermitian 2x2 block. Writing m = c + r n.sigma, the
 * eigenvalues are c -/+ r and the projectors (1 -/+ n.sigma)/2. A degenerate block
 * returns the coordinate projectors.
 */
[[nodiscard]] inline Spectrum eig_hermitian(const SpinBlock& m) {
    if (hermiticity_defect(m) > kHermitianTol) {
        throw ValidationError("eig_hermitian: block is not Hermitian (defect " + std::to_string(hermiticity_defect(m)) + ")");
    }
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double c = 0.5 * (a + d);
    const double z = 0.5 * (a - d);
    const double x = 0.5 * (m(0, 1).real() + m(1, 0).real());
    const double y = 0.5 * (m(1, 0).imag() - m(0, 1).imag());
    const double r = std::hypot(z, std::hypot(x, y));
    Spectrum s;
    if (r == 0.0) {
        s.lambda = {c, c};
        s.proj = {SpinBlock::diag(1.0, 0.0), SpinBlock::diag(0.0, 1.0)};
        return s;
    }
    const double nx = x / r, ny = y / r, nz = z / r;
    // n.sigma = [[nz, nx - i ny], [nx + i ny, -nz]]
    const SpinBlock ns{{cplx{nz}, cplx{nx, -ny}, cplx{nx, ny}, cplx{-nz}}};
    s.lambda = {c - r, c + r};
    s.proj[0] = 0.5 * (SpinBlock::identity() - ns);
    s.proj[1] = 0.5 * (SpinBlock::identity() + ns);
    return s;
}

/// Eigenvalues only, ascending.
[[nodiscard]] inline std::array<double, 2> eigenvalues(const SpinBlock& m) noexcept {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double c = 0.5 * (a + d);
    const double r = std::hypot(0.5 * (a - d), std::abs(0.5 * (m(0, 1) + std::conj(m(1, 0)))));
    return {c - r, c + r};
}

/// Unitary whose columns are the eigenvectors of a Hermitian block (ascending eigenvalues).
[[nodiscard]] inline SpinBlock eigenbasis(const SpinBlock& m) {
    const Spectrum s = eig_hermitian(m);
    SpinBlock u;
    for (int k = 0; k < 2; ++k) {
        const SpinBlock& p = s.proj[static_cast<std::size_t>(k)];
        // Column of the projector with the larger diagonal entry, normalized.
        const int j = p(0, 0).real() >= p(1, 1).real() ? 0 : 1;
        const double norm = std::sqrt(p(j, j).real());
        u(0, k) = p(0, j) / norm;
        u(1, k) = p(1, j) / norm;
    }
    return u;
}

[[nodiscard]] inline double unitarity_defect(const SpinBlock& u) noexcept {
    return max_abs(adjoint(u) * u - SpinBlock::identity());
}

/// 4x4 complex matrix on the pair space, row-major.
struct PairBlock {
    std::array<cplx, 16> e{};

    constexpr cplx& operator()(int r, int c) noexcept { return e[static_cast<std::size_t>(4 * r + c)]; }
    constexpr const cplx& operator()(int r, int c) const noexcept { return e[static_cast<std::size_t>(4 * r + c)]; }

    static constexpr PairBlock identity() noexcept {
        PairBlock p;
        for (int i = 0; i < 4; ++i) p(i, i) = 1.0;
        return p;
    }
    /// Swap operator |ik> -> |ki>.
    static constexpr PairBlock swap() noexcept {
        PairBlock p;
        p(0, 0) = 1.0;
        p(1, 2) = 1.0;
        p(2, 1) = 1.0;
        p(3, 3) = 1.0;
        return p;
    }

    PairBlock& operator+=(const PairBlock& o) noexcept {
        for (std::size_t i = 0; i < 16; ++i) e[i] += o.e[i];
        return *this;
    }
    PairBlock& operator-=(const PairBlock& o) noexcept {
        for (std::size_t i = 0; i < 16; ++i) e[i] -= o.e[i];
        return *this;
    }
    PairBlock& operator*=(cplx s) noexcept {
        for (auto& x : e) x *= s;
        return *this;
    }
};

inline PairBlock operator+(PairBlock a, const PairBlock& b) noexcept { return a += b; }
inline PairBlock operator-(PairBlock a, const PairBlock& b) noexcept { return a -= b; }
inline PairBlock operator*(cplx s, PairBlock a) noexcept { return a *= s; }

inline PairBlock operator*(const PairBlock& a, const PairBlock& b) noexcept {
    PairBlock r;
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a(i, k);
            for (int j = 0; j < 4; ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

[[nodiscard]] inline PairBlock adjoint(const PairBlock& a) noexcept {
    PairBlock r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

[[nodiscard]] inline cplx trace(const PairBlock& a) noexcept { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

[[nodiscard]] inline double max_abs(const PairBlock& a) noexcept {
    double m = 0.0;
    for (const auto& x : a.e) m = std::max(m, std::abs(x));
    return m;
}

/// entry((i,k),(j,l)) = a(i,j) * b(k,l).
[[nodiscard]] inline PairBlock tensor(const SpinBlock& a, const SpinBlock& b) noexcept {
    PairBlock r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

enum class Factor { first, second };

/// Trace over one tensor factor. partial_trace(first, m)(k,l) = sum_i m((i,k),(i,l)).
[[nodiscard]] inline SpinBlock partial_trace(Factor traced, const PairBlock& m) noexcept {
    SpinBlock r;
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            for (int i = 0; i < 2; ++i) {
                r(p, q) += traced == Factor::first ? m(2 * i + p, 2 * i + q) : m(2 * p + i, 2 * q + i);
            }
        }
    }
    return r;
}

}  // namespace spinboltz
