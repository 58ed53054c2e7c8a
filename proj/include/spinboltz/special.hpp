// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file special.hpp
 * @brief Special functions used by the analytic initial states.
 *
 * erf, erfc, atan and Gamma come from <cmath>, Si and Ai from GSL. The
 * Riemann zeta function at complex argument is evaluated from the Dirichlet
 * eta series with Borwein's acceleration, valid for Re(s) >= 0, s != 1.
 */

#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_airy.h>
#include <gsl/gsl_sf_expint.h>

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "spinboltz/error.hpp"

namespace spinboltz::special {

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }
inline double atan(double x) { return std::atan(x); }

inline double gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw ValidationError("gamma: pole at non-positive integer");
    return std::tgamma(x);
}

namespace detail {

inline double checked(int status, const gsl_sf_result& r, const char* name) {
    if (status != GSL_SUCCESS && status != GSL_EUNDRFLW) throw ValidationError(std::string(name) + ": " + gsl_strerror(status));
    return status == GSL_EUNDRFLW ? 0.0 : r.val;
}

}  // namespace detail

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
inline double si(double x) {
    gsl_sf_result r;
    return detail::checked(gsl_sf_Si_e(x, &r), r, "Si");
}

/// Airy function Ai(x).
inline double airy_ai(double x) {
    gsl_sf_result r;
    return detail::checked(gsl_sf_airy_Ai_e(x, GSL_PREC_DOUBLE, &r), r, "Ai");
}

/// Riemann zeta at complex s, Re(s) >= 0, |s - 1| >= 1e-6.
inline std::complex<double> zeta(std::complex<double> s) {
    using C = std::complex<double>;
    if (s.real() < 0.0) throw ValidationError("zeta: Re(s) must be non-negative");
    if (std::abs(s - 1.0) < 1e-6) throw ValidationError("zeta: argument too close to the pole at s = 1");
    const C denom = 1.0 - std::pow(C(2.0), 1.0 - s);
    if (std::abs(denom) < 1e-12) throw ValidationError("zeta: eta-to-zeta factor vanishes");

    // Borwein: d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    constexpr int n = 60;
    std::array<double, n + 1> d{};
    double term = 1.0 / n;  // i = 0 term divided by n
    double sum = term;
    d[0] = n * sum;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
        sum += term;
        d[static_cast<std::size_t>(i)] = n * sum;
    }
    C eta{};
    for (int k = 0; k < n; ++k) {
        const C t = (d[static_cast<std::size_t>(k)] - d[n]) * std::exp(-s * std::log(static_cast<double>(k + 1)));
        eta += (k % 2 == 0) ? t : -t;
    }
    eta = -eta / d[n];
    return eta / denom;
}

}  // namespace spinboltz::special
