// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file error.hpp
 * @brief Exception hierarchy. Each category maps to one CLI exit code.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace spinboltz {

enum class ErrorKind { validation = 2, fit = 3, guard = 4, invariant = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

struct FitError : Error {
    FitError(const std::string& what, double best_residual)
        : Error(ErrorKind::fit, what), best_residual(best_residual) {}
    double best_residual;
};

/// Raised when an integrator step leaves the physical eigenvalue window.
struct GuardError : Error {
    GuardError(const std::string& what, int species, int shell, double time, double eigenvalue)
        : Error(ErrorKind::guard, what), species(species), shell(shell), time(time), eigenvalue(eigenvalue) {}
    int species;
    int shell;
    double time;
    double eigenvalue;
};

struct InvariantError : Error {
    explicit InvariantError(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

}  // namespace spinboltz
