// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace prox {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    /// Short machine-readable category, e.g. "precondition" or "convergence".
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// An input violates the documented precondition of an operation.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

/// An iterative procedure failed to reach its tolerance within its budget.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error("convergence", what) {}
};

/// A root or eigenvalue bracket could not be established.
class BracketError : public Error {
public:
    explicit BracketError(const std::string& what) : Error("bracket", what) {}
};

/// The computation is outside the regime where the requested formula applies.
class RegimeError : public Error {
public:
    explicit RegimeError(const std::string& what) : Error("regime", what) {}
};

/// A computed result contradicts an invariant the theory guarantees.
class AnomalyError : public Error {
public:
    explicit AnomalyError(const std::string& what) : Error("anomaly", what) {}
};

} // namespace prox
