// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace spade {

/// Coarse error category used by the CLI to pick an exit code.
enum class ErrorCategory { kParameter, kNumeric, kIo };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

/// Invalid argument, range, budget, or shape supplied by the caller.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& message)
        : Error(ErrorCategory::kParameter, message) {}
};

/// Requested more eigenpairs than the pencil's rank supports.
class RankError : public ParameterError {
public:
    explicit RankError(const std::string& message) : ParameterError(message) {}
};

/// Structurally invalid input (non-symmetric matrix, broken CSR, ...).
class ValidationError : public ParameterError {
public:
    explicit ValidationError(const std::string& message) : ParameterError(message) {}
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& message)
        : Error(ErrorCategory::kNumeric, message) {}
};

/// null(L_Y) is not contained in null(L_X); carries the offending component.
class ContainmentError : public Error {
public:
    ContainmentError(int component, const std::string& message)
        : Error(ErrorCategory::kNumeric, message), component_(component) {}

    int component() const { return component_; }

private:
    int component_;
};

/// Numerical breakdown outside an iterative loop (negative eigenvalue, NaN, ...).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message)
        : Error(ErrorCategory::kNumeric, message) {}
};

/// Training loss became non-finite; carries the epoch where it happened.
class DivergenceError : public NumericalError {
public:
    DivergenceError(int epoch, const std::string& message)
        : NumericalError(message), epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCategory::kIo, message) {}
};

/// Non-fatal diagnostics go to stderr so machine-readable outputs stay clean.
inline void warn(const std::string& message) {
    std::fprintf(stderr, "[warn] %s\n", message.c_str());
}

}  // namespace spade
