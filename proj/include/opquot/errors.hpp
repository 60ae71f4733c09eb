#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opquot {

enum class ErrorKind {
    DimensionMismatch,
    NonFinite,
    ConvergenceFailure,
    NotHermitian,
    NotPositiveSemidefinite,
    RangeInclusionViolated,
    KernelInclusionViolated,
    RangesNotEqual,
    KernelsNotEqual,
    OutOfDomain,
    DenominatorMismatch,
    ReverseOrderConditionViolated,
    InvalidWitness,
    SimplificationConditionViolated,
    InvalidSpec,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for every failure raised by the library. `residual()` carries the
/// measured violation for precondition failures (zero when not applicable).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, double residual = 0.0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), residual_(residual) {}

    ErrorKind kind() const noexcept { return kind_; }
    double residual() const noexcept { return residual_; }

    /// True for the errors that report a violated mathematical precondition.
    bool is_precondition() const noexcept;

private:
    ErrorKind kind_;
    double residual_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& msg)
        : Error(ErrorKind::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace opquot
