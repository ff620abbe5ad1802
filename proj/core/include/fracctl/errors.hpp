#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracctl {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x > 0 for the
/// Mittag-Leffler kernel, beta <= 0 for the resolvent, y outside [0, L]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mode or node index out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Mismatched vector, grid or sample lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A series evaluation did not reach its tolerance.
class EvaluationFailure : public Error {
public:
    EvaluationFailure(const std::string& what, double error_estimate)
        : Error(what), error_estimate_(error_estimate) {}

    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// Argument outside the range where an oracle can certify its digits.
class OracleOutOfRange : public Error {
public:
    using Error::Error;
};

/// Picard iterates became non-finite.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Invariant violation in user-supplied configuration; names the field.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed configuration text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace fracctl
