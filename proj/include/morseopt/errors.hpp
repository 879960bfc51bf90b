#ifndef MORSEOPT_ERRORS_HPP
#define MORSEOPT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morseopt {

// Base of all toolkit errors. `code()` is a stable machine-readable tag
// that the CLI forwards into reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error("parse_error", message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& message)
        : Error("dimension_mismatch", message) {}
};

// Hard stop on runaway computations (pair queue, coefficient bit growth).
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(const std::string& message)
        : Error("resource_limit", message) {}
};

class PositiveDimensionalError : public Error {
public:
    explicit PositiveDimensionalError(const std::string& message)
        : Error("positive_dimensional", message) {}
};

// Raised when a result violates an invariant that should be impossible,
// e.g. more variety points than the quotient dimension.
class InternalConsistencyError : public Error {
public:
    explicit InternalConsistencyError(const std::string& message)
        : Error("internal_consistency", message) {}
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& message) : Error("solver_failure", message) {}
};

}  // namespace morseopt

#endif
