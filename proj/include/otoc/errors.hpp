#pragma once

#include <stdexcept>
#include <string>

namespace otoc {

// Size guards (qubit counts, matrix dimensions). The message names the limit.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// Bad call arguments: out-of-range targets, dimension mismatches, invalid values.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An internal check failed (e.g. imaginary residual on a Hermitian expectation).
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate ground state where a unique one is required.
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lookup of a value that is not in a shipped table.
struct NotFoundError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Numerical failure (solver did not meet its residual contract, non-finite output).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid run configuration; carries an optional source line for file diagnostics.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace otoc
