#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kstab {

/// Bad user input: malformed polynomials, inhomogeneous generators, schema problems.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Polynomial syntax error; `position` is a 0-based byte offset into the input.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t position)
        : ValidationError(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Hilbert/weight data did not stabilize below the degree cap.
class UnstableHilbertData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric routine could not produce a trustworthy value (singular Gram
/// matrix, non-finite samples, indeterminate points).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kstab
