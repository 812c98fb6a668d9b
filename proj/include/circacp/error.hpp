#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circacp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based; 0 when no line applies.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Precondition on a numeric routine does not hold (too few samples, wrong epoch length, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The data carry no information about the quantity being estimated
/// (flat cosinor fit, zero-variance Gamma sample, no complete cycle).
class Degenerate : public Error {
public:
    using Error::Error;
};

}  // namespace circacp
