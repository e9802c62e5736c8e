#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reebmm {

/// Malformed input text. Carries the 1-based line number of the offending line
/// (0 when the error is not tied to a line, e.g. a truncated stream).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An input exceeded one of the desk-scale size limits of an exact algorithm.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace reebmm
