#pragma once

#include <stdexcept>
#include <string>

namespace nmopso {

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A value violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Terrain query outside the sampled footprint.
class OutOfBoundsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nmopso
