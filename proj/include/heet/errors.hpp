#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heet {

// Malformed input text (CSV, JSON, JSON-lines). Carries the 1-based line
// number when one is known, 0 otherwise.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a domain invariant or precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace heet
