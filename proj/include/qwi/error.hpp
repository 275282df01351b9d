#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwi {

// Malformed or inconsistent potential description.
class potential_error : public std::runtime_error {
public:
    explicit potential_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    // 1-based line of the offending input, 0 when not parsed from text.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// The requested physics is not defined for the inputs (no propagating
// channel, resonant delta-prime strength, non-normalizable state, ...).
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qwi
