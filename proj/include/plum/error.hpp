#pragma once

#include <stdexcept>
#include <string>

namespace plum {

/// Bad or inconsistent user input: unreadable files, malformed CSV, invalid
/// configuration values.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The data or configuration admit no valid model, e.g. no unsupported
/// activity above background or an empty prior support.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV parse failure carrying the offending 1-based line number.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace plum
