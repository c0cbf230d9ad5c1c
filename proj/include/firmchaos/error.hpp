#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace firmchaos {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors caused by caller-supplied values, files or flags. The CLI maps
/// this family to exit code 2; everything else is a runtime failure (1).
class InputError : public Error {
public:
    using Error::Error;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// Malformed text input, with the 1-based line that triggered it.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownTheoryError : public ParseError {
public:
    using ParseError::ParseError;
};

class NonMonotonicDateError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A firm evaluation was given a channel set that is not exactly one per theory.
class TheorySetError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateSeriesError : public InputError {
public:
    using InputError::InputError;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A requested period-doubling transition lies outside the swept range.
class BracketError : public Error {
public:
    using Error::Error;
};

class DegenerateSeparationError : public Error {
public:
    using Error::Error;
};

}  // namespace firmchaos
