#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lasso {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: unknown letters, empty loops, bounds out of range.
class InputError : public Error {
public:
    using Error::Error;
};

/// Syntax error in one of the textual formats (LTL, HOA, QDIMACS, words).
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : InputError(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A precondition of an operation does not hold (e.g. nondeterministic input
/// to an operation that requires a deterministic automaton).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A configured search or expansion limit was exceeded.
class ResourceLimit : public Error {
public:
    ResourceLimit(const std::string& what, std::size_t required)
        : Error(what), required_(required) {}

    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

/// The external solver could not be run or produced unusable output.
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace lasso
