#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pqm {

/// A precondition on the arguments was violated (bad index, shape mismatch, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request needs more qubits (memory) than the configured budget allows.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, int required, int cap)
        : std::runtime_error(what), required_(required), cap_(cap) {}

    int required() const noexcept { return required_; }
    int cap() const noexcept { return cap_; }

private:
    int required_;
    int cap_;
};

/// Malformed input file; row and column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t row, std::size_t column)
        : std::runtime_error(format(msg, row, column)), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& msg, std::size_t row, std::size_t column) {
        return "line " + std::to_string(row) + ", column " + std::to_string(column) + ": " + msg;
    }

    std::size_t row_;
    std::size_t column_;
};

}  // namespace pqm
