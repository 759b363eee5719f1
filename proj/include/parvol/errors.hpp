#pragma once

#include <stdexcept>
#include <string>

namespace parvol {

/// A precondition of an operation was violated by the caller.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input points are affinely dependent where full dimension is required.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, int affine_dim)
        : std::runtime_error(what), affine_dim_(affine_dim) {}
    int affine_dimension() const noexcept { return affine_dim_; }

private:
    int affine_dim_;
};

/// A computation would exceed a resource budget (grid cells, memory).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scene or body read from input violates a geometric invariant.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& what, int primitive_index = -1)
        : std::runtime_error(what), index_(primitive_index) {}
    int primitive_index() const noexcept { return index_; }

private:
    int index_;
};

/// Malformed JSON input; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Topology is ambiguous because the radius sits on a critical value.
class AmbiguousTopology : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace parvol
