#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perpconj {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          name_(name), offset_(offset) {}

    const std::string& name() const noexcept { return name_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

/// Evaluation left the real domain (sqrt of negative, log of non-positive,
/// division by zero, overflow to a non-finite value).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid definition (dimension mismatch, duplicate names, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& message, double pivot) : Error(message), pivot_(pivot) {}

    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& message, std::size_t iterations, double last_residual)
        : Error(message), iterations_(iterations), last_residual_(last_residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t iterations_;
    double last_residual_;
};

/// h_inverse(h(x)) != x on sampled domain points.
class InverseMismatch : public Error {
public:
    InverseMismatch(const std::string& message, double worst_residual)
        : Error(message), worst_residual_(worst_residual) {}

    double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

}  // namespace perpconj
