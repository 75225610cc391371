#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace feelab {

enum class ErrorKind {
    domain,
    range,
    no_bracket,
    non_convergence,
    non_finite,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error the library raises. The kind lets front ends map
/// failures to exit codes without a cascade of catch clauses.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// A computed quantity left its admissible range (fee factor >= 1, reserve <= 0).
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

class NoBracket : public Error {
public:
    explicit NoBracket(const std::string& what) : Error(ErrorKind::no_bracket, what) {}
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what) : Error(ErrorKind::non_convergence, what) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& what) : Error(ErrorKind::non_finite, what) {}
};

}  // namespace feelab
