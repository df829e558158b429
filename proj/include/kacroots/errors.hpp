#pragma once
#include <stdexcept>
#include <string>

namespace kacroots {

/// Thrown when an operation requires a not-identically-zero polynomial.
struct ZeroPolynomialError : std::domain_error {
    explicit ZeroPolynomialError(const std::string& what = "operation undefined for the zero polynomial")
        : std::domain_error(what) {}
};

/// Thrown for truncation degrees outside the valid range.
struct BadDegreeError : std::invalid_argument {
    explicit BadDegreeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an evaluator is queried outside its mathematical domain.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Thrown when adaptive quadrature cannot reach the requested tolerance.
/// Carries the best value found and its honest error estimate.
struct ToleranceNotMetError : std::runtime_error {
    double value;
    double err_est;
    ToleranceNotMetError(const std::string& what, double v, double e)
        : std::runtime_error(what), value(v), err_est(e) {}
};

/// Internal invariant violation (e.g. bisection depth cap exceeded).
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace kacroots
