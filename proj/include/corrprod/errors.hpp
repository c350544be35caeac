#pragma once

#include <stdexcept>
#include <string>

namespace corrprod {

// Every failure raised by the library derives from Error so callers can
// catch one type; the subclasses let tests and the CLI tell them apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (x <= 0 for K, rho = +-1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Gamma-type pole: non-positive integer argument.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Series cap or quadrature refinement budget exhausted before tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Result not representable as a finite double.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Caller violated an operation precondition (wrong parameter case etc).
class PreconditionError : public Error {
public:
    using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);
[[noreturn]] void throw_convergence(const std::string& what);
[[noreturn]] void throw_precondition(const std::string& what);

} // namespace corrprod
