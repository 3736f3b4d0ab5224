#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace ndsys {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Length of a scalar tuple does not match the operator tuple it is paired with.
class ArityError : public Error {
   public:
    using Error::Error;
};

class ShapeError : public Error {
   public:
    using Error::Error;
};

/// Exact integer result does not fit the 64-bit range.
class RangeError : public Error {
   public:
    using Error::Error;
};

/// Argument outside the set on which an operation is defined.
class DomainError : public Error {
   public:
    using Error::Error;
};

class PreconditionError : public Error {
   public:
    using Error::Error;
};

class DivergenceError : public Error {
   public:
    using Error::Error;
};

class RankAmbiguityError : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

/// I - zA is numerically singular at the requested point.
class SingularityError : public Error {
   public:
    SingularityError(const std::string& what, double smallest_singular_value)
        : Error(what), smallest_singular_value_(smallest_singular_value) {}

    double smallest_singular_value() const noexcept { return smallest_singular_value_; }

   private:
    double smallest_singular_value_;
};

/// The assembled colligation failed one of its verification checks.
class RealizationError : public Error {
   public:
    RealizationError(const std::string& what, std::map<std::string, double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}

    const std::map<std::string, double>& residuals() const noexcept { return residuals_; }

   private:
    std::map<std::string, double> residuals_;
};

}  // namespace ndsys
