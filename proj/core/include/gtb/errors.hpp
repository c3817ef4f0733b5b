#pragma once

#include <stdexcept>
#include <string>

namespace gtb {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation point outside the closed domain of a section or space.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested derivative order outside [0, degree].
class OrderError : public Error {
 public:
  using Error::Error;
};

// Basis or breakpoint index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Inconsistent space description (array lengths, smoothness bounds, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Section family parameters that do not define an ECT-space on the interval.
class InvalidFamilyError : public Error {
 public:
  using Error::Error;
};

// Singular Hermite collocation system while building a Bernstein basis.
class EctViolationError : public Error {
 public:
  using Error::Error;
};

// The knot-insertion cascade hit a vanishing or sign-violating jump: the
// B-spline-like basis does not exist or is numerically degenerate.
class BasisNonexistenceError : public Error {
 public:
  BasisNonexistenceError(const std::string& what, int breakpoint = -1, int order = -1)
      : Error(what), breakpoint_(breakpoint), order_(order) {}

  // Breakpoint index and derivative order of the offending constraint, or -1
  // when raised outside of the extraction loop.
  int breakpoint() const noexcept { return breakpoint_; }
  int order() const noexcept { return order_; }

 private:
  int breakpoint_;
  int order_;
};

// The recurrence oracles need weight functions the family cannot provide.
class OracleUnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace gtb
