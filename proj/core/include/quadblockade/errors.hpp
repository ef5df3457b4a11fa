#pragma once

#include <stdexcept>
#include <string>

namespace quadblockade {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid operator dimension or truncation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Physical parameters outside their admissible domain.
///
/// When the failure is the membrane stability condition the offending
/// photon number is carried in `photon_number()`; otherwise it is -1.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what, int photon_number = -1)
      : Error(what), photon_number_(photon_number) {}

  int photon_number() const noexcept { return photon_number_; }

 private:
  int photon_number_;
};

/// A finite-sum evaluation left the representable floating-point range.
class NumericRangeError : public Error {
 public:
  using Error::Error;
};

/// A truncation-refinement loop did not settle.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous_value() const noexcept { return previous_; }
  double last_value() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// g2(0) requested for a state with no photons.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// The trace-constrained steady-state system is singular.
class DegenerateSteadyStateError : public Error {
 public:
  using Error::Error;
};

/// A steady state violates density-matrix invariants even after refinement.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Time integration could not make progress.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// Generic numerical failure (complex residue on a real observable, etc).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadblockade
