#pragma once

#include <stdexcept>
#include <string>

namespace agds {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: shape mismatch, non-SPD Gram, malformed parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved reliably.
class SingularOperatorError : public Error {
 public:
  SingularOperatorError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate(condition_estimate) {}
  double condition_estimate;
};

/// A fractional power was evaluated on its branch cut.
class BranchCutError : public Error {
 public:
  using Error::Error;
};

/// A vector that witnesses the failure of a structural check.
class WitnessError : public Error {
 public:
  WitnessError(const std::string& what, double violation, long index)
      : Error(what), violation(violation), index(index) {}
  double violation;
  long index;
};

}  // namespace agds
