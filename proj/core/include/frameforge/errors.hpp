#pragma once

#include <stdexcept>
#include <string>

namespace frameforge {

/// Input that violates a documented precondition (bad shape, non-Parseval
/// frame, malformed file, ...). Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A shift lies inside, or numerically on, the spectrum of a Hermitian matrix.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No trial of the weight quantizer met the requested operator-norm bound.
class QuantizationFailure : public std::runtime_error {
 public:
  QuantizationFailure(const std::string& what, double best_deviation)
      : std::runtime_error(what), best_deviation_(best_deviation) {}

  double best_deviation() const noexcept { return best_deviation_; }

 private:
  double best_deviation_;
};

/// Grid refinement could not reach the requested covering slack.
class CoverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A condition that must hold for every valid input failed. Signals a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace frameforge
