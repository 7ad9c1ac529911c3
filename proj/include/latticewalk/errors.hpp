#pragma once

#include <stdexcept>
#include <string>

namespace latticewalk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input and model validation.
class ParseError : public Error { using Error::Error; };
class WeightSumError : public Error { using Error::Error; };
class DegenerateSupport : public Error { using Error::Error; };
class NotIrreducible : public Error { using Error::Error; };
class SearchBudgetExceeded : public Error { using Error::Error; };
class WrongModel : public Error { using Error::Error; };

// Numerical preconditions.
class OverflowGuard : public Error { using Error::Error; };
class NotInInterior : public Error { using Error::Error; };
class MemoryBudgetExceeded : public Error { using Error::Error; };
class GridBudgetExceeded : public Error { using Error::Error; };

/// Newton did not reach the requested gradient gap.
class MaxIterations : public Error {
 public:
  MaxIterations(const std::string& what, double gap, int iterations)
      : Error(what), gap_(gap), iterations_(iterations) {}
  double gap() const { return gap_; }
  int iterations() const { return iterations_; }

 private:
  double gap_;
  int iterations_;
};

/// A checked mathematical invariant failed; the message names the witness.
class InvariantViolation : public Error { using Error::Error; };

}  // namespace latticewalk
