#pragma once

#include <stdexcept>
#include <string>

namespace pogs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Belief update conditioned on an observation with zero probability.
class ImpossibleObservation : public Error {
 public:
  explicit ImpossibleObservation(const std::string& what, int step = -1)
      : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ExponentOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace pogs
