#pragma once

#include <stdexcept>
#include <string>

namespace invrof {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or parameters outside the supported domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PrecisionLoss : public Error {
 public:
  using Error::Error;
};

class SeriesBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NearSpectrum : public Error {
 public:
  using Error::Error;
};

class ContourPlacementError : public Error {
 public:
  using Error::Error;
};

// A theorem hypothesis (temperedness, injectivity, order constraint) fails.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class CommutationViolation : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

class TailToleranceUnreachable : public Error {
 public:
  TailToleranceUnreachable(const std::string& what, double exponent)
      : Error(what), exponent_(exponent) {}
  double exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

class InsufficientSmoothness : public Error {
 public:
  using Error::Error;
};

class InitialConditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace invrof
