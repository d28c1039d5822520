#pragma once

#include <stdexcept>
#include <string>

namespace nhf {

/// Invalid argument or precondition on the caller's side.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or floating-point procedure failed to produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncated construction missed its tolerance. Carries the residual that
/// was actually achieved so the caller can pick a larger truncation.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Input object does not satisfy the structural requirement of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nhf
