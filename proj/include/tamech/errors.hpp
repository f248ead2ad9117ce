#pragma once

#include <stdexcept>
#include <string>

namespace tamech {

// Caller bug: an argument outside the operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numeric routine produced a non-finite value or otherwise broke down.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double at)
      : std::runtime_error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace tamech
