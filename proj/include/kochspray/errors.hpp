#pragma once

#include <stdexcept>
#include <string>

namespace kochspray {

// Out-of-range argument (k1/k2 outside 0..6, non-positive epsilon, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical kernel could not reach the requested tolerance. Carries the
// bound that was actually achieved so callers can decide whether to accept it.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Root finder or other iteration failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request would exceed memory / index ranges (e.g. prefractal depth too large).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Case outside what the formulas support (e.g. a multiple polynomial root).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kochspray
