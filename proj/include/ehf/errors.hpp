#pragma once

#include <stdexcept>
#include <string>

namespace ehf {

/// Precondition violated by a caller-supplied argument (bad s, out-of-range r, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration that cannot be run (unknown key, CFL violation, malformed value).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that started but could not finish (blow-up, non-finite values).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehf
