#pragma once

#include <stdexcept>

namespace bogo {

// Bad input: a precondition or schema rule was violated by the caller.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed to meet its tolerance or did not converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bogo
