#pragma once

#include <stdexcept>
#include <string>

namespace ehnet {

// Bad input: malformed config, parameters outside their admissible window.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sample-path guarantee was broken at runtime. Always a logic bug.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehnet
