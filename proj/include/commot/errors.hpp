#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace commot {

struct Violation {
  std::string message;
  long row = -1;
  long col = -1;
};

/// Raised when an input lies outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a scaling denominator vanishes or a root search fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProblem : public std::invalid_argument {
 public:
  explicit InvalidProblem(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// A distortion target outside the range a slope search can reach.
class TargetUnreachable : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace commot
