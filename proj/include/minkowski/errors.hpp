#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace minkowski {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input that violates a documented precondition (bad parameters, degenerate
// vertex sets, points that are not on a boundary, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at a point where the requested derivative does not exist.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonDifferentiableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iterative method did not reach its target. `best_bound` is the best
// value (or bound) seen before giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_bound)
      : Error(what), best_bound_(best_bound) {}
  double best_bound() const { return best_bound_; }

 private:
  double best_bound_;
};

// Data that is not norm cyclically monotone. `cycle` lists pair indices of a
// cycle with positive total weight.
class MonotonicityError : public DomainError {
 public:
  MonotonicityError(const std::string& what, std::vector<int> cycle, double weight)
      : DomainError(what), cycle_(std::move(cycle)), weight_(weight) {}
  const std::vector<int>& cycle() const { return cycle_; }
  double weight() const { return weight_; }

 private:
  std::vector<int> cycle_;
  double weight_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace minkowski
