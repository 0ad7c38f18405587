#pragma once

#include <initializer_list>

#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace test {

inline minkowski::Vector vec(std::initializer_list<double> xs) {
  minkowski::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline minkowski::Functional fun(std::initializer_list<double> xs) { return minkowski::Functional(vec(xs)); }

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>();
}

inline minkowski::Norm p4(int n = 2) { return minkowski::Norm::p_norm(4.0, n); }

}  // namespace test
