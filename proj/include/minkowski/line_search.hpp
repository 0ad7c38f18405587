#pragma once

#include <cmath>
#include <utility>

namespace minkowski {

struct LineMinimum {
  double t;
  double value;
};

// Golden-section search for the minimum of a convex (or unimodal) function on
// [lo, hi]. The endpoints are always compared, so a minimum attained at the
// boundary of the bracket is returned exactly.
template <typename F>
LineMinimum golden_section(F&& f, double lo, double hi, int max_iter = 200, double rel_tol = 1e-15) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > rel_tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  LineMinimum best = fc <= fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
  const double flo = f(lo);
  if (flo <= best.value) best = {lo, flo};
  const double fhi = f(hi);
  if (fhi < best.value) best = {hi, fhi};
  return best;
}

}  // namespace minkowski
