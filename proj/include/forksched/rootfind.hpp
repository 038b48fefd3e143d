#pragma once

#include <cmath>
#include <utility>

#include "forksched/errors.hpp"

namespace forksched {

// Bracketed bisection: requires a sign change on [lo, hi]. Converges to
// absolute tolerance tol on the abscissa, capped at max_iter halvings.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw numerical_error("bisect: no sign change on the given bracket");
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Doubles the width of [lo, hi] upward until f changes sign on it.
// Returns the expanded bracket.
template <class F>
std::pair<double, double> expand_bracket_up(F&& f, double lo, double hi,
                                            int max_doublings = 200) {
  const double flo = f(lo);
  if (flo == 0.0) return {lo, lo};
  double width = hi - lo;
  for (int i = 0; i < max_doublings; ++i) {
    if (std::signbit(f(hi)) != std::signbit(flo)) return {lo, hi};
    width *= 2.0;
    hi = lo + width;
  }
  throw numerical_error("expand_bracket_up: no sign change found");
}

}  // namespace forksched
