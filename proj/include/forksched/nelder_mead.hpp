#pragma once

#include <functional>
#include <vector>

namespace forksched {

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

// Derivative-free simplex search (Lagarias coefficients). Starts from x0 with
// an axis-aligned simplex of the given step; stops when the simplex diameter
// drops below tol or after max_iter iterations.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, double tol, int max_iter);

}  // namespace forksched
