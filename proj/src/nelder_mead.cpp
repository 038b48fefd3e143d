#include "forksched/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "forksched/errors.hpp"

namespace forksched {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, double tol, int max_iter) {
  const std::size_t n = x0.size();
  if (n == 0) throw validation_error("nelder_mead: empty starting point");
  if (!(step > 0.0) || !(tol > 0.0) || max_iter < 1)
    throw validation_error("nelder_mead: need step > 0, tol > 0, max_iter >= 1");

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  int iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&fx](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order[0];
    const std::size_t second_worst = order[n - 1];
    const std::size_t worst = order[n];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter,
                            std::abs(simplex[i][j] - simplex[best][j]));
    if (diameter < tol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= n;

    for (std::size_t j = 0; j < n; ++j)
      xr[j] = centroid[j] + kReflect * (centroid[j] - simplex[worst][j]);
    const double fr = f(xr);

    if (fr < fx[best]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + kExpand * (xr[j] - centroid[j]);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fx[worst] = fe;
      } else {
        simplex[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second_worst]) {
      simplex[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    if (fr < fx[worst]) {
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = centroid[j] + kContract * (xr[j] - centroid[j]);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        fx[worst] = fc;
        continue;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = centroid[j] - kContract * (centroid[j] - simplex[worst][j]);
      const double fc = f(xc);
      if (fc < fx[worst]) {
        simplex[worst] = xc;
        fx[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        simplex[i][j] =
            simplex[best][j] + kShrink * (simplex[i][j] - simplex[best][j]);
      fx[i] = f(simplex[i]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {simplex[best], fx[best], iter, converged};
}

}  // namespace forksched
