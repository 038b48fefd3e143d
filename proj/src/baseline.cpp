#include "forksched/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "forksched/errors.hpp"
#include "forksched/nelder_mead.hpp"
#include "forksched/pareto.hpp"

namespace forksched {

namespace {

void check_params(const BaselineParams& bp) {
  if (!(bp.p > 0.0) || !(bp.p <= 1.0))
    throw validation_error("baseline: p must lie in (0, 1]");
  if (!(bp.r >= 0.0) || !std::isfinite(bp.r))
    throw validation_error("baseline: r must be finite and >= 0");
  if (bp.K < 1) throw validation_error("baseline: K must be at least 1");
  if (!(bp.c >= 0.0) || !(bp.mu > 0.0))
    throw validation_error("baseline: need c >= 0 and mu > 0");
  if (!std::isfinite(bp.gamma_em))
    throw validation_error("baseline: gamma_em must be finite");
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double la = std::log(lo);
  const double lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / (n - 1.0));
  return out;
}

}  // namespace

Metrics baseline_metrics(const BaselineParams& bp, double lambda) {
  check_params(bp);
  if (!(lambda > 0.0)) throw validation_error("baseline: lambda must be > 0");
  const double r1 = bp.r + 1.0;
  const double es =
      (2.0 * bp.r + 1.0) / r1 * bp.c +
      (std::log(static_cast<double>(bp.K)) - bp.r * std::log(bp.p) +
       bp.gamma_em) /
          (r1 * bp.mu);
  const double ew =
      lambda * (bp.c + 1.0 / bp.mu + bp.p * bp.c +
                bp.p * bp.r * (-std::expm1(-bp.mu * bp.c)) / bp.mu);
  return {es, ew};
}

BaselineParams map_schedule_to_baseline(int N, double t1, double c, double mu,
                                        int K, double gamma_em) {
  if (N < 2) throw validation_error("baseline map: N must be at least 2");
  if (!(c > 0.0) || !(mu > 0.0))
    throw validation_error("baseline map: need c > 0 and mu > 0");
  if (!(t1 >= c))
    throw validation_error("baseline map: t1 must be at least c");
  const double p = 1.0 - mu * (t1 - c);
  if (!(p > 0.0))
    throw validation_error(
        "baseline map: mu * (t1 - c) must stay below 1 so the remaining "
        "fraction is positive");
  BaselineParams bp;
  bp.p = p;
  bp.r = (N - 1.0) / p;
  bp.K = K;
  bp.c = c;
  bp.mu = mu;
  bp.gamma_em = gamma_em;
  return bp;
}

std::vector<BaselinePoint> baseline_frontier(int K, double c, double mu,
                                             double lambda,
                                             const std::vector<double>& betas,
                                             double gamma_em) {
  if (K < 1 || !(c >= 0.0) || !(mu > 0.0) || !(lambda > 0.0))
    throw validation_error("baseline_frontier: bad K, c, mu, or lambda");
  if (betas.empty())
    throw validation_error("baseline_frontier: beta grid must be non-empty");
  for (double b : betas)
    if (!(b > 0.0)) throw validation_error("baseline_frontier: betas must be > 0");

  std::vector<double> r_grid = logspace(1e-2, 1e5, 71);
  r_grid.insert(r_grid.begin(), 0.0);

  auto eval = [&](double p, double r) {
    BaselineParams bp{p, r, K, c, mu, gamma_em};
    return baseline_metrics(bp, lambda);
  };

  std::vector<BaselinePoint> points;
  points.reserve(betas.size());
  for (double beta : betas) {
    double best_p = 1.0;
    double best_r = 0.0;
    double best_joint = std::numeric_limits<double>::infinity();
    for (int ip = 1; ip <= 100; ++ip) {
      const double p = ip / 100.0;
      for (double r : r_grid) {
        const Metrics m = eval(p, r);
        const double joint = m.mean_completion + beta * m.mean_utilization;
        if (joint < best_joint) {
          best_joint = joint;
          best_p = p;
          best_r = r;
        }
      }
    }

    auto objective = [&](const std::vector<double>& theta) {
      const double p =
          std::clamp(1.0 / (1.0 + std::exp(-theta[0])), 1e-9, 1.0);
      const double r = std::exp(std::min(theta[1], 40.0));
      const Metrics m = eval(p, r);
      return m.mean_completion + beta * m.mean_utilization;
    };
    const double p0 = std::min(best_p, 1.0 - 1e-9);
    std::vector<double> theta0{std::log(p0 / (1.0 - p0)),
                               std::log(std::max(best_r, 1e-8))};
    const NelderMeadResult nm = nelder_mead(objective, theta0, 0.5, 1e-10, 500);

    BaselinePoint pt;
    pt.beta = beta;
    pt.p = std::clamp(1.0 / (1.0 + std::exp(-nm.x[0])), 1e-9, 1.0);
    pt.r = std::exp(std::min(nm.x[1], 40.0));
    const Metrics refined = eval(pt.p, pt.r);
    const double refined_joint =
        refined.mean_completion + beta * refined.mean_utilization;
    if (refined_joint <= best_joint) {
      pt.ES = refined.mean_completion;
      pt.EW = refined.mean_utilization;
      pt.joint = refined_joint;
    } else {
      pt.p = best_p;
      pt.r = best_r;
      const Metrics grid_best = eval(best_p, best_r);
      pt.ES = grid_best.mean_completion;
      pt.EW = grid_best.mean_utilization;
      pt.joint = best_joint;
    }
    points.push_back(pt);
  }

  std::vector<std::pair<double, double>> coords;
  coords.reserve(points.size());
  for (const BaselinePoint& pt : points) coords.emplace_back(pt.ES, pt.EW);
  std::vector<BaselinePoint> frontier;
  for (std::size_t idx : pareto_indices(coords)) frontier.push_back(points[idx]);
  return frontier;
}

}  // namespace forksched
