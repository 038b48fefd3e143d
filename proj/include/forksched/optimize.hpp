#pragma once

#include <cstdint>
#include <vector>

#include "forksched/schedule.hpp"

namespace forksched {

// ES + beta * EW for an integer schedule; the optimizer's scalarized target.
double joint_cost(const ForkSchedule& schedule, double c, double mu,
                  double lambda, int K, double beta);

struct OptimizerOptions {
  int m = 4;             // forking stages after the initial batch
  int restarts = 8;      // restart 0 is a fixed heuristic, the rest random
  int max_iter = 2000;
  double n_max = 1e4;    // cap on relaxed batch sizes
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

struct TradeoffPoint {
  double beta;
  ForkSchedule schedule;
  Metrics metrics;
  double joint;
  bool converged;
  // Worst minus best joint cost across the integer rounding candidates; a
  // large spread flags a relaxation whose rounding mattered.
  double rounding_spread;
};

// Minimizes ES + beta * EW over m-stage schedules: simplex search on a
// smooth relaxation (log batch sizes, gaps kept above c by a softplus),
// multi-start, then integer rounding that keeps the best candidate. The
// returned schedule always has at least one server at time 0.
TradeoffPoint optimize_multifork(double c, double mu, double lambda, int K,
                                 double beta, const OptimizerOptions& opts);

// Same, seeding one restart from an incumbent schedule, which also competes
// directly in the final candidate set; the result never has a larger joint
// cost than the incumbent.
TradeoffPoint optimize_multifork(double c, double mu, double lambda, int K,
                                 double beta, const OptimizerOptions& opts,
                                 const ForkSchedule& incumbent);

struct TradeoffSweep {
  std::vector<TradeoffPoint> points;    // one per beta, in input order
  std::vector<TradeoffPoint> frontier;  // non-dominated, sorted by ES
};

// Sweeps the beta grid in order, warm-starting each solve from the previous
// optimum in addition to the usual restarts.
TradeoffSweep tradeoff_sweep(double c, double mu, double lambda, int K,
                             const std::vector<double>& betas,
                             const OptimizerOptions& opts);

enum class GridEvaluator { analytic, simulate };

struct TwoForkOptions {
  GridEvaluator evaluator = GridEvaluator::analytic;
  long long runs = 100000;  // simulate evaluator only
  std::uint64_t seed = 12345;
  int threads = 1;
};

struct TwoForkCell {
  int m0;
  int m1;
  ForkSchedule schedule;
  double ES;
  double EW;
  double S_se;  // zero under the analytic evaluator
  double W_se;
};

// Exhaustive sweep of two-fork allocations (m0 at time 0, m1 at the earlier
// instant, the rest at the later one) under shifted-exponential execution
// times. The simulate evaluator shares one seed across cells, so comparisons
// use common random numbers.
std::vector<TwoForkCell> two_fork_grid(int N, double t, double s, double c,
                                       double mu, double lambda, int K,
                                       const TwoForkOptions& opts);

}  // namespace forksched
