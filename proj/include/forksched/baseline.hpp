#pragma once

#include <vector>

#include "forksched/schedule.hpp"

namespace forksched {

// Default Euler-Mascheroni value for the latency formula. Figure-exact
// reproduction of the published tables wants the truncated 0.577 instead
// (pass it via gamma_em / --gamma-em).
inline constexpr double kEulerGamma = 0.5772156649;

// Checkpoint-replication comparator: work runs unreplicated until a fraction
// p of the execution-time mass remains, then each straggling task is
// replicated r-fold. Latency uses an extreme-value approximation, so it
// carries the Euler-Mascheroni constant.
struct BaselineParams {
  double p;
  double r;
  int K;
  double c;
  double mu;
  double gamma_em;
};

Metrics baseline_metrics(const BaselineParams& params, double lambda);

// Interpret a (1 at time 0, N-1 at t1) single-fork design in the comparator's
// coordinates: p = 1 - mu (t1 - c), r = (N - 1) / p. Requires c <= t1 and
// mu (t1 - c) < 1.
BaselineParams map_schedule_to_baseline(int N, double t1, double c, double mu,
                                        int K, double gamma_em);

struct BaselinePoint {
  double beta;
  double p;
  double r;
  double ES;
  double EW;
  double joint;
};

// Per beta, minimizes ES + beta * EW over (p, r) by coarse grid search plus
// simplex refinement; returns the non-dominated points sorted by ES.
std::vector<BaselinePoint> baseline_frontier(int K, double c, double mu,
                                             double lambda,
                                             const std::vector<double>& betas,
                                             double gamma_em);

}  // namespace forksched
