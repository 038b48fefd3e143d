#pragma once

#include <vector>

#include "forksched/distribution.hpp"

namespace forksched {

// One forking stage: n replicas of every unfinished task start at time t.
struct Stage {
  double t;
  int n;
};

// Forking policy (t_0,n_0),...,(t_m,n_m) with t_0 = 0, strictly increasing
// times, n_0 >= 1 and n_i >= 0. Treat as immutable after construction.
struct ForkSchedule {
  std::vector<Stage> stages;

  explicit ForkSchedule(std::vector<Stage> s);

  int m() const { return static_cast<int>(stages.size()) - 1; }
  int total_servers() const;

  // Drops zero batches after stage 0 and merges coincident times, then
  // validates. Accepts inputs that the plain constructor would reject only
  // because of zero-padding or duplicated instants.
  static ForkSchedule normalized(std::vector<Stage> s);
};

// Cumulative counts N_i and utilizations tau_i = sum_{l<=i} n_l (t_i - t_l).
struct ScheduleDerived {
  std::vector<int> cumulative;
  std::vector<double> utilization;
  int total;
};

ScheduleDerived derive(const ForkSchedule& schedule);

// True iff consecutive forking times are at least c apart.
bool gap_ok(const ForkSchedule& schedule, double c);

struct Scenario {
  int K;
  double lambda;
  ServiceDistribution dist;
  ForkSchedule schedule;
};

// Analytic means. Empirical estimates carry their own type in simulate.hpp.
struct Metrics {
  double mean_completion;
  double mean_utilization;
};

}  // namespace forksched
