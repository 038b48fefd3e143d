#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "forksched/schedule.hpp"

namespace forksched {

struct TaskResult {
  double completion;
  double cost;
};

// One task in one run. Batches launch in schedule order; a stage whose
// forking time is at or past the earliest finish so far never launches (the
// task is already done). Cost charges every launched server from its forking
// time until the task completes. Streams are keyed by (seed, run, task,
// stage), so results are reproducible regardless of evaluation order.
TaskResult simulate_task(const ForkSchedule& schedule,
                         const ServiceDistribution& dist, double lambda,
                         std::uint64_t seed, std::uint64_t run,
                         std::uint64_t task);

struct EmpiricalMetrics {
  double S_hat;
  double W_hat;
  double S_se;
  double W_se;
  long long runs;
  std::uint64_t seed;
};

// Estimates mean makespan and mean per-task cost over independent runs.
// Per-run values land in run-indexed storage and are reduced by pairwise
// summation, so the result is bit-identical for any thread count.
EmpiricalMetrics estimate_metrics(const Scenario& scenario, long long runs,
                                  std::uint64_t seed, int threads = 1);

// Completion-time draws of a single task across independent runs.
std::vector<double> sample_completions(const ForkSchedule& schedule,
                                       const ServiceDistribution& dist,
                                       long long count, std::uint64_t seed);

// Right-continuous empirical tail: (t, fraction of samples > t) per grid
// point.
std::vector<std::pair<double, double>> export_ecdf(
    const std::vector<double>& samples, const std::vector<double>& grid);

double pairwise_sum(const std::vector<double>& values);

}  // namespace forksched
