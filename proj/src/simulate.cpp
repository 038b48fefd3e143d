#include "forksched/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>

#include "forksched/errors.hpp"
#include "forksched/rng.hpp"

namespace forksched {

namespace {

double pairwise_range(const double* a, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(a, half) + pairwise_range(a + half, n - half);
}

double pairwise_mean(const std::vector<double>& v) {
  return pairwise_range(v.data(), v.size()) / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double mean,
                      std::vector<double>& scratch) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - mean;
    scratch[i] = d * d;
  }
  const double var = pairwise_range(scratch.data(), n) / (n - 1.0);
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
  return values.empty() ? 0.0 : pairwise_range(values.data(), values.size());
}

TaskResult simulate_task(const ForkSchedule& schedule,
                         const ServiceDistribution& dist, double lambda,
                         std::uint64_t seed, std::uint64_t run,
                         std::uint64_t task) {
  double best = std::numeric_limits<double>::infinity();
  const auto& stages = schedule.stages;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].t >= best) break;
    RngStream stream = substream(seed, run, task, i);
    for (int p = 0; p < stages[i].n; ++p) {
      const double finish = stages[i].t + sample(dist, stream);
      best = std::min(best, finish);
    }
  }
  double busy = 0.0;
  for (const Stage& st : stages)
    if (st.t < best) busy += st.n * (best - st.t);
  return {best, lambda * busy};
}

EmpiricalMetrics estimate_metrics(const Scenario& scenario, long long runs,
                                  std::uint64_t seed, int threads) {
  if (runs < 1) throw validation_error("estimate_metrics: runs must be >= 1");
  if (threads < 1)
    throw validation_error("estimate_metrics: threads must be >= 1");
  std::vector<double> s_runs(static_cast<std::size_t>(runs));
  std::vector<double> w_runs(static_cast<std::size_t>(runs));

  auto work = [&](long long lo, long long hi) {
    for (long long r = lo; r < hi; ++r) {
      double makespan = 0.0;
      double cost = 0.0;
      for (int task = 0; task < scenario.K; ++task) {
        const TaskResult tr =
            simulate_task(scenario.schedule, scenario.dist, scenario.lambda,
                          seed, static_cast<std::uint64_t>(r),
                          static_cast<std::uint64_t>(task));
        makespan = std::max(makespan, tr.completion);
        cost += tr.cost;
      }
      s_runs[static_cast<std::size_t>(r)] = makespan;
      w_runs[static_cast<std::size_t>(r)] = cost / scenario.K;
    }
  };

  if (threads == 1 || runs < 2 * static_cast<long long>(threads)) {
    work(0, runs);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (runs + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const long long lo = t * chunk;
      const long long hi = std::min(runs, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }

  EmpiricalMetrics out;
  out.runs = runs;
  out.seed = seed;
  out.S_hat = pairwise_mean(s_runs);
  out.W_hat = pairwise_mean(w_runs);
  std::vector<double> scratch;
  out.S_se = standard_error(s_runs, out.S_hat, scratch);
  out.W_se = standard_error(w_runs, out.W_hat, scratch);
  return out;
}

std::vector<double> sample_completions(const ForkSchedule& schedule,
                                       const ServiceDistribution& dist,
                                       long long count, std::uint64_t seed) {
  if (count < 1)
    throw validation_error("sample_completions: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long long r = 0; r < count; ++r)
    out[static_cast<std::size_t>(r)] =
        simulate_task(schedule, dist, 1.0, seed, static_cast<std::uint64_t>(r),
                      0)
            .completion;
  return out;
}

std::vector<std::pair<double, double>> export_ecdf(
    const std::vector<double>& samples, const std::vector<double>& grid) {
  if (samples.empty())
    throw validation_error("export_ecdf: sample set must be non-empty");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (double t : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    out.emplace_back(t, static_cast<double>(sorted.end() - it) / n);
  }
  return out;
}

}  // namespace forksched
