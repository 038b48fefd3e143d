#include "forksched/tables.hpp"

#include <cmath>

#include "forksched/analytic.hpp"
#include "forksched/baseline.hpp"
#include "forksched/errors.hpp"
#include "forksched/format.hpp"
#include "forksched/json_io.hpp"

namespace forksched {

namespace {

constexpr double kC = 8.0;
constexpr double kMu = 0.01;
constexpr int kN = 12;
constexpr int kK = 10;
constexpr double kLambda = 1.0;

ForkSchedule single_fork(int n0, double t1, int total) {
  std::vector<Stage> stages{{0.0, n0}};
  if (n0 < total) stages.push_back({t1, total - n0});
  return ForkSchedule(std::move(stages));
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi >= lo) || steps < 1)
    throw validation_error("log_grid: need 0 < lo <= hi and steps >= 1");
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  const double la = std::log(lo);
  const double lb = std::log(hi);
  for (int i = 0; i < steps; ++i)
    out[i] = std::exp(la + (lb - la) * i / (steps - 1.0));
  return out;
}

std::string fig2_table() {
  std::string out = "t1,n0,ES\n";
  for (int k = 1; k <= 9; ++k) {
    const double t1 = kC * k;
    for (int n0 = 1; n0 <= kN - 1; ++n0) {
      const ForkSchedule s = single_fork(n0, t1, kN);
      out += format_shortest(t1) + "," + std::to_string(n0) + "," +
             format_shortest(mean_completion_time(s, kC, kMu, kK)) + "\n";
    }
  }
  return out;
}

std::string fig3_table() {
  std::string out = "t1,n0,EW\n";
  for (int k = 1; k <= 9; ++k) {
    const double t1 = kC * k;
    for (int n0 = 1; n0 <= kN - 1; ++n0) {
      const ForkSchedule s = single_fork(n0, t1, kN);
      out += format_shortest(t1) + "," + std::to_string(n0) + "," +
             format_shortest(mean_utilization_cost(s, kC, kMu, kLambda)) +
             "\n";
    }
  }
  return out;
}

std::string fig4_table(double gamma_em) {
  std::string out = "series,t1,n0,ES,EW\n";
  for (int k = 2; k <= 8; k += 2) {
    const double t1 = kC * k;
    for (int n0 = 1; n0 <= kN - 1; ++n0) {
      const ForkSchedule s = single_fork(n0, t1, kN);
      out += "single_fork," + format_shortest(t1) + "," + std::to_string(n0) +
             "," + format_shortest(mean_completion_time(s, kC, kMu, kK)) +
             "," + format_shortest(mean_utilization_cost(s, kC, kMu, kLambda)) +
             "\n";
    }
  }
  for (int k = 1; k <= 9; ++k) {
    const double t1 = kC * k;
    const BaselineParams bp =
        map_schedule_to_baseline(kN, t1, kC, kMu, kK, gamma_em);
    const Metrics m = baseline_metrics(bp, kLambda);
    out += "baseline," + format_shortest(t1) + ",0," +
           format_shortest(m.mean_completion) + "," +
           format_shortest(m.mean_utilization) + "\n";
  }
  return out;
}

std::string fig7_table(const OptimizerOptions& opts,
                       const std::vector<double>& proposed_betas,
                       const std::vector<double>& baseline_betas) {
  const double c = 1.0;
  const double mu = 1.0;
  const double lambda = 1.0;
  const int K = 25;
  std::string out = "series,beta,ES,EW,joint,stages_json\n";
  const TradeoffSweep sweep =
      tradeoff_sweep(c, mu, lambda, K, proposed_betas, opts);
  for (const TradeoffPoint& p : sweep.frontier) {
    out += "proposed," + format_shortest(p.beta) + "," +
           format_shortest(p.metrics.mean_completion) + "," +
           format_shortest(p.metrics.mean_utilization) + "," +
           format_shortest(p.joint) + ",\"" +
           stages_json_string(p.schedule) + "\"\n";
  }
  const std::vector<BaselinePoint> base =
      baseline_frontier(K, c, mu, lambda, baseline_betas, kEulerGamma);
  for (const BaselinePoint& b : base) {
    // The comparator has no integer stage vector; report the implied design
    // (one server per task at 0, replication factor r at the mapped t1).
    const double t1 = c + (1.0 - b.p) / mu;
    out += "baseline," + format_shortest(b.beta) + "," +
           format_shortest(b.ES) + "," + format_shortest(b.EW) + "," +
           format_shortest(b.joint) + ",\"[[0," + format_shortest(1.0) +
           "],[" + format_shortest(t1) + "," + format_shortest(b.r) +
           "]]\"\n";
  }
  return out;
}

std::string fig7_table() {
  OptimizerOptions opts;
  return fig7_table(opts, log_grid(2e-4, 3.0, 48), log_grid(1e-4, 10.0, 60));
}

}  // namespace forksched
