#include "forksched/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>

#include "forksched/analytic.hpp"
#include "forksched/errors.hpp"
#include "forksched/nelder_mead.hpp"
#include "forksched/pareto.hpp"
#include "forksched/rng.hpp"
#include "forksched/simulate.hpp"

namespace forksched {

namespace {

double softplus(double y) { return y > 30.0 ? y : std::log1p(std::exp(y)); }

double inv_softplus(double s) {
  return s > 30.0 ? s : std::log(std::expm1(s));
}

struct Decoded {
  std::vector<double> times;
  std::vector<double> counts;
};

// theta = (log n_0 .. log n_m, gap knobs 1..m); gaps stay above c.
Decoded decode(const std::vector<double>& theta, int m, double c,
               double n_max) {
  Decoded d;
  d.counts.resize(m + 1);
  d.times.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double th = std::clamp(theta[i], -700.0, 700.0);
    double n = std::min(std::exp(th), n_max);
    if (i == 0) n = std::max(n, 1e-9);
    d.counts[i] = n;
  }
  d.times[0] = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double knob = std::clamp(theta[m + i], -700.0, 700.0);
    d.times[i] = d.times[i - 1] + c + softplus(knob);
  }
  return d;
}

void check_problem(double c, double mu, double lambda, int K, double beta) {
  if (!(c > 0.0) || !(mu > 0.0) || !(lambda > 0.0))
    throw validation_error("optimizer: need c, mu, lambda > 0");
  if (K < 1) throw validation_error("optimizer: K must be at least 1");
  if (!(beta > 0.0)) throw validation_error("optimizer: beta must be > 0");
}

struct OptRun {
  TradeoffPoint point;
  std::vector<double> theta;
};

// Express a schedule in the relaxation's coordinates, padding missing stages
// with negligible batches so the dimension matches.
std::vector<double> encode_schedule(const ForkSchedule& s, int m, double c) {
  const std::size_t dim = 2 * static_cast<std::size_t>(m) + 1;
  std::vector<double> theta(dim, 0.0);
  const std::size_t have = s.stages.size();
  for (int i = 0; i <= m; ++i) {
    const double n =
        static_cast<std::size_t>(i) < have ? s.stages[i].n : 1e-9;
    theta[i] = std::log(n);
  }
  for (int i = 1; i <= m; ++i) {
    double gap = c + std::log(2.0);
    if (static_cast<std::size_t>(i) < have)
      gap = s.stages[i].t - s.stages[i - 1].t;
    theta[m + i] = inv_softplus(std::max(gap - c, 1e-12));
  }
  return theta;
}

OptRun run_one(double c, double mu, double lambda, int K, double beta,
               const OptimizerOptions& opts,
               const std::vector<std::vector<double>>& warm_starts,
               const std::vector<ForkSchedule>& incumbents) {
  check_problem(c, mu, lambda, K, beta);
  if (opts.m < 1) throw validation_error("optimizer: m must be at least 1");
  if (opts.restarts < 1 || opts.max_iter < 1 || !(opts.tol > 0.0) ||
      !(opts.n_max >= 1.0))
    throw validation_error("optimizer: bad restarts, max_iter, tol, or n_max");

  const int m = opts.m;
  const std::size_t dim = 2 * static_cast<std::size_t>(m) + 1;

  auto objective = [&](const std::vector<double>& theta) {
    const Decoded d = decode(theta, m, c, opts.n_max);
    const double es = mean_completion_real(d.times, d.counts, c, mu, K);
    const double ew = mean_cost_real(d.times, d.counts, c, mu, lambda);
    const double j = es + beta * ew;
    return std::isfinite(j) ? j : 1e300;
  };

  std::vector<double> best_theta;
  double best_val = std::numeric_limits<double>::infinity();
  bool best_conv = false;
  auto consider = [&](std::vector<double> x0) {
    NelderMeadResult r =
        nelder_mead(objective, std::move(x0), 0.5, opts.tol, opts.max_iter);
    if (r.value < best_val) {
      best_val = r.value;
      best_theta = std::move(r.x);
      best_conv = r.converged;
    }
  };

  {
    std::vector<double> x0(dim);
    const double n_init = std::max(1.0, static_cast<double>(K) / (m + 1));
    for (int i = 0; i <= m; ++i) x0[i] = std::log(n_init);
    for (int i = 1; i <= m; ++i) x0[m + i] = inv_softplus(0.5 * c);
    consider(std::move(x0));
  }
  for (int rs = 1; rs < opts.restarts; ++rs) {
    RngStream stream(key_combine(opts.seed, static_cast<std::uint64_t>(rs)));
    std::vector<double> x0(dim);
    const double lo_n = std::log(0.5);
    const double hi_n = std::log(4.0 * K);
    for (int i = 0; i <= m; ++i)
      x0[i] = lo_n + stream.next_uniform() * (hi_n - lo_n);
    const double lo_g = std::log(0.01);
    const double hi_g = std::log(5.0);
    for (int i = 1; i <= m; ++i) {
      const double gap_over_c =
          std::exp(lo_g + stream.next_uniform() * (hi_g - lo_g));
      x0[m + i] = inv_softplus(c * gap_over_c);
    }
    consider(std::move(x0));
  }
  for (const std::vector<double>& w : warm_starts)
    if (w.size() == dim) consider(w);
  for (const ForkSchedule& inc : incumbents)
    if (inc.stages.size() <= static_cast<std::size_t>(m) + 1)
      consider(encode_schedule(inc, m, c));

  const Decoded relaxed = decode(best_theta, m, c, opts.n_max);

  std::optional<ForkSchedule> best_sched;
  Metrics best_metrics{0.0, 0.0};
  double best_joint = std::numeric_limits<double>::infinity();
  double worst_joint = -std::numeric_limits<double>::infinity();
  auto consider_counts = [&](const std::vector<double>& times,
                             const std::vector<long long>& ns) {
    std::vector<Stage> stages;
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (ns[i] > 0)
        stages.push_back({times[i], static_cast<int>(ns[i])});
    ForkSchedule sched = ForkSchedule::normalized(std::move(stages));
    const double es = mean_completion_time(sched, c, mu, K);
    const double ew = mean_utilization_cost(sched, c, mu, lambda);
    const double joint = es + beta * ew;
    worst_joint = std::max(worst_joint, joint);
    if (joint < best_joint) {
      best_joint = joint;
      best_metrics = {es, ew};
      best_sched = std::move(sched);
    }
    return joint;
  };

  std::vector<long long> lo(m + 1), hi(m + 1);
  for (int i = 0; i <= m; ++i) {
    lo[i] = static_cast<long long>(std::floor(relaxed.counts[i]));
    hi[i] = static_cast<long long>(std::ceil(relaxed.counts[i]));
    if (i == 0) {
      lo[i] = std::max(lo[i], 1LL);
      hi[i] = std::max(hi[i], 1LL);
    }
  }
  if (m + 1 <= 6) {
    std::vector<long long> ns(m + 1);
    for (unsigned mask = 0; mask < (1u << (m + 1)); ++mask) {
      for (int i = 0; i <= m; ++i) ns[i] = (mask >> i & 1u) ? hi[i] : lo[i];
      consider_counts(relaxed.times, ns);
    }
  } else {
    std::vector<long long> ns = lo;
    double cur = consider_counts(relaxed.times, ns);
    for (int i = 0; i <= m; ++i) {
      if (hi[i] == lo[i]) continue;
      ns[i] = hi[i];
      const double trial = consider_counts(relaxed.times, ns);
      if (trial < cur)
        cur = trial;
      else
        ns[i] = lo[i];
    }
  }
  {
    double total = 0.0;
    for (double n : relaxed.counts) total += n;
    const long long all =
        std::max(1LL, static_cast<long long>(std::llround(total)));
    consider_counts({0.0}, {all});
  }
  const double spread = worst_joint - best_joint;
  // Incumbents compete directly but stay out of the rounding diagnostics.
  for (const ForkSchedule& inc : incumbents) {
    const double es = mean_completion_time(inc, c, mu, K);
    const double ew = mean_utilization_cost(inc, c, mu, lambda);
    const double joint = es + beta * ew;
    if (joint < best_joint) {
      best_joint = joint;
      best_metrics = {es, ew};
      best_sched = inc;
    }
  }

  OptRun out{TradeoffPoint{beta, *best_sched, best_metrics, best_joint,
                           best_conv, spread},
             std::move(best_theta)};
  return out;
}

}  // namespace

double joint_cost(const ForkSchedule& schedule, double c, double mu,
                  double lambda, int K, double beta) {
  if (!(beta >= 0.0))
    throw validation_error("joint_cost: beta must be >= 0");
  return mean_completion_time(schedule, c, mu, K) +
         beta * mean_utilization_cost(schedule, c, mu, lambda);
}

TradeoffPoint optimize_multifork(double c, double mu, double lambda, int K,
                                 double beta, const OptimizerOptions& opts) {
  return run_one(c, mu, lambda, K, beta, opts, {}, {}).point;
}

TradeoffPoint optimize_multifork(double c, double mu, double lambda, int K,
                                 double beta, const OptimizerOptions& opts,
                                 const ForkSchedule& incumbent) {
  return run_one(c, mu, lambda, K, beta, opts, {}, {incumbent}).point;
}

TradeoffSweep tradeoff_sweep(double c, double mu, double lambda, int K,
                             const std::vector<double>& betas,
                             const OptimizerOptions& opts) {
  if (betas.empty())
    throw validation_error("tradeoff_sweep: beta grid must be non-empty");
  TradeoffSweep sweep;
  sweep.points.reserve(betas.size());
  std::vector<std::vector<double>> warm;
  std::vector<ForkSchedule> incumbents;
  for (double beta : betas) {
    OptRun run = run_one(c, mu, lambda, K, beta, opts, warm, incumbents);
    warm.assign(1, run.theta);
    incumbents.assign(1, run.point.schedule);
    sweep.points.push_back(std::move(run.point));
  }
  std::vector<std::pair<double, double>> coords;
  coords.reserve(sweep.points.size());
  for (const TradeoffPoint& p : sweep.points)
    coords.emplace_back(p.metrics.mean_completion, p.metrics.mean_utilization);
  for (std::size_t idx : pareto_indices(coords))
    sweep.frontier.push_back(sweep.points[idx]);
  return sweep;
}

std::vector<TwoForkCell> two_fork_grid(int N, double t, double s, double c,
                                       double mu, double lambda, int K,
                                       const TwoForkOptions& opts) {
  if (N < 1) throw validation_error("two_fork_grid: N must be at least 1");
  if (!(t > 0.0) || !(s > 0.0))
    throw validation_error("two_fork_grid: forking instants must be > 0");
  if (!(c > 0.0) || !(mu > 0.0) || !(lambda > 0.0) || K < 1)
    throw validation_error("two_fork_grid: bad c, mu, lambda, or K");
  if (opts.evaluator == GridEvaluator::simulate && opts.runs < 1)
    throw validation_error("two_fork_grid: runs must be >= 1");

  const double lo = std::min(t, s);
  const double hi = std::max(t, s);
  std::vector<TwoForkCell> cells;
  for (int m0 = 1; m0 <= N; ++m0) {
    for (int m1 = 0; m1 + m0 <= N; ++m1) {
      const int m2 = N - m0 - m1;
      std::vector<Stage> stages{{0.0, m0}, {lo, m1}, {hi, m2}};
      ForkSchedule sched = ForkSchedule::normalized(std::move(stages));
      TwoForkCell cell{m0, m1, std::move(sched), 0.0, 0.0, 0.0, 0.0};
      if (opts.evaluator == GridEvaluator::analytic) {
        cell.ES = mean_completion_time(cell.schedule, c, mu, K);
        cell.EW = mean_utilization_cost(cell.schedule, c, mu, lambda);
      } else {
        const Scenario scenario{K, lambda,
                                ServiceDistribution(ShiftedExp(c, mu)),
                                cell.schedule};
        const EmpiricalMetrics em =
            estimate_metrics(scenario, opts.runs, opts.seed, opts.threads);
        cell.ES = em.S_hat;
        cell.EW = em.W_hat;
        cell.S_se = em.S_se;
        cell.W_se = em.W_se;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace forksched
