#include "forksched/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "forksched/errors.hpp"

namespace forksched {

namespace {

void check_k(int K) {
  if (K < 1) throw validation_error("task count K must be at least 1");
}

struct RealSchedule {
  const std::vector<double>& times;
  const std::vector<double>& counts;
};

void check_real(const RealSchedule& s, double c, double mu) {
  if (s.times.size() != s.counts.size() || s.times.empty())
    throw validation_error("times and counts must be non-empty and equal length");
  if (!(c >= 0.0) || !(mu > 0.0))
    throw validation_error("need startup shift c >= 0 and rate mu > 0");
  if (s.times[0] != 0.0)
    throw validation_error("first forking time must be 0");
  if (!(s.counts[0] > 0.0))
    throw validation_error("initial batch must be positive");
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    if (!std::isfinite(s.counts[i]) || s.counts[i] < 0.0)
      throw validation_error("batch sizes must be finite and non-negative");
    // Same rounding-scale slack as gap_ok: differencing two valid forking
    // times can fall an ulp short of c.
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(i > 0 ? std::fabs(s.times[i]) : c, c);
    if (i > 0 && !(s.times[i] - s.times[i - 1] >= c - tol))
      throw validation_error(
          "forking gaps below the startup shift c are outside the "
          "closed-form regime; use the single-fork evaluators or the "
          "simulator");
  }
}

ForkSchedule normalized_with_gap(const ForkSchedule& schedule, double c) {
  ForkSchedule norm = ForkSchedule::normalized(schedule.stages);
  if (!gap_ok(norm, c))
    throw validation_error(
        "forking gaps below the startup shift c are outside the closed-form "
        "regime; use the single-fork evaluators or the simulator");
  return norm;
}

void split(const ForkSchedule& s, std::vector<double>& times,
           std::vector<double>& counts) {
  times.reserve(s.stages.size());
  counts.reserve(s.stages.size());
  for (const Stage& st : s.stages) {
    times.push_back(st.t);
    counts.push_back(static_cast<double>(st.n));
  }
}

double binomial_alternating_sum(int K, double a, double b) {
  // sum_{k=1..K} C(K,k) (-1)^k / k * (a^k - b^k)
  double sum = 0.0;
  double binom = 1.0;
  double ak = 1.0;
  double bk = 1.0;
  double sign = 1.0;
  for (int k = 1; k <= K; ++k) {
    binom *= static_cast<double>(K - k + 1) / k;
    ak *= a;
    bk *= b;
    sign = -sign;
    sum += binom * sign * (ak - bk) / k;
  }
  return sum;
}

// G_K(q_hi) - G_K(q_lo) without subtracting two nearly-equal sums:
// q_hi^k - q_lo^k = (q_hi - q_lo) S_k with S_k = q_hi S_{k-1} + q_lo^{k-1},
// so every term keeps full relative precision. The caller supplies
// diff = q_hi - q_lo computed in a cancellation-free way (from expm1 of the
// utilization gap), which matters when both q's sit within an ulp of 1.
double geometric_harmonic_diff(double q_lo, double q_hi, double diff, int K) {
  double sum = 0.0;
  double s = 1.0;     // S_k
  double p_lo = 1.0;  // q_lo^{k-1}
  for (int k = 1; k <= K; ++k) {
    sum += s / k;
    p_lo *= q_lo;
    s = q_hi * s + p_lo;
  }
  return diff * sum;
}

}  // namespace

double harmonic(int K) {
  check_k(K);
  double h = 0.0;
  for (int k = K; k >= 1; --k) h += 1.0 / k;
  return h;
}

double geometric_harmonic(double q, int K) {
  check_k(K);
  if (!(q >= 0.0) || !(q <= 1.0))
    throw validation_error("geometric_harmonic: q must lie in [0, 1]");
  double sum = 0.0;
  double p = 1.0;
  for (int k = 1; k <= K; ++k) {
    p *= q;
    const double term = p / k;
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return sum;
}

double mean_completion_real(const std::vector<double>& times,
                            const std::vector<double>& counts, double c,
                            double mu, int K) {
  check_k(K);
  check_real({times, counts}, c, mu);
  double total = 0.0;
  for (double n : counts) total += n;
  double cum = counts[0];
  double tau = 0.0;
  double acc = harmonic(K) / total;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    tau += cum * (times[i] - times[i - 1]);
    const double prev = cum;
    cum += counts[i];
    if (counts[i] > 0.0) {
      const double q = -std::expm1(-mu * tau);
      acc += counts[i] / (cum * prev) * geometric_harmonic(q, K);
    }
  }
  return c + acc / mu;
}

double mean_cost_real(const std::vector<double>& times,
                      const std::vector<double>& counts, double c, double mu,
                      double lambda) {
  check_real({times, counts}, c, mu);
  if (!(lambda > 0.0)) throw validation_error("cost rate lambda must be > 0");
  double cost = lambda * c * counts[0] + lambda / mu;
  double cum = counts[0];
  double tau = 0.0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    tau += cum * (times[i] - times[i - 1]);
    if (counts[i] > 0.0) {
      // tau >= cum * c whenever gaps >= c, so both exponents are <= 0.
      const double a = std::exp(-mu * (tau - cum * c));
      const double b = std::exp(-mu * tau);
      cost += lambda / mu * counts[i] * (a - b) / cum;
    }
    cum += counts[i];
  }
  return cost;
}

double single_task_ccdf(const ForkSchedule& schedule,
                        const ServiceDistribution& dist, double t) {
  if (!(t >= 0.0))
    throw validation_error("single_task_ccdf: t must be >= 0");
  double prod = 1.0;
  for (const Stage& st : schedule.stages) {
    if (st.t > t) break;
    if (st.n > 0) prod *= std::pow(ccdf(dist, t - st.t), st.n);
  }
  return prod;
}

double single_task_ccdf(const ForkSchedule& schedule, double c, double mu,
                        double t) {
  return single_task_ccdf(schedule, ServiceDistribution(ShiftedExp(c, mu)), t);
}

double makespan_ccdf(const ForkSchedule& schedule, double c, double mu, int K,
                     double t) {
  check_k(K);
  const double tail = single_task_ccdf(schedule, c, mu, t);
  // 1 - (1 - tail)^K, stable when tail is tiny.
  return -std::expm1(static_cast<double>(K) * std::log1p(-tail));
}

double mean_completion_time(const ForkSchedule& schedule, double c, double mu,
                            int K) {
  const ForkSchedule norm = normalized_with_gap(schedule, c);
  std::vector<double> times, counts;
  split(norm, times, counts);
  return mean_completion_real(times, counts, c, mu, K);
}

double mean_utilization_cost(const ForkSchedule& schedule, double c, double mu,
                             double lambda) {
  const ForkSchedule norm = normalized_with_gap(schedule, c);
  std::vector<double> times, counts;
  split(norm, times, counts);
  return mean_cost_real(times, counts, c, mu, lambda);
}

std::pair<double, double> single_task_means(const ForkSchedule& schedule,
                                            double c, double mu,
                                            double lambda) {
  return {mean_completion_time(schedule, c, mu, 1),
          mean_utilization_cost(schedule, c, mu, lambda)};
}

IntervalIntegralTerms interval_integrals(const ForkSchedule& schedule, double c,
                                         double mu, int K, IntegralForm form) {
  check_k(K);
  if (form == IntegralForm::alternating_binomial && K > 20)
    throw numerical_error(
        "alternating-binomial interval integrals cancel catastrophically "
        "for K > 20; use the telescoping form");
  const ForkSchedule norm = normalized_with_gap(schedule, c);
  const ScheduleDerived d = derive(norm);
  const std::size_t m = norm.stages.size() - 1;

  IntervalIntegralTerms out;
  out.form = form;
  out.standard.resize(m + 1);
  out.leading.resize(m);

  if (form == IntegralForm::telescoping) {
    for (std::size_t i = 0; i <= m; ++i) {
      const double ai = std::exp(-mu * d.utilization[i]);
      const double qi = -std::expm1(-mu * d.utilization[i]);
      double qn, diff;
      if (i < m) {
        qn = -std::expm1(-mu * d.utilization[i + 1]);
        // q_{i+1} - q_i = a_i - a_{i+1} = a_i (1 - exp(-mu gap)).
        diff = ai * -std::expm1(-mu * (d.utilization[i + 1] - d.utilization[i]));
      } else {
        qn = 1.0;
        diff = ai;
      }
      out.standard[i] =
          geometric_harmonic_diff(qi, qn, diff, K) / (d.cumulative[i] * mu);
    }
    for (std::size_t i = 1; i <= m; ++i) {
      const double prev = d.cumulative[i - 1];
      const double qi = -std::expm1(-mu * d.utilization[i]);
      const double al = std::exp(-mu * (d.utilization[i] - prev * c));
      const double ql = -std::expm1(-mu * (d.utilization[i] - prev * c));
      const double diff = al * -std::expm1(-mu * prev * c);
      out.leading[i - 1] =
          geometric_harmonic_diff(ql, qi, diff, K) / (prev * mu);
    }
  } else {
    for (std::size_t i = 0; i <= m; ++i) {
      const double a = std::exp(-mu * d.utilization[i]);
      const double b = (i < m) ? std::exp(-mu * d.utilization[i + 1]) : 0.0;
      out.standard[i] =
          -binomial_alternating_sum(K, a, b) / (d.cumulative[i] * mu);
    }
    for (std::size_t i = 1; i <= m; ++i) {
      const double prev = d.cumulative[i - 1];
      const double a = std::exp(-mu * (d.utilization[i] - prev * c));
      const double b = std::exp(-mu * d.utilization[i]);
      out.leading[i - 1] = -binomial_alternating_sum(K, a, b) / (prev * mu);
    }
  }
  return out;
}

}  // namespace forksched
