#pragma once

#include <utility>
#include <vector>

#include "forksched/schedule.hpp"

namespace forksched {

// H_K = sum_{k=1..K} 1/k.
double harmonic(int K);

// G_K(q) = sum_{k=1..K} q^k / k for q in [0,1], with early exit once terms
// stop contributing at 1e-18 relative.
double geometric_harmonic(double q, int K);

// Real-valued batch sizes: the continuous relaxation used by the optimizer
// shares these evaluators with the integer API. Preconditions: counts[0] > 0,
// counts[i] >= 0, times strictly increasing from 0, consecutive gaps >= c.
double mean_completion_real(const std::vector<double>& times,
                            const std::vector<double>& counts, double c,
                            double mu, int K);
double mean_cost_real(const std::vector<double>& times,
                      const std::vector<double>& counts, double c, double mu,
                      double lambda);

// P{S_1 > t}: product over stages forked by time t. Valid for any gaps.
double single_task_ccdf(const ForkSchedule& schedule,
                        const ServiceDistribution& dist, double t);
double single_task_ccdf(const ForkSchedule& schedule, double c, double mu,
                        double t);

// P{S > t} = 1 - (1 - P{S_1 > t})^K for K parallel tasks.
double makespan_ccdf(const ForkSchedule& schedule, double c, double mu, int K,
                     double t);

// Mean makespan of K tasks under shifted-exponential execution times.
// Requires gaps >= c.
double mean_completion_time(const ForkSchedule& schedule, double c, double mu,
                            int K);

// Mean per-task server utilization cost; identical for one task and for the
// K-task average. Requires gaps >= c.
double mean_utilization_cost(const ForkSchedule& schedule, double c, double mu,
                             double lambda);

// (mean completion, mean cost) for a single task; the completion mean equals
// mean_completion_time with K = 1.
std::pair<double, double> single_task_means(const ForkSchedule& schedule,
                                            double c, double mu, double lambda);

enum class IntegralForm { telescoping, alternating_binomial };

// Piecewise integrals of the makespan ccdf: standard[i] covers
// [t_i + c, t_{i+1} + c) and leading[i-1] covers [t_i, t_i + c).
// c + sum(standard) reproduces mean_completion_time.
struct IntervalIntegralTerms {
  IntegralForm form;
  std::vector<double> standard;
  std::vector<double> leading;
};

// The alternating-binomial form is a cross-validation oracle only; its
// signed binomial sums lose precision beyond K = 20 and are rejected there.
IntervalIntegralTerms interval_integrals(const ForkSchedule& schedule, double c,
                                         double mu, int K, IntegralForm form);

}  // namespace forksched
