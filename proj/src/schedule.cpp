#include "forksched/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "forksched/errors.hpp"

namespace forksched {

namespace {

void validate(const std::vector<Stage>& stages) {
  if (stages.empty()) {
    throw validation_error("schedule: at least one stage required");
  }
  if (stages[0].t != 0.0) {
    throw validation_error("schedule: t_0 must be exactly 0");
  }
  if (stages[0].n < 1) {
    throw validation_error("schedule: n_0 must be >= 1");
  }
  long long total = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!std::isfinite(stages[i].t)) {
      throw validation_error("schedule: forking times must be finite");
    }
    if (stages[i].n < 0) {
      throw validation_error("schedule: batch sizes must be >= 0");
    }
    if (i > 0 && !(stages[i].t > stages[i - 1].t)) {
      throw validation_error("schedule: forking times must be strictly increasing");
    }
    total += stages[i].n;
  }
  if (total < 1) {
    throw validation_error("schedule: total server count must be >= 1");
  }
}

}  // namespace

ForkSchedule::ForkSchedule(std::vector<Stage> s) : stages(std::move(s)) {
  validate(stages);
}

int ForkSchedule::total_servers() const {
  int total = 0;
  for (const Stage& st : stages) total += st.n;
  return total;
}

ForkSchedule ForkSchedule::normalized(std::vector<Stage> s) {
  std::vector<Stage> out;
  for (const Stage& st : s) {
    if (!out.empty() && st.t == out.back().t) {
      out.back().n += st.n;
      continue;
    }
    out.push_back(st);
  }
  std::vector<Stage> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0 && out[i].n == 0) continue;
    kept.push_back(out[i]);
  }
  return ForkSchedule(std::move(kept));
}

ScheduleDerived derive(const ForkSchedule& schedule) {
  const auto& st = schedule.stages;
  ScheduleDerived d;
  d.cumulative.resize(st.size());
  d.utilization.resize(st.size());
  int cum = 0;
  double tau = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (i > 0) tau += static_cast<double>(cum) * (st[i].t - st[i - 1].t);
    cum += st[i].n;
    d.cumulative[i] = cum;
    d.utilization[i] = tau;
  }
  d.total = cum;
  return d;
}

bool gap_ok(const ForkSchedule& schedule, double c) {
  const auto& st = schedule.stages;
  for (std::size_t i = 1; i < st.size(); ++i) {
    // Recomputing t_i - t_{i-1} can land an ulp under c even when the times
    // were built as t_{i-1} + c + slack, so allow rounding-scale shortfall.
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::fabs(st[i].t), c);
    if (st[i].t - st[i - 1].t < c - tol) return false;
  }
  return true;
}

}  // namespace forksched
