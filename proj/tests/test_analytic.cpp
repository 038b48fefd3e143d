#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "forksched/analytic.hpp"
#include "forksched/errors.hpp"
#include "support.hpp"

using namespace forksched;
namespace ts = testsupport;

namespace {

ForkSchedule single_fork(int n0, double t1, int total) {
  if (n0 == total) return ForkSchedule({{0.0, total}});
  return ForkSchedule({{0.0, n0}, {t1, total - n0}});
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  CHECK(harmonic(10) == doctest::Approx(7381.0 / 2520.0).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic(0), validation_error);
}

TEST_CASE("geometric harmonic series") {
  CHECK(geometric_harmonic(0.0, 10) == 0.0);
  CHECK(geometric_harmonic(1.0, 10) == doctest::Approx(harmonic(10)).epsilon(1e-15));
  // Hand sum at q = 1/2, K = 3: 1/2 + 1/8 + 1/24.
  CHECK(geometric_harmonic(0.5, 3) ==
        doctest::Approx(0.5 + 0.125 + 1.0 / 24.0).epsilon(1e-15));
  CHECK(geometric_harmonic(0.3, 50) < geometric_harmonic(0.6, 50));
  CHECK_THROWS_AS(geometric_harmonic(-0.1, 5), validation_error);
  CHECK_THROWS_AS(geometric_harmonic(1.1, 5), validation_error);
}

TEST_CASE("single stage closed forms") {
  // All servers at time zero: S - c is the max of K Exp(N mu) minima.
  ForkSchedule s({{0.0, 12}});
  const double es = mean_completion_time(s, 1.0, 1.0, 25);
  CHECK(es == doctest::Approx(1.0 + harmonic(25) / 12.0).epsilon(1e-14));
  const double ew = mean_utilization_cost(s, 1.0, 1.0, 1.0);
  CHECK(ew == doctest::Approx(13.0).epsilon(1e-14));

  // E[W] = lambda (c n0 + 1/mu) whenever there is a single batch.
  CHECK(mean_utilization_cost(ForkSchedule({{0.0, 5}}), 2.0, 0.25, 3.0) ==
        doctest::Approx(3.0 * (2.0 * 5.0 + 4.0)).epsilon(1e-14));
}

TEST_CASE("published mean completion grid points") {
  // Single-fork grid at c = 8, mu = 0.01, N = 12, K = 10.
  const double es81 = mean_completion_time(single_fork(1, 8.0, 12), 8.0, 0.01, 10);
  CHECK(es81 == doctest::Approx(39.7414021164).epsilon(1e-9));
  const double ew81 =
      mean_utilization_cost(single_fork(1, 8.0, 12), 8.0, 0.01, 1.0);
  CHECK(ew81 == doctest::Approx(192.572018974701).epsilon(1e-9));
  const double ew86 =
      mean_utilization_cost(single_fork(6, 8.0, 12), 8.0, 0.01, 1.0);
  CHECK(ew86 == doctest::Approx(186.121660819386).epsilon(1e-9));
  const double ew723 =
      mean_utilization_cost(single_fork(3, 72.0, 12), 8.0, 0.01, 1.0);
  CHECK(ew723 == doctest::Approx(133.384552327686).epsilon(1e-9));
}

TEST_CASE("single task ccdf piecewise closed form") {
  const double c = 2.0, mu = 0.4;
  ForkSchedule s({{0.0, 3}, {3.0, 2}, {7.0, 4}});
  const auto d = derive(s);
  // Before the first completion horizon the tail is exactly one.
  CHECK(single_task_ccdf(s, c, mu, 0.0) == 1.0);
  CHECK(single_task_ccdf(s, c, mu, 1.999) == 1.0);
  // On [t_i + c, t_{i+1} + c): exp(-mu N_i (t - t_i - c) - mu tau_i).
  auto piece = [&](int i, double t) {
    return std::exp(-mu * d.cumulative[static_cast<std::size_t>(i)] *
                        (t - s.stages[static_cast<std::size_t>(i)].t - c) -
                    mu * d.utilization[static_cast<std::size_t>(i)]);
  };
  CHECK(single_task_ccdf(s, c, mu, 2.5) == doctest::Approx(piece(0, 2.5)).epsilon(1e-13));
  CHECK(single_task_ccdf(s, c, mu, 6.0) == doctest::Approx(piece(1, 6.0)).epsilon(1e-13));
  CHECK(single_task_ccdf(s, c, mu, 14.0) == doctest::Approx(piece(2, 14.0)).epsilon(1e-13));

  // The general-distribution overload agrees with the shifted-exp one.
  ServiceDistribution dist = ShiftedExp(c, mu);
  for (double t : {0.0, 1.0, 2.5, 3.5, 6.0, 9.5, 14.0, 30.0}) {
    CHECK(single_task_ccdf(s, dist, t) ==
          doctest::Approx(single_task_ccdf(s, c, mu, t)).epsilon(1e-13));
  }
}

TEST_CASE("single task ccdf is a product over launched batches") {
  ServiceDistribution dist = ParetoDist(0.08, 10.0 / 9.0);
  ForkSchedule s({{0.0, 2}, {5.0, 3}});
  const double t = 7.0;
  const double expect = std::pow(ccdf(dist, 7.0), 2) * std::pow(ccdf(dist, 2.0), 3);
  CHECK(single_task_ccdf(s, dist, t) == doctest::Approx(expect).epsilon(1e-13));
  // A batch forked at or after t contributes nothing.
  CHECK(single_task_ccdf(s, dist, 5.0) ==
        doctest::Approx(std::pow(ccdf(dist, 5.0), 2)).epsilon(1e-13));
  // No gap requirement on this path.
  ForkSchedule tight({{0.0, 1}, {0.01, 5}});
  CHECK(single_task_ccdf(tight, dist, 1.0) > 0.0);
}

TEST_CASE("makespan ccdf") {
  const double c = 2.0, mu = 0.4;
  ForkSchedule s({{0.0, 3}, {3.0, 2}});
  for (double t : {0.5, 2.5, 4.0, 8.0, 20.0}) {
    const double f1 = single_task_ccdf(s, c, mu, t);
    const double direct = 1.0 - std::pow(1.0 - f1, 7);
    CHECK(makespan_ccdf(s, c, mu, 7, t) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(makespan_ccdf(s, c, mu, 1, t) == doctest::Approx(f1).epsilon(1e-14));
  }
  CHECK(makespan_ccdf(s, c, mu, 7, 1.0) == 1.0);
}

TEST_CASE("mean completion equals the tail integral") {
  ForkSchedule s({{0.0, 2}, {3.0, 4}, {8.0, 3}});
  const double closed = mean_completion_time(s, 2.0, 0.35, 6);
  const double quad = ts::quad_mean_completion(s, 2.0, 0.35, 6);
  CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("single task means match the K = 1 evaluators") {
  ForkSchedule s({{0.0, 2}, {3.0, 4}, {8.0, 3}});
  const auto [es1, ew1] = single_task_means(s, 2.0, 0.35, 1.5);
  CHECK(es1 == doctest::Approx(mean_completion_time(s, 2.0, 0.35, 1)).epsilon(1e-13));
  CHECK(ew1 == doctest::Approx(mean_utilization_cost(s, 2.0, 0.35, 1.5)).epsilon(1e-13));
}

TEST_CASE("interval integrals reassemble the mean") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const double c = 0.5 + 3.0 * std::uniform_real_distribution<double>()(rng);
    const double mu = 0.05 + std::uniform_real_distribution<double>()(rng);
    const auto s = ts::random_gap_schedule(rng, c);
    for (int K : {1, 3, 10, 100}) {
      const auto terms = interval_integrals(s, c, mu, K, IntegralForm::telescoping);
      REQUIRE(static_cast<int>(terms.standard.size()) == s.m() + 1);
      REQUIRE(static_cast<int>(terms.leading.size()) == s.m());
      double sum = c;
      for (double v : terms.standard) {
        CHECK(v >= 0.0);
        sum += v;
      }
      const double es = mean_completion_time(s, c, mu, K);
      CHECK(sum == doctest::Approx(es).epsilon(1e-12));
      for (double v : terms.leading) CHECK(v >= -1e-15);
    }
  }
}

TEST_CASE("interval integrals match direct quadrature of the tail") {
  const double c = 1.5, mu = 0.3;
  ForkSchedule s({{0.0, 2}, {2.0, 3}, {5.5, 2}});
  for (int K : {2, 7}) {
    const auto terms = interval_integrals(s, c, mu, K, IntegralForm::telescoping);
    auto f = [&](double t) { return makespan_ccdf(s, c, mu, K, t); };
    // standard[i] integrates [t_i + c, t_{i+1} + c); the last piece runs to
    // infinity, so check it through the total instead.
    for (int i = 0; i + 1 <= s.m(); ++i) {
      const double a = s.stages[static_cast<std::size_t>(i)].t + c;
      const double b = s.stages[static_cast<std::size_t>(i + 1)].t + c;
      CHECK(terms.standard[static_cast<std::size_t>(i)] ==
            doctest::Approx(ts::adaptive_simpson(f, a, b, 1e-12)).epsilon(1e-9));
    }
    // leading[i-1] integrates [t_i, t_i + c).
    for (int i = 1; i <= s.m(); ++i) {
      const double a = s.stages[static_cast<std::size_t>(i)].t;
      CHECK(terms.leading[static_cast<std::size_t>(i - 1)] ==
            doctest::Approx(ts::adaptive_simpson(f, a, a + c, 1e-12)).epsilon(1e-9));
    }
  }
}

TEST_CASE("telescoping and alternating forms agree for small K") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = 0.5 + 2.0 * std::uniform_real_distribution<double>()(rng);
    const double mu = 0.1 + 0.8 * std::uniform_real_distribution<double>()(rng);
    const auto s = ts::random_gap_schedule(rng, c);
    const int K = 1 + static_cast<int>(rng() % 15);
    const auto tele = interval_integrals(s, c, mu, K, IntegralForm::telescoping);
    const auto alt =
        interval_integrals(s, c, mu, K, IntegralForm::alternating_binomial);
    REQUIRE(tele.standard.size() == alt.standard.size());
    REQUIRE(tele.leading.size() == alt.leading.size());
    for (std::size_t i = 0; i < tele.standard.size(); ++i)
      CHECK(ts::rel_diff(tele.standard[i], alt.standard[i]) < 1e-9);
    for (std::size_t i = 0; i < tele.leading.size(); ++i)
      CHECK(ts::rel_diff(tele.leading[i], alt.leading[i]) < 1e-9);
  }
}

TEST_CASE("alternating form refuses large K") {
  ForkSchedule s({{0.0, 2}, {3.0, 4}});
  CHECK_NOTHROW(interval_integrals(s, 2.0, 0.3, 20, IntegralForm::alternating_binomial));
  CHECK_THROWS_AS(interval_integrals(s, 2.0, 0.3, 21, IntegralForm::alternating_binomial),
                  numerical_error);
}

TEST_CASE("gap violations route to the other evaluators") {
  ForkSchedule tight({{0.0, 4}, {1.0, 3}});
  CHECK_THROWS_AS(mean_completion_time(tight, 2.0, 0.3, 5), validation_error);
  CHECK_THROWS_AS(mean_utilization_cost(tight, 2.0, 0.3, 1.0), validation_error);
  try {
    mean_completion_time(tight, 2.0, 0.3, 5);
  } catch (const validation_error& e) {
    const std::string what = e.what();
    const bool mentions_alternative =
        what.find("single-fork") != std::string::npos ||
        what.find("simulat") != std::string::npos;
    CHECK(mentions_alternative);
  }
}

TEST_CASE("parameter validation") {
  ForkSchedule s({{0.0, 4}});
  CHECK_THROWS_AS(mean_completion_time(s, -1.0, 0.3, 5), validation_error);
  CHECK_THROWS_AS(mean_completion_time(s, 2.0, 0.0, 5), validation_error);
  CHECK_THROWS_AS(mean_completion_time(s, 2.0, 0.3, 0), validation_error);
  CHECK_THROWS_AS(mean_utilization_cost(s, 2.0, 0.3, 0.0), validation_error);
}

TEST_CASE("real valued evaluators extend the integer ones") {
  ForkSchedule s({{0.0, 2}, {3.0, 4}, {8.0, 3}});
  const std::vector<double> times = {0.0, 3.0, 8.0};
  const std::vector<double> counts = {2.0, 4.0, 3.0};
  CHECK(mean_completion_real(times, counts, 2.0, 0.35, 6) ==
        doctest::Approx(mean_completion_time(s, 2.0, 0.35, 6)).epsilon(1e-14));
  CHECK(mean_cost_real(times, counts, 2.0, 0.35, 1.5) ==
        doctest::Approx(mean_utilization_cost(s, 2.0, 0.35, 1.5)).epsilon(1e-14));
  // Fractional counts are the optimizer's relaxation; sanity: monotone in n0.
  const double lo = mean_completion_real({0.0}, {3.4}, 2.0, 0.35, 6);
  const double hi = mean_completion_real({0.0}, {3.6}, 2.0, 0.35, 6);
  CHECK(hi < lo);
}

TEST_CASE("more servers forked earlier never hurt the completion tail") {
  // Moving a server from a later batch to an earlier one weakly shrinks the
  // single-task tail at every t, hence the mean too.
  std::mt19937_64 rng(55);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    const double c = 0.5 + 2.0 * std::uniform_real_distribution<double>()(rng);
    const double mu = 0.1 + 0.8 * std::uniform_real_distribution<double>()(rng);
    const auto a = ts::random_gap_schedule(rng, c);
    if (a.m() < 1) continue;
    // Build b by moving one server from stage j to the later stage j2.
    std::vector<Stage> stages = a.stages;
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(a.m()));
    if (stages[static_cast<std::size_t>(j)].n <= (j == 0 ? 1 : 0)) continue;
    stages[static_cast<std::size_t>(j)].n -= 1;
    stages[static_cast<std::size_t>(j + 1)].n += 1;
    const auto b = ForkSchedule::normalized(std::move(stages));
    ++checked;
    const double horizon = a.stages.back().t + c + 30.0 / (mu * a.total_servers());
    for (int g = 0; g <= 40; ++g) {
      const double t = horizon * g / 40.0;
      CHECK(single_task_ccdf(b, c, mu, t) >= single_task_ccdf(a, c, mu, t) - 1e-12);
    }
    for (int K : {1, 5}) {
      CHECK(mean_completion_time(b, c, mu, K) >=
            mean_completion_time(a, c, mu, K) - 1e-10);
    }
  }
  CHECK(checked >= 25);
}

}  // TEST_SUITE
