#include <random>
#include <vector>

#include "doctest.h"
#include "forksched/errors.hpp"
#include "forksched/schedule.hpp"
#include "support.hpp"

using namespace forksched;

TEST_SUITE("schedule") {

TEST_CASE("construction and totals") {
  ForkSchedule s({{0.0, 4}, {2.0, 5}, {4.0, 3}});
  CHECK(s.m() == 2);
  CHECK(s.total_servers() == 12);
  ForkSchedule single({{0.0, 12}});
  CHECK(single.m() == 0);
  CHECK(single.total_servers() == 12);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(ForkSchedule({}), validation_error);
  CHECK_THROWS_AS(ForkSchedule({{1.0, 4}}), validation_error);          // t0 != 0
  CHECK_THROWS_AS(ForkSchedule({{0.0, 0}}), validation_error);          // n0 = 0
  CHECK_THROWS_AS(ForkSchedule({{0.0, -2}}), validation_error);
  CHECK_THROWS_AS(ForkSchedule({{0.0, 4}, {2.0, -1}}), validation_error);
  CHECK_THROWS_AS(ForkSchedule({{0.0, 4}, {2.0, 1}, {2.0, 1}}), validation_error);
  CHECK_THROWS_AS(ForkSchedule({{0.0, 4}, {3.0, 1}, {2.0, 1}}), validation_error);
}

TEST_CASE("normalized drops zero batches and merges coincident times") {
  auto s = ForkSchedule::normalized({{0.0, 4}, {2.0, 0}, {5.0, 3}});
  REQUIRE(s.m() == 1);
  CHECK(s.stages[1].t == 5.0);
  CHECK(s.stages[1].n == 3);

  auto merged = ForkSchedule::normalized({{0.0, 2}, {0.0, 3}, {4.0, 1}});
  REQUIRE(merged.m() == 1);
  CHECK(merged.stages[0].n == 5);
  CHECK(merged.stages[1].n == 1);

  auto tail = ForkSchedule::normalized({{0.0, 1}, {3.0, 2}, {3.0, 4}});
  REQUIRE(tail.m() == 1);
  CHECK(tail.stages[1].n == 6);

  // Still rejects what no amount of cleanup can fix.
  CHECK_THROWS_AS(ForkSchedule::normalized({{0.0, 0}, {2.0, 3}}), validation_error);
  CHECK_THROWS_AS(ForkSchedule::normalized({{1.0, 3}}), validation_error);
}

TEST_CASE("derived cumulative counts and utilization times") {
  ForkSchedule s({{0.0, 4}, {2.0, 5}, {4.0, 3}});
  const auto d = derive(s);
  REQUIRE(d.cumulative.size() == 3);
  CHECK(d.cumulative[0] == 4);
  CHECK(d.cumulative[1] == 9);
  CHECK(d.cumulative[2] == 12);
  CHECK(d.total == 12);
  // tau_i = tau_{i-1} + N_{i-1} (t_i - t_{i-1})
  CHECK(d.utilization[0] == 0.0);
  CHECK(d.utilization[1] == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(d.utilization[2] == doctest::Approx(26.0).epsilon(1e-15));
}

TEST_CASE("gap check") {
  ForkSchedule s({{0.0, 4}, {2.0, 5}, {4.0, 3}});
  CHECK(gap_ok(s, 2.0));
  CHECK(gap_ok(s, 1.0));
  CHECK_FALSE(gap_ok(s, 2.5));
  ForkSchedule single({{0.0, 7}});
  CHECK(gap_ok(single, 1e9));
}

TEST_CASE("derived invariants on random schedules") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = 0.25 + 4.0 * std::uniform_real_distribution<double>()(rng);
    const auto s = testsupport::random_gap_schedule(rng, c);
    const auto d = derive(s);
    CHECK(gap_ok(s, c));
    CHECK(d.total == s.total_servers());
    CHECK(d.cumulative.back() == s.total_servers());
    int run = 0;
    for (std::size_t i = 0; i < d.cumulative.size(); ++i) {
      run += s.stages[i].n;
      CHECK(d.cumulative[i] == run);
      if (i > 0) {
        CHECK(d.utilization[i] >= d.utilization[i - 1]);
        const double expect =
            d.utilization[i - 1] +
            d.cumulative[i - 1] * (s.stages[i].t - s.stages[i - 1].t);
        CHECK(d.utilization[i] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

}  // TEST_SUITE
