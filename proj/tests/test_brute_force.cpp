#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachenet/brute_force.hpp"
#include "cachenet/greedy.hpp"
#include "test_util.hpp"

using namespace cachenet;
using namespace cachenet::testutil;

TEST_CASE("a cache that fits the catalog stores all of it") {
  ProblemInstance inst = make_instance(2, 3, 1);
  inst.cache_capacity = {3};
  auto result = brute_force_placement(inst);
  CHECK(result.placement.stored[0] == std::set<int>{0, 1, 2});
}

TEST_CASE("two competing files, one slot: the higher gain wins") {
  // user 0 wants file 0 (gain 4), user 1 wants file 1 (gain 3)
  ProblemInstance inst = make_instance(2, 2, 1);
  inst.popularity = {1.0, 0.0, 0.0, 1.0};
  inst.uncached_base_delay = {5.0, 4.0};
  auto result = brute_force_placement(inst);
  CHECK(result.placement.stored[0] == std::set<int>{0});
  CHECK(result.report.average_delay == doctest::Approx((1.0 + 4.0) / 2.0));
}

TEST_CASE("the enumeration cap is enforced") {
  ProblemInstance inst = make_instance(2, 30, 2);
  inst.cache_capacity = {15, 15};
  BruteForceOptions opts;
  opts.max_enumerations = 1000;
  CHECK_THROWS_AS((void)brute_force_placement(inst, opts), std::runtime_error);
}

TEST_CASE("parallel and serial enumeration agree exactly") {
  Rng rng(53);
  for (int trial = 0; trial < 12; ++trial) {
    for (bool cs : {false, true}) {
      ProblemInstance inst = random_instance(rng, 3, 5, 2, cs);
      BruteForceOptions serial;
      serial.parallel = false;
      auto a = brute_force_placement(inst);
      auto b = brute_force_placement(inst, serial);
      CHECK(a.placement == b.placement);
      CHECK(a.report.average_delay == b.report.average_delay);
    }
  }
}

TEST_CASE("no other solver beats the exhaustive optimum") {
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    for (bool cs : {false, true}) {
      ProblemInstance inst = random_instance(rng, 3, 4, 2, cs);
      double best = brute_force_placement(inst).report.average_delay;
      CHECK(greedy_wg(inst).report.average_delay >= best - 1e-9);
      CHECK(greedy_fast(inst).report.average_delay >= best - 1e-9);
    }
  }
}

TEST_CASE("partition question maps to the delay decision instance") {
  CsddpInstance c = ecp_to_csddp({{1.0, 2.0, 3.0, 4.0}});
  CHECK(c.service_rate == 10.0);
  CHECK(c.capacity == 2);
  CHECK(c.target_delay == doctest::Approx(1.1));
  REQUIRE(c.rate.size() == 4);
  for (double h : c.hit_delay) CHECK(h == doctest::Approx(0.4));
  CHECK(c.base_delay[0] == doctest::Approx(4.0));
  CHECK(c.base_delay[1] == doctest::Approx(2.0));
  CHECK(c.base_delay[2] == doctest::Approx(4.0 / 3.0));
  CHECK(c.base_delay[3] == doctest::Approx(1.0));
}

TEST_CASE("the reduction rejects bad inputs") {
  CHECK_THROWS_AS((void)ecp_to_csddp({{1.0, 2.0, 3.0}}), std::invalid_argument);  // odd
  CHECK_THROWS_AS((void)ecp_to_csddp({{1.0, -2.0}}), std::invalid_argument);
  CHECK_THROWS_AS((void)ecp_to_csddp({{1.0}}), std::invalid_argument);
}

TEST_CASE("zero numbers become zero-rate users and are dropped") {
  CsddpInstance c = ecp_to_csddp({{1.0, 0.0, 3.0, 0.0}});
  CHECK(c.rate == std::vector<double>{1.0, 3.0});
  CHECK(c.capacity == 2);
}

TEST_CASE("csddp_brute reaches the target exactly when a partition exists") {
  auto [d1, s1] = csddp_brute(ecp_to_csddp({{1.0, 2.0, 3.0, 4.0}}));
  CHECK(d1 == doctest::Approx(1.1).epsilon(1e-12));  // {1,4} vs {2,3}
  CHECK(s1.size() == 2);

  auto [d2, s2] = csddp_brute(ecp_to_csddp({{1.0, 1.0}}));
  CHECK(d2 == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(s2.size() == 1);

  auto [d3, s3] = csddp_brute(ecp_to_csddp({{2.0, 2.0, 2.0, 2.0}}));
  CHECK(d3 == doctest::Approx(11.0 / 8.0).epsilon(1e-12));

  auto [d4, s4] = csddp_brute(ecp_to_csddp({{1.0, 1.0, 1.0, 3.0}}));
  CHECK(d4 > (2.0 * 4 + 3) / 6.0 + 1e-9);
}

TEST_CASE("reduction soundness on a small battery") {
  Rng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 * (1 + int(rng.below(4)));  // 2..8
    std::vector<long long> a;
    std::vector<double> numbers;
    for (int i = 0; i < n; ++i) {
      long long v = 1 + (long long)rng.below(9);
      a.push_back(v);
      numbers.push_back(double(v));
    }
    double sum = 0.0;
    for (double v : numbers) sum += v;
    auto [min_delay, subset] = csddp_brute(ecp_to_csddp({numbers}));
    bool reaches_target = std::abs(min_delay - (2.0 * n + 3) / sum) <= 1e-9;
    CHECK(reaches_target == has_equal_partition(a));
  }
}
