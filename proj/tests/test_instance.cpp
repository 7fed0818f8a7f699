#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachenet/instance.hpp"
#include "test_util.hpp"

using namespace cachenet;
using namespace cachenet::testutil;

TEST_CASE("validate accepts a well-formed instance") {
  ProblemInstance inst = make_instance(2, 2, 1);
  CHECK(validate(inst).empty());
}

TEST_CASE("validate flags a popularity row that does not sum to 1") {
  ProblemInstance inst = make_instance(2, 2, 1);
  inst.popularity[0] = 0.4;
  inst.popularity[1] = 0.5;
  auto violations = validate(inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("popularity") != std::string::npos);
  CHECK(violations[0].find("0") != std::string::npos);
}

TEST_CASE("validate allows an all-zero popularity row (silent user)") {
  ProblemInstance inst = make_instance(2, 2, 1);
  inst.popularity[0] = 0.0;
  inst.popularity[1] = 0.0;
  CHECK(validate(inst).empty());
}

TEST_CASE("validate requires miss strictly above hit on connected pairs") {
  ProblemInstance inst = make_instance(2, 2, 1);
  inst.miss_delay[1] = inst.hit_delay[1];
  auto violations = validate(inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("miss_delay[1][0]") != std::string::npos);

  // the same delays on a disconnected pair are fine
  inst.adjacency[1] = 0;
  CHECK(validate(inst).empty());
}

TEST_CASE("validate names the offending field and index") {
  ProblemInstance inst = make_instance(3, 2, 2);
  inst.cache_capacity[1] = 0;
  inst.request_rate[2] = -1.0;
  auto violations = validate(inst);
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].find("request_rate[2]") != std::string::npos);
  CHECK(violations[1].find("cache_capacity[1]") != std::string::npos);
}

TEST_CASE("validate checks the service rate under the congestion-sensitive model") {
  ProblemInstance inst = make_instance(1, 1, 1);
  set_cs(inst, 0.0);
  auto violations = validate(inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("service_rate") != std::string::npos);
}

TEST_CASE("cached_delay hits, misses and unreachable users") {
  ProblemInstance inst = make_instance(1, 2, 1);
  Placement p(1);
  p.stored[0].insert(0);
  CHECK(cached_delay(inst, p, 0, 0) == 1.0);   // hit
  CHECK(cached_delay(inst, p, 0, 1) == 30.0);  // miss

  inst.adjacency[0] = 0;
  CHECK(cached_delay(inst, p, 0, 0) == kInfiniteDelay);
}

TEST_CASE("cached_delay takes the minimum over connected caches") {
  ProblemInstance inst = make_instance(1, 1, 2);
  inst.miss_delay[0] = 30.0;
  inst.miss_delay[1] = 27.0;
  Placement empty(2);
  CHECK(cached_delay(inst, empty, 0, 0) == 27.0);

  // the file sits only in the farther cache, whose hit still beats the
  // nearer cache's miss
  inst.hit_delay[1] = 5.0;
  inst.miss_delay[0] = 26.0;
  Placement far_only(2);
  far_only.stored[1].insert(0);
  CHECK(cached_delay(inst, far_only, 0, 0) == 5.0);
}

TEST_CASE("cached_delay is monotone under placement growth") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemInstance inst = random_instance(rng, 3, 4, 3, false);
    Placement small = random_placement(rng, inst);
    Placement big = small;
    // grow within capacity
    for (int m = 0; m < inst.num_caches; ++m)
      while (int(big.stored[m].size()) < std::min(inst.cache_capacity[m], inst.num_files))
        big.stored[m].insert(int(rng.below(inst.num_files)));
    for (int i = 0; i < inst.num_users; ++i)
      for (int j = 0; j < inst.num_files; ++j)
        CHECK(cached_delay(inst, big, i, j) <= cached_delay(inst, small, i, j));
  }
}

TEST_CASE("cached_delay ignores disconnected caches") {
  ProblemInstance inst = make_instance(1, 1, 2);
  inst.adjacency[1] = 0;
  inst.hit_delay[1] = 0.001;  // irrelevant: unreachable
  Placement p(2);
  p.stored[1].insert(0);
  CHECK(cached_delay(inst, p, 0, 0) == 30.0);
}

TEST_CASE("routing policy accumulates and rewrites entries") {
  RoutingPolicy r(2, 2);
  r.set(0, 1, 0, 0.25);
  r.set(0, 1, 1, 0.5);
  r.set(0, 1, 0, 0.3);
  CHECK(r.cached_fraction(0, 1) == doctest::Approx(0.8));
  CHECK(r.at(0, 1).size() == 2);
}
