#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachenet/evaluate.hpp"
#include "cachenet/routing.hpp"
#include "test_util.hpp"

using namespace cachenet;
using namespace cachenet::testutil;

TEST_CASE("eval_ci with everything uncached") {
  ProblemInstance inst = make_instance(3, 2, 1);
  inst.request_rate = {1.0, 2.0, 3.0};
  inst.uncached_base_delay = {4.0, 5.0, 6.0};
  RoutingPolicy none(3, 2);
  auto rep = eval_ci(inst, Placement(1), none);
  CHECK(rep.average_delay == doctest::Approx((4.0 + 10.0 + 18.0) / 6.0));
  CHECK(rep.cached_fraction == 0.0);
}

TEST_CASE("eval_ci single cached hit") {
  ProblemInstance inst = make_instance(1, 1, 1);
  Placement p(1);
  p.stored[0].insert(0);
  RoutingPolicy r(1, 1);
  r.set(0, 0, 0, 1.0);
  CHECK(eval_ci(inst, p, r).average_delay == doctest::Approx(1.0));
}

TEST_CASE("eval_ci mixes hit and uncached users") {
  // user 0: rate 1, file cached at hit delay 2; user 1: rate 3, uncached
  // base 10. Average = (1*2 + 3*10) / 4 = 8.
  ProblemInstance inst = make_instance(2, 1, 1);
  inst.request_rate = {1.0, 3.0};
  inst.hit_delay = {2.0, 2.0};
  inst.uncached_base_delay = {9.0, 10.0};
  Placement p(1);
  p.stored[0].insert(0);
  RoutingPolicy r(2, 1);
  r.set(0, 0, 0, 1.0);
  auto rep = eval_ci(inst, p, r);
  CHECK(rep.average_delay == doctest::Approx(8.0));
  CHECK(rep.per_user_delay[0] == doctest::Approx(2.0));
  CHECK(rep.per_user_delay[1] == doctest::Approx(10.0));
  CHECK(rep.cached_fraction == doctest::Approx(0.25));
}

TEST_CASE("eval_cs with an empty queue") {
  ProblemInstance inst = make_instance(2, 2, 1);
  set_cs(inst, 3.0);
  Placement p(1);
  p.stored[0].insert(0);
  p.stored[0].insert(1);
  RoutingPolicy r(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.set(i, j, 0, 1.0);
  auto rep = eval_cs(inst, p, r);
  CHECK(rep.queue_load == 0.0);
  CHECK(rep.average_delay == doctest::Approx(1.0));
  CHECK(rep.stable);
}

TEST_CASE("eval_cs adds the M/M/1 term") {
  ProblemInstance inst = make_instance(1, 1, 1);
  set_cs(inst, 2.0);
  inst.uncached_base_delay = {5.0};
  RoutingPolicy none(1, 1);
  auto rep = eval_cs(inst, Placement(1), none);
  CHECK(rep.queue_load == doctest::Approx(1.0));
  CHECK(rep.average_delay == doctest::Approx(6.0));
}

TEST_CASE("eval_cs reports saturation instead of throwing") {
  ProblemInstance inst = make_instance(1, 1, 1);
  set_cs(inst, 1.0);  // load 1 == mu
  RoutingPolicy none(1, 1);
  auto rep = eval_cs(inst, Placement(1), none);
  CHECK(!rep.stable);
  CHECK(std::isinf(rep.average_delay));
}

TEST_CASE("eval_ci and eval_cs reject the other model") {
  ProblemInstance ci = make_instance(1, 1, 1);
  ProblemInstance cs = make_instance(1, 1, 1);
  set_cs(cs, 2.0);
  RoutingPolicy none(1, 1);
  CHECK_THROWS_AS((void)eval_ci(cs, Placement(1), none), std::invalid_argument);
  CHECK_THROWS_AS((void)eval_cs(ci, Placement(1), none), std::invalid_argument);
}

TEST_CASE("evaluate rejects routing into unreachable caches") {
  ProblemInstance inst = make_instance(1, 1, 2);
  inst.adjacency[1] = 0;
  RoutingPolicy r(1, 1);
  r.set(0, 0, 1, 0.5);
  CHECK_THROWS_AS((void)eval_ci(inst, Placement(2), r), std::invalid_argument);
}

TEST_CASE("evaluate rejects routing sums above one") {
  ProblemInstance inst = make_instance(1, 1, 2);
  RoutingPolicy r(1, 1);
  r.set(0, 0, 0, 0.7);
  r.set(0, 0, 1, 0.5);
  CHECK_THROWS_AS((void)eval_ci(inst, Placement(2), r), std::invalid_argument);
}

TEST_CASE("the congestion-insensitive model is the infinite-service limit") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    ProblemInstance ci = random_instance(rng, 4, 3, 2, false);
    ProblemInstance cs = ci;
    set_cs(cs, 1e12);
    Placement p = random_placement(rng, ci);
    RoutingPolicy r = optimal_routing_ci(ci, p);
    double a = eval_ci(ci, p, r).average_delay;
    double b = eval_cs(cs, p, r).average_delay;
    CHECK(std::abs(a - b) <= 1e-6);
  }
}

TEST_CASE("eval_ci is affine in each routing fraction") {
  ProblemInstance inst = make_instance(2, 2, 2);
  Placement p(2);
  p.stored[0].insert(0);
  auto with_fraction = [&](double f) {
    RoutingPolicy r(2, 2);
    r.set(0, 0, 0, f);
    r.set(1, 1, 1, 0.5);
    return eval_ci(inst, p, r).average_delay;
  };
  double lo = with_fraction(0.2), hi = with_fraction(0.8), mid = with_fraction(0.5);
  CHECK(std::abs(mid - 0.5 * (lo + hi)) <= 1e-12);
}

TEST_CASE("eval_cs is convex in the routing vector") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    ProblemInstance inst = random_instance(rng, 3, 3, 2, true);
    Placement p = random_placement(rng, inst);
    auto random_routing = [&]() {
      RoutingPolicy r(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double budget = 1.0;
          for (int m = 0; m < 2; ++m)
            if (inst.connected(i, m)) {
              double f = rng.u01() * budget;
              budget -= f;
              r.set(i, j, m, f);
            }
        }
      return r;
    };
    RoutingPolicy a = random_routing(), b = random_routing();
    // midpoint policy: average the per-(class, cache) fractions
    RoutingPolicy avg(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        for (const auto& [m, f] : a.at(i, j)) avg.set(i, j, m, 0.5 * f);
        for (const auto& [m, f] : b.at(i, j)) {
          double existing = 0.0;
          for (const auto& [mm, ff] : avg.at(i, j))
            if (mm == m) existing = ff;
          avg.set(i, j, m, existing + 0.5 * f);
        }
      }
    double da = eval_cs(inst, p, a).average_delay;
    double db = eval_cs(inst, p, b).average_delay;
    double dm = eval_cs(inst, p, avg).average_delay;
    if (std::isinf(da) || std::isinf(db)) continue;
    CHECK(dm <= 0.5 * (da + db) + 1e-9);
  }
}

TEST_CASE("the two queue-term forms agree") {
  // average(cs) - average(ci twin) must equal (mu/(mu-load) - 1)/lambda
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ProblemInstance cs = random_instance(rng, 3, 3, 2, true);
    ProblemInstance ci = cs;
    ci.uncached_model = UncachedModel::kCongestionInsensitive;
    ci.service_rate = 0.0;
    Placement p = random_placement(rng, cs);
    RoutingPolicy r = optimal_routing_ci(ci, p);
    auto rep = eval_cs(cs, p, r);
    if (!rep.stable) continue;
    double path_only = eval_ci(ci, p, r).average_delay;
    double alt = path_only +
                 (cs.service_rate / (cs.service_rate - rep.queue_load) - 1.0) / cs.total_rate();
    CHECK(rep.average_delay == doctest::Approx(alt).epsilon(1e-12));
  }
}
