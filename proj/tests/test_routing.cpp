#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachenet/evaluate.hpp"
#include "cachenet/routing.hpp"
#include "test_util.hpp"

using namespace cachenet;
using namespace cachenet::testutil;

namespace {

bool same_policy(const RoutingPolicy& a, const RoutingPolicy& b) {
  if (a.num_users != b.num_users || a.num_files != b.num_files) return false;
  for (int i = 0; i < a.num_users; ++i)
    for (int j = 0; j < a.num_files; ++j) {
      auto ea = a.at(i, j), eb = b.at(i, j);
      std::erase_if(ea, [](auto& e) { return e.second == 0.0; });
      std::erase_if(eb, [](auto& e) { return e.second == 0.0; });
      std::sort(ea.begin(), ea.end());
      std::sort(eb.begin(), eb.end());
      if (ea != eb) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("CI routing prefers a cheap cached path") {
  ProblemInstance inst = make_instance(1, 1, 1);
  Placement p(1);
  p.stored[0].insert(0);
  RoutingPolicy r = optimal_routing_ci(inst, p);
  REQUIRE(r.at(0, 0).size() == 1);
  CHECK(r.at(0, 0)[0] == std::pair{0, 1.0});
}

TEST_CASE("CI routing never uses miss paths") {
  ProblemInstance inst = make_instance(1, 1, 1);
  RoutingPolicy r = optimal_routing_ci(inst, Placement(1));
  CHECK(r.at(0, 0).empty());
}

TEST_CASE("CI routing picks the lowest-delay holding cache") {
  ProblemInstance inst = make_instance(1, 1, 2);
  inst.hit_delay = {4.0, 2.0};
  Placement p(2);
  p.stored[0].insert(0);
  p.stored[1].insert(0);
  RoutingPolicy r = optimal_routing_ci(inst, p);
  REQUIRE(r.at(0, 0).size() == 1);
  CHECK(r.at(0, 0)[0].first == 1);
}

TEST_CASE("CI routing breaks a hit/base tie toward the cache, then lowest index") {
  ProblemInstance inst = make_instance(1, 1, 2);
  inst.hit_delay = {5.0, 5.0};  // equal to the base delay
  Placement p(2);
  p.stored[0].insert(0);
  p.stored[1].insert(0);
  RoutingPolicy r = optimal_routing_ci(inst, p);
  REQUIRE(r.at(0, 0).size() == 1);
  CHECK(r.at(0, 0)[0] == std::pair{0, 1.0});

  // strictly worse hits fall back to the uncached path
  inst.hit_delay = {5.5, 6.0};
  RoutingPolicy r2 = optimal_routing_ci(inst, p);
  CHECK(r2.at(0, 0).empty());
}

TEST_CASE("CS routing at huge service rate reproduces CI routing") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    ProblemInstance ci = random_instance(rng, 4, 4, 3, false);
    ProblemInstance cs = ci;
    set_cs(cs, 1e12);
    Placement p = random_placement(rng, ci);
    RoutingPolicy want = optimal_routing_ci(ci, p);
    auto got = optimal_routing_cs(cs, p);
    CHECK(same_policy(want, got.policy));
  }
}

TEST_CASE("CS routing solves the one-class trade-off exactly") {
  // One user, rate 1, file cached at delay 3, base 1, mu 2: sending the class
  // to the cache costs 3; keeping it on the queue costs 1 + 1/(2-1) = 2.
  ProblemInstance inst = make_instance(1, 1, 1);
  set_cs(inst, 2.0);
  inst.hit_delay = {3.0};
  inst.miss_delay = {40.0};
  inst.uncached_base_delay = {1.0};
  Placement p(1);
  p.stored[0].insert(0);
  auto [policy, threshold] = optimal_routing_cs(inst, p);
  auto rep = eval_cs(inst, p, policy);
  CHECK(rep.average_delay == doctest::Approx(2.0));
  CHECK(threshold.marginal_queue_cost == doctest::Approx(2.0));
  // grid oracle agrees
  CHECK(std::abs(rep.average_delay - cs_routing_grid_oracle(inst, p)) <= 1e-6);
}

TEST_CASE("CS routing leaves everything uncached when caches are hopeless") {
  ProblemInstance inst = make_instance(1, 2, 1);
  set_cs(inst, 1.0);
  inst.request_rate = {0.5};
  inst.hit_delay = {50.0};
  inst.miss_delay = {200.0};
  inst.uncached_base_delay = {1.0};
  auto [policy, threshold] = optimal_routing_cs(inst, Placement(1));
  for (int j = 0; j < 2; ++j) CHECK(policy.at(0, j).empty());
  CHECK(threshold.queue_load == doctest::Approx(0.5));
}

TEST_CASE("CS routing under mandatory saturation still returns a policy") {
  ProblemInstance inst = make_instance(2, 1, 1);
  set_cs(inst, 0.5);
  inst.adjacency = {1, 0};  // user 1 is stuck on the queue with rate 1 >= mu
  Placement p(1);
  p.stored[0].insert(0);
  auto [policy, threshold] = optimal_routing_cs(inst, p);
  CHECK(policy.at(0, 0).size() == 1);  // connected class routed to its cache
  CHECK(std::isinf(threshold.marginal_queue_cost));
  auto rep = eval_cs(inst, p, policy);
  CHECK(!rep.stable);
  CHECK(std::isinf(rep.average_delay));
}

TEST_CASE("threshold fixed point and consistency on random instances") {
  Rng rng(29);
  int split_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    ProblemInstance inst = random_instance(rng, 4, 4, 2, true);
    Placement p = random_placement(rng, inst);
    auto [policy, threshold] = optimal_routing_cs(inst, p);
    auto rep = eval_cs(inst, p, policy);
    if (!rep.stable) continue;

    double t = threshold.marginal_queue_cost;
    double mu = inst.service_rate;
    double residual = t - mu / ((mu - rep.queue_load) * (mu - rep.queue_load));
    CHECK(std::abs(residual) <= 1e-9 * std::max(1.0, t));
    CHECK(std::abs(threshold.queue_load - rep.queue_load) <= 1e-9 * std::max(1.0, rep.queue_load));

    for (int i = 0; i < inst.num_users; ++i) {
      for (int j = 0; j < inst.num_files; ++j) {
        if (inst.class_rate(i, j) <= 0.0) continue;
        double d = cached_delay(inst, p, i, j);
        if (!std::isfinite(d)) continue;
        double e = d - inst.d_base(i);
        double frac = policy.cached_fraction(i, j);
        if (frac == 1.0) CHECK(e <= t + 1e-9);
        if (frac == 0.0) CHECK(e >= t - 1e-9);
      }
    }
    for (auto [i, j] : threshold.split_classes) {
      ++split_seen;
      double e = cached_delay(inst, p, i, j) - inst.d_base(i);
      CHECK(std::abs(e - t) <= 1e-9 * std::max(1.0, t));
    }
  }
  (void)split_seen;  // splits are rare with continuous random delays
}

TEST_CASE("CS objective matches the fine grid oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    ProblemInstance inst = random_instance(rng, 3, 3, 2, true);
    Placement p = random_placement(rng, inst);
    auto [policy, threshold] = optimal_routing_cs(inst, p);
    auto rep = eval_cs(inst, p, policy);
    double oracle = cs_routing_grid_oracle(inst, p);
    if (std::isinf(rep.average_delay)) {
      CHECK(std::isinf(oracle));
    } else {
      CHECK(rep.average_delay <= oracle + 1e-9);
      CHECK(std::abs(rep.average_delay - oracle) <= 1e-6);
    }
  }
}

TEST_CASE("CS objective matches a coarse full grid on tiny instances") {
  // every routing vector on a 0.02 grid, evaluated through the public
  // evaluator; at most three demand classes
  Rng rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    ProblemInstance inst = random_instance(rng, 3, 1, 1, true, 1.0);
    Placement p(1);
    if (trial % 2 == 0) p.stored[0].insert(0);
    double best = kInfiniteDelay;
    const int steps = 50;
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; b <= steps; ++b)
        for (int c = 0; c <= steps; ++c) {
          RoutingPolicy r(3, 1);
          r.set(0, 0, 0, double(a) / steps);
          r.set(1, 0, 0, double(b) / steps);
          r.set(2, 0, 0, double(c) / steps);
          best = std::min(best, eval_cs(inst, p, r).average_delay);
        }
    double got = -submodular_value(inst, p);
    CHECK(got <= best + 1e-9);
    CHECK(std::abs(got - best) <= 1e-4);
  }
}

TEST_CASE("threshold decreases as the placement grows (homogeneous base delay)") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    ProblemInstance inst = random_instance(rng, 4, 4, 2, true);
    inst.uncached_base_delay.assign(4, 6.0);
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 2; ++m)
        if (inst.connected(i, m))
          inst.miss_delay[size_t(i) * 2 + m] = 6.0 + rng.uniform(1.0, 20.0);
    Placement small = random_placement(rng, inst);
    Placement big = small;
    for (int m = 0; m < 2; ++m)
      while (int(big.stored[m].size()) < std::min(inst.cache_capacity[m], inst.num_files))
        big.stored[m].insert(int(rng.below(inst.num_files)));
    auto a = optimal_routing_cs(inst, small);
    auto b = optimal_routing_cs(inst, big);
    if (std::isinf(a.threshold.marginal_queue_cost)) continue;
    CHECK(a.threshold.marginal_queue_cost >= b.threshold.marginal_queue_cost - 1e-9);
  }
}

TEST_CASE("submodular_value equals the negated evaluated optimal routing") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    for (bool cs : {false, true}) {
      ProblemInstance inst = random_instance(rng, 3, 3, 2, cs);
      Placement p = random_placement(rng, inst);
      double f = submodular_value(inst, p);
      double evaluated;
      if (cs) {
        auto r = optimal_routing_cs(inst, p);
        evaluated = eval_cs(inst, p, r.policy).average_delay;
      } else {
        evaluated = eval_ci(inst, p, optimal_routing_ci(inst, p)).average_delay;
      }
      if (std::isinf(evaluated)) {
        CHECK(std::isinf(f));
      } else {
        CHECK(f == doctest::Approx(-evaluated).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("submodular_value of the empty placement under CI") {
  ProblemInstance inst = make_instance(3, 2, 1);
  inst.request_rate = {1.0, 2.0, 1.0};
  inst.uncached_base_delay = {5.0, 7.0, 9.0};
  double expected = -(5.0 + 14.0 + 9.0) / 4.0;
  CHECK(submodular_value(inst, Placement(1)) == doctest::Approx(expected));
}

TEST_CASE("submodular_value is monotone and submodular") {
  Rng rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    for (bool cs : {false, true}) {
      ProblemInstance inst = random_instance(rng, 3, 4, 2, cs);
      // nested placements X subset Y with one unit of headroom
      Placement x(inst.num_caches), y(inst.num_caches);
      for (int m = 0; m < inst.num_caches; ++m) {
        int cap = std::min(inst.cache_capacity[m], inst.num_files);
        int y_size = cap > 0 ? int(rng.below(uint64_t(cap))) : 0;
        while (int(y.stored[m].size()) < y_size) y.stored[m].insert(int(rng.below(inst.num_files)));
        for (int j : y.stored[m])
          if (rng.u01() < 0.6) x.stored[m].insert(j);
      }
      int m = int(rng.below(inst.num_caches));
      int cap = std::min(inst.cache_capacity[m], inst.num_files);
      if (int(y.stored[m].size()) >= cap) continue;
      int s = int(rng.below(inst.num_files));
      if (y.contains(m, s)) continue;

      double fx = submodular_value(inst, x);
      double fy = submodular_value(inst, y);
      Placement xs = x, ys = y;
      xs.stored[m].insert(s);
      ys.stored[m].insert(s);
      double fxs = submodular_value(inst, xs);
      double fys = submodular_value(inst, ys);
      if (std::isinf(fx) || std::isinf(fy) || std::isinf(fxs) || std::isinf(fys)) continue;
      CHECK(fy >= fx - 1e-9);                      // monotone
      CHECK(fxs - fx >= fys - fy - 1e-9);          // diminishing returns
    }
  }
}
