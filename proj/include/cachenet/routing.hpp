#pragma once

#include "cachenet/evaluate.hpp"
#include "cachenet/instance.hpp"

namespace cachenet {

// Optimum structure of congestion-sensitive routing for a fixed placement:
// a demand class is routed to its best cached path iff that path's delay is
// below d_base + t, where t = mu/(mu - queue_load)^2 is the marginal cost of
// adding load to the back-end queue. Classes exactly at the threshold may be
// split between the two paths.
struct ThresholdSolution {
  double marginal_queue_cost = 0.0;  // t; infinite when mandatory load saturates the queue
  double queue_load = 0.0;
  std::vector<std::pair<int, int>> split_classes;  // (user, file) routed fractionally
};

struct CsRoutingResult {
  RoutingPolicy policy;
  ThresholdSolution threshold;
};

// Congestion-insensitive optimum: each class goes to the lowest-hit-delay
// connected cache holding the file when that beats the uncached path (ties
// break toward the cache, then the lowest cache index), otherwise fully
// uncached. Never routes to a cache that does not hold the file.
RoutingPolicy optimal_routing_ci(const ProblemInstance& inst, const Placement& placement);

// Congestion-sensitive optimum via the threshold fixed point, solved by
// monotone bisection on t. When even the mandatory uncached load of users
// with no cache access saturates the queue, all connected classes are routed
// to caches and the result is flagged via an infinite marginal cost;
// downstream evaluation reports instability.
CsRoutingResult optimal_routing_cs(const ProblemInstance& inst, const Placement& placement);

// Negated average delay under the model-appropriate optimal routing for the
// given placement. Monotone non-decreasing and submodular in the placement.
double submodular_value(const ProblemInstance& inst, const Placement& placement);

namespace detail {

// Per-class effective cached-path delays (min over connected caches of hit or
// miss delay); infinity for users with no cache access. Index user*K + file.
std::vector<double> class_delays_full(const ProblemInstance& inst, const Placement& placement);

// Per-class hit-only delays (min over connected caches holding the file);
// infinity when no such cache. The CI routing domain never uses miss paths.
std::vector<double> class_delays_hit_only(const ProblemInstance& inst, const Placement& placement);

// Average delay of CI-optimal routing given hit-only class delays.
double ci_average_delay(const ProblemInstance& inst, const std::vector<double>& class_delay);

// Threshold fixed point for the congestion-sensitive model given effective
// cached-path class delays.
struct CsSolve {
  double average_delay = 0.0;
  double t = 0.0;
  double queue_load = 0.0;
  double split_excess = 0.0;            // excess (delay - d_base) of the split group
  double split_uncached_fraction = 0.0;  // share of the split group's load left on the queue
  bool has_split = false;
  bool degenerate_unstable = false;      // mandatory load >= mu
};
CsSolve solve_cs_from_delays(const ProblemInstance& inst, const std::vector<double>& class_delay);

}  // namespace detail

}  // namespace cachenet
