#pragma once

#include "cachenet/instance.hpp"

namespace cachenet {

// Result of evaluating the average-delay objective for a fixed placement and
// routing policy.
struct EvaluationReport {
  double average_delay = 0.0;  // infinite when the back-end queue saturates
  double queue_load = 0.0;     // request rate on the uncached path (CS only)
  std::vector<double> per_user_delay;
  double cached_fraction = 0.0;  // share of total traffic routed to caches
  bool stable = true;            // CS: queue_load < service_rate
};

// Average delay under the congestion-insensitive model. Throws
// std::invalid_argument for congestion-sensitive instances or a routing
// policy that is infeasible w.r.t. adjacency.
EvaluationReport eval_ci(const ProblemInstance& inst, const Placement& placement,
                         const RoutingPolicy& routing);

// Average delay under the congestion-sensitive model: the uncached path adds
// an M/M/1 queueing delay 1/(mu - lambda_q). Saturation (lambda_q >= mu) is
// reported as an infinite delay with stable = false, never thrown.
EvaluationReport eval_cs(const ProblemInstance& inst, const Placement& placement,
                         const RoutingPolicy& routing);

// Dispatches on the instance's uncached-path model.
EvaluationReport evaluate(const ProblemInstance& inst, const Placement& placement,
                          const RoutingPolicy& routing);

}  // namespace cachenet
