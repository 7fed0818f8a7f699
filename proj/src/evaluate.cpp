#include "cachenet/evaluate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cachenet {

namespace {

constexpr double kRoutingSumTol = 1e-12;

// Shared accumulation for both models. Walks every demand class once,
// checking feasibility and collecting path delays and the uncached load.
EvaluationReport evaluate_core(const ProblemInstance& inst, const Placement& placement,
                               const RoutingPolicy& routing, bool with_queue) {
  const int n = inst.num_users, k = inst.num_files;
  if (routing.num_users != n || routing.num_files != k)
    throw std::invalid_argument("evaluate: routing policy shape does not match instance");

  EvaluationReport rep;
  rep.per_user_delay.assign(n, 0.0);
  std::vector<double> user_uncached(n, 0.0);  // per-user expected uncached share

  double queue_load = 0.0;
  double cached_rate = 0.0;
  for (int i = 0; i < n; ++i) {
    double path_delay_i = 0.0;  // sum over j of q_ij * per-request path delay
    for (int j = 0; j < k; ++j) {
      const auto& entries = routing.at(i, j);
      double to_caches = 0.0;
      double d = 0.0;
      for (const auto& [m, f] : entries) {
        if (f == 0.0) continue;
        if (f < 0.0 || !inst.connected(i, m))
          throw std::invalid_argument("evaluate: routing entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + "," + std::to_string(m) +
                                      ") is infeasible");
        to_caches += f;
        d += f * (placement.contains(m, j) ? inst.d_hit(i, m) : inst.d_miss(i, m));
      }
      if (to_caches > 1.0 + kRoutingSumTol)
        throw std::invalid_argument("evaluate: routing fractions for (" + std::to_string(i) +
                                    "," + std::to_string(j) + ") sum to more than 1");
      double uncached = 1.0 - std::min(to_caches, 1.0);
      d += uncached * inst.d_base(i);
      double w = inst.class_rate(i, j);
      path_delay_i += inst.q(i, j) * d;
      user_uncached[i] += inst.q(i, j) * uncached;
      queue_load += w * uncached;
      cached_rate += w * to_caches;
    }
    rep.per_user_delay[i] = path_delay_i;
  }

  const double lambda = inst.total_rate();
  rep.cached_fraction = lambda > 0.0 ? cached_rate / lambda : 0.0;
  rep.queue_load = with_queue ? queue_load : 0.0;

  double queue_per_request = 0.0;
  if (with_queue) {
    const double mu = inst.service_rate;
    if (queue_load >= mu) {
      rep.stable = false;
      rep.average_delay = kInfiniteDelay;
      for (int i = 0; i < n; ++i)
        if (user_uncached[i] > 0.0) rep.per_user_delay[i] = kInfiniteDelay;
      return rep;
    }
    queue_per_request = 1.0 / (mu - queue_load);
  }

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rep.per_user_delay[i] += user_uncached[i] * queue_per_request;
    total += inst.rate(i) * rep.per_user_delay[i];
  }
  rep.average_delay = lambda > 0.0 ? total / lambda : 0.0;
  return rep;
}

}  // namespace

EvaluationReport eval_ci(const ProblemInstance& inst, const Placement& placement,
                         const RoutingPolicy& routing) {
  if (inst.congestion_sensitive())
    throw std::invalid_argument("eval_ci: instance uses the congestion-sensitive model");
  return evaluate_core(inst, placement, routing, /*with_queue=*/false);
}

EvaluationReport eval_cs(const ProblemInstance& inst, const Placement& placement,
                         const RoutingPolicy& routing) {
  if (!inst.congestion_sensitive())
    throw std::invalid_argument("eval_cs: instance uses the congestion-insensitive model");
  return evaluate_core(inst, placement, routing, /*with_queue=*/true);
}

EvaluationReport evaluate(const ProblemInstance& inst, const Placement& placement,
                          const RoutingPolicy& routing) {
  return inst.congestion_sensitive() ? eval_cs(inst, placement, routing)
                                     : eval_ci(inst, placement, routing);
}

}  // namespace cachenet
