#pragma once

#include <variant>

#include "cachenet/instance.hpp"
#include "cachenet/trace.hpp"

namespace cachenet {

// Fixed cache contents and routing; caches never change state.
struct StaticPolicy {
  Placement placement;
  RoutingPolicy routing;
};

// LRU caches; each connected user routes to a uniformly chosen reachable
// cache with probability p, otherwise to the uncached path.
struct PLruPolicy {
  double p = 1.0;
};

using SimPolicy = std::variant<StaticPolicy, PLruPolicy>;

enum class QueueAccounting {
  kUncachedOnly,      // only uncached requests pass through the back-end queue
  kIncludeMissFetch,  // cache misses also push a fetch job through the queue
};

struct SimConfig {
  SimPolicy policy;
  long long max_requests = 0;        // stop after this many requests (0: time-bounded)
  double max_time = kInfiniteDelay;  // or once simulated time passes this
  uint64_t seed = 1;
  double warmup_fraction = 0.1;  // leading share of requests excluded from statistics
  QueueAccounting queue_accounting = QueueAccounting::kUncachedOnly;
  bool collect_per_file_stats = false;
  bool check_lru_invariant = false;  // shadow every LRU cache with a reference model
};

struct SimReport {
  double mean_delay = 0.0;
  double ci_half_width = 0.0;  // 95%, batch means over 20 batches
  std::vector<double> cache_hit_rate;
  double queue_delay_mean = 0.0;  // mean sojourn of back-end queue jobs
  long long requests = 0;         // counted toward statistics
  bool unstable_detected = false;
  std::vector<double> per_file_hit_rate;  // caches x files; only when collected
};

// Request-by-request discrete-event run with deterministic replay: the same
// (instance, config seed) gives a bit-identical report. Routing coins, cache
// choices, arrivals and queue service draw from independent streams so
// policy comparisons share randomness.
SimReport simulate(const ProblemInstance& inst, const SimConfig& config);  // Poisson arrivals
SimReport simulate(const ProblemInstance& inst, const TraceSegment& trace,
                   const SimConfig& config);  // trace-driven
}  // namespace cachenet
