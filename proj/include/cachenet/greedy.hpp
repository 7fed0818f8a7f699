#pragma once

#include "cachenet/brute_force.hpp"
#include "cachenet/instance.hpp"

namespace cachenet {

struct GreedyStep {
  int step = 0;
  int file = -1;
  int cache = -1;
  double marginal_value = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
};

struct GreedyResult {
  Placement placement;
  RoutingPolicy routing;
  EvaluationReport report;
  GreedyTrace trace;
};

struct GreedyOptions {
  bool parallel = true;
};

// Guaranteed greedy: starting from empty caches, repeatedly stores the
// (file, cache) candidate maximizing the optimally-routed objective until all
// capacity is used. Candidate evaluations are independent and may run in
// parallel; ties break to the smallest (cache, file) pair regardless of
// thread schedule.
GreedyResult greedy_wg(const ProblemInstance& inst, const GreedyOptions& opts = {});

// Fast greedy: tracks per-class cache-access delays, placing the candidate
// with the largest rate-weighted delay reduction. The back-end queue enters
// only through the final routing step. Same tie-break as greedy_wg.
GreedyResult greedy_fast(const ProblemInstance& inst, const GreedyOptions& opts = {});

}  // namespace cachenet
