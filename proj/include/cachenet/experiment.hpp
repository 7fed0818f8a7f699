#pragma once

#include <string>

#include "cachenet/brute_force.hpp"
#include "cachenet/greedy.hpp"
#include "cachenet/routing.hpp"
#include "cachenet/trace.hpp"
#include "cachenet/workload.hpp"

namespace cachenet {

// One algorithm applied to one instance. For plru the placement/routing are
// empty and p_star carries the optimized routing probability; the report's
// average delay comes from the closed-form model.
struct AlgorithmOutput {
  std::string algorithm;
  Placement placement;
  RoutingPolicy routing;
  EvaluationReport report;
  GreedyTrace trace;            // greedy algorithms only
  ThresholdSolution threshold;  // congestion-sensitive solves only
  bool has_threshold = false;
  double plru_p = -1.0;
};

// Dispatch by name: bruteforce, greedywg, greedy, matching, twocache-lp,
// plru. Throws std::invalid_argument for an unknown name or an
// algorithm/model mismatch.
AlgorithmOutput run_algorithm(const ProblemInstance& inst, const std::string& name,
                              const BruteForceOptions& bf_opts = {});

struct ExperimentRow {
  double sweep_value = 0.0;
  std::string algorithm;
  double mean_delay = 0.0;
  double ci_half_width = 0.0;
};

enum class SweepKind { kCacheBudget, kServiceRate };

// Generator-backed sweep: per (value, algorithm), the analytic delay averaged
// over `replications` seeded instances with a 95% t-interval half-width.
struct GeneratedExperiment {
  GenParams base;
  SweepKind sweep = SweepKind::kCacheBudget;
  std::vector<double> values;
  std::vector<std::string> algorithms;
  int replications = 10;
  uint64_t seed = 1;
  BruteForceOptions bf_opts;
  bool parallel = true;
};
std::vector<ExperimentRow> run_experiment(const GeneratedExperiment& cfg);

// Trace pipeline: fit an instance on the learning segment, then measure each
// algorithm by simulating the test segment (static policy for greedy, LRU
// caches plus the optimized coin for plru).
struct TraceExperiment {
  GeometricLayout layout;
  std::vector<int> budgets;
  std::vector<std::string> algorithms = {"greedy", "plru"};
  uint64_t sim_seed = 1;
  double warmup_fraction = 0.1;
};
std::vector<ExperimentRow> run_trace_experiment(const TraceSegment& learn,
                                                const TraceSegment& test,
                                                const TraceExperiment& cfg);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace cachenet
