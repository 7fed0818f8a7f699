#pragma once

#include "cachenet/evaluate.hpp"
#include "cachenet/instance.hpp"
#include "cachenet/routing.hpp"

namespace cachenet {

struct SolveResult {
  Placement placement;
  RoutingPolicy routing;
  EvaluationReport report;
};

struct BruteForceOptions {
  long long max_enumerations = 10'000'000;  // cap on the placement count
  bool parallel = true;
};

// Exhaustive optimum: enumerates one full combination per cache (supersets
// never hurt, so only maximal placements are visited), applies the
// model-appropriate optimal routing and returns the global minimum. Ties
// break toward the lexicographically smallest placement. Deterministic
// regardless of parallelism. Throws when the enumeration cap is exceeded.
SolveResult brute_force_placement(const ProblemInstance& inst,
                                  const BruteForceOptions& opts = {});

// Equal-cardinality partition input: can `numbers` be split into two halves
// of equal size and equal sum?
struct EcpInstance {
  std::vector<double> numbers;
};

// Single-cache decision instance with one distinct file per user and an
// M/M/1 uncached path. Miss delays are infinite: requests for uncached files
// can only use the back-end, so routing is forced to follow the placement.
struct CsddpInstance {
  double service_rate = 0.0;
  std::vector<double> rate;
  std::vector<double> hit_delay;
  std::vector<double> base_delay;
  int capacity = 0;
  double target_delay = 0.0;
};

// Maps a partition question to a delay decision instance: mu = S, hit delay
// 4/S, base delay 4/a_i, capacity n/2, target (2n+3)/S, with S the sum of the
// numbers. Zero-valued numbers yield zero-rate users and are dropped (they
// carry no traffic); the target/capacity keep the original n. Throws on odd n
// or negative numbers.
CsddpInstance ecp_to_csddp(const EcpInstance& ecp);

// Exhaustive minimum over placements of at most `capacity` files, with
// routing forced to the cache for stored files and the back-end otherwise.
// Returns the minimum delay and the lexicographically first achieving subset
// (user indices). Throws above 24 users.
std::pair<double, std::vector<int>> csddp_brute(const CsddpInstance& csddp);

}  // namespace cachenet
