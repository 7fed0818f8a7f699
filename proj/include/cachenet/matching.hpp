#pragma once

#include "cachenet/brute_force.hpp"
#include "cachenet/instance.hpp"

namespace cachenet {

// Bipartite graph for the one-file-per-user special case: left nodes are the
// users (each owning one distinct file), right nodes are unit-size
// micro-cache slots, C_m per cache. Edge weight is the delay saved by
// serving user i's file from cache m; non-improving or disconnected pairs
// get weight zero and are stripped from the final placement.
struct MicroCacheGraph {
  int num_left = 0;
  std::vector<int> slot_cache;          // right node -> owning cache
  std::vector<std::vector<double>> weight;  // num_left x num_right
};

// Maximum-weight assignment on a (rectangular) weight matrix; the matrix is
// padded to a square with zero weights internally. Returns the matched
// column per row (-1 when matched to padding) and the total weight.
std::pair<std::vector<int>, double> max_weight_assignment(
    const std::vector<std::vector<double>>& weight);

// File owned by each user, or an explanation why the instance does not have
// the one-file-per-user shape.
struct OneFilePattern {
  bool ok = false;
  std::string reason;
  std::vector<int> file_of;  // per user
};
OneFilePattern one_file_per_user_pattern(const ProblemInstance& inst);

MicroCacheGraph build_micro_cache_graph(const ProblemInstance& inst);

// Polynomial-time optimum for congestion-insensitive instances where each
// user requests exactly one distinct file: placement by maximum-weight
// matching on the micro-cache graph. Throws std::invalid_argument when the
// pattern or model does not hold.
SolveResult solve_one_file_per_user(const ProblemInstance& inst);

}  // namespace cachenet
