#pragma once

#include <array>

#include "cachenet/instance.hpp"

namespace cachenet {

// Square field with circular-coverage caches. Hit delay grows linearly with
// distance from the cache up to max_hit_delay at the coverage edge; a miss
// adds a fixed penalty. Users outside every coverage circle can only use the
// uncached path.
struct GeometricLayout {
  double field_side = 10.0;
  std::vector<std::array<double, 2>> cache_pos;
  std::vector<double> cache_radius;
  double max_hit_delay = 12.5;
  double miss_penalty = 25.0;
  double base_delay = 5.0;
  double service_ratio = 0.8;  // back-end rate = ratio * aggregate request rate
};

// One large cache at the field center.
GeometricLayout single_cache_layout(double service_ratio);
// Five small caches: four quadrant centers plus the field center.
GeometricLayout multi_cache_layout(double service_ratio);

// Zipf weights over ranks 1..num_files, normalized to sum 1.
std::vector<double> zipf_popularity(int num_files, double skew);

struct GenParams {
  GeometricLayout layout;
  int num_users = 5;
  int num_files = 15;
  double zipf_skew = 0.6;
  double total_rate = 5.0;
  int cache_budget = 5;          // split evenly across the layout's caches
  bool heterogeneous = false;    // per-user permutation of the file ranking
  bool congestion_sensitive = true;
  bool require_coverage = false;  // resample users that land outside every cache
};

// Synthetic instance: user positions uniform in the field, per-user rates
// random and normalized to total_rate, popularity Zipf (shared, or permuted
// per user when heterogeneous). Deterministic per seed.
ProblemInstance gen_instance(const GenParams& params, uint64_t seed);

}  // namespace cachenet
