#pragma once

#include "cachenet/instance.hpp"

namespace cachenet {

// Analytical model of the LRU baseline: every connected user sends a request
// to a uniformly chosen reachable cache with probability p and to the
// uncached path otherwise. Cache occupancy follows the characteristic-time
// approximation; p is optimized in closed form.
struct PLruModel {
  std::vector<double> aggregate_popularity;  // per cache x file, normalized per cache
  std::vector<double> characteristic_time;   // per cache; infinite when everything fits
  std::vector<double> hit_probability;       // per cache x file
  double p_star = 0.0;
  std::vector<uint8_t> connected;  // users with at least one reachable cache
  std::vector<int> cache_count;    // reachable caches per user

  // Aggregates that make delay evaluation O(1) in p.
  double cached_mean_delay = 0.0;     // average delay of a cache-routed request
  double lambda_connected = 0.0;      // total rate of connected users
  double base_sum_connected = 0.0;    // sum lambda_i * d_base_i over connected users
  double lambda_disconnected = 0.0;
  double base_sum_disconnected = 0.0;

  double r(int m, int j, int num_files) const {
    return aggregate_popularity[size_t(m) * num_files + j];
  }
  double hit(int m, int j, int num_files) const {
    return hit_probability[size_t(m) * num_files + j];
  }
};

// Builds the model: per-cache aggregate popularities, characteristic times
// (bisection to relative 1e-10), hit probabilities, and the optimal routing
// probability p_star clamped into [0, 1]. A cache large enough to hold every
// requested file gets an infinite characteristic time and hit probability 1
// on those files.
PLruModel build_plru(const ProblemInstance& inst);

// Average delay of the baseline at routing probability p; requires the
// congestion-sensitive model. Queue saturation yields an infinite delay.
double plru_delay(const ProblemInstance& inst, const PLruModel& model, double p);

}  // namespace cachenet
