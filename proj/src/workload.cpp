#include "cachenet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cachenet/rng.hpp"

namespace cachenet {

GeometricLayout single_cache_layout(double service_ratio) {
  GeometricLayout l;
  l.cache_pos = {{5.0, 5.0}};
  l.cache_radius = {5.0};
  l.max_hit_delay = 12.5;
  l.service_ratio = service_ratio;
  return l;
}

GeometricLayout multi_cache_layout(double service_ratio) {
  GeometricLayout l;
  l.cache_pos = {{2.5, 2.5}, {7.5, 2.5}, {2.5, 7.5}, {7.5, 7.5}, {5.0, 5.0}};
  l.cache_radius = std::vector<double>(5, 2.5);
  l.max_hit_delay = 5.5;
  l.service_ratio = service_ratio;
  return l;
}

std::vector<double> zipf_popularity(int num_files, double skew) {
  if (skew < 0.0) throw std::invalid_argument("zipf_popularity: skew must be non-negative");
  std::vector<double> z(num_files);
  double sum = 0.0;
  for (int j = 0; j < num_files; ++j) {
    z[j] = std::pow(double(j + 1), -skew);
    sum += z[j];
  }
  for (double& v : z) v /= sum;
  return z;
}

ProblemInstance gen_instance(const GenParams& params, uint64_t seed) {
  const auto& layout = params.layout;
  const int n = params.num_users, k = params.num_files;
  const int caches = int(layout.cache_pos.size());
  if (n < 1 || k < 1) throw std::invalid_argument("gen_instance: need users and files");
  if (params.cache_budget < caches)
    throw std::invalid_argument("gen_instance: cache budget below one file per cache");

  ProblemInstance inst;
  inst.num_users = n;
  inst.num_files = k;
  inst.num_caches = caches;

  Rng rate_rng(splitmix64(seed) + 1);
  Rng pos_rng(splitmix64(seed) + 2);
  Rng perm_rng(splitmix64(seed) + 3);

  inst.request_rate.resize(n);
  double rate_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    inst.request_rate[i] = rate_rng.uniform(0.5, 1.5);
    rate_sum += inst.request_rate[i];
  }
  for (double& r : inst.request_rate) r *= params.total_rate / rate_sum;

  inst.adjacency.assign(size_t(n) * caches, 0);
  inst.hit_delay.assign(size_t(n) * caches, 0.0);
  inst.miss_delay.assign(size_t(n) * caches, 0.0);
  inst.uncached_base_delay.assign(n, layout.base_delay);
  for (int i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0;
    bool covered = false;
    for (int attempt = 0; attempt < 100000; ++attempt) {
      x = pos_rng.uniform(0.0, layout.field_side);
      y = pos_rng.uniform(0.0, layout.field_side);
      covered = false;
      for (int m = 0; m < caches; ++m) {
        double dx = x - layout.cache_pos[m][0], dy = y - layout.cache_pos[m][1];
        if (std::sqrt(dx * dx + dy * dy) <= layout.cache_radius[m]) covered = true;
      }
      if (covered || !params.require_coverage) break;
    }
    if (params.require_coverage && !covered)
      throw std::runtime_error("gen_instance: could not place a user inside cache coverage");
    for (int m = 0; m < caches; ++m) {
      double dx = x - layout.cache_pos[m][0], dy = y - layout.cache_pos[m][1];
      double dist = std::sqrt(dx * dx + dy * dy);
      if (dist > layout.cache_radius[m]) continue;
      inst.adjacency[size_t(i) * caches + m] = 1;
      double hit = layout.max_hit_delay * dist / layout.cache_radius[m];
      inst.hit_delay[size_t(i) * caches + m] = hit;
      inst.miss_delay[size_t(i) * caches + m] = hit + layout.miss_penalty;
    }
  }

  std::vector<double> zipf = zipf_popularity(k, params.zipf_skew);
  inst.popularity.resize(size_t(n) * k);
  for (int i = 0; i < n; ++i) {
    if (params.heterogeneous) {
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      for (int j = k - 1; j > 0; --j)
        std::swap(perm[j], perm[perm_rng.below(uint64_t(j) + 1)]);
      for (int j = 0; j < k; ++j) inst.popularity[size_t(i) * k + perm[j]] = zipf[j];
    } else {
      std::copy(zipf.begin(), zipf.end(), inst.popularity.begin() + size_t(i) * k);
    }
  }

  inst.cache_capacity.assign(caches, params.cache_budget / caches);
  for (int m = 0; m < params.cache_budget % caches; ++m) ++inst.cache_capacity[m];

  if (params.congestion_sensitive) {
    inst.uncached_model = UncachedModel::kCongestionSensitive;
    inst.service_rate = layout.service_ratio * params.total_rate;
  }
  return inst;
}

}  // namespace cachenet
