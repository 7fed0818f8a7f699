#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cachenet {

inline constexpr double kInfiniteDelay = std::numeric_limits<double>::infinity();

enum class UncachedModel { kCongestionInsensitive, kCongestionSensitive };

// A joint caching/routing problem: users request files served either through
// in-network caches (hit or miss delay per user-cache link) or through the
// direct uncached path to the back-end (constant base delay, plus an M/M/1
// queueing delay under the congestion-sensitive model).
struct ProblemInstance {
  int num_users = 0;
  int num_files = 0;
  int num_caches = 0;
  std::vector<double> request_rate;         // per user
  std::vector<double> popularity;           // num_users x num_files, row-major
  std::vector<uint8_t> adjacency;           // num_users x num_caches, 0/1
  std::vector<double> hit_delay;            // num_users x num_caches
  std::vector<double> miss_delay;           // num_users x num_caches
  std::vector<double> uncached_base_delay;  // per user
  std::vector<int> cache_capacity;          // per cache, in files
  UncachedModel uncached_model = UncachedModel::kCongestionInsensitive;
  double service_rate = 0.0;  // back-end service rate; congestion-sensitive only

  bool congestion_sensitive() const {
    return uncached_model == UncachedModel::kCongestionSensitive;
  }
  double q(int i, int j) const { return popularity[size_t(i) * num_files + j]; }
  bool connected(int i, int m) const {
    return adjacency[size_t(i) * num_caches + m] != 0;
  }
  double d_hit(int i, int m) const { return hit_delay[size_t(i) * num_caches + m]; }
  double d_miss(int i, int m) const { return miss_delay[size_t(i) * num_caches + m]; }
  double d_base(int i) const { return uncached_base_delay[i]; }
  double rate(int i) const { return request_rate[i]; }
  double class_rate(int i, int j) const { return request_rate[i] * q(i, j); }
  double total_rate() const;
  bool has_cache_access(int user) const;
};

// Set of files stored per cache.
struct Placement {
  std::vector<std::set<int>> stored;

  Placement() = default;
  explicit Placement(int num_caches) : stored(num_caches) {}

  bool contains(int m, int j) const { return stored[m].count(j) != 0; }
  int total_files() const;
  bool operator==(const Placement&) const = default;
};

// Fractional request routing: for each (user, file) class, a list of
// (cache, fraction) entries. The remainder 1 - sum(fractions) is sent over
// the uncached path.
struct RoutingPolicy {
  int num_users = 0;
  int num_files = 0;
  std::vector<std::vector<std::pair<int, double>>> to_cache;  // indexed user*num_files+file

  RoutingPolicy() = default;
  RoutingPolicy(int users, int files)
      : num_users(users), num_files(files), to_cache(size_t(users) * files) {}

  const std::vector<std::pair<int, double>>& at(int i, int j) const {
    return to_cache[size_t(i) * num_files + j];
  }
  void set(int i, int j, int m, double fraction);
  double cached_fraction(int i, int j) const;
};

// Checks every instance invariant; returns one human-readable description per
// violation (empty means the instance is well formed). Violations are data,
// not errors: nothing throws here.
std::vector<std::string> validate(const ProblemInstance& inst);

// Best cached-path delay for one demand class under a placement: the minimum
// over connected caches of hit delay (file stored) or miss delay (not
// stored). Infinity when the user cannot reach any cache.
double cached_delay(const ProblemInstance& inst, const Placement& placement,
                    int user, int file);

}  // namespace cachenet
