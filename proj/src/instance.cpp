#include "cachenet/instance.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>

namespace cachenet {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

double ProblemInstance::total_rate() const {
  return std::accumulate(request_rate.begin(), request_rate.end(), 0.0);
}

bool ProblemInstance::has_cache_access(int user) const {
  for (int m = 0; m < num_caches; ++m)
    if (connected(user, m)) return true;
  return false;
}

int Placement::total_files() const {
  int n = 0;
  for (const auto& s : stored) n += int(s.size());
  return n;
}

void RoutingPolicy::set(int i, int j, int m, double fraction) {
  auto& entries = to_cache[size_t(i) * num_files + j];
  for (auto& e : entries) {
    if (e.first == m) {
      e.second = fraction;
      return;
    }
  }
  entries.emplace_back(m, fraction);
}

double RoutingPolicy::cached_fraction(int i, int j) const {
  double s = 0.0;
  for (const auto& [m, f] : at(i, j)) s += f;
  return s;
}

std::vector<std::string> validate(const ProblemInstance& inst) {
  std::vector<std::string> out;
  const int n = inst.num_users, k = inst.num_files, m = inst.num_caches;

  if (n < 1) out.push_back(fmt("num_users: must be positive, got %d", n));
  if (k < 1) out.push_back(fmt("num_files: must be positive, got %d", k));
  if (m < 0) out.push_back(fmt("num_caches: must be non-negative, got %d", m));
  if (n < 1 || k < 1 || m < 0) return out;

  auto check_size = [&](const char* field, size_t got, size_t want) {
    if (got != want) {
      out.push_back(fmt("%s: expected %zu entries, got %zu", field, want, got));
      return false;
    }
    return true;
  };
  bool shapes_ok = true;
  shapes_ok &= check_size("request_rate", inst.request_rate.size(), size_t(n));
  shapes_ok &= check_size("popularity", inst.popularity.size(), size_t(n) * k);
  shapes_ok &= check_size("adjacency", inst.adjacency.size(), size_t(n) * m);
  shapes_ok &= check_size("hit_delay", inst.hit_delay.size(), size_t(n) * m);
  shapes_ok &= check_size("miss_delay", inst.miss_delay.size(), size_t(n) * m);
  shapes_ok &= check_size("uncached_base_delay", inst.uncached_base_delay.size(), size_t(n));
  shapes_ok &= check_size("cache_capacity", inst.cache_capacity.size(), size_t(m));
  if (!shapes_ok) return out;

  for (int i = 0; i < n; ++i) {
    if (!finite_nonneg(inst.request_rate[i]))
      out.push_back(fmt("request_rate[%d]: must be finite and non-negative", i));
    if (!finite_nonneg(inst.d_base(i)))
      out.push_back(fmt("uncached_base_delay[%d]: must be finite and non-negative", i));
  }

  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    bool entries_ok = true;
    for (int j = 0; j < k; ++j) {
      double v = inst.q(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        out.push_back(fmt("popularity[%d][%d]: must be a finite probability", i, j));
        entries_ok = false;
      }
      row += v;
    }
    // A row may sum to 1 (an active user) or be identically zero (a silent
    // user whose traffic terms are absent).
    if (entries_ok && row != 0.0 && std::abs(row - 1.0) > 1e-9)
      out.push_back(fmt("popularity: row %d sums to %.12g, expected 1 or all zeros", i, row));
  }

  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < m; ++c) {
      if (!inst.connected(i, c)) continue;
      double dh = inst.d_hit(i, c), dm = inst.d_miss(i, c);
      if (!finite_nonneg(dh))
        out.push_back(fmt("hit_delay[%d][%d]: must be finite and non-negative", i, c));
      if (!finite_nonneg(dm))
        out.push_back(fmt("miss_delay[%d][%d]: must be finite and non-negative", i, c));
      else if (finite_nonneg(dh) && !(dm > dh))
        out.push_back(fmt("miss_delay[%d][%d]: must strictly exceed hit_delay[%d][%d]", i, c, i, c));
    }
  }

  for (int c = 0; c < m; ++c)
    if (inst.cache_capacity[c] < 1)
      out.push_back(fmt("cache_capacity[%d]: must be at least 1, got %d", c, inst.cache_capacity[c]));

  if (inst.congestion_sensitive() && !(inst.service_rate > 0.0 && std::isfinite(inst.service_rate)))
    out.push_back("service_rate: must be positive and finite under the congestion-sensitive model");

  return out;
}

double cached_delay(const ProblemInstance& inst, const Placement& placement,
                    int user, int file) {
  double best = kInfiniteDelay;
  for (int m = 0; m < inst.num_caches; ++m) {
    if (!inst.connected(user, m)) continue;
    double d = placement.contains(m, file) ? inst.d_hit(user, m) : inst.d_miss(user, m);
    if (d < best) best = d;
  }
  return best;
}

}  // namespace cachenet
