#include "cachenet/greedy.hpp"

#include <algorithm>
#include <cmath>

#include "cachenet/routing.hpp"

namespace cachenet {

namespace {

double value_of_delays(const ProblemInstance& inst, const std::vector<double>& delays) {
  if (inst.congestion_sensitive())
    return -detail::solve_cs_from_delays(inst, delays).average_delay;
  return -detail::ci_average_delay(inst, delays);
}

void finish(const ProblemInstance& inst, GreedyResult& result) {
  if (inst.congestion_sensitive()) {
    auto cs = optimal_routing_cs(inst, result.placement);
    result.routing = std::move(cs.policy);
    result.report = eval_cs(inst, result.placement, result.routing);
  } else {
    result.routing = optimal_routing_ci(inst, result.placement);
    result.report = eval_ci(inst, result.placement, result.routing);
  }
}

double marginal(double before, double after) {
  double d = after - before;
  return std::isnan(d) ? 0.0 : d;  // both values infinite
}

}  // namespace

GreedyResult greedy_wg(const ProblemInstance& inst, const GreedyOptions& opts) {
  const int n = inst.num_users, k = inst.num_files, caches = inst.num_caches;
  const bool cs = inst.congestion_sensitive();

  GreedyResult result;
  result.placement = Placement(caches);

  // Effective per-class cached-path delays under the current placement; a
  // candidate only improves its own file's column.
  std::vector<double> delays = cs ? detail::class_delays_full(inst, result.placement)
                                  : detail::class_delays_hit_only(inst, result.placement);
  double current = value_of_delays(inst, delays);

  int steps_total = 0;
  for (int m = 0; m < caches; ++m) steps_total += std::min(inst.cache_capacity[m], k);

  std::vector<std::pair<int, int>> cand;  // (cache, file), cache-major
  std::vector<double> values;
  for (int step = 0; step < steps_total; ++step) {
    cand.clear();
    for (int m = 0; m < caches; ++m) {
      if (int(result.placement.stored[m].size()) >= std::min(inst.cache_capacity[m], k)) continue;
      for (int j = 0; j < k; ++j)
        if (!result.placement.contains(m, j)) cand.emplace_back(m, j);
    }
    if (cand.empty()) break;
    values.assign(cand.size(), 0.0);

#pragma omp parallel if (opts.parallel)
    {
      std::vector<double> buf(delays);
      std::vector<double> saved(n);
#pragma omp for schedule(dynamic, 8)
      for (int64_t c = 0; c < int64_t(cand.size()); ++c) {
        auto [m, j] = cand[c];
        for (int i = 0; i < n; ++i) {
          double* cell = &buf[size_t(i) * k + j];
          saved[i] = *cell;
          if (inst.connected(i, m)) *cell = std::min(*cell, inst.d_hit(i, m));
        }
        values[c] = value_of_delays(inst, buf);
        for (int i = 0; i < n; ++i) buf[size_t(i) * k + j] = saved[i];
      }
    }

    size_t best = 0;
    for (size_t c = 1; c < cand.size(); ++c)
      if (values[c] > values[best]) best = c;

    auto [m, j] = cand[best];
    result.placement.stored[m].insert(j);
    for (int i = 0; i < n; ++i)
      if (inst.connected(i, m)) {
        double* cell = &delays[size_t(i) * k + j];
        *cell = std::min(*cell, inst.d_hit(i, m));
      }
    result.trace.steps.push_back({step, j, m, marginal(current, values[best])});
    current = values[best];
  }

  finish(inst, result);
  return result;
}

GreedyResult greedy_fast(const ProblemInstance& inst, const GreedyOptions& opts) {
  const int n = inst.num_users, k = inst.num_files, caches = inst.num_caches;

  GreedyResult result;
  result.placement = Placement(caches);

  // Per-class cache-access delay, initialized to the closest miss; users with
  // no cached path stay infinite and contribute no gain terms.
  std::vector<double> d(size_t(n) * k, kInfiniteDelay);
  for (int i = 0; i < n; ++i) {
    double best = kInfiniteDelay;
    for (int m = 0; m < caches; ++m)
      if (inst.connected(i, m)) best = std::min(best, inst.d_miss(i, m));
    for (int j = 0; j < k; ++j) d[size_t(i) * k + j] = best;
  }

  auto gain = [&](int j, int m) {
    double g = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!inst.connected(i, m)) continue;
      double w = inst.class_rate(i, j);
      if (w <= 0.0) continue;
      double dij = d[size_t(i) * k + j];
      g += w * (dij - std::min(dij, inst.d_hit(i, m)));
    }
    return g;
  };

  std::vector<double> g(size_t(k) * caches, 0.0);
#pragma omp parallel for if (opts.parallel) schedule(static)
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < caches; ++m) g[size_t(j) * caches + m] = gain(j, m);

  std::vector<uint8_t> placed(size_t(k) * caches, 0);
  int steps_total = 0;
  for (int m = 0; m < caches; ++m) steps_total += std::min(inst.cache_capacity[m], k);

  for (int step = 0; step < steps_total; ++step) {
    int best_j = -1, best_m = -1;
    double best_g = -1.0;
    for (int m = 0; m < caches; ++m) {
      if (int(result.placement.stored[m].size()) >= std::min(inst.cache_capacity[m], k)) continue;
      for (int j = 0; j < k; ++j) {
        if (placed[size_t(j) * caches + m]) continue;
        double val = g[size_t(j) * caches + m];
        if (val > best_g) {
          best_g = val;
          best_j = j;
          best_m = m;
        }
      }
    }
    if (best_j < 0) break;

    result.placement.stored[best_m].insert(best_j);
    placed[size_t(best_j) * caches + best_m] = 1;
    for (int i = 0; i < n; ++i)
      if (inst.connected(i, best_m)) {
        double* cell = &d[size_t(i) * k + best_j];
        *cell = std::min(*cell, inst.d_hit(i, best_m));
      }
    for (int m = 0; m < caches; ++m) g[size_t(best_j) * caches + m] = gain(best_j, m);
    result.trace.steps.push_back({step, best_j, best_m, best_g});
  }

  finish(inst, result);
  return result;
}

}  // namespace cachenet
