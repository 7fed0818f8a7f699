#include "cachenet/matching.hpp"

#include <cmath>
#include <stdexcept>

namespace cachenet {

std::pair<std::vector<int>, double> max_weight_assignment(
    const std::vector<std::vector<double>>& weight) {
  const int rows = int(weight.size());
  const int cols = rows > 0 ? int(weight[0].size()) : 0;
  const int n = std::max(rows, cols);
  if (n == 0) return {{}, 0.0};

  // Min-cost square assignment with potentials; maximization by negation,
  // padding cells cost 0.
  auto cost = [&](int i, int j) {
    if (i < rows && j < cols) return -weight[i][j];
    return 0.0;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(rows, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    int i = p[j] - 1;
    if (i >= 0 && i < rows && j - 1 < cols) {
      match[i] = j - 1;
      total += weight[i][j - 1];
    }
  }
  return {match, total};
}

OneFilePattern one_file_per_user_pattern(const ProblemInstance& inst) {
  OneFilePattern pat;
  pat.file_of.assign(inst.num_users, -1);
  std::vector<char> claimed(inst.num_files, 0);
  for (int i = 0; i < inst.num_users; ++i) {
    int file = -1;
    for (int j = 0; j < inst.num_files; ++j) {
      double v = inst.q(i, j);
      if (std::abs(v - 1.0) <= 1e-12) {
        if (file >= 0) {
          pat.reason = "user " + std::to_string(i) + " requests more than one file";
          return pat;
        }
        file = j;
      } else if (std::abs(v) > 1e-12) {
        pat.reason = "user " + std::to_string(i) + " has a fractional popularity entry";
        return pat;
      }
    }
    if (file < 0) {
      pat.reason = "user " + std::to_string(i) + " requests no file";
      return pat;
    }
    if (claimed[file]) {
      pat.reason = "file " + std::to_string(file) + " is requested by more than one user";
      return pat;
    }
    claimed[file] = 1;
    pat.file_of[i] = file;
  }
  pat.ok = true;
  return pat;
}

MicroCacheGraph build_micro_cache_graph(const ProblemInstance& inst) {
  MicroCacheGraph g;
  g.num_left = inst.num_users;
  // more slots than users can never be matched
  for (int m = 0; m < inst.num_caches; ++m)
    for (int s = 0; s < std::min(inst.cache_capacity[m], inst.num_users); ++s)
      g.slot_cache.push_back(m);
  const int num_right = int(g.slot_cache.size());
  g.weight.assign(g.num_left, std::vector<double>(num_right, 0.0));
  for (int i = 0; i < inst.num_users; ++i) {
    for (int s = 0; s < num_right; ++s) {
      int m = g.slot_cache[s];
      if (!inst.connected(i, m)) continue;
      double gain = inst.rate(i) * (inst.d_base(i) - inst.d_hit(i, m));
      if (gain > 0.0) g.weight[i][s] = gain;
    }
  }
  return g;
}

SolveResult solve_one_file_per_user(const ProblemInstance& inst) {
  if (inst.congestion_sensitive())
    throw std::invalid_argument("solve_one_file_per_user: requires the congestion-insensitive model");
  OneFilePattern pat = one_file_per_user_pattern(inst);
  if (!pat.ok)
    throw std::invalid_argument("solve_one_file_per_user: " + pat.reason);

  MicroCacheGraph graph = build_micro_cache_graph(inst);
  auto [match, total] = max_weight_assignment(graph.weight);
  (void)total;

  SolveResult result;
  result.placement = Placement(inst.num_caches);
  for (int i = 0; i < inst.num_users; ++i) {
    int s = match[i];
    if (s < 0 || graph.weight[i][s] <= 0.0) continue;  // padding or non-improving
    result.placement.stored[graph.slot_cache[s]].insert(pat.file_of[i]);
  }
  result.routing = optimal_routing_ci(inst, result.placement);
  result.report = eval_ci(inst, result.placement, result.routing);
  return result;
}

}  // namespace cachenet
