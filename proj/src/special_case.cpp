#include "cachenet/special_case.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cachenet/simplex.hpp"

namespace cachenet {

namespace {

// Column layout for the relaxed program: x_{jm} at m*K + j, the connected
// p_{ijm} after them in (i, j, m) order.
struct LpLayout {
  int num_x = 0;
  std::vector<std::array<int, 3>> p_vars;  // (i, j, m)
  int var_count() const { return num_x + int(p_vars.size()); }
  int x_col(int j, int m, int k) const { return m * k + j; }
};

LpLayout make_layout(const ProblemInstance& inst) {
  LpLayout layout;
  layout.num_x = inst.num_files * inst.num_caches;
  for (int i = 0; i < inst.num_users; ++i)
    for (int j = 0; j < inst.num_files; ++j)
      for (int m = 0; m < inst.num_caches; ++m)
        if (inst.connected(i, m)) layout.p_vars.push_back({i, j, m});
  return layout;
}

}  // namespace

ConstraintMatrix build_constraint_matrix(const ProblemInstance& inst) {
  const int k = inst.num_files;
  LpLayout layout = make_layout(inst);
  ConstraintMatrix cm;
  cm.cols = layout.var_count();

  std::vector<std::vector<int8_t>> rows;
  std::vector<int> rhs;
  auto new_row = [&]() -> std::vector<int8_t>& {
    rows.emplace_back(cm.cols, 0);
    return rows.back();
  };

  // sum_m p_ijm <= 1, for classes with at least one cached path (users with
  // no cached path have no routing variables and would yield all-zero rows).
  for (int i = 0; i < inst.num_users; ++i) {
    if (!inst.has_cache_access(i)) continue;
    for (int j = 0; j < k; ++j) {
      auto& row = new_row();
      for (int v = 0; v < int(layout.p_vars.size()); ++v) {
        auto [pi, pj, pm] = layout.p_vars[v];
        if (pi == i && pj == j) row[layout.num_x + v] = 1;
      }
      rhs.push_back(1);
    }
  }
  // sum_j x_jm <= C_m
  for (int m = 0; m < inst.num_caches; ++m) {
    auto& row = new_row();
    for (int j = 0; j < k; ++j) row[layout.x_col(j, m, k)] = 1;
    rhs.push_back(inst.cache_capacity[m]);
  }
  // p_ijm - x_jm <= 0 for connected pairs
  for (int v = 0; v < int(layout.p_vars.size()); ++v) {
    auto [i, j, m] = layout.p_vars[v];
    auto& row = new_row();
    row[layout.num_x + v] = 1;
    row[layout.x_col(j, m, k)] = -1;
    rhs.push_back(0);
  }

  cm.rows = int(rows.size());
  cm.a.reserve(size_t(cm.rows) * cm.cols);
  for (const auto& row : rows) cm.a.insert(cm.a.end(), row.begin(), row.end());
  cm.b = std::move(rhs);
  return cm;
}

namespace {

struct SparseRow {
  std::vector<std::pair<int, int8_t>> entries;  // (column, sign)
};

// Does this row subset admit a +-1 signing with column sums in {-1,0,1}?
// Depth-first over signs; a column is infeasible once its partial sum cannot
// return to the window with the remaining rows' mass. The first row's sign is
// fixed (negating a signing preserves validity).
bool gh_signable(const std::vector<const SparseRow*>& rows, std::vector<int>& partial,
                 std::vector<int>& rem) {
  struct Frame {
    int idx;
    int sign;  // next sign to try: +1 then -1
  };
  const int r = int(rows.size());

  // remaining absolute mass per touched column
  for (const SparseRow* row : rows)
    for (auto [c, s] : row->entries) rem[c] += 1;

  bool ok = false;
  // Recursive lambda via explicit stack-free recursion.
  auto apply = [&](int idx, int sign) {
    for (auto [c, s] : rows[idx]->entries) {
      rem[c] -= 1;
      partial[c] += sign * s;
    }
  };
  auto undo = [&](int idx, int sign) {
    for (auto [c, s] : rows[idx]->entries) {
      rem[c] += 1;
      partial[c] -= sign * s;
    }
  };
  auto feasible = [&](int idx) {
    for (auto [c, s] : rows[idx]->entries)
      if (std::abs(partial[c]) > 1 + rem[c]) return false;
    return true;
  };

  auto dfs = [&](auto&& self, int idx) -> bool {
    if (idx == r) return true;
    for (int sign : {+1, -1}) {
      if (idx == 0 && sign < 0) break;
      apply(idx, sign);
      if (feasible(idx) && self(self, idx + 1)) {
        undo(idx, sign);
        return true;
      }
      undo(idx, sign);
    }
    return false;
  };
  ok = dfs(dfs, 0);

  for (const SparseRow* row : rows)
    for (auto [c, s] : row->entries) rem[c] -= 1;
  return ok;
}

}  // namespace

TuResult tu_check(const ConstraintMatrix& matrix, bool parallel) {
  if (matrix.rows > 22)
    throw std::runtime_error("tu_check: more than 22 rows (" + std::to_string(matrix.rows) + ")");

  std::vector<SparseRow> sparse(matrix.rows);
  for (int r = 0; r < matrix.rows; ++r)
    for (int c = 0; c < matrix.cols; ++c)
      if (int v = matrix.at(r, c); v != 0) sparse[r].entries.emplace_back(c, int8_t(v));

  const uint32_t total = matrix.rows >= 1 ? (uint32_t(1) << matrix.rows) : 1;
  uint32_t failing = total;  // sentinel: none

  auto check_mask = [&](uint32_t mask, std::vector<const SparseRow*>& rows,
                        std::vector<int>& partial, std::vector<int>& rem) {
    rows.clear();
    for (int r = 0; r < matrix.rows; ++r)
      if (mask & (uint32_t(1) << r)) rows.push_back(&sparse[r]);
    // denser rows first prunes earlier
    std::sort(rows.begin(), rows.end(), [](const SparseRow* a, const SparseRow* b) {
      return a->entries.size() > b->entries.size();
    });
    return gh_signable(rows, partial, rem);
  };

  const uint32_t chunk = 1u << 15;
  for (uint32_t base = 1; base < total && failing == total; base += chunk) {
    const uint32_t end = std::min<uint64_t>(uint64_t(base) + chunk, total);
    uint32_t local_min = total;
#pragma omp parallel if (parallel)
    {
      std::vector<const SparseRow*> rows;
      std::vector<int> partial(matrix.cols, 0), rem(matrix.cols, 0);
      uint32_t mine = total;
#pragma omp for schedule(dynamic, 256)
      for (int64_t mask = base; mask < int64_t(end); ++mask)
        if (!check_mask(uint32_t(mask), rows, partial, rem))
          mine = std::min(mine, uint32_t(mask));
#pragma omp critical
      local_min = std::min(local_min, mine);
    }
    if (local_min < total) failing = local_min;
  }

  TuResult result;
  if (failing == total) {
    result.totally_unimodular = true;
    return result;
  }
  result.totally_unimodular = false;
  for (int r = 0; r < matrix.rows; ++r)
    if (failing & (uint32_t(1) << r)) result.witness_rows.push_back(r);
  return result;
}

std::vector<BadCycle> find_bad_cycles(const ProblemInstance& inst, long long max_cycles) {
  const int n = inst.num_users, m = inst.num_caches;
  const int verts = n + m;  // users 0..n-1, caches n..n+m-1
  std::vector<std::vector<int>> adj(verts);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m; ++c)
      if (inst.connected(i, c)) {
        adj[i].push_back(n + c);
        adj[n + c].push_back(i);
      }

  std::vector<BadCycle> out;
  long long seen = 0;
  std::vector<int> path;
  std::vector<char> visited(verts, 0);

  // Enumerate each simple cycle once: the start is its minimum vertex and the
  // direction is fixed by path[1] < path.back().
  auto dfs = [&](auto&& self, int start, int v) -> void {
    visited[v] = 1;
    path.push_back(v);
    for (int w : adj[v]) {
      if (w == start && path.size() >= 3) {
        if (path[1] < path.back()) continue;  // the mirrored traversal reports it
        if (++seen > max_cycles)
          throw std::runtime_error("find_bad_cycles: cycle enumeration cap exceeded");
        if (path.size() % 4 == 2 && path.size() >= 6) {
          BadCycle cycle;
          for (size_t idx = 0; idx < path.size(); ++idx) {
            if (path[idx] < n)
              cycle.users.push_back(path[idx]);
            else
              cycle.caches.push_back(path[idx] - n);
          }
          out.push_back(std::move(cycle));
        }
      } else if (w > start && !visited[w]) {
        self(self, start, w);
      }
    }
    path.pop_back();
    visited[v] = 0;
  };

  for (int s = 0; s < verts; ++s) dfs(dfs, s, s);
  return out;
}

namespace {

struct BuiltLp {
  LinearProgram lp;
  LpLayout layout;
  double constant = 0.0;  // sum of w_ij * d_base_i
};

BuiltLp build_relaxed_lp(const ProblemInstance& inst) {
  if (inst.congestion_sensitive())
    throw std::invalid_argument("lp relaxation: requires the congestion-insensitive model");
  BuiltLp built;
  built.layout = make_layout(inst);
  const int k = inst.num_files;
  auto& lp = built.lp;
  lp.num_vars = built.layout.var_count();
  lp.objective.assign(lp.num_vars, 0.0);
  for (int v = 0; v < int(built.layout.p_vars.size()); ++v) {
    auto [i, j, m] = built.layout.p_vars[v];
    double w = inst.class_rate(i, j);
    lp.objective[built.layout.num_x + v] = w * (inst.d_hit(i, m) - inst.d_base(i));
  }
  for (int i = 0; i < inst.num_users; ++i)
    for (int j = 0; j < k; ++j) built.constant += inst.class_rate(i, j) * inst.d_base(i);

  auto add_row = [&](std::vector<double> row, double b) {
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(b);
  };

  // sum_m p_ijm <= 1
  for (int i = 0; i < inst.num_users; ++i) {
    if (!inst.has_cache_access(i)) continue;
    for (int j = 0; j < k; ++j) {
      std::vector<double> row(lp.num_vars, 0.0);
      for (int v = 0; v < int(built.layout.p_vars.size()); ++v) {
        auto [pi, pj, pm] = built.layout.p_vars[v];
        if (pi == i && pj == j) row[built.layout.num_x + v] = 1.0;
      }
      add_row(std::move(row), 1.0);
    }
  }
  // capacities
  for (int m = 0; m < inst.num_caches; ++m) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int j = 0; j < k; ++j) row[built.layout.x_col(j, m, k)] = 1.0;
    add_row(std::move(row), double(inst.cache_capacity[m]));
  }
  // coupling p <= x
  for (int v = 0; v < int(built.layout.p_vars.size()); ++v) {
    auto [i, j, m] = built.layout.p_vars[v];
    std::vector<double> row(lp.num_vars, 0.0);
    row[built.layout.num_x + v] = 1.0;
    row[built.layout.x_col(j, m, k)] = -1.0;
    add_row(std::move(row), 0.0);
  }
  // x <= 1
  for (int c = 0; c < built.layout.num_x; ++c) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[c] = 1.0;
    add_row(std::move(row), 1.0);
  }
  return built;
}

}  // namespace

double lp_relaxation_value(const ProblemInstance& inst) {
  BuiltLp built = build_relaxed_lp(inst);
  SimplexResult res = solve_simplex(built.lp);
  if (!res.optimal) throw std::runtime_error("lp_relaxation_value: simplex did not converge");
  double lambda = inst.total_rate();
  return lambda > 0.0 ? (built.constant + res.objective) / lambda : 0.0;
}

RelaxationGap relaxation_gap(const ProblemInstance& inst, const BruteForceOptions& opts) {
  RelaxationGap out;
  out.ilp_value = brute_force_placement(inst, opts).report.average_delay;
  out.lp_value = lp_relaxation_value(inst);
  out.gap = out.ilp_value - out.lp_value;
  return out;
}

SolveResult solve_two_cache_lp(const ProblemInstance& inst) {
  if (inst.num_caches != 2)
    throw std::invalid_argument("solve_two_cache_lp: requires exactly two caches");
  BuiltLp built = build_relaxed_lp(inst);
  SimplexResult res = solve_simplex(built.lp);
  if (!res.optimal) throw std::runtime_error("solve_two_cache_lp: simplex did not converge");

  const int k = inst.num_files;
  SolveResult result;
  result.placement = Placement(2);
  for (int m = 0; m < 2; ++m) {
    for (int j = 0; j < k; ++j) {
      double x = res.x[built.layout.x_col(j, m, k)];
      if (std::abs(x) > 1e-7 && std::abs(x - 1.0) > 1e-7)
        throw std::runtime_error(
            "solve_two_cache_lp: fractional placement variable x[" + std::to_string(j) + "][" +
            std::to_string(m) + "] = " + std::to_string(x) +
            " in an optimal vertex; this contradicts total unimodularity of the "
            "two-cache constraint matrix");
      if (x > 0.5) result.placement.stored[m].insert(j);
    }
  }
  result.routing = optimal_routing_ci(inst, result.placement);
  result.report = eval_ci(inst, result.placement, result.routing);

  double lambda = inst.total_rate();
  double lp_value = lambda > 0.0 ? (built.constant + res.objective) / lambda : 0.0;
  if (std::abs(result.report.average_delay - lp_value) > 1e-6 * std::max(1.0, std::abs(lp_value)))
    throw std::runtime_error("solve_two_cache_lp: rounded placement does not reproduce the LP optimum");
  return result;
}

}  // namespace cachenet
