#include "cachenet/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace cachenet {

namespace {
constexpr double kPivotTol = 1e-9;
}

SimplexResult solve_simplex(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = int(lp.rows.size());
  for (double b : lp.rhs)
    if (b < 0.0) throw std::invalid_argument("solve_simplex: rhs must be non-negative");

  // Tableau: m constraint rows + objective row; columns = n structural
  // variables, m slacks, rhs.
  const int cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) t[r][c] = lp.rows[r][c];
    t[r][n + r] = 1.0;
    t[r][cols - 1] = lp.rhs[r];
    basis[r] = n + r;
  }
  for (int c = 0; c < n; ++c) t[m][c] = lp.objective[c];

  const long long max_iters = 20000LL * (m + n + 1);
  for (long long iter = 0;; ++iter) {
    if (iter > max_iters) return {};  // cycling guard tripped; not expected

    // Bland: entering = lowest-index column with negative reduced cost.
    int enter = -1;
    for (int c = 0; c < n + m; ++c) {
      if (t[m][c] < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;

    // Ratio test; ties by lowest basis index (Bland).
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m; ++r) {
      if (t[r][enter] <= kPivotTol) continue;
      double ratio = t[r][cols - 1] / t[r][enter];
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0)
      throw std::runtime_error("solve_simplex: objective is unbounded below");

    // Pivot.
    double piv = t[leave][enter];
    for (int c = 0; c < cols; ++c) t[leave][c] /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      double factor = t[r][enter];
      if (factor == 0.0) continue;
      for (int c = 0; c < cols; ++c) t[r][c] -= factor * t[leave][c];
    }
    basis[leave] = enter;
  }

  SimplexResult res;
  res.optimal = true;
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = t[r][cols - 1];
  res.objective = -t[m][cols - 1];
  return res;
}

}  // namespace cachenet
