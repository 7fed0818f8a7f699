#include "cachenet/routing.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cachenet {

namespace detail {

std::vector<double> class_delays_full(const ProblemInstance& inst, const Placement& placement) {
  const int n = inst.num_users, k = inst.num_files, caches = inst.num_caches;
  std::vector<double> d(size_t(n) * k, kInfiniteDelay);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < caches; ++m) {
      if (!inst.connected(i, m)) continue;
      double dh = inst.d_hit(i, m), dm = inst.d_miss(i, m);
      const auto& stored = placement.stored[m];
      double* row = &d[size_t(i) * k];
      for (int j = 0; j < k; ++j) {
        double v = stored.count(j) ? dh : dm;
        if (v < row[j]) row[j] = v;
      }
    }
  }
  return d;
}

std::vector<double> class_delays_hit_only(const ProblemInstance& inst, const Placement& placement) {
  const int n = inst.num_users, k = inst.num_files, caches = inst.num_caches;
  std::vector<double> d(size_t(n) * k, kInfiniteDelay);
  for (int m = 0; m < caches; ++m) {
    for (int j : placement.stored[m]) {
      for (int i = 0; i < n; ++i) {
        if (!inst.connected(i, m)) continue;
        double v = inst.d_hit(i, m);
        double& cur = d[size_t(i) * k + j];
        if (v < cur) cur = v;
      }
    }
  }
  return d;
}

double ci_average_delay(const ProblemInstance& inst, const std::vector<double>& class_delay) {
  const int n = inst.num_users, k = inst.num_files;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double db = inst.d_base(i);
    const double* row = &class_delay[size_t(i) * k];
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += inst.q(i, j) * std::min(db, row[j]);
    total += inst.rate(i) * s;
  }
  double lambda = inst.total_rate();
  return lambda > 0.0 ? total / lambda : 0.0;
}

namespace {

inline double queue_marginal(double mu, double load) {
  if (load >= mu) return kInfiniteDelay;
  double gap = mu - load;
  return mu / (gap * gap);
}

}  // namespace

CsSolve solve_cs_from_delays(const ProblemInstance& inst, const std::vector<double>& class_delay) {
  const int n = inst.num_users, k = inst.num_files;
  const double mu = inst.service_rate;
  const double lambda = inst.total_rate();

  CsSolve out;

  // Gather demand classes. Users with no cached path contribute mandatory
  // queue load; each connected class is characterized by its excess delay
  // over the uncached base.
  double mandatory = 0.0;
  double db_sum = 0.0;  // sum of w * d_base over all classes with traffic
  std::vector<double> es, ws;
  es.reserve(size_t(n) * k);
  ws.reserve(size_t(n) * k);
  for (int i = 0; i < n; ++i) {
    double db = inst.d_base(i);
    const double* row = &class_delay[size_t(i) * k];
    for (int j = 0; j < k; ++j) {
      double w = inst.class_rate(i, j);
      if (w <= 0.0) continue;
      db_sum += w * db;
      if (!std::isfinite(row[j])) {
        mandatory += w;
      } else {
        es.push_back(row[j] - db);
        ws.push_back(w);
      }
    }
  }

  if (mandatory >= mu) {
    out.degenerate_unstable = true;
    out.t = kInfiniteDelay;
    out.queue_load = mandatory;
    out.average_delay = kInfiniteDelay;
    return out;
  }

  // Sort connected classes by excess; prefix sums give load and delay of any
  // threshold configuration in O(1).
  const size_t nc = es.size();
  std::vector<size_t> order(nc);
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return es[a] < es[b]; });
  std::vector<double> se(nc), sw(nc);
  for (size_t idx = 0; idx < nc; ++idx) {
    se[idx] = es[order[idx]];
    sw[idx] = ws[order[idx]];
  }
  std::vector<double> pw(nc + 1, 0.0), pwe(nc + 1, 0.0);
  for (size_t idx = 0; idx < nc; ++idx) {
    pw[idx + 1] = pw[idx] + sw[idx];
    pwe[idx + 1] = pwe[idx] + sw[idx] * se[idx];
  }
  const double conn_w = pw[nc];

  // Groups of equal positive excess; configuration c caches groups 1..c.
  // boundary[c] = one past the last class cached under configuration c.
  std::vector<double> gv;
  std::vector<size_t> boundary;
  {
    size_t idx = size_t(std::upper_bound(se.begin(), se.end(), 0.0) - se.begin());
    boundary.push_back(idx);
    while (idx < nc) {
      double g = se[idx];
      while (idx < nc && se[idx] == g) ++idx;
      gv.push_back(g);
      boundary.push_back(idx);
    }
  }
  const int groups = int(gv.size());

  auto load_at = [&](int c) { return mandatory + (conn_w - pw[boundary[c]]); };
  auto t_at = [&](int c) { return queue_marginal(mu, load_at(c)); };

  auto average = [&](double cached_excess, double load) {
    if (lambda <= 0.0) return 0.0;
    return (db_sum + cached_excess + load / (mu - load)) / lambda;
  };
  auto finish_pure = [&](int c) {
    out.t = t_at(c);
    out.queue_load = load_at(c);
    out.average_delay = average(pwe[boundary[c]], out.queue_load);
  };
  auto finish_split = [&](int c) {
    double g = gv[c - 1];
    double target = mu - std::sqrt(mu / g);
    double group_w = pw[boundary[c]] - pw[boundary[c - 1]];
    double f = (target - load_at(c)) / group_w;
    f = std::clamp(f, 0.0, 1.0);
    out.t = g;
    out.queue_load = load_at(c) + f * group_w;
    out.has_split = true;
    out.split_excess = g;
    out.split_uncached_fraction = f;
    out.average_delay = average(pwe[boundary[c - 1]] + (1.0 - f) * group_w * g, out.queue_load);
  };
  auto try_config = [&](int c) {
    double glo = c == 0 ? 0.0 : gv[c - 1];
    double ghi = c == groups ? kInfiniteDelay : gv[c];
    if (c >= 1 && t_at(c) <= glo && glo <= t_at(c - 1)) {
      finish_split(c);
      return true;
    }
    double t = t_at(c);
    if (t > glo && t < ghi) {
      finish_pure(c);
      return true;
    }
    return false;
  };

  // Monotone bisection on the marginal queue cost t. h(t) = t - phi(load(t))
  // is increasing; load(t) counts classes with excess strictly above t.
  auto load_of_t = [&](double t) {
    size_t idx = size_t(std::upper_bound(se.begin(), se.end(), t) - se.begin());
    return mandatory + (conn_w - pw[idx]);
  };
  auto h = [&](double t) {
    double phi = queue_marginal(mu, load_of_t(t));
    if (!std::isfinite(phi)) return -kInfiniteDelay;
    return t - phi;
  };

  double max_excess = nc > 0 ? se[nc - 1] : 0.0;
  double lo = 0.0;
  double hi = queue_marginal(mu, mandatory) + std::max(0.0, max_excess);
  assert(h(hi) >= 0.0);
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++iter) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }

  // The bracket pins the configuration; classify exactly on the group grid.
  int c_lo = int(std::upper_bound(gv.begin(), gv.end(), lo) - gv.begin());
  int c_hi = int(std::upper_bound(gv.begin(), gv.end(), hi) - gv.begin());
  bool done = false;
  for (int c = std::max(0, c_lo - 1); c <= std::min(groups, c_hi + 1) && !done; ++c)
    done = try_config(c);
  for (int c = 0; c <= groups && !done; ++c) done = try_config(c);
  assert(done);
  return out;
}

}  // namespace detail

namespace {

// Lowest-index connected cache minimizing the effective delay for (i, j).
int best_cache_full(const ProblemInstance& inst, const Placement& placement, int i, int j) {
  int best = -1;
  double best_d = kInfiniteDelay;
  for (int m = 0; m < inst.num_caches; ++m) {
    if (!inst.connected(i, m)) continue;
    double d = placement.contains(m, j) ? inst.d_hit(i, m) : inst.d_miss(i, m);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

RoutingPolicy optimal_routing_ci(const ProblemInstance& inst, const Placement& placement) {
  if (inst.congestion_sensitive())
    throw std::invalid_argument("optimal_routing_ci: instance uses the congestion-sensitive model");
  const int n = inst.num_users, k = inst.num_files;
  RoutingPolicy policy(n, k);
  for (int i = 0; i < n; ++i) {
    double db = inst.d_base(i);
    for (int j = 0; j < k; ++j) {
      if (inst.class_rate(i, j) <= 0.0) continue;
      int best = -1;
      double best_d = kInfiniteDelay;
      for (int m = 0; m < inst.num_caches; ++m) {
        if (!inst.connected(i, m) || !placement.contains(m, j)) continue;
        double d = inst.d_hit(i, m);
        if (d < best_d) {
          best_d = d;
          best = m;
        }
      }
      if (best >= 0 && best_d <= db) policy.set(i, j, best, 1.0);
    }
  }
  return policy;
}

CsRoutingResult optimal_routing_cs(const ProblemInstance& inst, const Placement& placement) {
  if (!inst.congestion_sensitive())
    throw std::invalid_argument("optimal_routing_cs: instance uses the congestion-insensitive model");
  const int n = inst.num_users, k = inst.num_files;
  std::vector<double> delays = detail::class_delays_full(inst, placement);
  detail::CsSolve solve = detail::solve_cs_from_delays(inst, delays);

  CsRoutingResult result;
  result.policy = RoutingPolicy(n, k);
  result.threshold.marginal_queue_cost = solve.t;
  result.threshold.queue_load = solve.queue_load;

  for (int i = 0; i < n; ++i) {
    double db = inst.d_base(i);
    for (int j = 0; j < k; ++j) {
      if (inst.class_rate(i, j) <= 0.0) continue;
      double d = delays[size_t(i) * k + j];
      if (!std::isfinite(d)) continue;  // no cached path
      double e = d - db;
      double fraction;
      if (solve.degenerate_unstable) {
        fraction = 1.0;
      } else if (solve.has_split && e == solve.split_excess) {
        fraction = 1.0 - solve.split_uncached_fraction;
        if (fraction > 0.0 && fraction < 1.0) result.threshold.split_classes.emplace_back(i, j);
      } else {
        fraction = e < solve.t ? 1.0 : 0.0;
      }
      if (fraction > 0.0) result.policy.set(i, j, best_cache_full(inst, placement, i, j), fraction);
    }
  }
  return result;
}

double submodular_value(const ProblemInstance& inst, const Placement& placement) {
  if (inst.congestion_sensitive()) {
    auto delays = detail::class_delays_full(inst, placement);
    return -detail::solve_cs_from_delays(inst, delays).average_delay;
  }
  auto delays = detail::class_delays_hit_only(inst, placement);
  return -detail::ci_average_delay(inst, delays);
}

}  // namespace cachenet
