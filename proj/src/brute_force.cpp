#include "cachenet/brute_force.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cachenet {

namespace {

// Binomial coefficients up to the instance sizes we enumerate; saturates at a
// value safely above any admissible cap.
constexpr double kCountCap = 9e18;

double binom(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double v = 1.0;
  for (int i = 1; i <= r; ++i) {
    v = v * double(n - r + i) / double(i);
    if (v > kCountCap) return kCountCap;
  }
  return std::round(v);
}

// Writes the rank-th lexicographic r-combination of {0..n-1} into out.
void unrank_combination(long long rank, int n, int r, std::vector<int>& out) {
  out.clear();
  int next = 0;
  for (int slot = r; slot > 0; --slot) {
    for (int v = next;; ++v) {
      long long with_v = (long long)binom(n - v - 1, slot - 1);
      if (rank < with_v) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= with_v;
    }
  }
}

struct Enumeration {
  std::vector<int> pick;        // files chosen per cache
  std::vector<long long> count; // combinations per cache
  long long total = 1;
};

Enumeration plan_enumeration(const ProblemInstance& inst, long long cap) {
  Enumeration e;
  e.pick.resize(inst.num_caches);
  e.count.resize(inst.num_caches);
  double total = 1.0;
  for (int m = 0; m < inst.num_caches; ++m) {
    e.pick[m] = std::min(inst.cache_capacity[m], inst.num_files);
    double c = binom(inst.num_files, e.pick[m]);
    e.count[m] = (long long)c;
    total *= c;
    if (total > double(cap))
      throw std::runtime_error("brute_force_placement: enumeration cap exceeded (" +
                               std::to_string(cap) + ")");
  }
  e.total = (long long)total;
  return e;
}

Placement placement_at(const Enumeration& e, const ProblemInstance& inst, long long index) {
  Placement p(inst.num_caches);
  std::vector<int> combo;
  // Cache 0 is the most significant digit, so ascending index is
  // lexicographic placement order.
  long long rest = index;
  for (int m = inst.num_caches - 1; m >= 0; --m) {
    long long r = rest % e.count[m];
    rest /= e.count[m];
    unrank_combination(r, inst.num_files, e.pick[m], combo);
    p.stored[m].insert(combo.begin(), combo.end());
  }
  return p;
}

double placement_delay(const ProblemInstance& inst, const Placement& p) {
  return -submodular_value(inst, p);
}

}  // namespace

SolveResult brute_force_placement(const ProblemInstance& inst, const BruteForceOptions& opts) {
  Enumeration e = plan_enumeration(inst, opts.max_enumerations);

  long long best_index = 0;
  double best_delay = kInfiniteDelay;
  const long long total = std::max(e.total, 1LL);

  if (opts.parallel) {
    struct Best {
      double delay = kInfiniteDelay;
      long long index = -1;
    };
    std::vector<Best> by_thread;
#ifdef _OPENMP
    by_thread.resize(omp_get_max_threads());
#pragma omp parallel for schedule(dynamic, 64)
    for (long long g = 0; g < total; ++g) {
      Best& b = by_thread[omp_get_thread_num()];
      double d = placement_delay(inst, placement_at(e, inst, g));
      if (d < b.delay || (d == b.delay && g < b.index)) {
        b.delay = d;
        b.index = g;
      }
    }
#else
    by_thread.resize(1);
    for (long long g = 0; g < total; ++g) {
      Best& b = by_thread[0];
      double d = placement_delay(inst, placement_at(e, inst, g));
      if (d < b.delay || (d == b.delay && g < b.index)) {
        b.delay = d;
        b.index = g;
      }
    }
#endif
    best_index = -1;
    for (const Best& b : by_thread) {
      if (b.index < 0) continue;
      if (best_index < 0 || b.delay < best_delay ||
          (b.delay == best_delay && b.index < best_index)) {
        best_delay = b.delay;
        best_index = b.index;
      }
    }
    if (best_index < 0) best_index = 0;
  } else {
    best_delay = placement_delay(inst, placement_at(e, inst, 0));
    for (long long g = 1; g < total; ++g) {
      double d = placement_delay(inst, placement_at(e, inst, g));
      if (d < best_delay) {
        best_delay = d;
        best_index = g;
      }
    }
  }

  SolveResult result;
  result.placement = placement_at(e, inst, best_index);
  if (inst.congestion_sensitive()) {
    auto cs = optimal_routing_cs(inst, result.placement);
    result.routing = std::move(cs.policy);
    result.report = eval_cs(inst, result.placement, result.routing);
  } else {
    result.routing = optimal_routing_ci(inst, result.placement);
    result.report = eval_ci(inst, result.placement, result.routing);
  }
  return result;
}

CsddpInstance ecp_to_csddp(const EcpInstance& ecp) {
  const int n = int(ecp.numbers.size());
  if (n < 2) throw std::invalid_argument("ecp_to_csddp: need at least two numbers");
  if (n % 2 != 0) throw std::invalid_argument("ecp_to_csddp: the number count must be even");
  double sum = 0.0;
  for (double a : ecp.numbers) {
    if (a < 0.0 || !std::isfinite(a))
      throw std::invalid_argument("ecp_to_csddp: numbers must be non-negative and finite");
    sum += a;
  }
  if (sum <= 0.0) throw std::invalid_argument("ecp_to_csddp: the numbers must not all be zero");

  CsddpInstance out;
  out.service_rate = sum;
  out.capacity = n / 2;
  out.target_delay = double(2 * n + 3) / sum;
  for (double a : ecp.numbers) {
    if (a == 0.0) continue;  // zero-rate user, no traffic
    out.rate.push_back(a);
    out.hit_delay.push_back(4.0 / sum);
    out.base_delay.push_back(4.0 / a);
  }
  return out;
}

std::pair<double, std::vector<int>> csddp_brute(const CsddpInstance& csddp) {
  const int n = int(csddp.rate.size());
  if (n > 24) throw std::runtime_error("csddp_brute: more than 24 users");
  const double mu = csddp.service_rate;
  double lambda = 0.0;
  for (double r : csddp.rate) lambda += r;

  double best = kInfiniteDelay;
  uint32_t best_mask = 0;
  const int cap = csddp.capacity;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > cap) continue;
    double path = 0.0, queue_load = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        path += csddp.rate[i] * csddp.hit_delay[i];
      } else {
        path += csddp.rate[i] * csddp.base_delay[i];
        queue_load += csddp.rate[i];
      }
    }
    double d;
    if (queue_load >= mu)
      d = kInfiniteDelay;
    else
      d = (path + queue_load / (mu - queue_load)) / lambda;
    if (d < best) {
      best = d;
      best_mask = mask;
    }
  }

  std::vector<int> subset;
  for (int i = 0; i < n; ++i)
    if (best_mask & (1u << i)) subset.push_back(i);
  return {best, subset};
}

}  // namespace cachenet
