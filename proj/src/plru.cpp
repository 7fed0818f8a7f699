#include "cachenet/plru.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cachenet {

namespace {

// Expected occupancy at characteristic time T.
double occupancy(const double* r, int k, double t) {
  double s = 0.0;
  for (int j = 0; j < k; ++j)
    if (r[j] > 0.0) s += 1.0 - std::exp(-r[j] * t);
  return s;
}

double solve_characteristic_time(const double* r, int k, int capacity) {
  int positive = 0;
  for (int j = 0; j < k; ++j)
    if (r[j] > 0.0) ++positive;
  if (capacity >= positive) return kInfiniteDelay;

  double hi = 1.0;
  while (occupancy(r, k, hi) < double(capacity)) hi *= 2.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * hi; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (occupancy(r, k, mid) < double(capacity))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PLruModel build_plru(const ProblemInstance& inst) {
  if (inst.num_caches < 1) throw std::invalid_argument("build_plru: need at least one cache");
  const int n = inst.num_users, k = inst.num_files, caches = inst.num_caches;

  PLruModel model;
  model.connected.assign(n, 0);
  model.cache_count.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < caches; ++m)
      if (inst.connected(i, m)) ++model.cache_count[i];
    model.connected[i] = model.cache_count[i] > 0;
  }

  // Per-cache aggregate popularity under uniform cache selection, normalized
  // per cache (the characteristic-time fixed point is invariant to positive
  // scaling of the popularity vector).
  model.aggregate_popularity.assign(size_t(caches) * k, 0.0);
  for (int m = 0; m < caches; ++m) {
    double* r = &model.aggregate_popularity[size_t(m) * k];
    for (int i = 0; i < n; ++i) {
      if (!inst.connected(i, m)) continue;
      double share = inst.rate(i) / model.cache_count[i];
      for (int j = 0; j < k; ++j) r[j] += share * inst.q(i, j);
    }
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += r[j];
    if (sum > 0.0)
      for (int j = 0; j < k; ++j) r[j] /= sum;
  }

  model.characteristic_time.assign(caches, 0.0);
  model.hit_probability.assign(size_t(caches) * k, 0.0);
  for (int m = 0; m < caches; ++m) {
    const double* r = &model.aggregate_popularity[size_t(m) * k];
    double t = solve_characteristic_time(r, k, inst.cache_capacity[m]);
    model.characteristic_time[m] = t;
    double* hit = &model.hit_probability[size_t(m) * k];
    for (int j = 0; j < k; ++j) {
      if (r[j] <= 0.0)
        hit[j] = 0.0;
      else
        hit[j] = std::isfinite(t) ? 1.0 - std::exp(-r[j] * t) : 1.0;
    }
  }

  // Average delay of a cache-routed request and the closed-form optimum p.
  double cached_delay_sum = 0.0;  // sum over connected users of lambda_i q_ij * d^c_ij
  for (int i = 0; i < n; ++i) {
    if (!model.connected[i]) {
      model.lambda_disconnected += inst.rate(i);
      model.base_sum_disconnected += inst.rate(i) * inst.d_base(i);
      continue;
    }
    model.lambda_connected += inst.rate(i);
    model.base_sum_connected += inst.rate(i) * inst.d_base(i);
    for (int j = 0; j < k; ++j) {
      double w = inst.class_rate(i, j);
      if (w <= 0.0) continue;
      double dc = 0.0;
      for (int m = 0; m < caches; ++m) {
        if (!inst.connected(i, m)) continue;
        double h = model.hit(m, j, k);
        dc += h * inst.d_hit(i, m) + (1.0 - h) * inst.d_miss(i, m);
      }
      cached_delay_sum += w * dc / model.cache_count[i];
    }
  }
  model.cached_mean_delay =
      model.lambda_connected > 0.0 ? cached_delay_sum / model.lambda_connected : 0.0;

  double denom = model.lambda_connected * model.cached_mean_delay - model.base_sum_connected;
  if (model.lambda_connected <= 0.0) {
    model.p_star = 0.0;
  } else if (denom <= 0.0) {
    model.p_star = 1.0;  // cached paths dominate the base delay outright
  } else if (!inst.congestion_sensitive()) {
    model.p_star = 0.0;  // no queue to relieve and caches cost more on average
  } else {
    double mu = inst.service_rate;
    double lambda = inst.total_rate();
    double p = (std::sqrt(mu * model.lambda_connected / denom) - mu + lambda) /
               model.lambda_connected;
    model.p_star = std::clamp(p, 0.0, 1.0);
  }
  return model;
}

double plru_delay(const ProblemInstance& inst, const PLruModel& model, double p) {
  if (!inst.congestion_sensitive())
    throw std::invalid_argument("plru_delay: requires the congestion-sensitive model");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("plru_delay: p must be in [0, 1]");

  double lambda = inst.total_rate();
  if (lambda <= 0.0) return 0.0;
  double mu = inst.service_rate;
  double queue_load = (1.0 - p) * model.lambda_connected + model.lambda_disconnected;
  if (queue_load >= mu) return kInfiniteDelay;

  double total = p * model.lambda_connected * model.cached_mean_delay +
                 (1.0 - p) * model.base_sum_connected + model.base_sum_disconnected +
                 queue_load / (mu - queue_load);
  return total / lambda;
}

}  // namespace cachenet
