#include "cachenet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <list>
#include <stdexcept>
#include <unordered_map>

#include "cachenet/rng.hpp"

namespace cachenet {

namespace {

constexpr double kT975Df19 = 2.093;  // Student-t quantile for 20 batches

class LruCache {
 public:
  LruCache(int capacity, bool shadow) : capacity_(capacity), shadow_(shadow) {}

  // Returns hit/miss and updates recency (hits refresh, misses insert at the
  // head and evict the tail).
  bool access(int file) {
    bool hit = false;
    if (capacity_ > 0) {
      auto it = pos_.find(file);
      if (it != pos_.end()) {
        hit = true;
        order_.splice(order_.begin(), order_, it->second);
      } else {
        if (int(order_.size()) == capacity_) {
          pos_.erase(order_.back());
          order_.pop_back();
        }
        order_.push_front(file);
        pos_[file] = order_.begin();
      }
    }
    if (shadow_) check_shadow(file, hit);
    return hit;
  }

  bool contains(int file) const { return pos_.count(file) != 0; }

 private:
  void check_shadow(int file, bool hit) {
    // Reference model: the cache must hold exactly the most recently
    // referenced distinct files, in recency order.
    bool ref_hit = false;
    for (size_t idx = 0; idx < ref_.size(); ++idx) {
      if (ref_[idx] == file) {
        ref_.erase(ref_.begin() + idx);
        ref_hit = true;
        break;
      }
    }
    if (capacity_ > 0) {
      ref_.insert(ref_.begin(), file);
      if (int(ref_.size()) > capacity_) ref_.pop_back();
    }
    bool same = int(ref_.size()) == int(order_.size()) && ref_hit == hit;
    auto it = order_.begin();
    for (size_t idx = 0; same && idx < ref_.size(); ++idx, ++it) same = (*it == ref_[idx]);
    if (!same) throw std::logic_error("LruCache: contents diverged from the reference model");
  }

  int capacity_;
  bool shadow_;
  std::list<int> order_;
  std::unordered_map<int, std::list<int>::iterator> pos_;
  std::vector<int> ref_;
};

struct BatchStats {
  std::vector<double> samples;

  void add(double v) { samples.push_back(v); }

  double mean() const {
    if (samples.empty()) return 0.0;
    double s = 0.0;
    for (double v : samples) s += v;
    return s / double(samples.size());
  }

  double half_width() const {
    const int batches = 20;
    size_t per = samples.size() / batches;
    if (per < 1) return 0.0;
    double means[batches];
    for (int b = 0; b < batches; ++b) {
      double s = 0.0;
      for (size_t idx = b * per; idx < (b + 1) * per; ++idx) s += samples[idx];
      means[b] = s / double(per);
    }
    double m = 0.0;
    for (double v : means) m += v;
    m /= batches;
    double var = 0.0;
    for (double v : means) var += (v - m) * (v - m);
    var /= (batches - 1);
    return kT975Df19 * std::sqrt(var / batches);
  }
};

struct QueueState {
  double server_free = 0.0;
  // Rolling arrival-rate estimate for saturation detection.
  std::deque<double> window;
  bool unstable = false;

  double sojourn(double t, double mu, Rng& service_rng) {
    window.push_back(t);
    if (window.size() > 1000) window.pop_front();
    if (window.size() == 1000 && t > window.front() &&
        double(window.size() - 1) / (t - window.front()) >= mu)
      unstable = true;
    double start = std::max(t, server_free);
    server_free = start + service_rng.exponential(mu);
    return server_free - t;
  }
};

struct RequestSource {
  const ProblemInstance& inst;
  const TraceSegment* trace;
  Rng arrival_rng;
  // Sampling tables for the Poisson mode.
  std::vector<double> user_cdf;
  std::vector<double> file_cdf;
  double total_weight = 0.0;
  size_t next_index = 0;
  double now = 0.0;

  RequestSource(const ProblemInstance& instance, const TraceSegment* t, uint64_t seed)
      : inst(instance), trace(t), arrival_rng(splitmix64(seed) + 11) {
    if (trace) return;
    const int n = inst.num_users, k = inst.num_files;
    user_cdf.resize(n);
    file_cdf.resize(size_t(n) * k);
    for (int i = 0; i < n; ++i) {
      double mass = 0.0;
      for (int j = 0; j < k; ++j) {
        mass += inst.q(i, j);
        file_cdf[size_t(i) * k + j] = mass;
      }
      total_weight += inst.rate(i) * mass;
      user_cdf[i] = total_weight;
    }
    if (total_weight <= 0.0)
      throw std::invalid_argument("simulate: the instance carries no traffic");
  }

  bool next(double& t, int& user, int& file) {
    if (trace) {
      if (next_index >= trace->records.size()) return false;
      const TraceRecord& rec = trace->records[next_index++];
      t = now = rec.timestamp;
      user = rec.user;
      file = rec.file;
      return true;
    }
    const int n = inst.num_users, k = inst.num_files;
    now += arrival_rng.exponential(total_weight);
    t = now;
    double u = arrival_rng.u01() * total_weight;
    user = int(std::upper_bound(user_cdf.begin(), user_cdf.end(), u) - user_cdf.begin());
    user = std::min(user, n - 1);
    const double* cdf = &file_cdf[size_t(user) * k];
    double v = arrival_rng.u01() * cdf[k - 1];
    file = int(std::upper_bound(cdf, cdf + k, v) - cdf);
    file = std::min(file, k - 1);
    return true;
  }
};

}  // namespace

static SimReport run_simulation(const ProblemInstance& inst, const TraceSegment* trace,
                                const SimConfig& config) {
  const int k = inst.num_files, caches = inst.num_caches;
  const bool cs = inst.congestion_sensitive();
  const double mu = inst.service_rate;

  const StaticPolicy* stat = std::get_if<StaticPolicy>(&config.policy);
  const PLruPolicy* plru = std::get_if<PLruPolicy>(&config.policy);
  if (stat) {
    if (stat->routing.num_users != inst.num_users || stat->routing.num_files != k)
      throw std::invalid_argument("simulate: static policy shape does not match instance");
    for (int i = 0; i < inst.num_users; ++i)
      for (int j = 0; j < k; ++j)
        for (const auto& [m, f] : stat->routing.at(i, j))
          if (f > 0.0 && !inst.connected(i, m))
            throw std::invalid_argument("simulate: static policy routes to an unreachable cache");
  }
  if (plru && (plru->p < 0.0 || plru->p > 1.0))
    throw std::invalid_argument("simulate: p must be in [0, 1]");

  long long horizon = config.max_requests;
  if (trace) {
    long long avail = (long long)trace->records.size();
    horizon = horizon > 0 ? std::min(horizon, avail) : avail;
  }
  if (horizon <= 0 && !(config.max_time < kInfiniteDelay))
    throw std::invalid_argument("simulate: need a request or time horizon");

  std::vector<std::vector<int>> reachable(inst.num_users);
  for (int i = 0; i < inst.num_users; ++i)
    for (int m = 0; m < caches; ++m)
      if (inst.connected(i, m)) reachable[i].push_back(m);

  std::vector<LruCache> lru;
  lru.reserve(caches);
  for (int m = 0; m < caches; ++m)
    lru.emplace_back(inst.cache_capacity[m], config.check_lru_invariant);

  Rng route_rng(splitmix64(config.seed) + 21);
  Rng choice_rng(splitmix64(config.seed) + 22);
  Rng service_rng(splitmix64(config.seed) + 23);
  RequestSource source(inst, trace, config.seed);

  QueueState queue;
  BatchStats delays, queue_delays;
  std::vector<long long> cache_hits(caches, 0), cache_accesses(caches, 0);
  std::vector<long long> file_hits, file_accesses;
  if (config.collect_per_file_stats) {
    file_hits.assign(size_t(caches) * k, 0);
    file_accesses.assign(size_t(caches) * k, 0);
  }

  const long long warmup_count =
      horizon > 0 ? (long long)std::floor(config.warmup_fraction * double(horizon)) : -1;
  const double warmup_time =
      horizon > 0 ? 0.0 : config.warmup_fraction * config.max_time;

  long long processed = 0;
  double t;
  int user, file;
  while ((horizon <= 0 || processed < horizon) && source.next(t, user, file)) {
    if (t > config.max_time) break;
    ++processed;
    bool counted = horizon > 0 ? processed > warmup_count : t >= warmup_time;

    double u_route = route_rng.u01();
    double u_choice = choice_rng.u01();

    int cache = -1;
    if (stat) {
      const auto& entries = stat->routing.at(user, file);
      double total = 0.0;
      for (const auto& [m, f] : entries) total += f;
      if (u_route < total) {
        double pick = u_choice * total, acc = 0.0;
        for (const auto& [m, f] : entries) {
          acc += f;
          if (pick < acc) {
            cache = m;
            break;
          }
        }
        if (cache < 0) cache = entries.back().first;
      }
    } else {
      if (!reachable[user].empty() && u_route < plru->p) {
        size_t pick = std::min(size_t(u_choice * double(reachable[user].size())),
                               reachable[user].size() - 1);
        cache = reachable[user][pick];
      }
    }

    double delay;
    if (cache >= 0) {
      bool hit = stat ? stat->placement.contains(cache, file) : lru[cache].access(file);
      ++cache_accesses[cache];
      if (hit) ++cache_hits[cache];
      if (config.collect_per_file_stats) {
        ++file_accesses[size_t(cache) * k + file];
        if (hit) ++file_hits[size_t(cache) * k + file];
      }
      delay = hit ? inst.d_hit(user, cache) : inst.d_miss(user, cache);
      if (!hit && cs && config.queue_accounting == QueueAccounting::kIncludeMissFetch) {
        double s = queue.sojourn(t, mu, service_rng);
        delay += s;
        if (counted) queue_delays.add(s);
      }
    } else {
      delay = inst.d_base(user);
      if (cs) {
        double s = queue.sojourn(t, mu, service_rng);
        delay += s;
        if (counted) queue_delays.add(s);
      }
    }
    if (counted) delays.add(delay);
  }

  SimReport report;
  report.mean_delay = delays.mean();
  report.ci_half_width = delays.half_width();
  report.requests = (long long)delays.samples.size();
  report.queue_delay_mean = queue_delays.mean();
  report.unstable_detected = queue.unstable;
  report.cache_hit_rate.assign(caches, 0.0);
  for (int m = 0; m < caches; ++m)
    if (cache_accesses[m] > 0)
      report.cache_hit_rate[m] = double(cache_hits[m]) / double(cache_accesses[m]);
  if (config.collect_per_file_stats) {
    report.per_file_hit_rate.assign(size_t(caches) * k, 0.0);
    for (size_t idx = 0; idx < file_hits.size(); ++idx)
      if (file_accesses[idx] > 0)
        report.per_file_hit_rate[idx] = double(file_hits[idx]) / double(file_accesses[idx]);
  }
  return report;
}

SimReport simulate(const ProblemInstance& inst, const SimConfig& config) {
  return run_simulation(inst, nullptr, config);
}

SimReport simulate(const ProblemInstance& inst, const TraceSegment& trace,
                   const SimConfig& config) {
  return run_simulation(inst, &trace, config);
}

}  // namespace cachenet
