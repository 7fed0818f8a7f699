#include "cachenet/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cachenet/rng.hpp"

namespace cachenet {

TraceSegment load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace: cannot open " + path);

  TraceSegment trace;
  auto users = std::make_shared<std::vector<std::string>>();
  auto files = std::make_shared<std::vector<std::string>>();
  std::unordered_map<std::string, int> user_id, file_id;

  std::string line;
  long long line_no = 0;
  if (!std::getline(in, line))
    throw std::runtime_error("load_trace: " + path + " is empty");
  ++line_no;
  {
    std::string header = line;
    header.erase(std::remove_if(header.begin(), header.end(),
                                [](unsigned char c) { return std::isspace(c); }),
                 header.end());
    if (header != "timestamp,user,file")
      throw std::runtime_error("load_trace: line 1: expected header 'timestamp,user,file'");
  }

  double prev_ts = -kInfiniteDelay;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string ts_str, user, file;
    if (!std::getline(row, ts_str, ',') || !std::getline(row, user, ',') ||
        !std::getline(row, file))
      throw std::runtime_error("load_trace: line " + std::to_string(line_no) +
                               ": expected 3 comma-separated fields");
    double ts;
    try {
      size_t used = 0;
      ts = std::stod(ts_str, &used);
      while (used < ts_str.size() && std::isspace((unsigned char)ts_str[used])) ++used;
      if (used != ts_str.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::runtime_error("load_trace: line " + std::to_string(line_no) +
                               ": bad timestamp '" + ts_str + "'");
    }
    if (ts < prev_ts)
      throw std::runtime_error("load_trace: line " + std::to_string(line_no) +
                               ": timestamps must be non-decreasing");
    prev_ts = ts;

    auto intern = [](std::unordered_map<std::string, int>& ids,
                     std::vector<std::string>& names, const std::string& key) {
      auto [it, inserted] = ids.try_emplace(key, int(names.size()));
      if (inserted) names.push_back(key);
      return it->second;
    };
    trace.records.push_back({ts, intern(user_id, *users, user), intern(file_id, *files, file)});
  }

  trace.num_users = int(users->size());
  trace.num_files = int(files->size());
  trace.user_names = std::move(users);
  trace.file_names = std::move(files);
  return trace;
}

std::vector<TraceSegment> split_segments(const TraceSegment& trace, long long segment_size) {
  if (segment_size < 1) throw std::invalid_argument("split_segments: segment_size must be positive");
  std::vector<TraceSegment> out;
  for (size_t begin = 0; begin < trace.records.size(); begin += size_t(segment_size)) {
    TraceSegment seg;
    seg.num_users = trace.num_users;
    seg.num_files = trace.num_files;
    seg.user_names = trace.user_names;
    seg.file_names = trace.file_names;
    size_t end = std::min(trace.records.size(), begin + size_t(segment_size));
    seg.records.assign(trace.records.begin() + begin, trace.records.begin() + end);
    out.push_back(std::move(seg));
  }
  return out;
}

ProblemInstance fit_instance(const TraceSegment& segment, const GeometricLayout& layout,
                             int cache_budget, bool congestion_sensitive) {
  if (segment.records.empty()) throw std::invalid_argument("fit_instance: empty segment");
  const int n = segment.num_users, k = segment.num_files;
  const int caches = int(layout.cache_pos.size());
  if (cache_budget < caches)
    throw std::invalid_argument("fit_instance: cache budget below one file per cache");
  double duration = segment.records.back().timestamp - segment.records.front().timestamp;
  if (!(duration > 0.0))
    throw std::invalid_argument("fit_instance: segment spans no time");

  std::vector<long long> user_count(n, 0);
  std::vector<std::unordered_map<int, long long>> class_count(n);
  for (const TraceRecord& rec : segment.records) {
    ++user_count[rec.user];
    ++class_count[rec.user][rec.file];
  }

  ProblemInstance inst;
  inst.num_users = n;
  inst.num_files = k;
  inst.num_caches = caches;
  inst.request_rate.resize(n);
  inst.popularity.assign(size_t(n) * k, 0.0);
  inst.adjacency.assign(size_t(n) * caches, 0);
  inst.hit_delay.assign(size_t(n) * caches, 0.0);
  inst.miss_delay.assign(size_t(n) * caches, 0.0);
  inst.uncached_base_delay.assign(n, layout.base_delay);

  double total_rate = 0.0;
  for (int i = 0; i < n; ++i) {
    inst.request_rate[i] = double(user_count[i]) / duration;
    total_rate += inst.request_rate[i];
    if (user_count[i] == 0) continue;  // unknown at fit time: uncached only
    for (auto [j, c] : class_count[i])
      inst.popularity[size_t(i) * k + j] = double(c) / double(user_count[i]);

    Rng pos_rng(fnv1a64((*segment.user_names)[i].data(), (*segment.user_names)[i].size()));
    double x = pos_rng.uniform(0.0, layout.field_side);
    double y = pos_rng.uniform(0.0, layout.field_side);
    for (int m = 0; m < caches; ++m) {
      double dx = x - layout.cache_pos[m][0], dy = y - layout.cache_pos[m][1];
      double dist = std::sqrt(dx * dx + dy * dy);
      if (dist > layout.cache_radius[m]) continue;
      inst.adjacency[size_t(i) * caches + m] = 1;
      double hit = layout.max_hit_delay * dist / layout.cache_radius[m];
      inst.hit_delay[size_t(i) * caches + m] = hit;
      inst.miss_delay[size_t(i) * caches + m] = hit + layout.miss_penalty;
    }
  }

  inst.cache_capacity.assign(caches, cache_budget / caches);
  for (int m = 0; m < cache_budget % caches; ++m) ++inst.cache_capacity[m];

  if (congestion_sensitive) {
    inst.uncached_model = UncachedModel::kCongestionSensitive;
    inst.service_rate = layout.service_ratio * total_rate;
  }
  return inst;
}

TraceSegment generate_trace(const ProblemInstance& inst, long long num_requests, uint64_t seed) {
  const int n = inst.num_users, k = inst.num_files;

  // Cumulative weights: users by emitting rate, files by per-user popularity.
  std::vector<double> user_cdf(n, 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int j = 0; j < k; ++j) mass += inst.q(i, j);
    total += inst.rate(i) * mass;
    user_cdf[i] = total;
  }
  if (total <= 0.0) throw std::invalid_argument("generate_trace: the instance carries no traffic");
  std::vector<double> file_cdf(size_t(n) * k, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
      acc += inst.q(i, j);
      file_cdf[size_t(i) * k + j] = acc;
    }
  }

  Rng rng(splitmix64(seed) + 17);
  TraceSegment trace;
  trace.num_users = n;
  trace.num_files = k;
  auto users = std::make_shared<std::vector<std::string>>();
  auto files = std::make_shared<std::vector<std::string>>();
  for (int i = 0; i < n; ++i) users->push_back("u" + std::to_string(i));
  for (int j = 0; j < k; ++j) files->push_back("f" + std::to_string(j));
  trace.user_names = std::move(users);
  trace.file_names = std::move(files);

  double t = 0.0;
  trace.records.reserve(size_t(num_requests));
  for (long long r = 0; r < num_requests; ++r) {
    t += rng.exponential(total);
    double u = rng.u01() * total;
    int i = int(std::upper_bound(user_cdf.begin(), user_cdf.end(), u) - user_cdf.begin());
    i = std::min(i, n - 1);
    const double* cdf = &file_cdf[size_t(i) * k];
    double row_mass = cdf[k - 1];
    double v = rng.u01() * row_mass;
    int j = int(std::upper_bound(cdf, cdf + k, v) - cdf);
    j = std::min(j, k - 1);
    trace.records.push_back({t, i, j});
  }
  return trace;
}

}  // namespace cachenet
