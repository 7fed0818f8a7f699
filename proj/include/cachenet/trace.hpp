#pragma once

#include <memory>
#include <string>

#include "cachenet/instance.hpp"
#include "cachenet/workload.hpp"

namespace cachenet {

struct TraceRecord {
  double timestamp = 0.0;
  int user = 0;
  int file = 0;
};

// A run of timestamped requests over a dense id space shared by all segments
// of the same trace; the name tables map dense ids back to the original
// string ids.
struct TraceSegment {
  std::vector<TraceRecord> records;
  int num_users = 0;
  int num_files = 0;
  std::shared_ptr<const std::vector<std::string>> user_names;
  std::shared_ptr<const std::vector<std::string>> file_names;
};

// Reads a CSV with header "timestamp,user,file"; user/file ids may be
// arbitrary strings and are densely re-indexed in first-appearance order.
// Malformed rows and decreasing timestamps are reported with line numbers.
TraceSegment load_trace(const std::string& path);

// Consecutive chunks of segment_size requests (the final chunk may be
// shorter). A trace shorter than segment_size yields a single segment.
std::vector<TraceSegment> split_segments(const TraceSegment& trace,
                                         long long segment_size = 120000);

// Fits a problem instance to a learning segment: empirical per-user rates
// (count over segment duration) and popularities (count shares), positions
// deterministic from a hash of the user id, delays per the layout, capacity
// split across the layout's caches. Users absent from the segment get zero
// rate and an empty adjacency row, so their traffic goes uncached at test
// time.
ProblemInstance fit_instance(const TraceSegment& segment, const GeometricLayout& layout,
                             int cache_budget, bool congestion_sensitive = true);

// Synthetic trace sampled from an instance's rates and popularities
// (Poisson arrivals). Deterministic per seed.
TraceSegment generate_trace(const ProblemInstance& inst, long long num_requests, uint64_t seed);

}  // namespace cachenet
