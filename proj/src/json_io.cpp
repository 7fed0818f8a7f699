#include "cachenet/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cachenet {

json delay_to_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

double delay_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfiniteDelay;
    throw std::runtime_error("expected a number or \"inf\"");
  }
  return j.get<double>();
}

namespace {

template <typename T>
json matrix_to_json(const std::vector<T>& flat, int rows, int cols) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[size_t(r) * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

template <typename T>
std::vector<T> matrix_from_json(const json& j, int rows, int cols, const char* field) {
  if (!j.is_array() || int(j.size()) != rows)
    throw std::runtime_error(std::string(field) + ": expected " + std::to_string(rows) + " rows");
  std::vector<T> flat(size_t(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || int(row.size()) != cols)
      throw std::runtime_error(std::string(field) + ": row " + std::to_string(r) + " needs " +
                               std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) flat[size_t(r) * cols + c] = row[c].get<T>();
  }
  return flat;
}

}  // namespace

json instance_to_json(const ProblemInstance& inst) {
  json j;
  j["num_users"] = inst.num_users;
  j["num_files"] = inst.num_files;
  j["num_caches"] = inst.num_caches;
  j["request_rate"] = inst.request_rate;
  j["popularity"] = matrix_to_json(inst.popularity, inst.num_users, inst.num_files);
  j["adjacency"] = matrix_to_json(inst.adjacency, inst.num_users, inst.num_caches);
  j["hit_delay"] = matrix_to_json(inst.hit_delay, inst.num_users, inst.num_caches);
  j["miss_delay"] = matrix_to_json(inst.miss_delay, inst.num_users, inst.num_caches);
  j["uncached_base_delay"] = inst.uncached_base_delay;
  j["cache_capacity"] = inst.cache_capacity;
  json model;
  if (inst.congestion_sensitive()) {
    model["type"] = "congestion_sensitive";
    model["service_rate"] = inst.service_rate;
  } else {
    model["type"] = "congestion_insensitive";
  }
  j["uncached_model"] = std::move(model);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  try {
    inst.num_users = j.at("num_users").get<int>();
    inst.num_files = j.at("num_files").get<int>();
    inst.num_caches = j.at("num_caches").get<int>();
    inst.request_rate = j.at("request_rate").get<std::vector<double>>();
    inst.popularity = matrix_from_json<double>(j.at("popularity"), inst.num_users,
                                               inst.num_files, "popularity");
    inst.adjacency = matrix_from_json<uint8_t>(j.at("adjacency"), inst.num_users,
                                               inst.num_caches, "adjacency");
    inst.hit_delay = matrix_from_json<double>(j.at("hit_delay"), inst.num_users,
                                              inst.num_caches, "hit_delay");
    inst.miss_delay = matrix_from_json<double>(j.at("miss_delay"), inst.num_users,
                                               inst.num_caches, "miss_delay");
    inst.uncached_base_delay = j.at("uncached_base_delay").get<std::vector<double>>();
    inst.cache_capacity = j.at("cache_capacity").get<std::vector<int>>();
    const json& model = j.at("uncached_model");
    std::string type = model.at("type").get<std::string>();
    if (type == "congestion_sensitive") {
      inst.uncached_model = UncachedModel::kCongestionSensitive;
      inst.service_rate = model.at("service_rate").get<double>();
    } else if (type == "congestion_insensitive") {
      inst.uncached_model = UncachedModel::kCongestionInsensitive;
    } else {
      throw std::runtime_error("uncached_model.type: unknown value '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance schema violation: ") + e.what());
  }
  if (inst.request_rate.size() != size_t(inst.num_users) ||
      inst.uncached_base_delay.size() != size_t(inst.num_users) ||
      inst.cache_capacity.size() != size_t(inst.num_caches))
    throw std::runtime_error("instance schema violation: vector lengths do not match counts");
  return inst;
}

ProblemInstance load_instance(const std::string& path) {
  return instance_from_json(load_json(path));
}

json placement_to_json(const Placement& p) {
  json out = json::array();
  for (const auto& files : p.stored) out.push_back(files);
  return out;
}

Placement placement_from_json(const json& j) {
  Placement p(int(j.size()));
  for (size_t m = 0; m < j.size(); ++m)
    for (const json& f : j[m]) p.stored[m].insert(f.get<int>());
  return p;
}

json routing_to_json(const RoutingPolicy& r) {
  json out = json::array();
  for (int i = 0; i < r.num_users; ++i)
    for (int j = 0; j < r.num_files; ++j)
      for (const auto& [m, f] : r.at(i, j)) {
        if (f <= 0.0) continue;
        out.push_back({{"user", i}, {"file", j}, {"cache", m}, {"fraction", f}});
      }
  return out;
}

RoutingPolicy routing_from_json(const json& j, int num_users, int num_files) {
  RoutingPolicy r(num_users, num_files);
  for (const json& e : j)
    r.set(e.at("user").get<int>(), e.at("file").get<int>(), e.at("cache").get<int>(),
          e.at("fraction").get<double>());
  return r;
}

json report_to_json(const EvaluationReport& rep) {
  json j;
  j["average_delay"] = delay_to_json(rep.average_delay);
  j["queue_load"] = rep.queue_load;
  j["cached_fraction"] = rep.cached_fraction;
  j["stable"] = rep.stable;
  json per_user = json::array();
  for (double d : rep.per_user_delay) per_user.push_back(delay_to_json(d));
  j["per_user_delay"] = std::move(per_user);
  return j;
}

json sim_report_to_json(const SimReport& rep) {
  json j;
  j["mean_delay"] = delay_to_json(rep.mean_delay);
  j["ci_half_width"] = rep.ci_half_width;
  j["cache_hit_rate"] = rep.cache_hit_rate;
  j["queue_delay_mean"] = rep.queue_delay_mean;
  j["requests"] = rep.requests;
  j["unstable_detected"] = rep.unstable_detected;
  if (!rep.per_file_hit_rate.empty()) j["per_file_hit_rate"] = rep.per_file_hit_rate;
  return j;
}

json greedy_trace_to_json(const GreedyTrace& trace) {
  json out = json::array();
  for (const GreedyStep& s : trace.steps)
    out.push_back({{"step", s.step},
                   {"file", s.file},
                   {"cache", s.cache},
                   {"marginal_value", delay_to_json(s.marginal_value)}});
  return out;
}

json threshold_to_json(const ThresholdSolution& t) {
  json j;
  j["marginal_queue_cost"] = delay_to_json(t.marginal_queue_cost);
  j["queue_load"] = t.queue_load;
  json splits = json::array();
  for (auto [i, f] : t.split_classes) splits.push_back({{"user", i}, {"file", f}});
  j["split_classes"] = std::move(splits);
  return j;
}

SimPolicy policy_from_json(const json& j, const ProblemInstance& inst) {
  if (j.contains("p_star")) return PLruPolicy{j.at("p_star").get<double>()};
  if (!j.contains("placement") || !j.contains("routing"))
    throw std::runtime_error("policy file: expected placement+routing or p_star");
  StaticPolicy policy;
  policy.placement = placement_from_json(j.at("placement"));
  if (int(policy.placement.stored.size()) != inst.num_caches)
    throw std::runtime_error("policy file: placement cache count does not match instance");
  policy.routing = routing_from_json(j.at("routing"), inst.num_users, inst.num_files);
  return policy;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace cachenet
