#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cachenet/evaluate.hpp"
#include "cachenet/greedy.hpp"
#include "cachenet/instance.hpp"
#include "cachenet/routing.hpp"
#include "cachenet/sim.hpp"

namespace cachenet {

using json = nlohmann::json;

// Infinite delays are serialized as the string "inf", never as a float
// special value.
json delay_to_json(double v);
double delay_from_json(const json& j);

json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const json& j);
ProblemInstance load_instance(const std::string& path);

json placement_to_json(const Placement& p);
Placement placement_from_json(const json& j);

json routing_to_json(const RoutingPolicy& r);
RoutingPolicy routing_from_json(const json& j, int num_users, int num_files);

json report_to_json(const EvaluationReport& rep);
json sim_report_to_json(const SimReport& rep);
json greedy_trace_to_json(const GreedyTrace& trace);
json threshold_to_json(const ThresholdSolution& t);

// Accepts the output of `solve`: a static placement/routing pair or a
// baseline probability (key "p_star").
SimPolicy policy_from_json(const json& j, const ProblemInstance& inst);

json load_json(const std::string& path);
void save_text(const std::string& text, const std::string& path);

}  // namespace cachenet
