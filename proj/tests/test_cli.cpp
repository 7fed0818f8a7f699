#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cachenet/cli.hpp"
#include "cachenet/json_io.hpp"
#include "test_util.hpp"

using namespace cachenet;
using namespace cachenet::testutil;

namespace {

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"cachenet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gen, solve and simulate round-trip through files") {
  std::string instance = temp_path("cli_instance.json");
  std::string policy = temp_path("cli_policy.json");
  std::string simout = temp_path("cli_sim.json");

  CHECK(cli({"--seed", "3", "-o", instance, "gen", "--layout", "single", "--users", "6",
             "--files", "12", "--budget", "4", "--zipf", "0.6", "--service-ratio", "1.2",
             "--require-coverage"}) == 0);
  CHECK(cli({"-o", policy, "solve", "--instance", instance, "--algorithm", "greedywg",
             "--explain"}) == 0);

  json solved = load_json(policy);
  CHECK(solved.at("algorithm") == "greedywg");
  CHECK(solved.contains("placement"));
  CHECK(solved.contains("routing"));
  CHECK(solved.contains("threshold"));
  CHECK(solved.contains("trace"));

  CHECK(cli({"--seed", "5", "-o", simout, "simulate", "--instance", instance, "--policy-file",
             policy, "--requests", "200000"}) == 0);
  json sim = load_json(simout);
  double simulated = sim.at("mean_delay").get<double>();
  double analytic = delay_from_json(solved.at("average_delay"));
  CHECK(std::abs(simulated - analytic) <=
        3.0 * std::max(sim.at("ci_half_width").get<double>(), 1e-3));

  for (const auto& p : {instance, policy, simout}) std::remove(p.c_str());
}

TEST_CASE("solve plru emits p_star and simulate accepts it") {
  std::string instance = temp_path("cli_plru_instance.json");
  std::string policy = temp_path("cli_plru_policy.json");
  CHECK(cli({"--seed", "4", "-o", instance, "gen", "--layout", "multi", "--users", "20",
             "--files", "30", "--budget", "10", "--zipf", "0.8"}) == 0);
  CHECK(cli({"-o", policy, "solve", "--instance", instance, "--algorithm", "plru"}) == 0);
  json solved = load_json(policy);
  double p = solved.at("p_star").get<double>();
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(cli({"simulate", "--instance", instance, "--policy-file", policy, "--requests",
             "20000"}) == 0);
  std::remove(instance.c_str());
  std::remove(policy.c_str());
}

TEST_CASE("check reports tu, cycles and the relaxation gap") {
  std::string instance = temp_path("cli_cycle_instance.json");
  save_text(instance_to_json(three_user_cycle_instance()).dump(2), instance);
  std::string out = temp_path("cli_check.json");
  CHECK(cli({"-o", out, "check", "--instance", instance}) == 0);
  json j = load_json(out);
  CHECK(j.at("tu") == false);
  CHECK(!j.at("witness").empty());
  CHECK(j.at("bad_cycles").size() == 1);
  CHECK(delay_from_json(j.at("ilp")) == doctest::Approx(4.0 / 3.0));
  CHECK(delay_from_json(j.at("lp")) == doctest::Approx(1.0));
  CHECK(delay_from_json(j.at("gap")) == doctest::Approx(1.0 / 3.0));
  std::remove(instance.c_str());
  std::remove(out.c_str());
}

TEST_CASE("experiment sweeps emit plot-ready CSV") {
  std::string out = temp_path("cli_experiment.csv");
  CHECK(cli({"--seed", "8", "-o", out, "experiment", "--layout", "multi", "--users", "15",
             "--files", "20", "--zipf", "0.7", "--sweep", "cache_budget", "--values",
             "5,10", "--algorithms", "greedy,plru", "--replications", "3"}) == 0);
  std::ifstream in(out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "sweep_value,algorithm,mean_delay,ci_half_width");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);  // 2 values x 2 algorithms
  std::remove(out.c_str());
}

TEST_CASE("input errors exit with code 1") {
  CHECK(cli({"solve", "--instance", "/nonexistent.json", "--algorithm", "greedy"}) == 1);
  CHECK(cli({"solve", "--algorithm", "greedy"}) == 1);  // missing required flag
  std::string instance = temp_path("cli_err_instance.json");
  CHECK(cli({"-o", instance, "gen", "--users", "2", "--files", "3", "--budget", "1"}) == 0);
  CHECK(cli({"solve", "--instance", instance, "--algorithm", "no-such-solver"}) == 1);
  CHECK(cli({"simulate", "--instance", instance, "--requests", "10"}) == 1);  // no policy
  std::remove(instance.c_str());
}

TEST_CASE("unstable results exit with code 2") {
  // congestion-sensitive instance whose only user cannot reach any cache and
  // overloads the back-end
  ProblemInstance inst = make_instance(1, 2, 1);
  inst.adjacency = {0};
  set_cs(inst, 0.5);
  std::string instance = temp_path("cli_unstable.json");
  save_text(instance_to_json(inst).dump(2), instance);
  std::string out = temp_path("cli_unstable_out.json");
  CHECK(cli({"-o", out, "solve", "--instance", instance, "--algorithm", "greedy"}) == 2);
  json j = load_json(out);
  CHECK(j.at("average_delay") == "inf");
  CHECK(j.at("report").at("stable") == false);
  std::remove(instance.c_str());
  std::remove(out.c_str());
}
