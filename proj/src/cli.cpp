#include "cachenet/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>

#include "cachenet/experiment.hpp"
#include "cachenet/json_io.hpp"
#include "cachenet/plru.hpp"
#include "cachenet/sim.hpp"
#include "cachenet/special_case.hpp"

namespace cachenet {

namespace {

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty())
    std::cout << text << std::endl;
  else
    save_text(text + "\n", output_path);
}

struct GenFlags {
  std::string layout = "single";
  GenParams params;
  std::string model = "cs";
  double service_ratio = 0.8;

  void attach(CLI::App* cmd) {
    cmd->add_option("--layout", layout, "Cache layout: single or multi")
        ->check(CLI::IsMember({"single", "multi"}));
    cmd->add_option("--users", params.num_users, "Number of users");
    cmd->add_option("--files", params.num_files, "Catalog size");
    cmd->add_option("--zipf", params.zipf_skew, "Zipf skewness of the aggregate popularity");
    cmd->add_option("--rate", params.total_rate, "Aggregate request rate");
    cmd->add_option("--budget", params.cache_budget, "Total cache budget in files");
    cmd->add_option("--service-ratio", service_ratio, "Back-end rate as a multiple of the aggregate rate");
    cmd->add_option("--model", model, "Uncached-path model: ci or cs")
        ->check(CLI::IsMember({"ci", "cs"}));
    cmd->add_flag("--heterogeneous", params.heterogeneous, "Permute the file ranking per user");
    cmd->add_flag("--require-coverage", params.require_coverage,
                  "Resample users that land outside every cache");
  }

  ProblemInstance build(uint64_t seed) {
    params.layout = layout == "multi" ? multi_cache_layout(service_ratio)
                                      : single_cache_layout(service_ratio);
    params.congestion_sensitive = model == "cs";
    return gen_instance(params, seed);
  }
};

int exit_code_for(const EvaluationReport& rep) {
  return (!rep.stable || std::isinf(rep.average_delay)) ? 2 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Joint content placement and request routing for hybrid cache networks"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  std::string output;
  app.add_option("--seed", seed, "Master seed for anything randomized")->capture_default_str();
  app.add_option("-o,--output", output, "Write the result to a file instead of stdout");
  long long max_enum = 10'000'000;
  app.add_option("--max-enum", max_enum, "Placement cap for exhaustive search");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  GenFlags gen_flags;
  gen_flags.attach(gen);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve placement and routing on an instance");
  std::string solve_instance, algorithm;
  bool explain = false;
  solve->add_option("--instance", solve_instance, "Instance JSON")->required();
  solve->add_option("--algorithm", algorithm, "One of bruteforce, greedywg, greedy, matching, twocache-lp, plru")
      ->required();
  solve->add_flag("--explain", explain, "Include the greedy step trace");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Discrete-event simulation of a policy");
  std::string sim_instance, policy_file, trace_file, accounting = "uncached-only";
  double plru_p = -1.0, warmup = 0.1, max_time = -1.0;
  long long requests = 0;
  bool per_file_stats = false;
  sim_cmd->add_option("--instance", sim_instance, "Instance JSON")->required();
  sim_cmd->add_option("--policy-file", policy_file, "Output of `solve` to replay");
  sim_cmd->add_option("--plru", plru_p, "Simulate the LRU baseline at this routing probability");
  sim_cmd->add_option("--trace", trace_file, "Replay a trace CSV instead of Poisson arrivals");
  sim_cmd->add_option("--requests", requests, "Request horizon");
  sim_cmd->add_option("--max-time", max_time, "Simulated-time horizon");
  sim_cmd->add_option("--warmup", warmup, "Warmup fraction excluded from statistics");
  sim_cmd->add_option("--accounting", accounting, "uncached-only or include-miss-fetch")
      ->check(CLI::IsMember({"uncached-only", "include-miss-fetch"}));
  sim_cmd->add_flag("--per-file-stats", per_file_stats, "Collect per-file hit rates");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Sweep algorithms and emit a CSV");
  GenFlags exp_flags;
  exp_flags.attach(exp);
  std::string sweep = "cache_budget", algorithms_arg, exp_trace, exp_instance;
  std::string values_arg;
  int replications = 10;
  long long segment_size = 120000;
  exp->add_option("--sweep", sweep, "cache_budget or service_rate")
      ->check(CLI::IsMember({"cache_budget", "service_rate"}));
  exp->add_option("--values", values_arg, "Comma-separated sweep values")->required();
  exp->add_option("--algorithms", algorithms_arg, "Comma-separated algorithm list")->required();
  exp->add_option("--replications", replications, "Instances per sweep point");
  exp->add_option("--trace", exp_trace, "Trace CSV: learn on segment 1, simulate segment 2");
  exp->add_option("--segment-size", segment_size, "Trace segment length");

  // check
  auto* check = app.add_subcommand("check", "Structural analyses of an instance");
  std::string check_instance;
  bool do_tu = false, do_cycles = false, do_gap = false;
  check->add_option("--instance", check_instance, "Instance JSON")->required();
  check->add_flag("--tu", do_tu, "Total unimodularity of the constraint matrix");
  check->add_flag("--cycles", do_cycles, "Report user-cache cycles of length 4k+2");
  check->add_flag("--gap", do_gap, "Exhaustive optimum vs LP relaxation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      emit(instance_to_json(gen_flags.build(seed)).dump(2), output);
      return 0;
    }

    if (solve->parsed()) {
      ProblemInstance inst = load_instance(solve_instance);
      BruteForceOptions bf;
      bf.max_enumerations = max_enum;
      AlgorithmOutput result = run_algorithm(inst, algorithm, bf);
      json j;
      j["algorithm"] = result.algorithm;
      j["average_delay"] = delay_to_json(result.report.average_delay);
      j["report"] = report_to_json(result.report);
      if (result.plru_p >= 0.0) {
        j["p_star"] = result.plru_p;
      } else {
        j["placement"] = placement_to_json(result.placement);
        j["routing"] = routing_to_json(result.routing);
      }
      if (result.has_threshold) j["threshold"] = threshold_to_json(result.threshold);
      if (explain && !result.trace.steps.empty()) j["trace"] = greedy_trace_to_json(result.trace);
      emit(j.dump(2), output);
      return exit_code_for(result.report);
    }

    if (sim_cmd->parsed()) {
      ProblemInstance inst = load_instance(sim_instance);
      SimConfig config;
      config.seed = seed;
      config.warmup_fraction = warmup;
      config.max_requests = requests;
      if (max_time > 0.0) config.max_time = max_time;
      config.queue_accounting = accounting == "include-miss-fetch"
                                    ? QueueAccounting::kIncludeMissFetch
                                    : QueueAccounting::kUncachedOnly;
      config.collect_per_file_stats = per_file_stats;
      if (!policy_file.empty())
        config.policy = policy_from_json(load_json(policy_file), inst);
      else if (plru_p >= 0.0)
        config.policy = PLruPolicy{plru_p};
      else
        throw std::runtime_error("simulate: need --policy-file or --plru");
      SimReport rep;
      if (!trace_file.empty()) {
        TraceSegment trace = load_trace(trace_file);
        rep = simulate(inst, trace, config);
      } else {
        rep = simulate(inst, config);
      }
      emit(sim_report_to_json(rep).dump(2), output);
      return rep.unstable_detected ? 2 : 0;
    }

    if (exp->parsed()) {
      std::vector<std::string> algorithms;
      for (auto part : CLI::detail::split(algorithms_arg, ','))
        if (!part.empty()) algorithms.push_back(part);
      std::vector<double> values;
      for (auto part : CLI::detail::split(values_arg, ','))
        if (!part.empty()) values.push_back(std::stod(part));

      std::vector<ExperimentRow> rows;
      if (!exp_trace.empty()) {
        TraceSegment full = load_trace(exp_trace);
        auto segments = split_segments(full, segment_size);
        if (segments.size() < 2)
          throw std::runtime_error("experiment: the trace must contain at least two segments");
        TraceExperiment cfg;
        cfg.layout = exp_flags.layout == "multi"
                         ? multi_cache_layout(exp_flags.service_ratio)
                         : single_cache_layout(exp_flags.service_ratio);
        for (double v : values) cfg.budgets.push_back(int(std::lround(v)));
        cfg.algorithms = algorithms;
        cfg.sim_seed = seed;
        rows = run_trace_experiment(segments[0], segments[1], cfg);
      } else {
        GeneratedExperiment cfg;
        exp_flags.params.layout = exp_flags.layout == "multi"
                                      ? multi_cache_layout(exp_flags.service_ratio)
                                      : single_cache_layout(exp_flags.service_ratio);
        exp_flags.params.congestion_sensitive = exp_flags.model == "cs";
        cfg.base = exp_flags.params;
        cfg.sweep = sweep == "service_rate" ? SweepKind::kServiceRate : SweepKind::kCacheBudget;
        cfg.values = values;
        cfg.algorithms = algorithms;
        cfg.replications = replications;
        cfg.seed = seed;
        cfg.bf_opts.max_enumerations = max_enum;
        rows = run_experiment(cfg);
      }
      std::string csv = rows_to_csv(rows);
      if (output.empty())
        std::cout << csv;
      else
        save_text(csv, output);
      return 0;
    }

    if (check->parsed()) {
      ProblemInstance inst = load_instance(check_instance);
      bool all = !do_tu && !do_cycles && !do_gap;
      json j;
      if (do_tu || all) {
        TuResult tu = tu_check(build_constraint_matrix(inst));
        j["tu"] = tu.totally_unimodular;
        if (!tu.totally_unimodular) j["witness"] = tu.witness_rows;
      }
      if (do_cycles || all) {
        json cycles = json::array();
        for (const BadCycle& c : find_bad_cycles(inst))
          cycles.push_back({{"users", c.users}, {"caches", c.caches}});
        j["bad_cycles"] = std::move(cycles);
      }
      if (do_gap || all) {
        BruteForceOptions bf;
        bf.max_enumerations = max_enum;
        RelaxationGap gap = relaxation_gap(inst, bf);
        j["ilp"] = delay_to_json(gap.ilp_value);
        j["lp"] = delay_to_json(gap.lp_value);
        j["gap"] = delay_to_json(gap.gap);
      }
      emit(j.dump(2), output);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}

}  // namespace cachenet
