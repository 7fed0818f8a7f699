#include "cachenet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cachenet/matching.hpp"
#include "cachenet/plru.hpp"
#include "cachenet/sim.hpp"
#include "cachenet/special_case.hpp"

namespace cachenet {

namespace {

// Two-sided 95% Student-t quantiles by degrees of freedom (1-based).
constexpr double kT975[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                            2.306, 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                            2.120, 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                            2.064, 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};

double t975(int df) {
  if (df < 1) return 0.0;
  if (df <= 30) return kT975[df];
  return 1.96;
}

AlgorithmOutput from_solve(const std::string& name, SolveResult&& solved) {
  AlgorithmOutput out;
  out.algorithm = name;
  out.placement = std::move(solved.placement);
  out.routing = std::move(solved.routing);
  out.report = std::move(solved.report);
  return out;
}

AlgorithmOutput from_greedy(const std::string& name, GreedyResult&& g) {
  AlgorithmOutput out;
  out.algorithm = name;
  out.placement = std::move(g.placement);
  out.routing = std::move(g.routing);
  out.report = std::move(g.report);
  out.trace = std::move(g.trace);
  return out;
}

}  // namespace

AlgorithmOutput run_algorithm(const ProblemInstance& inst, const std::string& name,
                              const BruteForceOptions& bf_opts) {
  AlgorithmOutput out;
  if (name == "bruteforce") {
    out = from_solve(name, brute_force_placement(inst, bf_opts));
  } else if (name == "greedywg") {
    out = from_greedy(name, greedy_wg(inst));
  } else if (name == "greedy") {
    out = from_greedy(name, greedy_fast(inst));
  } else if (name == "matching") {
    out = from_solve(name, solve_one_file_per_user(inst));
  } else if (name == "twocache-lp") {
    out = from_solve(name, solve_two_cache_lp(inst));
  } else if (name == "plru") {
    if (!inst.congestion_sensitive())
      throw std::invalid_argument("plru requires the congestion-sensitive model");
    PLruModel model = build_plru(inst);
    out.algorithm = name;
    out.plru_p = model.p_star;
    out.placement = Placement(inst.num_caches);
    out.routing = RoutingPolicy(inst.num_users, inst.num_files);
    out.report.average_delay = plru_delay(inst, model, model.p_star);
    out.report.queue_load = (1.0 - model.p_star) * model.lambda_connected +
                            model.lambda_disconnected;
    out.report.stable = out.report.queue_load < inst.service_rate;
    double lambda = inst.total_rate();
    out.report.cached_fraction =
        lambda > 0.0 ? model.p_star * model.lambda_connected / lambda : 0.0;
    return out;
  } else {
    throw std::invalid_argument("unknown algorithm '" + name + "'");
  }
  if (inst.congestion_sensitive() && (name == "bruteforce" || name == "greedywg" || name == "greedy")) {
    auto cs = optimal_routing_cs(inst, out.placement);
    out.threshold = std::move(cs.threshold);
    out.has_threshold = true;
  }
  return out;
}

std::vector<ExperimentRow> run_experiment(const GeneratedExperiment& cfg) {
  if (cfg.values.empty()) throw std::invalid_argument("experiment: empty sweep range");
  if (cfg.algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
  if (cfg.replications < 1) throw std::invalid_argument("experiment: need replications");

  struct Cell {
    std::vector<double> delays;
  };
  const size_t num_cells = cfg.values.size() * cfg.algorithms.size();
  std::vector<Cell> cells(num_cells);
  for (Cell& c : cells) c.delays.assign(cfg.replications, 0.0);

  const int64_t jobs = int64_t(num_cells) * cfg.replications;
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (int64_t job = 0; job < jobs; ++job) {
    const size_t cell = size_t(job / cfg.replications);
    const int rep = int(job % cfg.replications);
    const size_t vi = cell / cfg.algorithms.size();
    const size_t ai = cell % cfg.algorithms.size();

    GenParams params = cfg.base;
    double value = cfg.values[vi];
    if (cfg.sweep == SweepKind::kCacheBudget) params.cache_budget = int(std::lround(value));
    ProblemInstance inst = gen_instance(params, cfg.seed + uint64_t(rep));
    if (cfg.sweep == SweepKind::kServiceRate) inst.service_rate = value;
    cells[cell].delays[rep] =
        run_algorithm(inst, cfg.algorithms[ai], cfg.bf_opts).report.average_delay;
  }

  std::vector<ExperimentRow> rows;
  for (size_t vi = 0; vi < cfg.values.size(); ++vi) {
    for (size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
      const Cell& c = cells[vi * cfg.algorithms.size() + ai];
      double mean = 0.0;
      for (double d : c.delays) mean += d;
      mean /= double(c.delays.size());
      double half = 0.0;
      if (c.delays.size() > 1 && std::isfinite(mean)) {
        double var = 0.0;
        for (double d : c.delays) var += (d - mean) * (d - mean);
        var /= double(c.delays.size() - 1);
        half = t975(int(c.delays.size()) - 1) * std::sqrt(var / double(c.delays.size()));
      }
      rows.push_back({cfg.values[vi], cfg.algorithms[ai], mean, half});
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_trace_experiment(const TraceSegment& learn,
                                                const TraceSegment& test,
                                                const TraceExperiment& cfg) {
  std::vector<ExperimentRow> rows;
  for (int budget : cfg.budgets) {
    ProblemInstance inst = fit_instance(learn, cfg.layout, budget);
    for (const std::string& name : cfg.algorithms) {
      SimConfig sim;
      sim.seed = cfg.sim_seed;
      sim.warmup_fraction = cfg.warmup_fraction;
      if (name == "plru") {
        PLruModel model = build_plru(inst);
        sim.policy = PLruPolicy{model.p_star};
      } else if (name == "greedy" || name == "greedywg") {
        AlgorithmOutput out = run_algorithm(inst, name);
        sim.policy = StaticPolicy{std::move(out.placement), std::move(out.routing)};
      } else {
        throw std::invalid_argument("trace experiment: unsupported algorithm '" + name + "'");
      }
      SimReport rep = simulate(inst, test, sim);
      rows.push_back({double(budget), name, rep.mean_delay, rep.ci_half_width});
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "sweep_value,algorithm,mean_delay,ci_half_width\n";
  out.precision(12);
  for (const ExperimentRow& r : rows) {
    out << r.sweep_value << ',' << r.algorithm << ',';
    if (std::isinf(r.mean_delay))
      out << "inf";
    else
      out << r.mean_delay;
    out << ',' << r.ci_half_width << '\n';
  }
  return out.str();
}

}  // namespace cachenet
