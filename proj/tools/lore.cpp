// lore: command-line front end for budgeted conflict-descent runs.
//
//   lore gen          generate a graph into the edge-list format
//   lore solve        one trajectory on one graph
//   lore ablate       routing-strategy ablation
//   lore sweep        one-parameter sensitivity sweep with full-support references
//   lore bound-check  paired full/budgeted trajectories, error-bound report

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lore/lore.hpp"

namespace {

using lore::json;

struct Overrides {
  std::optional<double> eta, beta, rho, gamma, lambda_stab;
  std::optional<std::size_t> steps, refresh;
  std::optional<std::string> recall, strategy;
};

void add_run_flags(CLI::App* app, Overrides& o) {
  app->add_option("--eta", o.eta, "step size (default 0.1)");
  app->add_option("--beta", o.beta, "conflict penalty (default 2.0)");
  app->add_option("--steps", o.steps, "horizon T (default 100)");
  app->add_option("--recall", o.recall, "global recall on|off (default off)")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--rho", o.rho, "budget ratio (default 0.08)");
  app->add_option("--gamma", o.gamma, "skeleton ratio (default 0.05)");
  app->add_option("--refresh", o.refresh, "refresh interval R (default 10)");
  app->add_option("--lambda-stab", o.lambda_stab, "stability weight (default 0.5)");
}

void apply(const Overrides& o, lore::DynamicsConfig& d, lore::BudgetConfig& b) {
  if (o.eta) d.eta = *o.eta;
  if (o.beta) d.beta = *o.beta;
  if (o.steps) d.steps = *o.steps;
  if (o.recall) d.recall_enabled = *o.recall == "on";
  if (o.rho) b.rho = *o.rho;
  if (o.gamma) b.gamma = *o.gamma;
  if (o.refresh) b.refresh = *o.refresh;
  if (o.lambda_stab) b.lambda_stab = *o.lambda_stab;
  if (o.strategy && *o.strategy != "full") b.strategy = lore::parse_strategy(*o.strategy);
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw lore::ParameterError("bad grid value '" + item + "'");
    }
  }
  return out;
}

void log_done(const char* what, std::chrono::steady_clock::time_point start, std::size_t records) {
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "[lore] %s: %zu records in %lld ms\n", what, records, static_cast<long long>(ms));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted interaction evaluation for conflict-descent MIS"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random graph");
  std::string family = "er";
  lore::GeneratorSpec gspec;
  gspec.n = 0;
  std::string gen_out;
  gen->add_option("--family", family, "er | ba | ws")->check(CLI::IsMember({"er", "ba", "ws"}));
  gen->add_option("--n", gspec.n, "node count")->required();
  gen->add_option("--p", gspec.p, "ER edge probability (default 0.05)");
  gen->add_option("--m", gspec.m, "BA attachment count (default 3)");
  gen->add_option("--k", gspec.k, "WS ring degree (default 4)");
  gen->add_option("--rewire", gspec.rewire, "WS rewiring probability (default 0.1)");
  gen->add_option("--seed", gspec.seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "edge-list file")->required();

  // Shared by the run subcommands.
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::vector<std::string> graph_files;
  Overrides ov;

  auto* solve = app.add_subcommand("solve", "run one trajectory");
  auto* ablate = app.add_subcommand("ablate", "routing-strategy ablation");
  auto* sweep = app.add_subcommand("sweep", "sensitivity sweep");
  auto* bound = app.add_subcommand("bound-check", "paired-trajectory error-bound report");
  for (auto* sub : {solve, ablate, sweep, bound}) {
    sub->add_option("--config", config_path, "JSON config; CLI flags override it");
    sub->add_option("--seed", seed, "master seed");
    add_run_flags(sub, ov);
  }
  for (auto* sub : {solve, ablate, sweep}) {
    sub->add_option("--out", out_dir, "output directory (trace.jsonl, summary.csv, metadata.json)");
    sub->add_option("--jobs", jobs, "worker threads");
  }
  solve->add_option("--graph", graph_files, "edge-list file")->required()->expected(1);
  ablate->add_option("--graph", graph_files, "edge-list files (default: 20 ER + 20 BA suite)");
  sweep->add_option("--graph", graph_files, "edge-list files (default: 3 ER n=500 p=0.05)");
  bound->add_option("--graph", graph_files, "edge-list file")->required()->expected(1);
  for (auto* sub : {solve, bound}) {
    sub->add_option("--strategy", ov.strategy, "routing strategy (solve also accepts 'full')");
  }
  ablate->add_option("--strategies", ov.strategy, "comma-separated strategies (default: all six)");
  sweep->add_option("--strategy", ov.strategy, "routing strategy (default lore)");

  std::string sweep_param;
  std::string sweep_values;
  sweep->add_option("--param", sweep_param, "lambda_stab | rho | refresh | gamma");
  sweep->add_option("--values", sweep_values, "comma-separated grid values");
  std::string bound_out;
  bound->add_option("-o,--output", bound_out, "write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gspec.family = lore::parse_family(family);
      lore::save_edge_list(gen_out, lore::generate(gspec));
      return 0;
    }

    lore::ExperimentSpec spec;
    if (ablate->parsed()) spec = lore::default_ablation_spec();
    if (sweep->parsed()) {
      lore::GraphGroup er;
      er.gen.family = lore::GraphFamily::ER;
      er.gen.n = 500;
      er.gen.p = 0.05;
      er.count = 3;
      spec.graphs = {er};
      spec.strategies = {lore::Strategy::LoRe};
      spec.sweep = lore::SweepAxis{lore::SweepParam::LambdaStab, {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}};
    }
    std::string out = "lore_out";
    if (!config_path.empty()) {
      const auto cfg = lore::load_json_file(config_path);
      lore::apply_json(cfg, spec);
      if (cfg.contains("out")) out = cfg.at("out").get<std::string>();
    }
    if (out_dir) out = *out_dir;
    if (seed) spec.master_seed = *seed;
    if (jobs) spec.jobs = *jobs;
    if (!graph_files.empty()) {
      spec.graphs.clear();
      for (const auto& f : graph_files) {
        lore::GraphGroup g;
        g.file = f;
        spec.graphs.push_back(g);
      }
    }
    if (ablate->parsed() && ov.strategy) {
      spec.strategies.clear();
      std::stringstream ss(*ov.strategy);
      std::string item;
      while (std::getline(ss, item, ',')) spec.strategies.push_back(lore::parse_strategy(item));
      ov.strategy.reset();
    }
    if (sweep->parsed()) {
      if (!sweep_param.empty()) spec.sweep->param = lore::parse_sweep_param(sweep_param);
      if (!sweep_values.empty()) spec.sweep->values = parse_values(sweep_values);
      if (ov.strategy) spec.strategies = {lore::parse_strategy(*ov.strategy)};
      ov.strategy.reset();
    }
    apply(ov, spec.dynamics, spec.budget);
    const auto start = std::chrono::steady_clock::now();

    if (bound->parsed()) {
      spec.validate();
      const auto g = lore::load_edge_list(graph_files.front());
      const auto rep = lore::paired_trajectory_report(g, spec.dynamics, spec.budget, spec.master_seed);
      json j = lore::to_json(rep);
      j["config"] = {{"dynamics", lore::to_json(spec.dynamics)},
                     {"budget", lore::to_json(spec.budget)},
                     {"seed", spec.master_seed},
                     {"prng", lore::kPrngId}};
      const std::string text = j.dump(2) + "\n";
      if (bound_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(bound_out) << text;
      }
      return rep.violated_steps.empty() ? 0 : 2;
    }

    const auto paths = lore::OutputPaths::in_dir(out);
    lore::prepare_outputs(paths);

    std::vector<lore::RunRecord> records;
    if (solve->parsed()) {
      spec.validate();
      const auto instances = lore::materialize_graphs(spec);
      const auto& inst = instances.front();
      const bool full = ov.strategy && *ov.strategy == "full";
      const auto init = lore::init_state(inst.graph.num_nodes(), inst.init_seed);
      auto rec = lore::run_trajectory(inst.graph, init, spec.dynamics, spec.budget,
                                      lore::routing_seed_for(inst.init_seed, spec.budget.strategy),
                                      full);
      rec.graph_id = inst.id;
      rec.seed = inst.init_seed;
      rec.run_id = rec.graph_id + "/" + rec.strategy;
      records.push_back(std::move(rec));
      std::fprintf(stderr, "[lore] final legal size %zu, conflict energy %.6g\n", records.back().final_size,
                   records.back().final_energy);
    } else if (ablate->parsed()) {
      records = lore::run_ablation(spec);
    } else {
      records = lore::run_sweep(spec);
      const auto summary = lore::summarize_sweep(records);
      for (const auto& cell : summary.grid) {
        std::fprintf(stderr, "[lore] %s=%g mean retention %.2f%%\n", summary.param.c_str(), cell.value,
                     100.0 * cell.mean_retention);
      }
      std::fprintf(stderr, "[lore] retention range %.2f pp\n", summary.range_pp);
    }
    lore::emit_outputs(records, paths, lore::to_json(spec));
    log_done(app.get_subcommands().front()->get_name().c_str(), start, records.size());
    for (const auto& r : records) {
      if (r.failed) std::fprintf(stderr, "[lore] %s failed: %s\n", r.run_id.c_str(), r.error.c_str());
    }
    return 0;
  } catch (const lore::ParseError& ex) {
    std::fprintf(stderr, "lore: parse error: %s\n", ex.what());
  } catch (const lore::ParameterError& ex) {
    std::fprintf(stderr, "lore: invalid parameter: %s\n", ex.what());
  } catch (const lore::IoError& ex) {
    std::fprintf(stderr, "lore: I/O error: %s\n", ex.what());
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "lore: %s\n", ex.what());
  }
  return 1;
}
