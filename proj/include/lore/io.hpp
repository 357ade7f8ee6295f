#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lore/error_bound.hpp"
#include "lore/errors.hpp"
#include "lore/harness.hpp"

namespace lore {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Experiment config (JSON). Keys mirror the CLI flags.
// ---------------------------------------------------------------------------

[[nodiscard]] inline json to_json(const DynamicsConfig& d) {
  return {{"eta", d.eta}, {"beta", d.beta}, {"steps", d.steps}, {"recall", d.recall_enabled}};
}

[[nodiscard]] inline json to_json(const BudgetConfig& b) {
  return {{"strategy", to_string(b.strategy)},
          {"rho", b.rho},
          {"gamma", b.gamma},
          {"refresh", b.refresh},
          {"lambda_stab", b.lambda_stab}};
}

[[nodiscard]] inline json to_json(const GraphGroup& g) {
  if (g.file) return {{"file", g.file->string()}};
  json j = {{"family", to_string(g.gen.family)}, {"n", g.gen.n}, {"count", g.count}};
  switch (g.gen.family) {
    case GraphFamily::ER: j["p"] = g.gen.p; break;
    case GraphFamily::BA: j["m"] = g.gen.m; break;
    case GraphFamily::WS:
      j["k"] = g.gen.k;
      j["rewire"] = g.gen.rewire;
      break;
  }
  return j;
}

[[nodiscard]] inline json to_json(const ExperimentSpec& s) {
  json j;
  j["seed"] = s.master_seed;
  j["graphs"] = json::array();
  for (const auto& g : s.graphs) j["graphs"].push_back(to_json(g));
  j["dynamics"] = to_json(s.dynamics);
  j["budget"] = to_json(s.budget);
  j["strategies"] = json::array();
  for (Strategy st : s.strategies) j["strategies"].push_back(to_string(st));
  if (s.sweep) j["sweep"] = {{"param", to_string(s.sweep->param)}, {"values", s.sweep->values}};
  return j;
}

namespace detail {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline void apply_json(const json& j, DynamicsConfig& d) {
  detail::read_if(j, "eta", d.eta);
  detail::read_if(j, "beta", d.beta);
  detail::read_if(j, "steps", d.steps);
  if (j.contains("recall")) {
    const auto& r = j.at("recall");
    d.recall_enabled = r.is_string() ? r.get<std::string>() == "on" : r.get<bool>();
  }
}

inline void apply_json(const json& j, BudgetConfig& b) {
  if (j.contains("strategy")) b.strategy = parse_strategy(j.at("strategy").get<std::string>());
  detail::read_if(j, "rho", b.rho);
  detail::read_if(j, "gamma", b.gamma);
  detail::read_if(j, "refresh", b.refresh);
  detail::read_if(j, "lambda_stab", b.lambda_stab);
}

[[nodiscard]] inline GraphGroup graph_group_from_json(const json& j) {
  GraphGroup g;
  if (j.contains("file")) {
    g.file = j.at("file").get<std::string>();
    return g;
  }
  g.gen.family = parse_family(j.at("family").get<std::string>());
  g.gen.n = j.at("n").get<std::size_t>();
  detail::read_if(j, "count", g.count);
  detail::read_if(j, "p", g.gen.p);
  detail::read_if(j, "m", g.gen.m);
  detail::read_if(j, "k", g.gen.k);
  detail::read_if(j, "rewire", g.gen.rewire);
  return g;
}

/// Overlays a JSON config onto `spec`. Absent keys keep their value.
inline void apply_json(const json& j, ExperimentSpec& spec) {
  try {
    detail::read_if(j, "seed", spec.master_seed);
    detail::read_if(j, "jobs", spec.jobs);
    if (j.contains("graphs")) {
      spec.graphs.clear();
      for (const auto& g : j.at("graphs")) spec.graphs.push_back(graph_group_from_json(g));
    }
    if (j.contains("dynamics")) apply_json(j.at("dynamics"), spec.dynamics);
    if (j.contains("budget")) apply_json(j.at("budget"), spec.budget);
    if (j.contains("strategies")) {
      spec.strategies.clear();
      for (const auto& s : j.at("strategies")) spec.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (j.contains("sweep")) {
      SweepAxis axis;
      axis.param = parse_sweep_param(j.at("sweep").at("param").get<std::string>());
      axis.values = j.at("sweep").at("values").get<std::vector<double>>();
      spec.sweep = axis;
    }
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("config: ") + ex.what());
  }
}

[[nodiscard]] inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ParameterError("config '" + path.string() + "': " + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Outputs: JSONL traces, CSV summary, JSON metadata.
// ---------------------------------------------------------------------------

struct OutputPaths {
  std::filesystem::path trace;
  std::filesystem::path summary;
  std::filesystem::path metadata;

  static OutputPaths in_dir(const std::filesystem::path& dir) {
    return {dir / "trace.jsonl", dir / "summary.csv", dir / "metadata.json"};
  }
};

/// Creates the output directory and checks every target is writable, so a
/// bad path fails before any run starts.
inline void prepare_outputs(const OutputPaths& paths) {
  for (const auto* p : {&paths.trace, &paths.summary, &paths.metadata}) {
    std::error_code ec;
    if (p->has_parent_path()) std::filesystem::create_directories(p->parent_path(), ec);
    std::ofstream probe(*p, std::ios::app);
    if (!probe) throw IoError("cannot write '" + p->string() + "'");
  }
}

namespace detail {

[[nodiscard]] inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[nodiscard]] inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace detail

[[nodiscard]] inline json trace_row(const RunRecord& r, const StepRecord& s) {
  json j = {{"run_id", r.run_id},   {"t", s.t},           {"energy", s.energy},
            {"objective", s.objective}, {"legal_size", s.legal_size}, {"m_size", s.m_size}};
  if (s.overlap) j["overlap"] = *s.overlap;
  j["msg_evals"] = s.msg_evals;
  return j;
}

inline constexpr std::string_view kSummaryHeader =
    "run_id,graph_id,strategy,grid_param,grid_value,seed,n,m,budget,final_size,final_energy,msg_evals,node_evals,"
    "recall_evals,score_evals,skeleton_evals,refreshes,retention,init_hash,config_hash,status";

[[nodiscard]] inline std::string summary_row(const RunRecord& r) {
  std::string row;
  auto add = [&row](const std::string& f) {
    if (!row.empty()) row += ',';
    row += f;
  };
  row = detail::csv_field(r.run_id);
  add(detail::csv_field(r.graph_id));
  add(r.strategy);
  add(r.grid_param.value_or(""));
  add(r.grid_value ? detail::csv_double(*r.grid_value) : "");
  add(std::to_string(r.seed));
  add(std::to_string(r.num_nodes));
  add(std::to_string(r.num_edges));
  add(std::to_string(r.budget));
  add(std::to_string(r.final_size));
  add(detail::csv_double(r.final_energy));
  add(std::to_string(r.evals.messages));
  add(std::to_string(r.evals.node_terms));
  add(std::to_string(r.evals.recall_terms));
  add(std::to_string(r.routing.score_evals));
  add(std::to_string(r.routing.skeleton_evals));
  add(std::to_string(r.refreshes));
  add(r.retention ? detail::csv_double(*r.retention) : "");
  add(state_hash(r.initial_x));
  add(r.config_hash);
  add(r.failed ? detail::csv_field("failed: " + r.error) : "ok");
  return row;
}

[[nodiscard]] inline json metadata_json(const std::vector<RunRecord>& records, const json& spec_echo) {
  json j;
  j["prng"] = kPrngId;
  j["operator_version"] = kOperatorVersion;
  j["refresh_convention"] = kRefreshConvention;
  j["recall_blend"] = kRecallBlendConvention;
  j["config_hash"] = fnv1a_hex(spec_echo.dump());
  j["records"] = records.size();
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed ? 1 : 0;
  j["failed"] = failed;
  j["spec"] = spec_echo;
  return j;
}

inline void emit_outputs(const std::vector<RunRecord>& records, const OutputPaths& paths, const json& spec_echo) {
  if (records.empty()) throw UsageError("emit_outputs: no records");
  std::string trace;
  for (const auto& r : records) {
    for (const auto& s : r.steps) {
      trace += trace_row(r, s).dump();
      trace += '\n';
    }
  }
  std::string summary(kSummaryHeader);
  summary += '\n';
  for (const auto& r : records) {
    summary += summary_row(r);
    summary += '\n';
  }
  detail::write_file(paths.trace, trace);
  detail::write_file(paths.summary, summary);
  detail::write_file(paths.metadata, metadata_json(records, spec_echo).dump(2) + "\n");
}

[[nodiscard]] inline json to_json(const BoundReport& rep) {
  json j;
  j["L"] = rep.L;
  j["e"] = rep.e;
  j["delta"] = rep.delta;
  j["eps_rho"] = rep.eps_rho;
  j["r"] = rep.r;
  j["m_size"] = rep.m_size;
  j["violated_steps"] = rep.violated_steps;
  j["unrolled_bound"] = rep.unrolled_bound();
  j["unrolled_violations"] = rep.unrolled_violations;
  j["geometric_bound"] = rep.geometric_bound();
  j["e_final"] = rep.e.back();
  return j;
}

}  // namespace lore
