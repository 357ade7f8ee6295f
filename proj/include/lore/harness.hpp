#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lore/decode.hpp"
#include "lore/dynamics.hpp"
#include "lore/edge_list_io.hpp"
#include "lore/errors.hpp"
#include "lore/generators.hpp"
#include "lore/graph.hpp"
#include "lore/recall.hpp"
#include "lore/rng.hpp"
#include "lore/routing.hpp"
#include "lore/state.hpp"

namespace lore {

/// Refresh phase convention: steps elapsed since the start, t = 0, R, 2R, ...
inline constexpr std::string_view kRefreshConvention = "elapsed-steps:t%R==0";
/// Which vector occupies the alpha slot of the recall blend.
inline constexpr std::string_view kRecallBlendConvention = "alpha*cluster_update+(1-alpha)*bath_signal";

/// `count` generated graphs of one family, or a single graph file.
struct GraphGroup {
  GeneratorSpec gen;
  std::size_t count = 1;
  std::optional<std::filesystem::path> file;
};

enum class SweepParam { LambdaStab, Rho, Refresh, Gamma };

[[nodiscard]] inline std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::LambdaStab: return "lambda_stab";
    case SweepParam::Rho: return "rho";
    case SweepParam::Refresh: return "refresh";
    case SweepParam::Gamma: return "gamma";
  }
  return "?";
}

[[nodiscard]] inline SweepParam parse_sweep_param(std::string_view s) {
  if (s == "lambda_stab" || s == "lambda-stab") return SweepParam::LambdaStab;
  if (s == "rho") return SweepParam::Rho;
  if (s == "refresh") return SweepParam::Refresh;
  if (s == "gamma") return SweepParam::Gamma;
  throw ParameterError("unknown sweep parameter '" + std::string(s) + "'");
}

struct SweepAxis {
  SweepParam param = SweepParam::LambdaStab;
  std::vector<double> values;
};

inline void apply_grid_value(BudgetConfig& b, SweepParam p, double v) {
  switch (p) {
    case SweepParam::LambdaStab: b.lambda_stab = v; break;
    case SweepParam::Rho: b.rho = v; break;
    case SweepParam::Gamma: b.gamma = v; break;
    case SweepParam::Refresh:
      if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ParameterError("refresh grid values must be positive integers");
      }
      b.refresh = static_cast<std::size_t>(v);
      break;
  }
}

struct ExperimentSpec {
  std::vector<GraphGroup> graphs;
  DynamicsConfig dynamics;
  BudgetConfig budget;
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  std::optional<SweepAxis> sweep;
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;

  void validate() const {
    if (graphs.empty()) throw ParameterError("experiment needs at least one graph group");
    if (strategies.empty()) throw ParameterError("experiment needs at least one strategy");
    dynamics.validate();
    budget.validate();
    if (sweep) {
      if (sweep->values.empty()) throw ParameterError("sweep grid is empty");
      for (double v : sweep->values) {
        BudgetConfig b = budget;
        apply_grid_value(b, sweep->param, v);
        b.validate();
      }
    }
  }
};

/// The routing-strategy ablation protocol: 20 ER(p=0.05) + 20 BA(m=3),
/// half at n=500 and half at n=1000, T=100, rho=0.08, all six strategies.
[[nodiscard]] inline ExperimentSpec default_ablation_spec(std::uint64_t master_seed = 2024) {
  ExperimentSpec spec;
  spec.master_seed = master_seed;
  for (std::size_t n : {500u, 1000u}) {
    GraphGroup er;
    er.gen.family = GraphFamily::ER;
    er.gen.n = n;
    er.gen.p = 0.05;
    er.count = 10;
    spec.graphs.push_back(er);
  }
  for (std::size_t n : {500u, 1000u}) {
    GraphGroup ba;
    ba.gen.family = GraphFamily::BA;
    ba.gen.n = n;
    ba.gen.m = 3;
    ba.count = 10;
    spec.graphs.push_back(ba);
  }
  return spec;
}

struct GraphInstance {
  std::string id;
  Graph graph;
  std::uint64_t init_seed = 0;
};

namespace detail {

[[nodiscard]] inline std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

/// Materializes every graph of the spec. Instance k (in declaration order)
/// gets graph seed derive(master, 2k) and init seed derive(master, 2k+1).
[[nodiscard]] inline std::vector<GraphInstance> materialize_graphs(const ExperimentSpec& spec) {
  std::vector<GraphInstance> out;
  std::uint64_t k = 0;
  for (const auto& group : spec.graphs) {
    for (std::size_t c = 0; c < (group.file ? 1 : group.count); ++c, ++k) {
      GraphInstance inst;
      char idx[16];
      std::snprintf(idx, sizeof idx, "%04llu", static_cast<unsigned long long>(k));
      if (group.file) {
        inst.graph = load_edge_list(*group.file);
        inst.id = std::string(idx) + "-file-" + group.file->stem().string();
      } else {
        GeneratorSpec gen = group.gen;
        gen.seed = derive_seed(spec.master_seed, 2 * k);
        inst.graph = generate(gen);
        std::string params;
        switch (gen.family) {
          case GraphFamily::ER: params = "p" + detail::fmt_param(gen.p); break;
          case GraphFamily::BA: params = "m" + std::to_string(gen.m); break;
          case GraphFamily::WS: params = "k" + std::to_string(gen.k) + "-b" + detail::fmt_param(gen.rewire); break;
        }
        inst.id = std::string(idx) + "-" + std::string(to_string(gen.family)) + "-n" + std::to_string(gen.n) + "-" +
                  params;
      }
      inst.init_seed = derive_seed(spec.master_seed, 2 * k + 1);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

/// One row of the per-step trace. Row t describes x^t and the routing
/// decision taken from it; the final row (t = T) has no step.
struct StepRecord {
  std::size_t t = 0;
  double energy = 0.0;
  double objective = 0.0;
  std::size_t legal_size = 0;
  std::size_t m_size = 0;
  std::optional<double> overlap;
  std::uint64_t msg_evals = 0;
};

struct RunRecord {
  std::string run_id;
  std::string graph_id;
  std::string strategy;  // strategy name, or "full" for a reference run
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string prng_id{kPrngId};
  std::string operator_version{kOperatorVersion};
  std::optional<std::string> grid_param;
  std::optional<double> grid_value;
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t budget = 0;

  std::vector<double> initial_x;
  std::vector<StepRecord> steps;
  std::size_t final_size = 0;
  double final_energy = 0.0;
  EvalCounter evals;
  RoutingCost routing;
  std::size_t refreshes = 0;
  std::optional<double> retention;

  bool failed = false;
  std::string error;
};

/// Stable 64-bit FNV-1a, rendered as 16 hex digits.
[[nodiscard]] inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

[[nodiscard]] inline std::string state_hash(std::span<const double> x) {
  return fnv1a_hex(std::string_view(reinterpret_cast<const char*>(x.data()), x.size_bytes()));
}

[[nodiscard]] inline std::string config_fingerprint(const DynamicsConfig& d, const BudgetConfig& b,
                                                    std::string_view strategy) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "eta=%.17g;beta=%.17g;T=%zu;recall=%d;rho=%.17g;gamma=%.17g;R=%zu;lambda=%.17g;s=",
                d.eta, d.beta, d.steps, d.recall_enabled ? 1 : 0, b.rho, b.gamma, b.refresh, b.lambda_stab);
  return fnv1a_hex(std::string(buf) + std::string(strategy));
}

/// Runs one trajectory from `init`. With `full_support` every step evaluates
/// all edges (the reference run); otherwise M_t comes from the router.
/// Anytime legal sizes are decoded from copies; the trajectory is untouched.
[[nodiscard]] inline RunRecord run_trajectory(const Graph& g, const SolverState& init, const DynamicsConfig& dyn,
                                              const BudgetConfig& budget, std::uint64_t routing_seed,
                                              bool full_support) {
  dyn.validate();
  budget.validate();
  check_state(init, g);
  RunRecord rec;
  rec.strategy = full_support ? "full" : std::string(to_string(budget.strategy));
  rec.config_hash = config_fingerprint(dyn, budget, rec.strategy);
  rec.num_nodes = g.num_nodes();
  rec.num_edges = g.num_edges();
  rec.budget = full_support ? g.num_edges() : budget_size(g.num_edges(), budget.rho);
  rec.initial_x = init.x;

  Router router(g, budget, routing_seed);
  std::optional<BathCache> bath;
  SolverState x = init;
  auto snapshot = [&](std::size_t t) {
    StepRecord row;
    row.t = t;
    row.energy = conflict_energy(x, g);
    row.objective = objective(x);
    row.legal_size = decode_legal(x.x, g).size();
    return row;
  };

  for (std::size_t t = 0; t < dyn.steps; ++t) {
    StepRecord row = snapshot(t);
    const std::uint64_t before = rec.evals.messages;
    if (full_support) {
      row.m_size = g.num_edges();
      x = full_step(x, g, dyn, &rec.evals);
    } else {
      const bool refresh = router.is_refresh_step(t);
      const ActiveSet& active = router.route(x, t);
      row.m_size = active.size();
      row.overlap = router.last_overlap();
      if (dyn.recall_enabled && (refresh || !bath)) bath = refresh_bath_cache(x, g, active);
      x = budgeted_step(x, g, active, dyn, bath ? &*bath : nullptr, &rec.evals);
    }
    row.msg_evals = rec.evals.messages - before;
    rec.steps.push_back(row);
  }
  rec.steps.push_back(snapshot(dyn.steps));
  rec.final_size = rec.steps.back().legal_size;
  rec.final_energy = rec.steps.back().energy;
  if (!full_support) {
    rec.routing = router.cost();
    rec.refreshes = router.refreshes();
  }
  return rec;
}

namespace detail {

/// Runs `cells` on up to `jobs` threads; result order follows cell order.
template <typename Cell>
[[nodiscard]] std::vector<RunRecord> run_cells(const std::vector<Cell>& cells, std::size_t jobs,
                                               const std::function<RunRecord(const Cell&)>& body) {
  std::vector<RunRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        out[i] = body(cells[i]);
      } catch (const std::exception& ex) {
        out[i].failed = true;
        out[i].error = ex.what();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return out;
}

}  // namespace detail

/// Seed of the routing stream (used by Random) for one instance and strategy.
[[nodiscard]] inline std::uint64_t routing_seed_for(std::uint64_t init_seed, Strategy s) {
  return derive_seed(init_seed, 1000 + static_cast<std::uint64_t>(s));
}

/// Every strategy on every graph, all from one shared initial state per
/// graph. Records are ordered by (graph, strategy as listed in the spec).
[[nodiscard]] inline std::vector<RunRecord> run_ablation(const ExperimentSpec& spec,
                                                         const std::vector<GraphInstance>& instances) {
  spec.validate();
  struct Cell {
    const GraphInstance* inst;
    Strategy strategy;
    const SolverState* init;
  };
  std::vector<SolverState> inits;
  inits.reserve(instances.size());
  for (const auto& inst : instances) inits.push_back(init_state(inst.graph.num_nodes(), inst.init_seed));

  std::vector<Cell> cells;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    for (Strategy s : spec.strategies) cells.push_back({&instances[k], s, &inits[k]});
  }
  auto records = detail::run_cells<Cell>(cells, spec.jobs, [&](const Cell& c) {
    BudgetConfig b = spec.budget;
    b.strategy = c.strategy;
    return run_trajectory(c.inst->graph, *c.init, spec.dynamics, b, routing_seed_for(c.inst->init_seed, c.strategy),
                          false);
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& r = records[i];
    r.graph_id = cells[i].inst->id;
    r.strategy = std::string(to_string(cells[i].strategy));
    r.seed = cells[i].inst->init_seed;
    r.run_id = r.graph_id + "/" + r.strategy;
  }
  return records;
}

[[nodiscard]] inline std::vector<RunRecord> run_ablation(const ExperimentSpec& spec) {
  return run_ablation(spec, materialize_graphs(spec));
}

/// Sensitivity sweep over one budget parameter. For each graph a
/// full-support reference run comes first, then one run per grid value with
/// the spec's first strategy; budgeted runs carry retention =
/// final size / reference final size.
[[nodiscard]] inline std::vector<RunRecord> run_sweep(const ExperimentSpec& spec,
                                                      const std::vector<GraphInstance>& instances) {
  spec.validate();
  if (!spec.sweep) throw ParameterError("run_sweep: spec has no sweep axis");
  const SweepAxis& axis = *spec.sweep;
  const Strategy strategy = spec.strategies.front();
  struct Cell {
    std::size_t graph;
    std::optional<double> value;  // empty for the reference run
  };
  std::vector<SolverState> inits;
  for (const auto& inst : instances) inits.push_back(init_state(inst.graph.num_nodes(), inst.init_seed));
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    cells.push_back({k, std::nullopt});
    for (double v : axis.values) cells.push_back({k, v});
  }
  auto records = detail::run_cells<Cell>(cells, spec.jobs, [&](const Cell& c) {
    const auto& inst = instances[c.graph];
    BudgetConfig b = spec.budget;
    b.strategy = strategy;
    if (c.value) apply_grid_value(b, axis.param, *c.value);
    return run_trajectory(inst.graph, inits[c.graph], spec.dynamics, b,
                          routing_seed_for(inst.init_seed, strategy), !c.value.has_value());
  });
  std::size_t reference = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& r = records[i];
    const auto& inst = instances[cells[i].graph];
    r.graph_id = inst.id;
    r.seed = inst.init_seed;
    if (!cells[i].value) {
      r.strategy = "full";
      r.run_id = r.graph_id + "/full";
      reference = i;
      continue;
    }
    r.strategy = std::string(to_string(strategy));
    r.grid_param = std::string(to_string(axis.param));
    r.grid_value = cells[i].value;
    r.run_id = r.graph_id + "/" + r.strategy + "/" + *r.grid_param + "=" + detail::fmt_param(*cells[i].value);
    const auto& ref = records[reference];
    if (!r.failed && !ref.failed && ref.final_size > 0) {
      r.retention = static_cast<double>(r.final_size) / static_cast<double>(ref.final_size);
    }
  }
  return records;
}

[[nodiscard]] inline std::vector<RunRecord> run_sweep(const ExperimentSpec& spec) {
  return run_sweep(spec, materialize_graphs(spec));
}

struct GridRetention {
  double value = 0.0;
  double mean_retention = 0.0;  // fraction, not percent
  std::size_t cells = 0;
};

struct SweepSummary {
  std::string param;
  std::vector<GridRetention> grid;
  double range_pp = 0.0;  // (max - min) of the per-value mean retention, in percentage points
};

[[nodiscard]] inline SweepSummary summarize_sweep(const std::vector<RunRecord>& records) {
  SweepSummary out;
  std::map<double, std::pair<double, std::size_t>> acc;
  std::vector<double> order;
  for (const auto& r : records) {
    if (!r.grid_value || !r.retention) continue;
    if (out.param.empty() && r.grid_param) out.param = *r.grid_param;
    auto [it, inserted] = acc.try_emplace(*r.grid_value, 0.0, 0);
    if (inserted) order.push_back(*r.grid_value);
    it->second.first += *r.retention;
    ++it->second.second;
  }
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [sum, count] = acc[order[i]];
    const double mean = sum / static_cast<double>(count);
    out.grid.push_back({order[i], mean, count});
    lo = i == 0 ? mean : std::min(lo, mean);
    hi = i == 0 ? mean : std::max(hi, mean);
  }
  out.range_pp = (hi - lo) * 100.0;
  return out;
}

}  // namespace lore
