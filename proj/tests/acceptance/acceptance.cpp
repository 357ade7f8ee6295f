// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lore/lore.hpp"

using namespace lore;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaster = 2024;

struct Result {
  const char* name = nullptr;
  bool ok = false;
  std::string detail;
};
std::map<int, Result> g_results;

void report(int id, const char* name, bool ok, const std::string& detail) {
  g_results[id] = {name, ok, detail};
  std::fprintf(stderr, "[acceptance] criterion %d done: %s\n", id, ok ? "pass" : "fail");
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool g_deterministic = true;
std::vector<std::string> g_determinism;

std::size_t jobs() { return std::max(2u, std::thread::hardware_concurrency()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Emits records into `dir` and returns the concatenated file bytes.
std::string emit(const std::vector<RunRecord>& records, const ExperimentSpec& spec, const fs::path& dir) {
  fs::remove_all(dir);
  const auto paths = OutputPaths::in_dir(dir);
  prepare_outputs(paths);
  emit_outputs(records, paths, to_json(spec));
  return slurp(paths.trace) + "\n--\n" + slurp(paths.summary) + "\n--\n" + slurp(paths.metadata);
}

Graph er(std::size_t n, std::uint64_t index) { return gen_er(n, 0.05, derive_seed(kMaster, 100 + index)); }

std::vector<double> column(const std::vector<RunRecord>& recs, const std::string& strategy, auto field) {
  std::vector<double> out;
  for (const auto& r : recs)
    if (r.strategy == strategy) out.push_back(field(r));
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// 1 + 3 + 8: ablation suite, budget invariant over its runs, determinism.
void ablation_criteria(const fs::path& scratch) {
  auto spec = default_ablation_spec(kMaster);
  spec.jobs = jobs();
  const auto instances = materialize_graphs(spec);
  const auto records = run_ablation(spec, instances);

  // Criterion 1.
  bool budget_ok = true;
  std::size_t failed = 0;
  for (const auto& r : records) {
    failed += r.failed ? 1 : 0;
    const std::size_t cap = std::max<std::size_t>(static_cast<std::size_t>(std::floor(0.08 * r.num_edges + 1e-9)), 1);
    for (std::size_t t = 0; t + 1 < r.steps.size(); ++t) budget_ok = budget_ok && r.steps[t].m_size <= cap;
    budget_ok = budget_ok && r.evals.messages <= 2 * cap * spec.dynamics.steps;
  }
  // Evaluation ratio against a full-support run on the first ER n=1000 instance.
  const auto& big = instances[10];
  const auto init = init_state(big.graph.num_nodes(), big.init_seed);
  const auto full = run_trajectory(big.graph, init, spec.dynamics, spec.budget, 0, true);
  double worst_ratio = 0.0;
  for (const auto& r : records) {
    if (r.graph_id != big.id) continue;
    worst_ratio = std::max(worst_ratio, static_cast<double>(r.evals.messages) / full.evals.messages);
  }
  report(1, "budget invariant", budget_ok && failed == 0 && worst_ratio <= 0.081,
         fmt("%zu runs checked per step, failed runs %zu, ER n=1000 |E|=%zu eval ratio %.5f (<= 0.081)",
             records.size(), failed, big.graph.num_edges(), worst_ratio));

  // Criterion 3.
  auto size = [](const RunRecord& r) { return static_cast<double>(r.final_size); };
  auto energy = [](const RunRecord& r) { return r.final_energy; };
  const auto lore_size = column(records, "lore", size);
  const auto static_size = column(records, "lore-static", size);
  const auto random_size = column(records, "random", size);
  const auto vs_static = sign_test_greater(lore_size, static_size);
  const auto vs_random = sign_test_greater(lore_size, random_size);
  const double e_lore = mean(column(records, "lore", energy));
  const double e_static = mean(column(records, "lore-static", energy));
  std::string means;
  for (Strategy s : kAllStrategies) {
    const std::string name(to_string(s));
    means += fmt(" %s=%.2f/%.1f", name.c_str(), mean(column(records, name, size)), mean(column(records, name, energy)));
  }
  const bool ablation_ok = mean(lore_size) >= mean(static_size) && mean(lore_size) >= mean(random_size) &&
                           vs_static.p_value < 0.05 && vs_random.p_value < 0.05 && e_lore <= e_static;
  report(3, "ablation ordering", ablation_ok,
         fmt("vs static W/L/T %zu/%zu/%zu p=%.4g; vs random W/L/T %zu/%zu/%zu p=%.4g; energy lore %.1f vs static "
             "%.1f; mean size/energy:",
             vs_static.wins, vs_static.losses, vs_static.ties, vs_static.p_value, vs_random.wins, vs_random.losses,
             vs_random.ties, vs_random.p_value, e_lore, e_static) +
             means);

  // Criterion 8: rerun with a different worker count; outputs must match byte for byte.
  const std::string first = emit(records, spec, scratch / "ablate_a");
  spec.jobs = 1;
  const std::string second = emit(run_ablation(spec), spec, scratch / "ablate_b");
  g_determinism.push_back(fmt("ablation %zu bytes %s", first.size(), first == second ? "identical" : "DIFFER"));
  g_deterministic = g_deterministic && first == second;
}

// 2.
void full_support_equivalence() {
  DynamicsConfig dyn;
  BudgetConfig bc;
  bc.rho = 1.0;
  std::size_t mismatched = 0, compared = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto g = er(200, k);
    Router router(g, bc, derive_seed(kMaster, 500 + k));
    SolverState full = init_state(200, derive_seed(kMaster, 300 + k));
    SolverState budgeted = full;
    for (std::size_t t = 0; t < 100; ++t) {
      full = full_step(full, g, dyn);
      budgeted = budgeted_step(budgeted, g, router.route(budgeted, t), dyn);
      ++compared;
      if (!(full.x == budgeted.x)) ++mismatched;
    }
  }
  report(2, "full-support equivalence", mismatched == 0,
         fmt("%zu state vectors compared with ==, %zu mismatches", compared, mismatched));
}

// 4.
void error_bound_soundness() {
  DynamicsConfig dyn;
  std::size_t violations = 0, unrolled = 0, steps = 0, eps_breaks = 0;
  double worst_slack = -1e300;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto g = er(200, k);
    const std::uint64_t seed = derive_seed(kMaster, 300 + k);
    for (double rho : {0.08, 0.3}) {
      BudgetConfig bc;
      bc.rho = rho;
      const auto rep = paired_trajectory_report(g, dyn, bc, seed);
      violations += rep.violated_steps.size();
      unrolled += rep.unrolled_violations.size();
      if (rep.e.back() > rep.unrolled_bound() + kRecursionTolerance) ++unrolled;
      steps += rep.delta.size();
      for (std::size_t t = 0; t < rep.delta.size(); ++t) {
        worst_slack = std::max(worst_slack, rep.e[t + 1] - (rep.L * rep.e[t] + rep.delta[t]));
      }
    }
    // Nested budgets at a fixed shared state (20 full steps from init).
    SolverState x = init_state(200, seed);
    for (int t = 0; t < 20; ++t) x = full_step(x, g, dyn);
    double prev = 1e300;
    for (double rho : {0.05, 0.2, 0.8}) {
      BudgetConfig bc;
      bc.rho = rho;
      Rng rng(0);
      const double eps = omitted_message_mass(x, g, build_active_set(Strategy::LoRe, x, g, bc, nullptr, 0, rng), dyn);
      if (eps > prev) ++eps_breaks;
      prev = eps;
    }
  }
  report(4, "error-bound soundness", violations == 0 && unrolled == 0 && eps_breaks == 0,
         fmt("%zu steps, recursion violations %zu (max e_{t+1} - bound = %.3g), unrolled violations %zu, "
             "eps monotonicity breaks %zu",
             steps, violations, worst_slack, unrolled, eps_breaks));
}

// 5.
void activity() {
  DynamicsConfig dyn;
  BudgetConfig bc;
  std::size_t ok = 0, total = 0, refresh_ok = 0, refresh_total = 0;
  double worst_run = 1.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto g = er(500, 20 + k);
    Router router(g, bc, derive_seed(kMaster, 700 + k));
    SolverState x = init_state(500, derive_seed(kMaster, 600 + k));
    std::size_t run_ok = 0, run_total = 0;
    for (std::size_t t = 0; t < dyn.steps; ++t) {
      const bool refresh = router.is_refresh_step(t);
      const auto& m = router.route(x, t);
      if (2 * t >= dyn.steps) {
        const auto st = activity_stats(x, m, g);
        const bool hotter = !st.bath_mean_u || st.cluster_mean_u >= *st.bath_mean_u;
        ++run_total;
        run_ok += hotter ? 1 : 0;
        if (refresh) {
          ++refresh_total;
          refresh_ok += hotter ? 1 : 0;
        }
      }
      x = budgeted_step(x, g, m, dyn);
    }
    ok += run_ok;
    total += run_total;
    worst_run = std::min(worst_run, static_cast<double>(run_ok) / run_total);
  }
  const double frac = static_cast<double>(ok) / total;
  report(5, "cluster/bath activity", frac >= 0.9,
         fmt("cluster >= bath on %zu/%zu late steps (%.1f%%, worst run %.1f%%); on refresh steps %zu/%zu", ok,
             total, 100 * frac, 100 * worst_run, refresh_ok, refresh_total));
}

// 6.
void decode_fuzz() {
  Rng rng(derive_seed(kMaster, 900));
  std::size_t bad = 0;
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = 2 + rng.below(300);
    Graph g;
    switch (c % 4) {
      case 0: g = gen_er(n, rng.uniform(0.0, 0.3), rng.next_u64()); break;
      case 1: g = gen_ba(std::max<std::size_t>(n, 6), 1 + rng.below(5), rng.next_u64()); break;
      case 2: g = gen_ws(std::max<std::size_t>(n, 10), 2 * (1 + rng.below(4)), rng.uniform(), rng.next_u64()); break;
      default: g = gen_er(std::min<std::size_t>(n, 25), rng.uniform(0.5, 1.0), rng.next_u64()); break;
    }
    std::vector<double> x(g.num_nodes());
    const int mode = static_cast<int>(rng.below(3));
    for (auto& v : x) v = mode == 0 ? rng.uniform() : mode == 1 ? static_cast<double>(rng.below(2)) : 0.5;
    const auto decoded = greedy_decode(x, g);
    const auto repaired = repair_and_validate(decoded, g);
    NodeSet raw;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (rng.bernoulli(0.5)) raw.members.push_back(v);
    const auto fixed = repair_and_validate(raw, g);
    const bool ok = is_independent(decoded, g) && is_independent(repaired, g) && repaired == decoded &&
                    is_independent(fixed, g) && repair_and_validate(fixed, g) == fixed;
    if (!ok) ++bad;
  }
  report(6, "decode/repair feasibility", bad == 0, fmt("1000 fuzz cases, %zu failures", bad));
}

// 7 + 8.
void sweep_criteria(const fs::path& scratch) {
  ExperimentSpec spec;
  GraphGroup group;
  group.gen.family = GraphFamily::ER;
  group.gen.n = 500;
  group.gen.p = 0.05;
  group.count = 3;
  spec.graphs = {group};
  spec.strategies = {Strategy::LoRe};
  spec.sweep = SweepAxis{SweepParam::LambdaStab, {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}};
  spec.master_seed = kMaster;
  spec.jobs = jobs();
  const auto records = run_sweep(spec);
  const auto summary = summarize_sweep(records);

  const std::size_t T = spec.dynamics.steps;
  double early = 0.0, late = 0.0;
  std::size_t n_early = 0, n_late = 0, refreshes_with_overlap = 0, expected_overlaps = 0;
  for (const auto& r : records) {
    if (r.strategy == "full") continue;
    expected_overlaps += r.refreshes - 1;
    for (const auto& row : r.steps) {
      if (!row.overlap) continue;
      ++refreshes_with_overlap;
      if (4 * row.t < T) {
        early += *row.overlap;
        ++n_early;
      } else if (4 * row.t >= 3 * T) {
        late += *row.overlap;
        ++n_late;
      }
    }
  }
  early /= std::max<std::size_t>(n_early, 1);
  late /= std::max<std::size_t>(n_late, 1);
  std::string grid;
  for (const auto& cell : summary.grid) grid += fmt(" %g:%.2f%%", cell.value, 100 * cell.mean_retention);
  const bool ok = summary.range_pp <= 5.0 && refreshes_with_overlap == expected_overlaps && n_early > 0 &&
                  n_late > 0 && early <= late;
  report(7, "sensitivity harness", ok,
         fmt("retention range %.3f pp (<= 5), overlap early %.4f vs late %.4f (%zu overlap rows); retention:",
             summary.range_pp, early, late, refreshes_with_overlap) +
             grid);

  const std::string first = emit(records, spec, scratch / "sweep_a");
  spec.jobs = 1;
  const std::string second = emit(run_sweep(spec), spec, scratch / "sweep_b");
  g_determinism.push_back(fmt("sweep %zu bytes %s", first.size(), first == second ? "identical" : "DIFFER"));
  g_deterministic = g_deterministic && first == second;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path scratch = fs::temp_directory_path() / "lore_acceptance";
  fs::create_directories(scratch);

  full_support_equivalence();
  error_bound_soundness();
  activity();
  decode_fuzz();

  ablation_criteria(scratch);
  sweep_criteria(scratch);
  std::string det = fmt("first run with %zu workers, re-run with 1:", jobs());
  for (const auto& d : g_determinism) det += " " + d + ";";
  report(8, "determinism", g_deterministic, det);

  int failures = 0;
  for (const auto& [id, r] : g_results) {
    std::printf("%s criterion %d (%s): %s\n", r.ok ? "PASS" : "FAIL", id, r.name, r.detail.c_str());
    failures += r.ok ? 0 : 1;
  }
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance: %d failing criteria, %.1f s\n", failures, secs);
  fs::remove_all(scratch);
  return failures == 0 ? 0 : 1;
}
