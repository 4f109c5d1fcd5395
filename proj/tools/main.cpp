#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "macromux/config.hpp"
#include "macromux/gap.hpp"
#include "macromux/matching.hpp"
#include "macromux/threshold.hpp"

using json = nlohmann::json;
using namespace macromux;

namespace {

int resolved_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("MACROMUX_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 0;  // estimate_rate falls back to hardware concurrency
}

json gap_result_json(const GapResult& r) {
  json j;
  j["delta"] = r.infinite() ? json("inf") : json(r.delta);
  j["freeze_weight"] = r.freeze_weight;
  double fd = r.frozen_delta();
  j["frozen_delta"] = std::isinf(fd) ? json("inf") : json(fd);
  return j;
}

int cmd_network(int L) {
  SimContext ctx(L, {1, 1, 1}, 0, false);
  json j;
  j["L"] = L;
  j["resource_states"] = ctx.net.num_states();
  j["fusions"] = ctx.net.num_fusions();
  j["outcomes"] = ctx.net.num_outcomes();
  j["checks_per_graph"] = ctx.primal.num_checks;
  j["edges_per_graph"] = ctx.primal.num_edges();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_dicing(int L, const Coord& brick, int offset_step) {
  SimContext ctx(L, brick, offset_step, false);
  auto [np, nd] = check_offset_balance(ctx.dicing, ctx.primal, ctx.dual);
  json stages = json::array();
  for (int s = 0; s < ctx.dicing.num_stages(); ++s) {
    json st;
    st["dims"] = {ctx.dicing.stage_dims[s][0], ctx.dicing.stage_dims[s][1],
                  ctx.dicing.stage_dims[s][2]};
    st["bricks"] = ctx.dicing.bricks[s].size();
    long fusions = 0;
    for (int f : ctx.dicing.fusion_stage)
      if (f == s) ++fusions;
    st["fusions"] = fusions;
    stages.push_back(st);
  }
  long final_fusions = 0;
  for (int f : ctx.dicing.fusion_stage)
    if (f == ctx.dicing.final_stage()) ++final_fusions;
  json j;
  j["L"] = L;
  j["brick"] = {brick[0], brick[1], brick[2]};
  j["offset_step"] = offset_step;
  j["stages"] = stages;
  j["final_fusions"] = final_fusions;
  j["balance"] = {{"primal_checked_outcomes", np},
                  {"dual_checked_outcomes", nd},
                  {"balanced", np == nd}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sample(const std::string& config_path, long trials, int64_t seed_override,
               const std::string& out_path) {
  RunConfig cfg = parse_config(config_path);
  if (seed_override >= 0) cfg.seed = uint64_t(seed_override);
  SimContext ctx(cfg.L, cfg.brick, cfg.offset_step, cfg.mode == RunMode::pipeline);
  EngineParams par = cfg.engine_params();
  par.collect_diagnostics = true;

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  *os << provenance_line(cfg) << "\n";
  *os << json::parse(cfg.resolved_json()).dump() << "\n";
  for (long i = 0; i < trials; ++i) {
    TrialResult r = cfg.mode == RunMode::monolithic ? monolithic_trial(ctx, par, i)
                                                    : run_trial(ctx, par, i);
    json j;
    j["trial"] = i;
    j["failures"] = {{"primal", {r.failed[0][0], r.failed[0][1], r.failed[0][2]}},
                     {"dual", {r.failed[1][0], r.failed[1][1], r.failed[1][2]}}};
    j["any"] = r.any();
    if (!r.diagnostics.empty()) {
      json d = json::array();
      for (const auto& sd : r.diagnostics)
        d.push_back({{"stage", sd.stage},
                     {"mean_score", sd.mean_score},
                     {"mean_erasures", sd.mean_erasures},
                     {"mean_flips", sd.mean_flips}});
      j["stages"] = d;
    }
    *os << j.dump() << "\n";
  }
  return 0;
}

int cmd_threshold(const std::string& config_path, double p_min, double p_max, int p_steps,
                  const std::vector<int>& sizes, long trials, int64_t seed_override,
                  const std::string& out_path) {
  RunConfig cfg = parse_config(config_path);
  if (seed_override >= 0) cfg.seed = uint64_t(seed_override);
  if (p_steps < 2) throw std::invalid_argument("need at least 2 p-grid points");
  std::vector<double> p_grid;
  for (int i = 0; i < p_steps; ++i)
    p_grid.push_back(p_min + (p_max - p_min) * double(i) / double(p_steps - 1));

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << provenance_line(cfg) << "\n";
  out << "L,p,trials,failures,rate,ci_lo,ci_hi\n";

  // one context per size, built lazily and kept alive for the scan
  std::vector<std::unique_ptr<SimContext>> ctxs;
  std::vector<int> ctx_L;
  auto runner = [&](int L, double p) -> TrialFn {
    SimContext* ctx = nullptr;
    for (std::size_t i = 0; i < ctxs.size(); ++i)
      if (ctx_L[i] == L) ctx = ctxs[i].get();
    if (!ctx) {
      ctxs.push_back(std::make_unique<SimContext>(L, cfg.brick, cfg.offset_step,
                                                  cfg.mode == RunMode::pipeline));
      ctx_L.push_back(L);
      ctx = ctxs.back().get();
    }
    EngineParams par = cfg.engine_params();
    par.model = cfg.model_at(p);
    if (cfg.mode == RunMode::monolithic)
      return [ctx, par](long i) { return monolithic_trial(*ctx, par, i).any(); };
    return [ctx, par](long i) { return run_trial(*ctx, par, i).any(); };
  };

  auto curves = scan(runner, sizes, p_grid, trials, resolved_threads(cfg),
                     [&](const RatePoint& pt) {
                       std::ostringstream row;
                       row.precision(10);
                       row << pt.L << "," << pt.p << "," << pt.trials << "," << pt.failures
                           << "," << pt.rate << "," << pt.ci_lo << "," << pt.ci_hi;
                       out << row.str() << "\n";
                       out.flush();
                     });

  ThresholdEstimate est = find_crossing(curves, 200, cfg.seed + 1);
  json j;
  j["found"] = est.found;
  if (est.found) {
    j["p_th"] = est.p_th;
    j["uncertainty"] = est.uncertainty;
    json xs = json::array();
    for (const auto& c : est.crossings)
      xs.push_back({{"L_small", c.L_small}, {"L_large", c.L_large}, {"p", c.p_cross}});
    j["crossings"] = xs;
  } else {
    j["reason"] = "no crossing in range";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_tune(const std::string& scorer, const std::string& grid_path,
             const std::string& config_path, const std::string& out_path) {
  RunConfig cfg = parse_config(config_path);
  cfg.scorer = scorer == "gap" ? ScorerKind::gap : ScorerKind::count;

  std::ifstream gf(grid_path);
  if (!gf) throw std::invalid_argument("cannot open grid file: " + grid_path);
  json gj = json::parse(gf);
  long trials = gj.value("trials", 1000L);
  std::vector<TunePoint> grid;
  if (!gj.contains("points") || !gj["points"].is_array() || gj["points"].empty())
    throw std::invalid_argument("grid file needs a non-empty 'points' array");
  for (const auto& pj : gj["points"]) {
    TunePoint pt;
    pt.alpha = pj.value("alpha", cfg.count.alpha);
    pt.beta = pj.value("beta", cfg.count.beta);
    pt.delta_coef = pj.value("delta", cfg.gap.delta_coef);
    pt.phi = pj.value("phi", cfg.gap.phi);
    grid.push_back(pt);
  }

  SimContext ctx(cfg.L, cfg.brick, cfg.offset_step, true);
  auto evaluate = [&](const TunePoint& pt) {
    EngineParams par = cfg.engine_params();
    par.count.alpha = pt.alpha;
    par.count.beta = pt.beta;
    par.gap.delta_coef = pt.delta_coef;
    par.gap.phi = pt.phi;
    RatePoint rp = estimate_rate([&ctx, par](long i) { return run_trial(ctx, par, i).any(); },
                                 trials, resolved_threads(cfg));
    TuneOutcome oc;
    oc.params = pt;
    oc.rate = rp.rate;
    oc.ci_lo = rp.ci_lo;
    oc.ci_hi = rp.ci_hi;
    return oc;
  };
  TuneResult res = tune_params(grid, evaluate);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  *os << provenance_line(cfg) << "\n";
  *os << "alpha,beta,delta,phi,rate,ci_lo,ci_hi\n";
  for (const auto& r : res.results)
    *os << r.params.alpha << "," << r.params.beta << "," << r.params.delta_coef << ","
        << r.params.phi << "," << r.rate << "," << r.ci_lo << "," << r.ci_hi << "\n";
  const TuneOutcome& best = res.results[res.best_index];
  json j;
  j["best"] = {{"alpha", best.params.alpha}, {"beta", best.params.beta},
               {"delta", best.params.delta_coef}, {"phi", best.params.phi},
               {"rate", best.rate}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_gap(const std::string& brick_path, const std::string& axis_name, double phi) {
  BrickConfig bc = parse_brick_config(brick_path);
  int axis = axis_name == "x" ? 0 : axis_name == "y" ? 1 : 2;

  int max_dim = std::max({bc.brick[0], bc.brick[1], bc.brick[2]});
  int L = std::max(4, 2 * max_dim);
  SimContext ctx(L, bc.brick, 0, true);

  // the brick at grid origin; its internal fusions in lexicographic order
  // define the outcome indexing of the file format
  const int max_stage = ctx.dicing.num_stages() - 1;
  int index = ctx.dicing.brick_index(max_stage, {0, 0, 0});
  BrickView view = ctx.views[max_stage][index];
  std::vector<int> sorted = view.internal_fusions;
  std::sort(sorted.begin(), sorted.end());

  Bits erased(ctx.net.num_outcomes()), flips(ctx.net.num_outcomes());
  auto place = [&](const std::vector<int>& idxs, Bits& bits) {
    for (int i : idxs) {
      if (i < 0 || i >= int(sorted.size()) * 2)
        throw std::invalid_argument("outcome index " + std::to_string(i) + " out of range");
      bits.set(std::size_t(sorted[i / 2]) * 2 + (i % 2));
    }
  };
  place(bc.erased, erased);
  place(bc.flipped, flips);

  json j;
  j["brick"] = {bc.brick[0], bc.brick[1], bc.brick[2]};
  j["axis"] = axis_name;
  j["phi"] = phi;
  for (int t = 0; t < 2; ++t) {
    BrickProblem problem = make_brick_problem(view, static_cast<GraphType>(t), erased, flips);
    GapResult r = frozen_gap(problem, GapBoundarySpec{axis}, phi);
    j[t == 0 ? "primal" : "dual"] = gap_result_json(r);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"macromux: hierarchical postselection simulator for the 6-ring fusion network"};
  app.require_subcommand(1);

  // network info
  auto* network = app.add_subcommand("network", "fusion network structure");
  auto* info = network->add_subcommand("info", "print counts as JSON");
  int net_L = 8;
  info->add_option("--L", net_L, "lattice side length")->required();
  network->require_subcommand(1);

  // dicing check
  auto* dicing = app.add_subcommand("dicing", "dicing scheme structure");
  auto* check = dicing->add_subcommand("check", "stage table and offset balance as JSON");
  int dc_L = 8, dc_step = 1;
  std::vector<int> dc_brick{2, 2, 2};
  check->add_option("--L", dc_L, "lattice side length")->required();
  check->add_option("--brick", dc_brick, "brick dims n1,n2,n3")->delimiter(',')->expected(3);
  check->add_option("--offset-step", dc_step, "per-layer x offset step");
  dicing->require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "emit one JSON line per trial");
  std::string sm_config, sm_out;
  long sm_trials = 100;
  int64_t sm_seed = -1;
  sample->add_option("--config", sm_config, "run config JSON")->required();
  sample->add_option("--trials", sm_trials, "number of trials");
  sample->add_option("--seed", sm_seed, "master seed override");
  sample->add_option("--out", sm_out, "output file (default stdout)");

  // threshold
  auto* thr = app.add_subcommand("threshold", "logical-rate curves and crossing estimate");
  std::string th_config, th_out = "curves.csv";
  double th_pmin = 0.1, th_pmax = 0.14;
  int th_steps = 9;
  std::vector<int> th_sizes{6, 8};
  long th_trials = 1000;
  int64_t th_seed = -1;
  thr->add_option("--config", th_config, "run config JSON")->required();
  thr->add_option("--p-min", th_pmin, "scan start")->required();
  thr->add_option("--p-max", th_pmax, "scan end")->required();
  thr->add_option("--p-steps", th_steps, "number of grid points");
  thr->add_option("--sizes", th_sizes, "lattice sizes")->delimiter(',');
  thr->add_option("--trials", th_trials, "trials per (L, p)");
  thr->add_option("--seed", th_seed, "master seed override");
  thr->add_option("--out", th_out, "CSV output path");

  // tune
  auto* tune = app.add_subcommand("tune", "grid-search scorer parameters");
  std::string tn_scorer = "count", tn_grid, tn_config, tn_out;
  tune->add_option("--scorer", tn_scorer, "count | gap")
      ->check(CLI::IsMember({"count", "gap"}));
  tune->add_option("--grid", tn_grid, "grid JSON file")->required();
  tune->add_option("--config", tn_config, "run config JSON")->required();
  tune->add_option("--out", tn_out, "CSV output (default stdout)");

  // gap
  auto* gap = app.add_subcommand("gap", "frozen gap of an explicit brick configuration");
  std::string gp_brick, gp_axis = "x";
  double gp_phi = 0.5;
  gap->add_option("--brick-file", gp_brick, "brick config JSON")->required();
  gap->add_option("--axis", gp_axis, "x | y | z")->check(CLI::IsMember({"x", "y", "z"}));
  gap->add_option("--phi", gp_phi, "freezing weight coefficient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (*info) return cmd_network(net_L);
    if (*check) return cmd_dicing(dc_L, {dc_brick[0], dc_brick[1], dc_brick[2]}, dc_step);
    if (*sample) return cmd_sample(sm_config, sm_trials, sm_seed, sm_out);
    if (*thr)
      return cmd_threshold(th_config, th_pmin, th_pmax, th_steps, th_sizes, th_trials, th_seed,
                           th_out);
    if (*tune) return cmd_tune(tn_scorer, tn_grid, tn_config, tn_out);
    if (*gap) return cmd_gap(gp_brick, gp_axis, gp_phi);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
