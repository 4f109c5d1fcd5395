#include "macromux/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "macromux/matching.hpp"

namespace macromux {

namespace {

// stream tags for counter-based RNG derivation
constexpr uint64_t kTagStage = 1;    // (stage, brick)
constexpr uint64_t kTagFinal = 2;    // final inter-brick fusions
constexpr uint64_t kTagLatent = 3;   // erased-outcome values at decode time
constexpr uint64_t kTagIdeal = 4;    // (brick) rejection sampling
constexpr uint64_t kTagMono = 5;     // monolithic sampling

int floor_mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void ErrorModel::validate() const {
  if (p_e < 0 || p_e > 1 || p_p < 0 || p_p > 1)
    throw std::invalid_argument("error probabilities must lie in [0, 1]");
  if (kind == ErrorModelKind::erasure && p_p != 0)
    throw std::invalid_argument("erasure-only model must have p_p = 0");
  if (kind == ErrorModelKind::bitflip && p_e != 0)
    throw std::invalid_argument("bitflip-only model must have p_e = 0");
  if (kind == ErrorModelKind::mixed_ray && std::abs(p_p - p_e / 10.0) > 1e-12)
    throw std::invalid_argument("mixed-ray model requires p_p = p_e / 10");
}

SimContext::SimContext(int L, Coord max_brick, int offset_step, bool build_views)
    : net(build_six_ring_network(L)) {
  auto graphs = build_syndrome_graphs(net);
  primal = std::move(graphs.first);
  dual = std::move(graphs.second);
  dicing = build_cuboidal_dicing(net, max_brick, offset_step);
  for (int f = 0; f < net.num_fusions(); ++f)
    if (dicing.fusion_stage[f] == dicing.final_stage()) {
      final_outcomes.push_back(2 * f);
      final_outcomes.push_back(2 * f + 1);
    }
  if (build_views) {
    views.resize(dicing.num_stages());
    for (int s = 0; s < dicing.num_stages(); ++s) {
      views[s].reserve(dicing.bricks[s].size());
      for (int i = 0; i < int(dicing.bricks[s].size()); ++i)
        views[s].push_back(brick_view(dicing, s, i, primal, dual));
    }
  }
}

void sample_outcome_errors(Rng& rng, const std::vector<int>& outcomes, const ErrorModel& m,
                           Bits& erased, Bits& flips) {
  for (int o : outcomes) {
    if (rng.bernoulli(m.p_e)) {
      erased.set(o);
    } else if (rng.bernoulli(m.p_p)) {
      flips.set(o);
    }
  }
}

Score score_copy(const SimContext& ctx, const EngineParams& par, const BrickView& view,
                 const BrickCopy& copy) {
  if (par.scorer == ScorerKind::count)
    return count_score(view, copy.erased, copy.flips, par.count);
  return gap_score(view, copy.erased, copy.flips, par.gap);
}

namespace {

std::vector<int> both_outcomes(const std::vector<int>& fusions) {
  std::vector<int> out;
  out.reserve(fusions.size() * 2);
  for (int f : fusions) {
    out.push_back(2 * f);
    out.push_back(2 * f + 1);
  }
  return out;
}

void merge_disjoint(Bits& into, const Bits& from) { into |= from; }

}  // namespace

void run_stage(const SimContext& ctx, const EngineParams& par, int stage,
               std::vector<std::vector<BrickCopy>>& copies_by_brick, long trial_index) {
  const auto& bricks = ctx.dicing.bricks[stage];
  const auto& child_bricks = ctx.dicing.bricks[stage - 1];
  std::vector<std::vector<BrickCopy>> next(bricks.size());

  for (int bi = 0; bi < int(bricks.size()); ++bi) {
    const Brick& b = bricks[bi];
    auto& c0 = copies_by_brick[b.child0];
    auto& c1 = copies_by_brick[b.child1];
    if (int(c0.size()) != par.M || int(c1.size()) != par.M)
      throw std::logic_error("copy count mismatch at stage merge");

    std::vector<int> order0(par.M), order1(par.M);
    std::iota(order0.begin(), order0.end(), 0);
    std::iota(order1.begin(), order1.end(), 0);
    // with a single copy, or children without sampled outcomes, ranking is
    // forced and scoring is skipped
    if (par.M > 1 && !child_bricks[b.child0].internal_fusions.empty()) {
      std::vector<Score> s0(par.M), s1(par.M);
      const BrickView& view0 = ctx.views[stage - 1][b.child0];
      const BrickView& view1 = ctx.views[stage - 1][b.child1];
      for (int i = 0; i < par.M; ++i) {
        s0[i] = score_copy(ctx, par, view0, c0[i]);
        s1[i] = score_copy(ctx, par, view1, c1[i]);
      }
      order0 = rank_copies(s0);
      order1 = rank_copies(s1);
    }

    Rng rng = Rng::from_stream(par.master_seed, uint64_t(trial_index), kTagStage,
                               uint64_t(stage), uint64_t(bi));
    std::vector<int> conn = both_outcomes(b.connecting_fusions);
    auto& out = next[bi];
    out.reserve(par.M);
    for (int i = 0; i < par.M; ++i) {
      BrickCopy merged = std::move(c0[order0[i]]);
      merge_disjoint(merged.erased, c1[order1[i]].erased);
      merge_disjoint(merged.flips, c1[order1[i]].flips);
      sample_outcome_errors(rng, conn, par.model, merged.erased, merged.flips);
      out.push_back(std::move(merged));
    }
  }
  copies_by_brick = std::move(next);
}

std::pair<BrickCopy, long> sample_ideal_brick(const SimContext& ctx, const EngineParams& par,
                                              int brick_index, Rng& rng) {
  const int max_stage = ctx.dicing.num_stages() - 1;
  const BrickView& view = ctx.views.at(max_stage).at(brick_index);
  BrickCopy copy{Bits(ctx.net.num_outcomes()), Bits(ctx.net.num_outcomes())};

  // Conditioned on "no internal erasures", flips stay i.i.d., so the erasure
  // field is fixed clean and only the flip condition is rejection-sampled.
  std::vector<int> outcomes = both_outcomes(view.internal_fusions);
  ErrorModel flips_only = par.model;
  flips_only.p_e = 0;
  for (long attempt = 1; attempt <= par.max_attempts; ++attempt) {
    for (int o : outcomes) copy.flips.reset(o);
    sample_outcome_errors(rng, outcomes, flips_only, copy.erased, copy.flips);
    bool lit = false;
    for (int t = 0; t < 2 && !lit; ++t) {
      const auto& tv = view.type_view[t];
      std::vector<uint8_t> defect(tv.complete_checks.size(), 0);
      for (const auto& [fusion, lu, lv] : tv.edges)
        if (copy.flips.get(std::size_t(fusion) * 2 + t)) {
          defect[lu] ^= 1;
          defect[lv] ^= 1;
        }
      for (const auto& [fusion, lc, face] : tv.half_edges)
        if (copy.flips.get(std::size_t(fusion) * 2 + t)) defect[lc] ^= 1;
      for (uint8_t d : defect)
        if (d) {
          lit = true;
          break;
        }
    }
    if (!lit) return {std::move(copy), attempt};
  }
  throw std::runtime_error(
      "ideal-brick rejection sampling exceeded max attempts; acceptance rate too low "
      "for this brick size and error rate");
}

namespace {

// ---- decoding ------------------------------------------------------------

struct FccMetric {
  int L;

  // minimum step count between same-parity cells (steps move two coords by 1)
  int64_t dist(const Coord& a, const Coord& b) const {
    int64_t best = kInfWeight;
    for (int mx = 0; mx < 2; ++mx)
      for (int my = 0; my < 2; ++my)
        for (int mz = 0; mz < 2; ++mz) {
          int dx = wrap(b[0] - a[0], mx), dy = wrap(b[1] - a[1], my), dz = wrap(b[2] - a[2], mz);
          int64_t m = std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
          int64_t s = (std::abs(dx) + std::abs(dy) + std::abs(dz) + 1) / 2;
          best = std::min(best, std::max(m, s));
        }
    return best;
  }

  // crossing parities of a displacement-minimal chain from a to b with the
  // three membrane cuts (between cell layers 0 and 1)
  std::array<bool, 3> crossings(const Coord& a, const Coord& b) const {
    int64_t best = kInfWeight;
    std::array<int, 3> bd{};
    for (int mx = 0; mx < 2; ++mx)
      for (int my = 0; my < 2; ++my)
        for (int mz = 0; mz < 2; ++mz) {
          int dx = wrap(b[0] - a[0], mx), dy = wrap(b[1] - a[1], my), dz = wrap(b[2] - a[2], mz);
          int64_t m = std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
          int64_t s = (std::abs(dx) + std::abs(dy) + std::abs(dz) + 1) / 2;
          int64_t d = std::max(m, s);
          if (d < best) {
            best = d;
            bd = {dx, dy, dz};
          }
        }
    std::array<bool, 3> out{};
    for (int axis = 0; axis < 3; ++axis) {
      // crossings of the cut at cell-coordinate 0.5 (mod L)
      long n1 = fdiv(a[axis] + bd[axis] - 1, L) - fdiv(a[axis] - 1, L);
      out[axis] = (n1 & 1) != 0;
    }
    return out;
  }

 private:
  int wrap(int d, int minus) const {
    int dn = floor_mod(d, L);
    return minus ? dn - L : dn;
  }
  static long fdiv(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Peel the erased spanning forest to clear all residual defects inside
// erased clusters; appends the peeled edges to `correction`.
void peel_erased(const SyndromeGraph& g, const Bits& erased_edges, std::vector<uint8_t>& defect,
                 Bits& correction) {
  const int n = g.num_checks;
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int f = 0; f < g.num_edges(); ++f)
    if (erased_edges.get(f)) {
      adj[g.edge_checks[f][0]].push_back({f, g.edge_checks[f][1]});
      adj[g.edge_checks[f][1]].push_back({f, g.edge_checks[f][0]});
    }
  std::vector<uint8_t> visited(n, 0);
  std::vector<std::array<int, 3>> order;  // (node, parent, edge)
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (visited[root] || adj[root].empty()) continue;
    visited[root] = 1;
    stack.push_back(root);
    std::size_t first = order.size();
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [f, v] : adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        order.push_back({v, u, f});
        stack.push_back(v);
      }
    }
    for (std::size_t i = order.size(); i-- > first;) {
      auto [v, u, f] = order[i];
      if (defect[v]) {
        correction.flip(f);
        defect[v] ^= 1;
        defect[u] ^= 1;
      }
    }
  }
}

std::array<bool, 3> decode_one_graph(const SyndromeGraph& g, const Bits& erased_edges,
                                     const Bits& flip_edges) {
  const int n_edges = g.num_edges();
  std::vector<uint8_t> defect = syndrome_of(g, flip_edges);

  const bool has_erasures = erased_edges.any();
  Bits correction(n_edges);
  std::array<bool, 3> extra_parity{};

  // fold defects over erased clusters; leftover parity needs matching
  std::vector<int> defect_nodes;
  if (has_erasures) {
    UnionFind uf(g.num_checks);
    for (int f = 0; f < n_edges; ++f)
      if (erased_edges.get(f)) uf.unite(g.edge_checks[f][0], g.edge_checks[f][1]);
    std::vector<uint8_t> comp_par(g.num_checks, 0);
    for (int c = 0; c < g.num_checks; ++c)
      if (defect[c]) comp_par[uf.find(c)] ^= 1;
    for (int c = 0; c < g.num_checks; ++c)
      if (comp_par[c]) defect_nodes.push_back(c);
  } else {
    for (int c = 0; c < g.num_checks; ++c)
      if (defect[c]) defect_nodes.push_back(c);
  }

  if (!defect_nodes.empty()) {
    const int k = int(defect_nodes.size());
    if (!has_erasures) {
      // uniform weights: closed-form distances on the torus, membrane
      // parities from the wrapped displacement
      FccMetric metric{g.L};
      std::vector<std::vector<int64_t>> cost(k, std::vector<int64_t>(k, kInfWeight));
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          cost[i][j] = cost[j][i] =
              metric.dist(g.check_cell[defect_nodes[i]], g.check_cell[defect_nodes[j]]);
      auto [mate, total] = min_weight_perfect_matching(cost, kInfWeight);
      (void)total;
      for (int i = 0; i < k; ++i) {
        if (mate[i] < i) continue;
        auto par = metric.crossings(g.check_cell[defect_nodes[i]],
                                    g.check_cell[defect_nodes[mate[i]]]);
        for (int a = 0; a < 3; ++a) extra_parity[a] = extra_parity[a] ^ par[a];
      }
      // defects fully paired; flips parity plus chain parities decide failure
      Bits residual = flip_edges;
      std::array<bool, 3> out{};
      for (int a = 0; a < 3; ++a)
        out[a] = membrane_parity(g, residual, a) ^ extra_parity[a];
      return out;
    }

    // general path: Dijkstra over the graph with erased edges free
    DecodingGraph dg;
    dg.num_nodes = g.num_checks;
    dg.boundary.assign(g.num_checks, 0);
    dg.edges.reserve(n_edges);
    for (int f = 0; f < n_edges; ++f) dg.add_edge(g.edge_checks[f][0], g.edge_checks[f][1], 1);
    dg.erased = erased_edges;
    dg.finalize();

    std::vector<ShortestPaths> sps;
    sps.reserve(k);
    for (int d : defect_nodes) sps.push_back(shortest_paths(dg, d, false));
    std::vector<std::vector<int64_t>> cost(k, std::vector<int64_t>(k, kInfWeight));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) cost[i][j] = sps[i].dist[defect_nodes[j]];
    auto [mate, total] = min_weight_perfect_matching(cost, kInfWeight);
    if (total >= kInfWeight) throw std::logic_error("torus defects unmatchable");
    for (int i = 0; i < k; ++i) {
      if (mate[i] < i) continue;
      for (int e : collect_path(dg, sps[i], defect_nodes[mate[i]])) correction.flip(e);
    }
  }

  if (has_erasures) {
    // clear what remains inside the erased clusters
    std::vector<uint8_t> residual_defect = defect;
    for (int f = 0; f < n_edges; ++f)
      if (correction.get(f)) {
        residual_defect[g.edge_checks[f][0]] ^= 1;
        residual_defect[g.edge_checks[f][1]] ^= 1;
      }
    peel_erased(g, erased_edges, residual_defect, correction);
    for (int c = 0; c < g.num_checks; ++c)
      if (residual_defect[c]) throw std::logic_error("peeling left residual defects");
  }

  Bits residual = flip_edges;
  residual ^= correction;
  std::array<bool, 3> out{};
  for (int a = 0; a < 3; ++a) out[a] = membrane_parity(g, residual, a);
  return out;
}

}  // namespace

TrialResult decode_and_check(const SimContext& ctx, const EngineParams& par,
                             const Bits& erased, const Bits& flips, long trial_index) {
  TrialResult res;
  const int n_fusions = ctx.net.num_fusions();
  for (int t = 0; t < 2; ++t) {
    const SyndromeGraph& g = ctx.graph(static_cast<GraphType>(t));
    Bits erased_edges(n_fusions), flip_edges(n_fusions);
    for (int f = 0; f < n_fusions; ++f) {
      if (erased.get(std::size_t(f) * 2 + t)) erased_edges.set(f);
      if (flips.get(std::size_t(f) * 2 + t)) flip_edges.set(f);
    }
    // erased outcomes carry a uniformly random latent value; the decoder
    // sees only the location
    if (erased_edges.any()) {
      Rng rng = Rng::from_stream(par.master_seed, uint64_t(trial_index), kTagLatent,
                                 uint64_t(t), 0);
      for (int f = 0; f < n_fusions; ++f)
        if (erased_edges.get(f) && rng.bernoulli(0.5)) flip_edges.flip(f);
    }
    res.failed[t] = decode_one_graph(g, erased_edges, flip_edges);
  }
  return res;
}

TrialResult run_trial(const SimContext& ctx, const EngineParams& par, long trial_index) {
  par.model.validate();
  if (par.M < 1) throw std::invalid_argument("macromux parameter M must be >= 1");
  if (ctx.views.empty()) throw std::logic_error("SimContext built without brick views");

  const int n_outcomes = ctx.net.num_outcomes();
  const int S = ctx.dicing.num_stages();
  Bits global_erased(n_outcomes), global_flips(n_outcomes);
  TrialResult res;

  if (par.ideal_bricks) {
    if (par.M != 1)
      throw std::invalid_argument("ideal_bricks emulates the M -> infinity limit; set M = 1");
    for (int bi = 0; bi < int(ctx.dicing.bricks[S - 1].size()); ++bi) {
      Rng rng = Rng::from_stream(par.master_seed, uint64_t(trial_index), kTagIdeal,
                                 uint64_t(bi), 0);
      auto [copy, attempts] = sample_ideal_brick(ctx, par, bi, rng);
      (void)attempts;
      global_erased |= copy.erased;
      global_flips |= copy.flips;
    }
  } else {
    // stage 0: M empty copies per resource state
    std::vector<std::vector<BrickCopy>> copies(ctx.dicing.bricks[0].size());
    for (auto& v : copies) {
      v.reserve(par.M);
      for (int i = 0; i < par.M; ++i)
        v.push_back({Bits(n_outcomes), Bits(n_outcomes)});
    }
    for (int s = 1; s < S; ++s) {
      run_stage(ctx, par, s, copies, trial_index);
      if (par.collect_diagnostics) {
        StageDiag d;
        d.stage = s;
        double n = 0;
        for (int bi = 0; bi < int(copies.size()); ++bi)
          for (const auto& c : copies[bi]) {
            d.mean_erasures += double(c.erased.count());
            d.mean_flips += double(c.flips.count());
            d.mean_score += score_copy(ctx, par, ctx.views[s][bi], c).value;
            n += 1;
          }
        if (n > 0) {
          d.mean_erasures /= n;
          d.mean_flips /= n;
          d.mean_score /= n;
        }
        res.diagnostics.push_back(d);
      }
    }
    // final selection: best copy per max brick
    for (int bi = 0; bi < int(copies.size()); ++bi) {
      int best = 0;
      if (par.M > 1) {
        std::vector<Score> scores(par.M);
        for (int i = 0; i < par.M; ++i)
          scores[i] = score_copy(ctx, par, ctx.views[S - 1][bi], copies[bi][i]);
        best = rank_copies(scores)[0];
      }
      global_erased |= copies[bi][best].erased;
      global_flips |= copies[bi][best].flips;
    }
  }

  // remaining inter-brick fusions
  Rng rng = Rng::from_stream(par.master_seed, uint64_t(trial_index), kTagFinal, 0, 0);
  sample_outcome_errors(rng, ctx.final_outcomes, par.model, global_erased, global_flips);

  TrialResult decoded = decode_and_check(ctx, par, global_erased, global_flips, trial_index);
  decoded.diagnostics = std::move(res.diagnostics);
  return decoded;
}

TrialResult monolithic_trial(const SimContext& ctx, const EngineParams& par, long trial_index) {
  par.model.validate();
  const int n_outcomes = ctx.net.num_outcomes();
  Bits erased(n_outcomes), flips(n_outcomes);
  Rng rng = Rng::from_stream(par.master_seed, uint64_t(trial_index), kTagMono, 0, 0);
  for (int o = 0; o < n_outcomes; ++o) {
    if (rng.bernoulli(par.model.p_e)) {
      erased.set(o);
    } else if (rng.bernoulli(par.model.p_p)) {
      flips.set(o);
    }
  }
  return decode_and_check(ctx, par, erased, flips, trial_index);
}

}  // namespace macromux
