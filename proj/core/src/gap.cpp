#include "macromux/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace macromux {

double GapResult::frozen_delta() const {
  if (infinite()) return std::numeric_limits<double>::infinity();
  return std::max(double(delta) - phi * double(freeze_weight), 0.0);
}

BrickProblem make_brick_problem(const BrickView& view, GraphType type, const Bits& erased,
                                const Bits& flips) {
  const int t = type_index(type);
  const BrickTypeView& tv = view.type_view[t];
  BrickProblem p;
  const int n_checks = int(tv.complete_checks.size());
  for (int i = 0; i < n_checks; ++i) p.graph.add_node(false);
  for (int f = 0; f < 6; ++f) p.face_node[f] = p.graph.add_node(true);

  std::vector<uint8_t> defect(n_checks, 0);
  auto outcome = [&](int fusion) { return std::size_t(fusion) * 2 + t; };

  for (const auto& [fusion, lu, lv] : tv.edges) {
    p.graph.add_edge(lu, lv, 1);
    p.edge_fusion.push_back(fusion);
    if (!erased.get(outcome(fusion)) && flips.get(outcome(fusion))) {
      defect[lu] ^= 1;
      defect[lv] ^= 1;
    }
  }
  for (const auto& [fusion, lc, face] : tv.half_edges) {
    p.graph.add_edge(lc, p.face_node[face], 1);
    p.edge_fusion.push_back(fusion);
    if (!erased.get(outcome(fusion)) && flips.get(outcome(fusion))) defect[lc] ^= 1;
  }
  p.graph.erased = Bits(p.graph.edges.size());
  for (int e = 0; e < int(p.graph.edges.size()); ++e)
    if (erased.get(outcome(p.edge_fusion[e]))) p.graph.erased.set(e);
  p.graph.finalize();

  for (int i = 0; i < n_checks; ++i)
    if (defect[i]) p.defects.push_back(i);
  return p;
}

int64_t logical_gap(const DecodingGraph& g, const std::vector<int>& defects, int gap_u,
                    int gap_v) {
  if (gap_u == gap_v) throw std::invalid_argument("gap pseudo-nodes must be distinct");
  // the sector pins the crossing parity at gap_u; every other pseudo-node
  // (including gap_v) absorbs freely
  std::vector<int> absorbing;
  for (int v = 0; v < g.num_nodes; ++v)
    if (g.boundary[v] && v != gap_u) absorbing.push_back(v);
  if (std::find(absorbing.begin(), absorbing.end(), gap_v) == absorbing.end())
    absorbing.push_back(gap_v);
  auto solve = [&](int s) {
    std::vector<int> t = defects;
    if (s) t.push_back(gap_u);
    return min_tjoin(g, t, absorbing).total_weight;
  };
  int64_t w0 = solve(0), w1 = solve(1);
  if (w0 >= kInfWeight || w1 >= kInfWeight) return kInfWeight;
  return std::abs(w0 - w1);
}

GapResult frozen_gap(const BrickProblem& p, GapBoundarySpec spec, double phi) {
  GapResult res;
  res.phi = phi;
  const auto gap = spec.gap_faces();
  std::array<bool, 6> is_freeze{};
  for (int f = 0; f < 6; ++f) is_freeze[f] = (f != gap[0] && f != gap[1]);

  std::vector<int> remaining = p.defects;
  if (!p.defects.empty()) {
    const int k = int(p.defects.size());
    std::vector<ShortestPaths> sps;
    sps.reserve(k);
    for (int d : p.defects)
      sps.push_back(shortest_paths(p.graph, d, /*terminal_boundaries=*/true));

    // per defect: best face under (distance, freeze-contribution, priority)
    struct FaceChoice {
      int64_t dist = kInfWeight;
      int face = -1;
    };
    std::vector<FaceChoice> choice(k);
    for (int i = 0; i < k; ++i) {
      for (int f = 0; f < 6; ++f) {
        int64_t d = sps[i].dist[p.face_node[f]];
        if (d >= kInfWeight) continue;
        int64_t cur = choice[i].dist;
        bool better = d < cur;
        if (!better && d == cur && choice[i].face >= 0)
          better = !is_freeze[f] && is_freeze[choice[i].face];
        if (better || choice[i].face < 0) choice[i] = {d, f};
      }
    }

    // lexicographic (total weight, freeze weight) via scaled costs
    int64_t d_max = 1;
    for (int i = 0; i < k; ++i)
      if (choice[i].dist < kInfWeight) d_max = std::max(d_max, choice[i].dist);
    const int64_t scale = d_max * k + 1;

    const int n = 2 * k;
    std::vector<std::vector<int64_t>> cost(n, std::vector<int64_t>(n, kInfWeight));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j && sps[i].dist[p.defects[j]] < kInfWeight)
          cost[i][j] = sps[i].dist[p.defects[j]] * scale;
    for (int i = 0; i < k; ++i) {
      if (choice[i].face >= 0)
        cost[i][k + i] = cost[k + i][i] =
            choice[i].dist * scale + (is_freeze[choice[i].face] ? choice[i].dist : 0);
      for (int j = 0; j < k; ++j)
        if (i != j) cost[k + i][k + j] = 0;
    }
    auto [mate, total] = min_weight_perfect_matching(cost, kInfWeight);
    if (total >= kInfWeight) throw std::runtime_error("freezing matching infeasible");

    remaining.clear();
    for (int i = 0; i < k; ++i) {
      if (mate[i] == k + i && is_freeze[choice[i].face]) {
        res.freeze_weight += choice[i].dist;  // frozen out
      } else {
        remaining.push_back(p.defects[i]);
      }
    }
  }

  // step 2: drop the freeze boundaries and measure the gap between the faces
  DecodingGraph g2;
  g2.num_nodes = p.graph.num_nodes;
  g2.boundary = p.graph.boundary;
  std::vector<int> keep;
  for (int e = 0; e < int(p.graph.edges.size()); ++e) {
    const auto& ed = p.graph.edges[e];
    bool touches_freeze = false;
    for (int f = 0; f < 6; ++f)
      if (is_freeze[f] && (ed.u == p.face_node[f] || ed.v == p.face_node[f]))
        touches_freeze = true;
    if (!touches_freeze) keep.push_back(e);
  }
  g2.erased = Bits(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    g2.edges.push_back(p.graph.edges[keep[i]]);
    if (p.graph.erased.get(keep[i])) g2.erased.set(i);
  }
  g2.finalize();

  res.delta = logical_gap(g2, remaining, p.face_node[gap[0]], p.face_node[gap[1]]);
  return res;
}

SectorWeights sector_weights(const AugmentedTannerGraph& atg,
                             const std::vector<uint8_t>& syndrome) {
  const int m = atg.num_checks, n = atg.num_outcomes, k = int(atg.membranes.size());
  if (n > 20) throw std::invalid_argument("sector_weights capped at 20 outcomes");
  if (k > 4) throw std::invalid_argument("sector_weights capped at 4 membranes");
  if (m + k > 63) throw std::invalid_argument("too many checks");
  if (int(syndrome.size()) != m) throw std::invalid_argument("syndrome size mismatch");

  std::vector<uint64_t> mask(n, 0);
  for (int o = 0; o < n; ++o)
    for (int c : atg.outcome_checks[o]) mask[o] ^= uint64_t(1) << c;
  for (int i = 0; i < k; ++i)
    for (int o : atg.membranes[i]) mask[o] ^= uint64_t(1) << (m + i);

  uint64_t syn_mask = 0;
  for (int c = 0; c < m; ++c)
    if (syndrome[c]) syn_mask |= uint64_t(1) << c;
  const uint64_t check_bits = (uint64_t(1) << m) - 1;

  auto weight_of = [&](int o) -> int64_t {
    return atg.outcome_weight.empty() ? 1 : atg.outcome_weight[o];
  };

  SectorWeights sw;
  sw.k = k;
  sw.w.assign(std::size_t(1) << k, kInfWeight);

  uint64_t par = 0;
  int64_t wsum = 0;
  uint32_t gray = 0;
  auto consider = [&]() {
    if ((par & check_bits) != syn_mask) return;
    uint64_t sector = par >> m;
    if (wsum < sw.w[sector]) sw.w[sector] = wsum;
  };
  consider();
  for (uint64_t i = 1; i < (uint64_t(1) << n); ++i) {
    uint32_t ng = uint32_t(i ^ (i >> 1));
    int bit = std::countr_zero(gray ^ ng);
    bool added = (ng >> bit) & 1;
    par ^= mask[bit];
    wsum += (added ? 1 : -1) * weight_of(bit);
    gray = ng;
    consider();
  }
  return sw;
}

int64_t sector_gap(const SectorWeights& sw, int i) {
  if (i < 0 || i >= sw.k) throw std::invalid_argument("membrane index out of range");
  std::size_t l_min = 0;
  for (std::size_t l = 1; l < sw.w.size(); ++l)
    if (sw.w[l] < sw.w[l_min]) l_min = l;
  if (sw.w[l_min] >= kInfWeight) return kInfWeight;
  int64_t best = kInfWeight;
  for (std::size_t l = 0; l < sw.w.size(); ++l)
    if (((l ^ l_min) >> i) & 1) best = std::min(best, sw.w[l]);
  if (best >= kInfWeight) return kInfWeight;
  return std::abs(sw.w[l_min] - best);
}

}  // namespace macromux
