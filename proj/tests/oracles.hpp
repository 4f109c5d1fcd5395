#pragma once

// Test-only brute-force oracles, kept independent of the library's matching
// and gap code paths (Floyd-Warshall distances, exhaustive enumerations).

#include <algorithm>
#include <set>
#include <vector>

#include "macromux/gap.hpp"
#include "macromux/matching.hpp"

namespace oracle {

using macromux::BrickProblem;
using macromux::DecodingGraph;
using macromux::GapBoundarySpec;
using macromux::kInfWeight;

// Minimum weight over all edge subsets whose boundary equals `t_set`
// exactly on non-absorbing nodes; absorbing nodes take any parity.
inline int64_t tjoin_brute(const DecodingGraph& g, const std::vector<int>& t_set,
                           const std::vector<int>& absorbing = {}) {
  const int m = int(g.edges.size());
  if (m > 24) throw std::logic_error("tjoin_brute capped at 24 edges");
  std::vector<uint64_t> emask(m);
  for (int e = 0; e < m; ++e)
    emask[e] = (uint64_t(1) << g.edges[e].u) ^ (uint64_t(1) << g.edges[e].v);
  uint64_t care = ~uint64_t(0);
  for (int b : absorbing) care &= ~(uint64_t(1) << b);
  uint64_t target = 0;
  for (int t : t_set) target ^= uint64_t(1) << t;
  int64_t best = kInfWeight;
  for (uint64_t s = 0; s < (uint64_t(1) << m); ++s) {
    uint64_t par = 0;
    int64_t w = 0;
    for (int e = 0; e < m; ++e)
      if ((s >> e) & 1) {
        par ^= emask[e];
        w += g.erased.get(e) ? 0 : g.edges[e].weight;
      }
    if ((par & care) == (target & care)) best = std::min(best, w);
  }
  return best;
}

// |w0 - w1| with the crossing parity pinned at gap_u, by subset enumeration;
// every other pseudo-node absorbs freely.
inline int64_t logical_gap_brute(const DecodingGraph& g, const std::vector<int>& defects,
                                 int gap_u, int gap_v) {
  std::vector<int> absorbing;
  for (int v = 0; v < g.num_nodes; ++v)
    if (g.boundary[v] && v != gap_u) absorbing.push_back(v);
  if (std::find(absorbing.begin(), absorbing.end(), gap_v) == absorbing.end())
    absorbing.push_back(gap_v);
  auto solve = [&](int s) {
    std::vector<int> t = defects;
    if (s) t.push_back(gap_u);
    return tjoin_brute(g, t, absorbing);
  };
  int64_t w0 = solve(0), w1 = solve(1);
  if (w0 >= kInfWeight || w1 >= kInfWeight) return kInfWeight;
  return std::abs(w0 - w1);
}

// All-pairs shortest paths among check nodes with pseudo-nodes excluded as
// intermediates (segment semantics), erased edges free.
struct BruteDists {
  std::vector<std::vector<int64_t>> check;              // check x check
  std::vector<std::array<int64_t, 6>> to_face;          // check x face
};

inline BruteDists brute_dists(const BrickProblem& p) {
  const int n = p.graph.num_nodes;
  std::vector<uint8_t> is_face(n, 0);
  for (int f : p.face_node) is_face[f] = 1;
  BruteDists d;
  d.check.assign(n, std::vector<int64_t>(n, kInfWeight));
  for (int v = 0; v < n; ++v) d.check[v][v] = 0;
  for (int e = 0; e < int(p.graph.edges.size()); ++e) {
    int u = p.graph.edges[e].u, v = p.graph.edges[e].v;
    if (is_face[u] || is_face[v]) continue;
    int64_t w = p.graph.erased.get(e) ? 0 : p.graph.edges[e].weight;
    d.check[u][v] = std::min(d.check[u][v], w);
    d.check[v][u] = std::min(d.check[v][u], w);
  }
  for (int k = 0; k < n; ++k) {
    if (is_face[k]) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d.check[i][k] < kInfWeight && d.check[k][j] < kInfWeight)
          d.check[i][j] = std::min(d.check[i][j], d.check[i][k] + d.check[k][j]);
  }
  d.to_face.assign(n, {kInfWeight, kInfWeight, kInfWeight, kInfWeight, kInfWeight, kInfWeight});
  for (int e = 0; e < int(p.graph.edges.size()); ++e) {
    int u = p.graph.edges[e].u, v = p.graph.edges[e].v;
    int face = -1, check = -1;
    for (int fi = 0; fi < 6; ++fi) {
      if (u == p.face_node[fi]) { face = fi; check = v; }
      if (v == p.face_node[fi]) { face = fi; check = u; }
    }
    if (face < 0 || is_face[check]) continue;
    int64_t w = p.graph.erased.get(e) ? 0 : p.graph.edges[e].weight;
    for (int c = 0; c < n; ++c)
      if (!is_face[c] && d.check[c][check] < kInfWeight)
        d.to_face[c][face] = std::min(d.to_face[c][face], d.check[c][check] + w);
  }
  return d;
}

// Exhaustive step-1 freezing enumeration under the lexicographic
// (total weight, freeze weight) objective. Returns the optimal (W, w) and
// the set of post-freeze defect sets among optimal pairings.
struct FreezeBrute {
  int64_t total = kInfWeight;
  int64_t freeze = kInfWeight;
  std::set<std::vector<int>> remainders;
};

inline void freeze_rec(const BrickProblem& p, const BruteDists& d, GapBoundarySpec spec,
                       std::vector<int>& pending, std::vector<int>& remaining, int64_t W,
                       int64_t w, FreezeBrute& out) {
  if (pending.empty()) {
    auto key = remaining;
    std::sort(key.begin(), key.end());
    if (std::pair(W, w) < std::pair(out.total, out.freeze)) {
      out.total = W;
      out.freeze = w;
      out.remainders = {key};
    } else if (W == out.total && w == out.freeze) {
      out.remainders.insert(key);
    }
    return;
  }
  auto gap = spec.gap_faces();
  int a = pending.back();
  pending.pop_back();
  // pair with a later defect
  for (std::size_t i = 0; i < pending.size(); ++i) {
    int b = pending[i];
    if (d.check[a][b] < kInfWeight) {
      std::vector<int> rest = pending;
      rest.erase(rest.begin() + i);
      remaining.push_back(a);
      remaining.push_back(b);
      std::vector<int> saved = pending;
      pending = rest;
      freeze_rec(p, d, spec, pending, remaining, W + d.check[a][b], w, out);
      pending = saved;
      remaining.pop_back();
      remaining.pop_back();
    }
  }
  // absorb at a face
  for (int face = 0; face < 6; ++face) {
    if (d.to_face[a][face] >= kInfWeight) continue;
    bool freezes = face != gap[0] && face != gap[1];
    if (freezes) {
      freeze_rec(p, d, spec, pending, remaining, W + d.to_face[a][face],
                 w + d.to_face[a][face], out);
    } else {
      remaining.push_back(a);
      freeze_rec(p, d, spec, pending, remaining, W + d.to_face[a][face], w, out);
      remaining.pop_back();
    }
  }
  pending.push_back(a);
}

struct FrozenGapBrute {
  int64_t freeze_weight = 0;
  std::set<int64_t> deltas;  // over optimal step-1 decompositions
};

inline FrozenGapBrute frozen_gap_brute(const BrickProblem& p, GapBoundarySpec spec) {
  FrozenGapBrute out;
  FreezeBrute fb;
  if (p.defects.empty()) {
    fb.total = fb.freeze = 0;
    fb.remainders = {{}};
  } else {
    std::vector<int> pending = p.defects, remaining;
    freeze_rec(p, brute_dists(p), spec, pending, remaining, 0, 0, fb);
    if (fb.total >= kInfWeight) throw std::logic_error("oracle: freezing infeasible");
  }
  out.freeze_weight = fb.freeze;

  // step 2 on the freeze-stripped graph, by subset enumeration
  auto gap = spec.gap_faces();
  DecodingGraph g2;
  g2.num_nodes = p.graph.num_nodes;
  g2.boundary = p.graph.boundary;
  std::vector<int64_t> weights;
  std::vector<int> kept;
  for (int e = 0; e < int(p.graph.edges.size()); ++e) {
    const auto& ed = p.graph.edges[e];
    bool freeze_face = false;
    for (int fi = 0; fi < 6; ++fi)
      if (fi != gap[0] && fi != gap[1] &&
          (ed.u == p.face_node[fi] || ed.v == p.face_node[fi]))
        freeze_face = true;
    if (!freeze_face) kept.push_back(e);
  }
  g2.erased = macromux::Bits(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    g2.edges.push_back(p.graph.edges[kept[i]]);
    if (p.graph.erased.get(kept[i])) g2.erased.set(i);
  }
  g2.finalize();
  for (const auto& rem : fb.remainders)
    out.deltas.insert(
        logical_gap_brute(g2, rem, p.face_node[gap[0]], p.face_node[gap[1]]));
  return out;
}

}  // namespace oracle
