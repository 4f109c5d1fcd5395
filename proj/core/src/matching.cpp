#include "macromux/matching.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace macromux {

void DecodingGraph::finalize() {
  if (erased.size() != edges.size()) erased = Bits(edges.size());
  adj.assign(num_nodes, {});
  for (int e = 0; e < int(edges.size()); ++e) {
    adj[edges[e].u].push_back({e, edges[e].v});
    adj[edges[e].v].push_back({e, edges[e].u});
  }
}

ShortestPaths shortest_paths(const DecodingGraph& g, int source, bool terminal_boundaries) {
  ShortestPaths sp;
  sp.dist.assign(g.num_nodes, kInfWeight);
  sp.hops.assign(g.num_nodes, 0);
  sp.pred_edge.assign(g.num_nodes, -1);
  // key: (dist, hops, pred edge) for deterministic tie-breaking
  using Key = std::tuple<int64_t, int, int, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  sp.dist[source] = 0;
  pq.push({0, 0, -1, source});
  while (!pq.empty()) {
    auto [d, h, pe, u] = pq.top();
    pq.pop();
    if (d != sp.dist[u] || h != sp.hops[u] || pe != sp.pred_edge[u]) continue;
    if (terminal_boundaries && g.boundary[u] && u != source) continue;
    for (auto [e, v] : g.adj[u]) {
      int64_t nd = d + g.effective_weight(e);
      int nh = h + 1;
      if (nd < sp.dist[v] || (nd == sp.dist[v] && (nh < sp.hops[v] ||
          (nh == sp.hops[v] && e < sp.pred_edge[v])))) {
        sp.dist[v] = nd;
        sp.hops[v] = nh;
        sp.pred_edge[v] = e;
        pq.push({nd, nh, e, v});
      }
    }
  }
  return sp;
}

std::vector<int> collect_path(const DecodingGraph& g, const ShortestPaths& sp, int target) {
  std::vector<int> out;
  int u = target;
  while (sp.pred_edge[u] != -1) {
    int e = sp.pred_edge[u];
    out.push_back(e);
    u = g.edges[e].u == u ? g.edges[e].v : g.edges[e].u;
  }
  return out;
}

Correction min_tjoin(const DecodingGraph& g, const std::vector<int>& t_set,
                     const std::vector<int>& absorbing) {
  Correction c;
  if (t_set.empty()) return c;
  if (t_set.size() % 2 != 0 && absorbing.empty()) {
    c.total_weight = kInfWeight;
    return c;
  }

  const int k = int(t_set.size());
  std::vector<ShortestPaths> sps;
  sps.reserve(k);
  for (int t : t_set) sps.push_back(shortest_paths(g, t, /*terminal_boundaries=*/false));

  // best absorption per terminal, when allowed
  std::vector<int64_t> adist(k, kInfWeight);
  std::vector<int> anode(k, -1);
  for (int i = 0; i < k; ++i)
    for (int b : absorbing)
      if (sps[i].dist[b] < adist[i]) {
        adist[i] = sps[i].dist[b];
        anode[i] = b;
      }

  const bool with_twins = !absorbing.empty();
  const int n = with_twins ? 2 * k : k;
  std::vector<std::vector<int64_t>> cost(n, std::vector<int64_t>(n, kInfWeight));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) cost[i][j] = sps[i].dist[t_set[j]];
  if (with_twins) {
    for (int i = 0; i < k; ++i) cost[i][k + i] = cost[k + i][i] = adist[i];
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) cost[k + i][k + j] = 0;
  }

  auto [mate, total] = min_weight_perfect_matching(cost, kInfWeight);
  if (total >= kInfWeight) {
    c.total_weight = kInfWeight;
    return c;
  }

  Bits used(g.edges.size());
  for (int i = 0; i < k; ++i) {
    if (mate[i] < k) {
      if (mate[i] < i) continue;
      for (int e : collect_path(g, sps[i], t_set[mate[i]])) used.flip(e);
    } else if (mate[i] == k + i) {
      for (int e : collect_path(g, sps[i], anode[i])) used.flip(e);
    }
  }
  for (int e = 0; e < int(g.edges.size()); ++e)
    if (used.get(e)) {
      c.edges.push_back(e);
      c.total_weight += g.effective_weight(e);
    }
  return c;
}

Correction min_weight_correction(const DecodingGraph& g, const std::vector<int>& defects) {
  for (int d : defects)
    if (g.boundary[d]) throw std::invalid_argument("defect placed on a boundary pseudo-node");

  bool has_boundary = std::find(g.boundary.begin(), g.boundary.end(), 1) != g.boundary.end();
  if (defects.size() % 2 != 0 && !has_boundary)
    throw std::invalid_argument("odd defect count with no boundary pseudo-node");
  Correction c;
  if (defects.empty()) return c;

  const int k = int(defects.size());
  std::vector<ShortestPaths> sps;
  sps.reserve(k);
  for (int d : defects) sps.push_back(shortest_paths(g, d, /*terminal_boundaries=*/false));

  // best boundary absorption per defect
  std::vector<int64_t> bdist(k, kInfWeight);
  std::vector<int> bnode(k, -1);
  for (int i = 0; i < k; ++i)
    for (int v = 0; v < g.num_nodes; ++v)
      if (g.boundary[v] && sps[i].dist[v] < bdist[i]) {
        bdist[i] = sps[i].dist[v];
        bnode[i] = v;
      }

  // matching over defects plus one virtual boundary twin per defect
  const int n = has_boundary ? 2 * k : k;
  std::vector<std::vector<int64_t>> cost(n, std::vector<int64_t>(n, kInfWeight));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) cost[i][j] = sps[i].dist[defects[j]];
  if (has_boundary) {
    for (int i = 0; i < k; ++i) cost[i][k + i] = cost[k + i][i] = bdist[i];
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) cost[k + i][k + j] = 0;
  }

  auto [mate, total] = min_weight_perfect_matching(cost, kInfWeight);
  if (total >= kInfWeight) throw std::runtime_error("defects not matchable (disconnected graph)");

  Bits used(g.edges.size());
  for (int i = 0; i < k; ++i) {
    if (mate[i] < k) {  // defect-defect pair
      if (mate[i] < i) continue;
      for (int e : collect_path(g, sps[i], defects[mate[i]])) used.flip(e);
    } else if (mate[i] == k + i) {  // absorbed at the boundary
      for (int e : collect_path(g, sps[i], bnode[i])) used.flip(e);
    }
  }
  for (int e = 0; e < int(g.edges.size()); ++e)
    if (used.get(e)) {
      c.edges.push_back(e);
      c.total_weight += g.effective_weight(e);
    }
  return c;
}

Correction brute_force_correction(const DecodingGraph& g, const std::vector<int>& defects) {
  const int m = int(g.edges.size());
  if (m > 24) throw std::invalid_argument("brute-force correction capped at 24 edges");
  if (g.num_nodes > 63) throw std::invalid_argument("brute-force correction capped at 63 nodes");

  uint64_t target = 0, node_mask = 0;
  for (int v = 0; v < g.num_nodes; ++v)
    if (!g.boundary[v]) node_mask |= uint64_t(1) << v;
  for (int d : defects) {
    if (g.boundary[d]) throw std::invalid_argument("defect placed on a boundary pseudo-node");
    target ^= uint64_t(1) << d;
  }

  std::vector<uint64_t> emask(m);
  for (int e = 0; e < m; ++e)
    emask[e] = (uint64_t(1) << g.edges[e].u) ^ (uint64_t(1) << g.edges[e].v);

  int64_t best_w = kInfWeight;
  uint32_t best_set = 0;
  uint64_t par = 0;
  int64_t w = 0;
  uint32_t gray = 0;
  // Gray-code walk over all subsets
  for (uint64_t i = 1; i < (uint64_t(1) << m); ++i) {
    uint32_t ng = uint32_t(i ^ (i >> 1));
    int bit = std::countr_zero(uint32_t(gray ^ ng));
    bool added = (ng >> bit) & 1;
    par ^= emask[bit];
    w += (added ? 1 : -1) * g.effective_weight(bit);
    gray = ng;
    if ((par & node_mask) == target && w < best_w) {
      best_w = w;
      best_set = gray;
    }
  }
  if ((0 & node_mask) == target && 0 < best_w) {  // empty set
    best_w = 0;
    best_set = 0;
  }
  if (best_w >= kInfWeight) throw std::runtime_error("no subset satisfies the defect condition");

  Correction c;
  c.total_weight = best_w;
  for (int e = 0; e < m; ++e)
    if ((best_set >> e) & 1) c.edges.push_back(e);
  return c;
}

MergeResult merge_erased(const DecodingGraph& g, const std::vector<int>& defects) {
  std::vector<int> parent(g.num_nodes);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> find_stack;
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int e = 0; e < int(g.edges.size()); ++e)
    if (g.erased.get(e)) {
      int a = find(g.edges[e].u), b = find(g.edges[e].v);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

  MergeResult out;
  out.node_map.assign(g.num_nodes, -1);
  std::vector<uint8_t> merged_boundary;
  for (int v = 0; v < g.num_nodes; ++v) {
    int r = find(v);
    if (out.node_map[r] == -1) {
      out.node_map[r] = out.graph.add_node(false);
      merged_boundary.push_back(0);
    }
    out.node_map[v] = out.node_map[r];
    if (g.boundary[v]) merged_boundary[out.node_map[v]] = 1;
  }
  for (int v = 0; v < out.graph.num_nodes; ++v) out.graph.boundary[v] = merged_boundary[v];

  for (int e = 0; e < int(g.edges.size()); ++e) {
    if (g.erased.get(e)) continue;
    int u = out.node_map[g.edges[e].u], v = out.node_map[g.edges[e].v];
    out.graph.add_edge(u, v, g.edges[e].weight);
  }
  out.graph.finalize();

  std::vector<uint8_t> par(out.graph.num_nodes, 0);
  for (int d : defects) par[out.node_map[d]] ^= 1;
  for (int v = 0; v < out.graph.num_nodes; ++v)
    if (par[v] && !out.graph.boundary[v]) out.defects.push_back(v);
  return out;
}

}  // namespace macromux
