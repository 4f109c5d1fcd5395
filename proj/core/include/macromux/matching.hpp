#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "macromux/bits.hpp"

namespace macromux {

// Weight sentinel for unreachable pairs / infeasible problems. Weights are
// integral throughout the decoding stack (unit i.i.d. edges, erased = 0).
inline constexpr int64_t kInfWeight = int64_t(1) << 56;

// A syndrome (sub)graph prepared for decoding: check nodes plus optional
// absorbing boundary pseudo-nodes, weighted edges, erasure flags.
struct DecodingGraph {
  struct Edge {
    int u = 0, v = 0;
    int64_t weight = 1;
  };

  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<uint8_t> boundary;  // per node, absorbing pseudo-node flag
  Bits erased;                    // per edge; erased edges decode at weight 0

  int add_node(bool is_boundary = false) {
    boundary.push_back(is_boundary ? 1 : 0);
    return num_nodes++;
  }
  int add_edge(int u, int v, int64_t weight = 1) {
    edges.push_back({u, v, weight});
    return int(edges.size()) - 1;
  }
  void finalize();  // sizes `erased` (if empty) and builds adjacency

  int64_t effective_weight(int e) const { return erased.get(e) ? 0 : edges[e].weight; }

  // built by finalize(): node -> (edge index, neighbour)
  std::vector<std::vector<std::pair<int, int>>> adj;
};

struct Correction {
  std::vector<int> edges;
  int64_t total_weight = 0;
};

// Minimum-weight correction whose syndrome equals `defects` on non-boundary
// nodes; boundary pseudo-nodes absorb any parity. Exact (blossom matching
// over all-pairs shortest paths). Throws if the defect set is odd with no
// boundary present, or infeasible (disconnected).
Correction min_weight_correction(const DecodingGraph& g, const std::vector<int>& defects);

// Exhaustive oracle over all 2^|edges| subsets; |edges| <= 24.
Correction brute_force_correction(const DecodingGraph& g, const std::vector<int>& defects);

struct MergeResult {
  DecodingGraph graph;        // erased components contracted, erased edges dropped
  std::vector<int> node_map;  // original node -> merged node
  std::vector<int> defects;   // parity-folded defects on merged nodes
};

MergeResult merge_erased(const DecodingGraph& g, const std::vector<int>& defects);

// --- lower-level pieces shared with the gap module -------------------------

// Deterministic Dijkstra from `source` with erased edges at weight 0.
// Ties break by hop count, then lexicographic predecessor edge index.
// If `terminal_boundaries`, paths may end at boundary nodes but not pass
// through them (first-pseudo-node termination).
struct ShortestPaths {
  std::vector<int64_t> dist;  // kInfWeight when unreachable
  std::vector<int> hops;
  std::vector<int> pred_edge;  // -1 at source / unreached
};
ShortestPaths shortest_paths(const DecodingGraph& g, int source, bool terminal_boundaries);

std::vector<int> collect_path(const DecodingGraph& g, const ShortestPaths& sp, int target);

// Minimum-weight generalized T-join: edge set with odd degree exactly at T,
// even degree elsewhere, except that nodes in `absorbing` may take any
// parity. Boundary flags on the graph are ignored; callers pin or free
// pseudo-nodes explicitly. Returns kInfWeight total on infeasibility.
Correction min_tjoin(const DecodingGraph& g, const std::vector<int>& t_set,
                     const std::vector<int>& absorbing = {});

// Exact minimum-weight perfect matching on a complete cost matrix.
// cost[i][j] >= infeasible_cost marks a forbidden pair; returns
// (mates, total) with total == infeasible_cost if no feasible matching.
std::pair<std::vector<int>, int64_t> min_weight_perfect_matching(
    const std::vector<std::vector<int64_t>>& cost, int64_t infeasible_cost = kInfWeight);

namespace detail {
std::pair<std::vector<int>, int64_t> max_weight_perfect_matching(
    const std::vector<std::vector<int64_t>>& w);
}

}  // namespace macromux
