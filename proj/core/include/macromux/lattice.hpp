#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "macromux/bits.hpp"

namespace macromux {

enum class GraphType : int { primal = 0, dual = 1 };

inline int type_index(GraphType t) { return static_cast<int>(t); }

using Coord = std::array<int, 3>;

// The 6-ring fusion network on a 3-torus: one resource state per integer
// lattice site, one fusion per lattice edge. Each fusion carries a primal
// and a dual outcome, indexed as fusion * 2 + type.
class FusionNetwork {
 public:
  explicit FusionNetwork(int L);

  int L() const { return L_; }
  int num_states() const { return L_ * L_ * L_; }
  int num_fusions() const { return 3 * num_states(); }
  int num_outcomes() const { return 2 * num_fusions(); }

  int state_index(int x, int y, int z) const { return (x * L_ + y) * L_ + z; }
  Coord state_coord(int s) const { return {s / (L_ * L_), (s / L_) % L_, s % L_}; }

  // fusions ordered lexicographically by (x, y, z, axis)
  int fusion_index(int x, int y, int z, int axis) const {
    return state_index(x, y, z) * 3 + axis;
  }
  int fusion_axis(int f) const { return f % 3; }
  Coord fusion_base(int f) const { return state_coord(f / 3); }
  std::pair<int, int> fusion_endpoints(int f) const;

  int outcome_index(int fusion, GraphType t) const { return fusion * 2 + type_index(t); }

 private:
  int L_;
};

FusionNetwork build_six_ring_network(int L);

// One of the two check graphs: nodes are weight-12 checks at unit cells of
// one checkerboard class (primal = even parity), edges are the outcomes of
// this type, one per fusion. Edge index == fusion index.
struct SyndromeGraph {
  GraphType type;
  int L = 0;
  int num_checks = 0;

  std::vector<std::array<int, 2>> edge_checks;    // per fusion: the two incident checks
  std::vector<std::array<int, 12>> check_edges;   // per check: its 12 fusion edges
  std::vector<Coord> check_cell;                  // per check: cell min corner
  std::array<Bits, 3> membranes;                  // per axis: edge set, indexed by fusion

  int num_edges() const { return static_cast<int>(edge_checks.size()); }

  // cell (min corner) -> check id; the cell must have this graph's parity
  int check_of_cell(int cx, int cy, int cz) const;
};

std::pair<SyndromeGraph, SyndromeGraph> build_syndrome_graphs(const FusionNetwork& net);

// Per-check parity of flipped incident edges. `flips` is indexed by fusion.
std::vector<uint8_t> syndrome_of(const SyndromeGraph& g, const Bits& flips);

// Crossing parity of an edge set with the axis membrane.
bool membrane_parity(const SyndromeGraph& g, const Bits& edges, int axis);

}  // namespace macromux
