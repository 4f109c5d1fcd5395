#include "macromux/lattice.hpp"

#include <stdexcept>
#include <string>

namespace macromux {

namespace {

int floor_mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

int cell_parity(int cx, int cy, int cz) { return (cx + cy + cz) & 1; }

// The four unit cells containing a given lattice edge.
std::array<Coord, 4> edge_cells(int L, Coord base, int axis) {
  std::array<Coord, 4> out;
  int k = 0;
  for (int d1 = 0; d1 <= 1; ++d1) {
    for (int d2 = 0; d2 <= 1; ++d2) {
      Coord c = base;
      int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      c[a1] = floor_mod(c[a1] - d1, L);
      c[a2] = floor_mod(c[a2] - d2, L);
      out[k++] = c;
    }
  }
  return out;
}

}  // namespace

FusionNetwork::FusionNetwork(int L) : L_(L) {}

std::pair<int, int> FusionNetwork::fusion_endpoints(int f) const {
  Coord a = fusion_base(f);
  Coord b = a;
  b[fusion_axis(f)] = (b[fusion_axis(f)] + 1) % L_;
  return {state_index(a[0], a[1], a[2]), state_index(b[0], b[1], b[2])};
}

FusionNetwork build_six_ring_network(int L) {
  if (L < 4) throw std::invalid_argument("lattice size must be at least 4, got " + std::to_string(L));
  if (L % 2 != 0) throw std::invalid_argument("lattice size must be even, got " + std::to_string(L));
  return FusionNetwork(L);
}

int SyndromeGraph::check_of_cell(int cx, int cy, int cz) const {
  // cells enumerated lexicographically; along z the parity alternates, so
  // same-parity cells sit at every other lexicographic position
  return ((cx * L + cy) * L + cz) / 2;
}

std::pair<SyndromeGraph, SyndromeGraph> build_syndrome_graphs(const FusionNetwork& net) {
  const int L = net.L();
  std::pair<SyndromeGraph, SyndromeGraph> out;
  SyndromeGraph* graphs[2] = {&out.first, &out.second};
  out.first.type = GraphType::primal;
  out.second.type = GraphType::dual;

  for (int t = 0; t < 2; ++t) {
    SyndromeGraph& g = *graphs[t];
    g.L = L;
    g.num_checks = net.num_states() / 2;
    g.edge_checks.assign(net.num_fusions(), {-1, -1});
    g.check_edges.assign(g.num_checks, {});
    g.check_cell.assign(g.num_checks, {});
    std::vector<int> fill(g.num_checks, 0);

    for (int cx = 0; cx < L; ++cx) {
      for (int cy = 0; cy < L; ++cy) {
        for (int cz = 0; cz < L; ++cz) {
          if (cell_parity(cx, cy, cz) != t) continue;
          g.check_cell[g.check_of_cell(cx, cy, cz)] = {cx, cy, cz};
        }
      }
    }

    for (int f = 0; f < net.num_fusions(); ++f) {
      Coord base = net.fusion_base(f);
      int axis = net.fusion_axis(f);
      int k = 0;
      for (const Coord& c : edge_cells(L, base, axis)) {
        if (cell_parity(c[0], c[1], c[2]) != t) continue;
        int check = g.check_of_cell(c[0], c[1], c[2]);
        g.edge_checks[f][k++] = check;
        g.check_edges[check][fill[check]++] = f;
      }
      if (k != 2) throw std::logic_error("fusion edge not incident to exactly 2 same-class cells");
    }
    for (int c = 0; c < g.num_checks; ++c)
      if (fill[c] != 12) throw std::logic_error("check weight is not 12");

    // Membrane for axis a: edges crossing the cell-layer cut at offset 0.5,
    // i.e. the transverse fusions lying in lattice plane coord == 1.
    for (int a = 0; a < 3; ++a) {
      Bits m(net.num_fusions());
      for (int f = 0; f < net.num_fusions(); ++f) {
        if (net.fusion_axis(f) == a) continue;
        if (net.fusion_base(f)[a] == 1) m.set(f);
      }
      g.membranes[a] = std::move(m);
    }
  }
  return out;
}

std::vector<uint8_t> syndrome_of(const SyndromeGraph& g, const Bits& flips) {
  if (flips.size() != static_cast<std::size_t>(g.num_edges()))
    throw std::invalid_argument("flip vector size does not match edge count");
  std::vector<uint8_t> syn(g.num_checks, 0);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (!flips.get(f)) continue;
    syn[g.edge_checks[f][0]] ^= 1;
    syn[g.edge_checks[f][1]] ^= 1;
  }
  return syn;
}

bool membrane_parity(const SyndromeGraph& g, const Bits& edges, int axis) {
  return Bits::count_and(edges, g.membranes[axis]) & 1;
}

}  // namespace macromux
