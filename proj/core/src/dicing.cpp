#include "macromux/dicing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace macromux {

namespace {

int floor_mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

int DicingScheme::brick_index(int stage, const Coord& state) const {
  const Coord n = max_brick;
  const int layer = state[2] / n[2];
  const int shift = layer_shift(layer);
  const int lx = floor_mod(state[0] - shift, L);
  const int gx = lx / n[0], gy = state[1] / n[1];
  const int nx = L / n[0], ny = L / n[1];
  const int max_idx = (layer * ny + gy) * nx + gx;
  if (stage == num_stages() - 1) return max_idx;

  // local position within the max brick, then descend the doubling splits
  Coord local = {lx % n[0], state[1] % n[1], state[2] % n[2]};
  int idx = max_idx;
  for (int s = num_stages() - 1; s > stage; --s) {
    const Coord& child = stage_dims[s - 1];
    int axis = 0;
    while (axis < 3 && stage_dims[s][axis] == child[axis]) ++axis;
    int hi = local[axis] / child[axis];
    idx = idx * 2 + hi;
    local[axis] -= hi * child[axis];
  }
  return idx;
}

DicingScheme build_cuboidal_dicing(const FusionNetwork& net, Coord max_brick, int offset_step) {
  DicingScheme sc;
  sc.L = net.L();
  sc.max_brick = max_brick;
  sc.offset_step = floor_mod(offset_step, sc.L);
  for (int a = 0; a < 3; ++a) {
    if (!is_pow2(max_brick[a]))
      throw std::invalid_argument("brick dimension must be a power of two, got " +
                                  std::to_string(max_brick[a]));
    if (sc.L % max_brick[a] != 0)
      throw std::invalid_argument("brick dimension " + std::to_string(max_brick[a]) +
                                  " does not divide lattice size " + std::to_string(sc.L));
  }

  // cyclic x -> y -> z doubling, skipping axes already at their target
  Coord cur = {1, 1, 1};
  sc.stage_dims.push_back(cur);
  int axis = 0;
  while (cur != max_brick) {
    if (cur[axis] < max_brick[axis]) {
      cur[axis] *= 2;
      sc.stage_dims.push_back(cur);
    }
    axis = (axis + 1) % 3;
  }

  const int S = sc.num_stages();
  sc.bricks.resize(S);

  // max bricks in layer-major order matching brick_index
  const Coord n = max_brick;
  const int nx = sc.L / n[0], ny = sc.L / n[1], nz = sc.L / n[2];
  for (int layer = 0; layer < nz; ++layer) {
    const int shift = sc.layer_shift(layer);
    for (int gy = 0; gy < ny; ++gy) {
      for (int gx = 0; gx < nx; ++gx) {
        Brick b;
        b.stage = S - 1;
        b.dims = n;
        b.origin = {(gx * n[0] + shift) % sc.L, gy * n[1], layer * n[2]};
        sc.bricks[S - 1].push_back(std::move(b));
      }
    }
  }

  // subdivide downward; children of brick i are 2i and 2i+1
  for (int s = S - 1; s > 0; --s) {
    const Coord& child_dims = sc.stage_dims[s - 1];
    int split_axis = 0;
    while (split_axis < 3 && sc.stage_dims[s][split_axis] == child_dims[split_axis]) ++split_axis;
    for (int i = 0; i < int(sc.bricks[s].size()); ++i) {
      Brick& parent = sc.bricks[s][i];
      for (int hi = 0; hi <= 1; ++hi) {
        Brick c;
        c.stage = s - 1;
        c.dims = child_dims;
        c.origin = parent.origin;
        c.origin[split_axis] = (c.origin[split_axis] + hi * child_dims[split_axis]) % sc.L;
        sc.bricks[s - 1].push_back(std::move(c));
      }
      parent.child0 = 2 * i;
      parent.child1 = 2 * i + 1;
      // fusions crossing the split plane; when the merged axis spans the
      // whole torus the children also touch across the wrap plane
      const int a1 = (split_axis + 1) % 3, a2 = (split_axis + 2) % 3;
      const bool wraps = sc.stage_dims[s][split_axis] == sc.L;
      for (int i1 = 0; i1 < child_dims[a1]; ++i1) {
        for (int i2 = 0; i2 < child_dims[a2]; ++i2) {
          Coord st = parent.origin;
          st[split_axis] = (st[split_axis] + child_dims[split_axis] - 1) % sc.L;
          st[a1] = (st[a1] + i1) % sc.L;
          st[a2] = (st[a2] + i2) % sc.L;
          parent.connecting_fusions.push_back(
              net.fusion_index(st[0], st[1], st[2], split_axis));
          if (wraps) {
            st[split_axis] = (st[split_axis] + child_dims[split_axis]) % sc.L;
            parent.connecting_fusions.push_back(
                net.fusion_index(st[0], st[1], st[2], split_axis));
          }
        }
      }
    }
  }

  // internal fusions, bottom-up
  for (int s = 1; s < S; ++s) {
    for (Brick& b : sc.bricks[s]) {
      const Brick& c0 = sc.bricks[s - 1][b.child0];
      const Brick& c1 = sc.bricks[s - 1][b.child1];
      b.internal_fusions.reserve(c0.internal_fusions.size() + c1.internal_fusions.size() +
                                 b.connecting_fusions.size());
      b.internal_fusions.insert(b.internal_fusions.end(), c0.internal_fusions.begin(),
                                c0.internal_fusions.end());
      b.internal_fusions.insert(b.internal_fusions.end(), c1.internal_fusions.begin(),
                                c1.internal_fusions.end());
      b.internal_fusions.insert(b.internal_fusions.end(), b.connecting_fusions.begin(),
                                b.connecting_fusions.end());
    }
  }

  // stage classification per fusion
  sc.fusion_stage.assign(net.num_fusions(), sc.final_stage());
  for (int f = 0; f < net.num_fusions(); ++f) {
    auto [u, v] = net.fusion_endpoints(f);
    Coord cu = net.state_coord(u), cv = net.state_coord(v);
    for (int s = 0; s < S; ++s) {
      if (sc.brick_index(s, cu) == sc.brick_index(s, cv)) {
        sc.fusion_stage[f] = s;
        break;
      }
    }
  }
  return sc;
}

const std::vector<int>& classify_fusions(const DicingScheme& scheme) {
  return scheme.fusion_stage;
}

BrickView brick_view(const DicingScheme& scheme, int stage, int index,
                     const SyndromeGraph& primal, const SyndromeGraph& dual) {
  const Brick& b = scheme.bricks.at(stage).at(index);
  const int L = scheme.L;
  BrickView view;
  view.stage = stage;
  view.index = index;
  view.origin = b.origin;
  view.dims = b.dims;
  view.internal_fusions = b.internal_fusions;

  const SyndromeGraph* graphs[2] = {&primal, &dual};

  for (int t = 0; t < 2; ++t) {
    const SyndromeGraph& g = *graphs[t];
    BrickTypeView& tv = view.type_view[t];
    // cells with all 8 corners inside the brick
    std::vector<int> local_of(g.num_checks, -1);
    for (int lx = 0; lx + 1 < b.dims[0]; ++lx) {
      for (int ly = 0; ly + 1 < b.dims[1]; ++ly) {
        for (int lz = 0; lz + 1 < b.dims[2]; ++lz) {
          int cx = (b.origin[0] + lx) % L, cy = (b.origin[1] + ly) % L,
              cz = (b.origin[2] + lz) % L;
          if (((cx + cy + cz) & 1) != t) continue;
          int check = g.check_of_cell(cx, cy, cz);
          local_of[check] = int(tv.complete_checks.size());
          tv.complete_checks.push_back(check);
        }
      }
    }
    for (int f : b.internal_fusions) {
      int lu = local_of[g.edge_checks[f][0]];
      int lv = local_of[g.edge_checks[f][1]];
      if (lu >= 0 && lv >= 0) {
        tv.edges.push_back({f, lu, lv});
      } else if (lu >= 0 || lv >= 0) {
        int lc = lu >= 0 ? lu : lv;
        // face nearest to the fusion midpoint, in doubled local coordinates;
        // ties resolved in (-x,+x,-y,+y,-z,+z) priority order
        int axis = f % 3;
        Coord base = {(f / 3) / (L * L), ((f / 3) / L) % L, (f / 3) % L};
        int best_face = 0, best_d = 1 << 30;
        for (int a = 0; a < 3; ++a) {
          int m2 = 2 * floor_mod(base[a] - b.origin[a], L) + (axis == a ? 1 : 0);
          int dneg = m2;
          int dpos = 2 * (b.dims[a] - 1) - m2;
          if (dneg < best_d) { best_d = dneg; best_face = 2 * a; }
          if (dpos < best_d) { best_d = dpos; best_face = 2 * a + 1; }
        }
        tv.half_edges.push_back({f, lc, best_face});
      }
    }
  }
  return view;
}

std::pair<int64_t, int64_t> check_offset_balance(const DicingScheme& scheme,
                                                 const SyndromeGraph& primal,
                                                 const SyndromeGraph& dual) {
  const SyndromeGraph* graphs[2] = {&primal, &dual};
  int64_t counts[2] = {0, 0};
  const int S = scheme.num_stages();
  for (int t = 0; t < 2; ++t) {
    const SyndromeGraph& g = *graphs[t];
    Bits covered(g.num_edges());
    for (const Brick& b : scheme.bricks[S - 1]) {
      for (int lx = 0; lx + 1 < b.dims[0]; ++lx) {
        for (int ly = 0; ly + 1 < b.dims[1]; ++ly) {
          for (int lz = 0; lz + 1 < b.dims[2]; ++lz) {
            int cx = (b.origin[0] + lx) % scheme.L, cy = (b.origin[1] + ly) % scheme.L,
                cz = (b.origin[2] + lz) % scheme.L;
            if (((cx + cy + cz) & 1) != t) continue;
            for (int f : g.check_edges[g.check_of_cell(cx, cy, cz)]) covered.set(f);
          }
        }
      }
    }
    counts[t] = int64_t(covered.count());
  }
  return {counts[0], counts[1]};
}

}  // namespace macromux
