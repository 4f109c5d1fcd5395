#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "macromux/lattice.hpp"

namespace macromux {

// One cuboidal brick of the hierarchical dicing. Stage-0 bricks are single
// resource states; every later stage fuses the two children of the previous
// stage along one axis.
struct Brick {
  int stage = 0;
  Coord origin{};  // lattice coords of the minimal member state
  Coord dims{};
  int child0 = -1, child1 = -1;         // indices into the previous stage
  std::vector<int> connecting_fusions;  // fusions joining child0 to child1
  std::vector<int> internal_fusions;    // both endpoints inside the brick
};

class DicingScheme {
 public:
  int L = 0;
  Coord max_brick{};
  int offset_step = 1;
  std::vector<Coord> stage_dims;          // (1,1,1) ... max_brick
  std::vector<std::vector<Brick>> bricks; // [stage][brick]
  std::vector<int> fusion_stage;          // per fusion; final_stage() for inter-brick

  int num_stages() const { return int(stage_dims.size()); }
  int final_stage() const { return num_stages(); }  // sentinel stage tag

  // per-layer x shift: layers along z of max-brick height
  int layer_shift(int layer) const { return (layer * offset_step) % L; }

  int brick_index(int stage, const Coord& state) const;
};

DicingScheme build_cuboidal_dicing(const FusionNetwork& net, Coord max_brick, int offset_step);

// fusion -> stage at which it is performed (first stage where both endpoint
// states share a brick); scheme.final_stage() for inter-max-brick fusions
const std::vector<int>& classify_fusions(const DicingScheme& scheme);

// Per-type decoding skeleton of one brick: complete checks, the internal
// outcomes between them, and face-assigned half edges. Local node ids are
// 0..num_checks-1 for checks, then 6 face pseudo-nodes.
struct BrickTypeView {
  std::vector<int> complete_checks;          // global check ids
  std::vector<std::array<int, 3>> edges;       // (fusion, local u, local v)
  std::vector<std::array<int, 3>> half_edges;  // (fusion, local check, face)
};

struct BrickView {
  int stage = 0, index = 0;
  Coord origin{}, dims{};
  std::vector<int> internal_fusions;  // shared by both types
  std::array<BrickTypeView, 2> type_view;
};

BrickView brick_view(const DicingScheme& scheme, int stage, int index,
                     const SyndromeGraph& primal, const SyndromeGraph& dual);

// Outcomes covered by a complete check of some max brick, per type.
std::pair<int64_t, int64_t> check_offset_balance(const DicingScheme& scheme,
                                                 const SyndromeGraph& primal,
                                                 const SyndromeGraph& dual);

}  // namespace macromux
