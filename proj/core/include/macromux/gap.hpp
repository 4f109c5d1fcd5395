#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "macromux/dicing.hpp"
#include "macromux/matching.hpp"

namespace macromux {

// Gap boundaries sit on the two faces perpendicular to the axis; the other
// four faces freeze.
struct GapBoundarySpec {
  int axis = 0;  // 0=x, 1=y, 2=z
  std::array<int, 2> gap_faces() const { return {2 * axis, 2 * axis + 1}; }
};

struct GapResult {
  int64_t delta = 0;  // kInfWeight when no finite gap exists
  int64_t freeze_weight = 0;
  double phi = 0.0;

  bool infinite() const { return delta >= kInfWeight; }
  // max(delta - phi * w, 0); propagates the infinite sentinel
  double frozen_delta() const;
};

// One brick's decoding problem for a single syndrome-graph type: the
// complete-check subgraph with 6 face pseudo-nodes and the defects visible
// after folding erased components (supercheck values never depend on the
// lost outcomes).
struct BrickProblem {
  DecodingGraph graph;            // checks first, then faces
  std::array<int, 6> face_node{};
  std::vector<int> defects;
  std::vector<int> edge_fusion;   // per graph edge, the source fusion
};

// erased/flips are indexed by outcome (fusion * 2 + type).
BrickProblem make_brick_problem(const BrickView& view, GraphType type, const Bits& erased,
                                const Bits& flips);

// |w0 - w1| between the two gap faces, sectors forced by pinning the
// crossing parity at the first gap pseudo-node.
int64_t logical_gap(const DecodingGraph& g, const std::vector<int>& defects, int gap_u,
                    int gap_v);

// Step 1: freezing matching (defects pair up or absorb at any face; freeze
// terminations are removed and their weight recorded). Step 2: logical gap
// between the two gap faces on the reduced configuration.
GapResult frozen_gap(const BrickProblem& p, GapBoundarySpec spec, double phi);

// --- augmented Tanner graph (generic sector gaps) ---------------------------

struct AugmentedTannerGraph {
  int num_checks = 0;
  int num_outcomes = 0;
  std::vector<std::vector<int>> outcome_checks;  // per outcome: incident checks
  std::vector<std::vector<int>> membranes;       // per logical: outcome support
  std::vector<int64_t> outcome_weight;           // defaults to 1 when empty
};

struct SectorWeights {
  int k = 0;
  std::vector<int64_t> w;  // indexed by sector bit-vector; kInfWeight if none
};

// Exhaustive minimum-weight error per pseudo-check sector assignment.
// Brute-force regime: <= 20 outcomes, k <= 4.
SectorWeights sector_weights(const AugmentedTannerGraph& atg,
                             const std::vector<uint8_t>& syndrome);

// |w_min - w_min-over-sectors-with-bit-i-flipped|; kInfWeight sentinel when
// the flipped set has no finite weight.
int64_t sector_gap(const SectorWeights& sw, int i);

}  // namespace macromux
