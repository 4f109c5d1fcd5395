#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "macromux/dicing.hpp"
#include "macromux/lattice.hpp"
#include "macromux/rng.hpp"
#include "macromux/scoring.hpp"

namespace macromux {

enum class ErrorModelKind { erasure, bitflip, mixed_ray, custom };

struct ErrorModel {
  ErrorModelKind kind = ErrorModelKind::erasure;
  double p_e = 0.0;  // erasure probability per outcome
  double p_p = 0.0;  // bit-flip probability, conditioned on no erasure

  static ErrorModel erasure_only(double p) { return {ErrorModelKind::erasure, p, 0.0}; }
  static ErrorModel bitflip_only(double p) { return {ErrorModelKind::bitflip, 0.0, p}; }
  static ErrorModel mixed_ray(double p_e) { return {ErrorModelKind::mixed_ray, p_e, p_e / 10.0}; }
  void validate() const;
};

enum class ScorerKind { count, gap };

struct EngineParams {
  int M = 1;
  ScorerKind scorer = ScorerKind::count;
  CountParams count;
  GapParams gap;
  ErrorModel model;
  bool ideal_bricks = false;
  long max_attempts = 1000000;
  uint64_t master_seed = 0;
  bool collect_diagnostics = false;
};

// Immutable structures shared by all concurrent trials.
struct SimContext {
  FusionNetwork net;
  SyndromeGraph primal, dual;
  DicingScheme dicing;
  std::vector<std::vector<BrickView>> views;  // [stage][brick], when built
  std::vector<int> final_outcomes;            // outcomes of inter-max-brick fusions

  SimContext(int L, Coord max_brick, int offset_step, bool build_views);
  const SyndromeGraph& graph(GraphType t) const {
    return t == GraphType::primal ? primal : dual;
  }
};

struct BrickCopy {
  Bits erased, flips;  // outcome-indexed over the whole network
};

struct StageDiag {
  int stage = 0;
  double mean_score = 0.0;
  double mean_erasures = 0.0;
  double mean_flips = 0.0;
};

struct TrialResult {
  // [type][axis]: crossing parity of (error xor correction) with the membrane
  std::array<std::array<bool, 3>, 2> failed{};
  std::vector<StageDiag> diagnostics;

  bool any() const {
    for (const auto& t : failed)
      for (bool f : t)
        if (f) return true;
    return false;
  }
};

// Per outcome: erase w.p. p_e, else flip w.p. p_p, independently.
void sample_outcome_errors(Rng& rng, const std::vector<int>& outcomes, const ErrorModel& m,
                           Bits& erased, Bits& flips);

// Rank the M copies of each child independently, pair rank-i with rank-i,
// sample the connecting outcomes, and merge. Exposed for tests; run_trial
// drives it across all stages.
void run_stage(const SimContext& ctx, const EngineParams& par, int stage,
               std::vector<std::vector<BrickCopy>>& copies_by_brick, long trial_index);

// Rejection-sample a max-brick configuration with no internal erasures and
// no lit complete check. Returns the accepted copy and the attempt count.
std::pair<BrickCopy, long> sample_ideal_brick(const SimContext& ctx, const EngineParams& par,
                                              int brick_index, Rng& rng);

// Decode the assembled global configuration and flag membrane failures.
TrialResult decode_and_check(const SimContext& ctx, const EngineParams& par,
                             const Bits& erased, const Bits& flips, long trial_index);

TrialResult run_trial(const SimContext& ctx, const EngineParams& par, long trial_index);

// Direct sampling of the whole network with the same decode path; the M=1
// pipeline must agree with this statistically.
TrialResult monolithic_trial(const SimContext& ctx, const EngineParams& par, long trial_index);

Score score_copy(const SimContext& ctx, const EngineParams& par, const BrickView& view,
                 const BrickCopy& copy);

}  // namespace macromux
