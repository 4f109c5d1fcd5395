#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "macromux/dicing.hpp"
#include "macromux/gap.hpp"

namespace macromux {

struct CountParams {
  double alpha = 1.0;
  double beta = 2.0;
  double exp_cap = 700.0;  // switch to log-sum-exp beyond this exponent
};

struct GapParams {
  double delta_coef = 1.0;
  double phi = 0.5;
};

// Higher value = better brick. `log_loss` = log(-value) carries the ordering
// once value saturates to -inf for large exponents.
struct Score {
  double value = 0.0;
  double log_loss = 0.0;

  bool better_than(const Score& o) const {
    if (value != o.value) return value > o.value;
    return log_loss < o.log_loss;
  }
};

// erased/flips are outcome-indexed (fusion * 2 + type)
Score count_score(const BrickView& view, const Bits& erased, const Bits& flips,
                  const CountParams& p);
Score gap_score(const BrickView& view, const Bits& erased, const Bits& flips,
                const GapParams& p);

// stable descending-quality permutation; ties keep copy order
std::vector<int> rank_copies(const std::vector<Score>& scores);

// Grid search over scorer parameters: picks the point minimizing the
// evaluated logical error rate, first-minimum tie-break in grid order.
struct TunePoint {
  double alpha = 1.0, beta = 2.0;      // count scorer
  double delta_coef = 1.0, phi = 0.5;  // gap scorer
};

struct TuneOutcome {
  TunePoint params;
  double rate = 0.0, ci_lo = 0.0, ci_hi = 0.0;
};

struct TuneResult {
  int best_index = -1;
  std::vector<TuneOutcome> results;
};

TuneResult tune_params(const std::vector<TunePoint>& grid,
                       const std::function<TuneOutcome(const TunePoint&)>& evaluate);

}  // namespace macromux
