#pragma once

#include <functional>
#include <string>
#include <vector>

namespace macromux {

struct RatePoint {
  int L = 0;
  double p = 0.0;
  long trials = 0;
  long failures = 0;
  double rate = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95%
};

std::pair<double, double> wilson_interval(long failures, long trials, double z = 1.959964);

// true = logical failure; must be a pure function of the trial index
using TrialFn = std::function<bool(long trial_index)>;

RatePoint estimate_rate(const TrialFn& fn, long n_trials, int threads);

struct Curve {
  int L = 0;
  std::vector<RatePoint> points;
};

// builds a TrialFn for one (L, p) grid point
using PointRunner = std::function<TrialFn(int L, double p)>;

// emit is called once per completed point, in (L, p) order
std::vector<Curve> scan(const PointRunner& runner, const std::vector<int>& sizes,
                        const std::vector<double>& p_grid, long n_trials, int threads,
                        const std::function<void(const RatePoint&)>& emit = {});

struct PairCrossing {
  int L_small = 0, L_large = 0;
  double p_cross = 0.0;
};

struct ThresholdEstimate {
  bool found = false;
  double p_th = 0.0;
  double uncertainty = 0.0;  // bootstrap std over resampled counts
  std::vector<PairCrossing> crossings;
};

ThresholdEstimate find_crossing(const std::vector<Curve>& curves, int bootstrap_reps = 200,
                                uint64_t seed = 1);

}  // namespace macromux
