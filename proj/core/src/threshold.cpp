#include "macromux/threshold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "macromux/rng.hpp"

namespace macromux {

std::pair<double, double> wilson_interval(long failures, long trials, double z) {
  if (trials <= 0) throw std::invalid_argument("Wilson interval needs at least one trial");
  const double n = double(trials);
  const double phat = double(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RatePoint estimate_rate(const TrialFn& fn, long n_trials, int threads) {
  if (n_trials < 1) throw std::invalid_argument("need at least one trial");
  if (threads < 1) threads = int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = int(std::min<long>(threads, n_trials));

  std::atomic<long> next{0};
  std::vector<long> fail_count(threads, 0);
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&](int tid) {
    try {
      constexpr long chunk = 16;
      for (;;) {
        long begin = next.fetch_add(chunk);
        if (begin >= n_trials) break;
        long end = std::min(begin + chunk, n_trials);
        for (long i = begin; i < end; ++i)
          if (fn(i)) ++fail_count[tid];
      }
    } catch (...) {
      std::scoped_lock lk(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  RatePoint pt;
  pt.trials = n_trials;
  for (long c : fail_count) pt.failures += c;
  pt.rate = double(pt.failures) / double(n_trials);
  std::tie(pt.ci_lo, pt.ci_hi) = wilson_interval(pt.failures, pt.trials);
  return pt;
}

std::vector<Curve> scan(const PointRunner& runner, const std::vector<int>& sizes,
                        const std::vector<double>& p_grid, long n_trials, int threads,
                        const std::function<void(const RatePoint&)>& emit) {
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    if (p_grid[i] <= p_grid[i - 1]) throw std::invalid_argument("p grid must be increasing");
  std::vector<Curve> out;
  for (int L : sizes) {
    Curve c;
    c.L = L;
    for (double p : p_grid) {
      RatePoint pt = estimate_rate(runner(L, p), n_trials, threads);
      pt.L = L;
      pt.p = p;
      if (emit) emit(pt);
      c.points.push_back(pt);
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// log-rate difference sign change between two curves, linearly interpolated;
// zero-failure points are clamped to half a count
bool pair_crossing(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b,
                   double* out) {
  auto rate = [](const RatePoint& pt) {
    double r = pt.rate;
    double floor_r = 0.5 / double(pt.trials);
    return std::max(r, floor_r);
  };
  double prev = 0;
  bool have_prev = false;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    double f = std::log(rate(a[i])) - std::log(rate(b[i]));
    if (have_prev && ((prev < 0 && f >= 0) || (prev > 0 && f <= 0))) {
      double t = prev / (prev - f);
      *out = a[i - 1].p + t * (a[i].p - a[i - 1].p);
      return true;
    }
    if (f != 0) {
      prev = f;
      have_prev = true;
    }
  }
  return false;
}

}  // namespace

ThresholdEstimate find_crossing(const std::vector<Curve>& curves, int bootstrap_reps,
                                uint64_t seed) {
  ThresholdEstimate est;
  if (curves.size() < 2) throw std::invalid_argument("need at least two system sizes");

  double sum = 0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      double p = 0;
      if (pair_crossing(curves[i].points, curves[j].points, &p)) {
        est.crossings.push_back({curves[i].L, curves[j].L, p});
        sum += p;
      }
    }
  }
  if (est.crossings.empty()) return est;  // found stays false
  est.found = true;
  est.p_th = sum / double(est.crossings.size());

  // bootstrap over binomial resamples of the failure counts
  std::vector<double> reps;
  for (int r = 0; r < bootstrap_reps; ++r) {
    Rng rng = Rng::from_stream(seed, uint64_t(r), 0x626f6f74, 0, 0);
    std::vector<Curve> resampled = curves;
    for (auto& c : resampled)
      for (auto& pt : c.points) {
        long k = 0;
        for (long t = 0; t < pt.trials; ++t)
          if (rng.bernoulli(pt.rate)) ++k;
        pt.failures = k;
        pt.rate = double(k) / double(pt.trials);
      }
    double s = 0;
    int n = 0;
    for (std::size_t i = 0; i < resampled.size(); ++i)
      for (std::size_t j = i + 1; j < resampled.size(); ++j) {
        double p = 0;
        if (pair_crossing(resampled[i].points, resampled[j].points, &p)) {
          s += p;
          ++n;
        }
      }
    if (n > 0) reps.push_back(s / n);
  }
  if (reps.size() >= 2) {
    double mean = 0;
    for (double v : reps) mean += v;
    mean /= double(reps.size());
    double var = 0;
    for (double v : reps) var += (v - mean) * (v - mean);
    est.uncertainty = std::sqrt(var / double(reps.size() - 1));
  }
  return est;
}

}  // namespace macromux
