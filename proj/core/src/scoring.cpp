#include "macromux/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace macromux {

namespace {

Score score_from_exponents(const std::vector<double>& xs, double cap) {
  double x_max = -std::numeric_limits<double>::infinity();
  for (double x : xs) x_max = std::max(x_max, x);
  Score s;
  if (x_max <= cap) {
    double sum = 0;
    for (double x : xs) sum += std::exp(x);
    s.value = -sum;
    s.log_loss = sum > 0 ? std::log(sum) : -std::numeric_limits<double>::infinity();
  } else {
    double acc = 0;
    for (double x : xs) acc += std::exp(x - x_max);
    s.log_loss = x_max + std::log(acc);
    s.value = -std::exp(s.log_loss);  // -inf once past the double range
  }
  return s;
}

}  // namespace

Score count_score(const BrickView& view, const Bits& erased, const Bits& flips,
                  const CountParams& p) {
  std::vector<double> xs(2);
  for (int t = 0; t < 2; ++t) {
    const BrickTypeView& tv = view.type_view[t];
    int64_t n_erased = 0;
    for (int f : view.internal_fusions)
      if (erased.get(std::size_t(f) * 2 + t)) ++n_erased;

    // merge complete checks across erased internal edges; components whose
    // value still depends on a lost boundary outcome carry no syndrome bit
    const int n = int(tv.complete_checks.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    std::vector<uint8_t> defect(n, 0), tainted(n, 0);
    for (const auto& [fusion, lu, lv] : tv.edges) {
      std::size_t o = std::size_t(fusion) * 2 + t;
      if (erased.get(o)) {
        int a = find(lu), b = find(lv);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      } else if (flips.get(o)) {
        defect[lu] ^= 1;
        defect[lv] ^= 1;
      }
    }
    for (const auto& [fusion, lc, face] : tv.half_edges) {
      std::size_t o = std::size_t(fusion) * 2 + t;
      if (erased.get(o))
        tainted[lc] = 1;
      else if (flips.get(o))
        defect[lc] ^= 1;
    }
    std::vector<uint8_t> comp_defect(n, 0), comp_tainted(n, 0);
    for (int i = 0; i < n; ++i) {
      int r = find(i);
      comp_defect[r] ^= defect[i];
      comp_tainted[r] |= tainted[i];
    }
    int64_t n_syndromes = 0;
    for (int i = 0; i < n; ++i)
      if (find(i) == i && !comp_tainted[i] && comp_defect[i]) ++n_syndromes;

    xs[t] = p.alpha * double(n_erased) + p.beta * double(n_syndromes);
  }
  return score_from_exponents(xs, p.exp_cap);
}

Score gap_score(const BrickView& view, const Bits& erased, const Bits& flips,
                const GapParams& p) {
  double loss = 0;
  for (int t = 0; t < 2; ++t) {
    BrickProblem problem = make_brick_problem(view, static_cast<GraphType>(t), erased, flips);
    for (int axis = 0; axis < 3; ++axis) {
      GapResult r = frozen_gap(problem, GapBoundarySpec{axis}, p.phi);
      double fd = r.frozen_delta();
      if (!std::isinf(fd)) loss += std::exp(-p.delta_coef * fd);
    }
  }
  Score s;
  s.value = -loss;
  s.log_loss = loss > 0 ? std::log(loss) : -std::numeric_limits<double>::infinity();
  return s;
}

std::vector<int> rank_copies(const std::vector<Score>& scores) {
  if (scores.empty()) throw std::invalid_argument("rank_copies needs at least one score");
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[a].better_than(scores[b]);
  });
  return order;
}

TuneResult tune_params(const std::vector<TunePoint>& grid,
                       const std::function<TuneOutcome(const TunePoint&)>& evaluate) {
  if (grid.empty()) throw std::invalid_argument("empty tuning grid");
  TuneResult out;
  for (const TunePoint& pt : grid) {
    out.results.push_back(evaluate(pt));
    if (out.best_index < 0 || out.results.back().rate < out.results[out.best_index].rate)
      out.best_index = int(out.results.size()) - 1;
  }
  return out;
}

}  // namespace macromux
