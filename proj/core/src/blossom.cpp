#include "macromux/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace macromux {
namespace detail {

// Exact maximum-weight perfect matching on a complete graph, Edmonds'
// blossom algorithm with integer dual variables (weights are doubled
// internally so duals stay integral). Multiple alternating trees are grown
// simultaneously; one augmentation per phase. Requires all weights >= 1;
// a zero weight marks an absent slot internally.
//
// Node slots 1..n are real vertices, n+1..2n hold contracted blossoms.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const std::vector<std::vector<int64_t>>& w) : n_(int(w.size())) {
    if (n_ % 2 != 0) throw std::invalid_argument("perfect matching needs an even vertex count");
    slots_ = 2 * n_ + 1;
    g_.assign(slots_, std::vector<EdgeRef>(slots_));
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v)
        if (u != v) g_[u][v] = {u, v, 2 * w[u - 1][v - 1]};
    lab_.assign(slots_, 0);
    match_.assign(slots_, 0);
    slack_.assign(slots_, 0);
    st_.assign(slots_, 0);
    pa_.assign(slots_, 0);
    state_.assign(slots_, kFree);
    vis_.assign(slots_, 0);
    flower_.assign(slots_, {});
    flower_from_.assign(slots_, std::vector<int>(n_ + 1, 0));
    for (int u = 1; u <= n_; ++u) {
      st_[u] = u;
      flower_from_[u][u] = u;
    }
    n_x_ = n_;
  }

  // per-vertex mate (0-indexed) plus total original weight
  std::pair<std::vector<int>, int64_t> solve() {
    int64_t w_max = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) w_max = std::max(w_max, g_[u][v].w);
    for (int u = 1; u <= n_; ++u) lab_[u] = w_max / 2 + 1;

    for (int round = 0; round < n_ / 2; ++round)
      if (!phase()) throw std::logic_error("no augmenting path on a complete graph");

    int64_t total = 0;
    std::vector<int> mate(n_, -1);
    for (int u = 1; u <= n_; ++u) {
      mate[u - 1] = match_[u] - 1;
      if (u < match_[u]) total += g_[u][match_[u]].w / 2;
    }
    return {mate, total};
  }

 private:
  struct EdgeRef {
    int u = 0, v = 0;
    int64_t w = 0;
  };
  static constexpr int kFree = -1, kOuter = 0, kInner = 1;

  int n_, n_x_, slots_;
  std::vector<std::vector<EdgeRef>> g_;
  std::vector<int64_t> lab_;
  std::vector<int> match_, slack_, st_, pa_, state_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<std::vector<int>> flower_from_;
  std::deque<int> q_;
  int vis_stamp_ = 0;

  int64_t e_delta(const EdgeRef& e) const { return lab_[e.u] + lab_[e.v] - e.w; }

  void update_slack(int u, int x) {
    if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x])) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (g_[u][x].w > 0 && st_[u] != x && state_[st_[u]] == kOuter) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n_) {
      q_.push_back(x);
    } else {
      for (int child : flower_[x]) q_push(child);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int child : flower_[x]) set_st(child, b);
  }

  // position of child xr in flower[b]; reorients the cycle (keeping matched
  // pairs adjacent) so the position is even
  int get_pr(int b, int xr) {
    int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) - flower_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower_[b].begin() + 1, flower_[b].end());
      return int(flower_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = g_[u][v].v;
    if (u <= n_) return;
    int xr = flower_from_[u][g_[u][v].u];
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    while (true) {
      int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++vis_stamp_; u || v; std::swap(u, v)) {
      if (!u) continue;
      if (vis_[u] == vis_stamp_) return u;
      vis_[u] = vis_stamp_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    if (b >= slots_) throw std::logic_error("blossom slots exhausted");

    lab_[b] = 0;
    state_[b] = kOuter;
    match_[b] = match_[lca];
    pa_[b] = pa_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      y = st_[match_[x]];
      flower_[b].push_back(y);
      q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      y = st_[match_[x]];
      flower_[b].push_back(y);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
    for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (g_[xs][x].w > 0 && (g_[b][x].w == 0 || e_delta(g_[xs][x]) < e_delta(g_[b][x]))) {
          g_[b][x] = g_[xs][x];
          g_[x][b] = g_[x][xs];
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from_[xs][x]) flower_from_[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int child : flower_[b]) set_st(child, child);
    int xr = flower_from_[b][g_[b][pa_[b]].u];
    int pr = get_pr(b, xr);
    // children on the base->entry path keep alternating tree labels, the
    // rest of the cycle becomes free
    for (int i = 0; i < pr; i += 2) {
      int xs = flower_[b][i];
      int xns = flower_[b][i + 1];
      pa_[xs] = g_[xns][xs].u;
      state_[xs] = kInner;
      state_[xns] = kOuter;
      slack_[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    state_[xr] = kInner;
    pa_[xr] = pa_[b];
    slack_[xr] = 0;
    for (int i = pr + 1; i < int(flower_[b].size()); ++i) {
      int xs = flower_[b][i];
      state_[xs] = kFree;
      set_slack(xs);
    }
    st_[b] = 0;
    flower_[b].clear();
  }

  // returns true once an augmentation finishes the phase
  bool on_found_edge(const EdgeRef& e) {
    int u = st_[e.u], v = st_[e.v];
    if (state_[v] == kFree) {
      pa_[v] = e.u;
      state_[v] = kInner;
      int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      state_[nu] = kOuter;
      q_push(nu);
    } else if (state_[v] == kOuter) {
      int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool phase() {
    std::fill(state_.begin(), state_.end(), kFree);
    std::fill(slack_.begin(), slack_.end(), 0);
    std::fill(pa_.begin(), pa_.end(), 0);
    q_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        state_[x] = kOuter;
        q_push(x);
      }
    if (q_.empty()) return false;

    while (true) {
      while (!q_.empty()) {
        int u = q_.front();
        q_.pop_front();
        if (state_[st_[u]] != kOuter) continue;
        for (int v = 1; v <= n_; ++v) {
          if (g_[u][v].w > 0 && st_[u] != st_[v]) {
            if (e_delta(g_[u][v]) == 0) {
              if (on_found_edge(g_[u][v])) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
        }
      }
      int64_t d = std::numeric_limits<int64_t>::max();
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && state_[b] == kInner) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (state_[x] == kFree)
            d = std::min(d, e_delta(g_[slack_[x]][x]));
          else if (state_[x] == kOuter)
            d = std::min(d, e_delta(g_[slack_[x]][x]) / 2);
        }
      if (d == std::numeric_limits<int64_t>::max())
        throw std::logic_error("matching duals stalled; graph not complete?");
      for (int u = 1; u <= n_; ++u) {
        switch (state_[st_[u]]) {
          case kOuter: lab_[u] -= d; break;
          case kInner: lab_[u] += d; break;
          default: break;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && state_[b] != kFree)
          lab_[b] += (state_[b] == kOuter ? 2 : -2) * d;

      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            e_delta(g_[slack_[x]][x]) == 0)
          if (on_found_edge(g_[slack_[x]][x])) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && state_[b] == kInner && lab_[b] == 0) expand_blossom(b);
    }
  }
};

std::pair<std::vector<int>, int64_t> max_weight_perfect_matching(
    const std::vector<std::vector<int64_t>>& w) {
  if (w.empty()) return {{}, 0};
  return BlossomMatcher(w).solve();
}

}  // namespace detail

std::pair<std::vector<int>, int64_t> min_weight_perfect_matching(
    const std::vector<std::vector<int64_t>>& cost, int64_t infeasible_cost) {
  const int n = int(cost.size());
  if (n == 0) return {{}, 0};
  if (n % 2 != 0) throw std::invalid_argument("perfect matching needs an even vertex count");
  // Transform to a maximization with all-positive weights on a complete
  // graph: maximum matchings are then perfect, and infeasible slots are only
  // used when no feasible perfect matching exists.
  int64_t max_real = 0;
  for (const auto& row : cost)
    for (int64_t c : row)
      if (c < infeasible_cost) max_real = std::max(max_real, c);
  const int64_t big = max_real * (int64_t(n) / 2 + 1) + 2;
  std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      w[i][j] = cost[i][j] >= infeasible_cost ? 1 : big - cost[i][j];
    }
  auto [mate, total] = detail::max_weight_perfect_matching(w);
  (void)total;
  int64_t sum = 0;
  for (int i = 0; i < n; ++i) {
    if (mate[i] < 0) throw std::logic_error("matching is not perfect");
    if (i < mate[i]) {
      if (cost[i][mate[i]] >= infeasible_cost) return {mate, infeasible_cost};
      sum += cost[i][mate[i]];
    }
  }
  return {mate, sum};
}

}  // namespace macromux
