#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "macromux/lattice.hpp"
#include "macromux/rng.hpp"

using namespace macromux;

namespace {

// brute-force: the four unit cells containing a lattice edge
std::vector<Coord> edge_cells(int L, Coord base, int axis) {
  std::vector<Coord> out;
  int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  for (int d1 = 0; d1 <= 1; ++d1)
    for (int d2 = 0; d2 <= 1; ++d2) {
      Coord c = base;
      c[a1] = ((c[a1] - d1) % L + L) % L;
      c[a2] = ((c[a2] - d2) % L + L) % L;
      out.push_back(c);
    }
  return out;
}

int parity(const Coord& c) { return (c[0] + c[1] + c[2]) & 1; }

}  // namespace

TEST_CASE("network construction counts and preconditions") {
  FusionNetwork net = build_six_ring_network(4);
  CHECK(net.num_states() == 64);
  CHECK(net.num_fusions() == 192);
  CHECK(net.num_outcomes() == 384);
  CHECK_THROWS_AS(build_six_ring_network(2), std::invalid_argument);
  CHECK_THROWS_AS(build_six_ring_network(5), std::invalid_argument);
  CHECK_THROWS_AS(build_six_ring_network(7), std::invalid_argument);
}

TEST_CASE("every state touches exactly 6 fusions") {
  FusionNetwork net = build_six_ring_network(6);
  std::vector<int> degree(net.num_states(), 0);
  for (int f = 0; f < net.num_fusions(); ++f) {
    auto [u, v] = net.fusion_endpoints(f);
    ++degree[u];
    ++degree[v];
  }
  for (int d : degree) REQUIRE(d == 6);
}

TEST_CASE("syndrome graph structural invariants") {
  for (int L : {4, 6, 8}) {
    CAPTURE(L);
    FusionNetwork net = build_six_ring_network(L);
    auto [primal, dual] = build_syndrome_graphs(net);
    for (const SyndromeGraph* g : {&primal, &dual}) {
      CHECK(g->num_checks == L * L * L / 2);
      CHECK(g->num_edges() == 3 * L * L * L);
      // degree 12 everywhere, handshake, each edge in exactly 2 checks
      std::vector<int> incidence(g->num_edges(), 0);
      long degree_sum = 0;
      for (int c = 0; c < g->num_checks; ++c) {
        std::set<int> uniq(g->check_edges[c].begin(), g->check_edges[c].end());
        REQUIRE(uniq.size() == 12);
        degree_sum += 12;
        for (int f : g->check_edges[c]) ++incidence[f];
      }
      CHECK(degree_sum == 6L * L * L * L);
      for (int f = 0; f < g->num_edges(); ++f) REQUIRE(incidence[f] == 2);
    }
  }
}

TEST_CASE("checks contain exactly the 12 cube-edge fusions, brute force on L=4") {
  const int L = 4;
  FusionNetwork net = build_six_ring_network(L);
  auto [primal, dual] = build_syndrome_graphs(net);

  // independent incidence construction from raw geometry
  std::map<std::pair<int, int>, std::set<int>> cell_edges;  // (type, check) -> fusions
  for (int f = 0; f < net.num_fusions(); ++f) {
    Coord base = net.fusion_base(f);
    int axis = net.fusion_axis(f);
    int n_even = 0, n_odd = 0;
    for (const Coord& c : edge_cells(L, base, axis)) {
      int t = parity(c);
      const SyndromeGraph& g = t == 0 ? primal : dual;
      cell_edges[{t, g.check_of_cell(c[0], c[1], c[2])}].insert(f);
      t == 0 ? ++n_even : ++n_odd;
    }
    CHECK(n_even == 2);
    CHECK(n_odd == 2);
  }
  CHECK(cell_edges.size() == 64);  // 32 checks per graph
  for (const auto& [key, edges] : cell_edges) {
    REQUIRE(edges.size() == 12);
    const SyndromeGraph& g = key.first == 0 ? primal : dual;
    std::set<int> stored(g.check_edges[key.second].begin(), g.check_edges[key.second].end());
    CHECK(stored == edges);
  }
}

TEST_CASE("primal and dual graphs are isomorphic under a unit translation") {
  const int L = 4;
  FusionNetwork net = build_six_ring_network(L);
  auto [primal, dual] = build_syndrome_graphs(net);
  auto translate_fusion = [&](int f) {
    Coord b = net.fusion_base(f);
    return net.fusion_index((b[0] + 1) % L, b[1], b[2], net.fusion_axis(f));
  };
  for (int c = 0; c < primal.num_checks; ++c) {
    Coord cell = primal.check_cell[c];
    int dc = dual.check_of_cell((cell[0] + 1) % L, cell[1], cell[2]);
    std::set<int> translated;
    for (int f : primal.check_edges[c]) translated.insert(translate_fusion(f));
    std::set<int> stored(dual.check_edges[dc].begin(), dual.check_edges[dc].end());
    REQUIRE(translated == stored);
  }
}

TEST_CASE("membranes match the plane-crossing oracle, cardinality 2L^2") {
  for (int L : {4, 6}) {
    CAPTURE(L);
    FusionNetwork net = build_six_ring_network(L);
    auto [primal, dual] = build_syndrome_graphs(net);
    for (int axis = 0; axis < 3; ++axis) {
      // oracle: syndrome edges whose endpoint cells straddle layers 0 and 1
      Bits oracle(net.num_fusions());
      for (int f = 0; f < net.num_fusions(); ++f) {
        std::vector<int> layers;
        for (const Coord& c : edge_cells(L, net.fusion_base(f), net.fusion_axis(f)))
          if (parity(c) == 0) layers.push_back(c[axis]);
        REQUIRE(layers.size() == 2);
        if ((layers[0] == 0 && layers[1] == 1) || (layers[0] == 1 && layers[1] == 0))
          oracle.set(f);
      }
      CHECK(oracle.count() == std::size_t(2 * L * L));
      CHECK(oracle == primal.membranes[axis]);
    }
  }
}

TEST_CASE("syndrome_of basics") {
  const int L = 4;
  FusionNetwork net = build_six_ring_network(L);
  auto [primal, dual] = build_syndrome_graphs(net);

  SUBCASE("zero flips give zero syndrome") {
    Bits flips(net.num_fusions());
    auto syn = syndrome_of(primal, flips);
    CHECK(std::count(syn.begin(), syn.end(), 1) == 0);
  }
  SUBCASE("one flipped edge lights exactly its two endpoint checks") {
    Bits flips(net.num_fusions());
    flips.set(17);
    auto syn = syndrome_of(primal, flips);
    CHECK(std::count(syn.begin(), syn.end(), 1) == 2);
    CHECK(syn[primal.edge_checks[17][0]] == 1);
    CHECK(syn[primal.edge_checks[17][1]] == 1);
  }
  SUBCASE("flipping all 12 edges of one check darkens it and lights 12 neighbours") {
    Bits flips(net.num_fusions());
    for (int f : primal.check_edges[5]) flips.set(f);
    auto syn = syndrome_of(primal, flips);
    CHECK(syn[5] == 0);
    CHECK(std::count(syn.begin(), syn.end(), 1) == 12);
  }
  SUBCASE("size mismatch is rejected") {
    Bits flips(3);
    CHECK_THROWS_AS(syndrome_of(primal, flips), std::invalid_argument);
  }
}

TEST_CASE("syndrome_of is linear") {
  const int L = 4;
  FusionNetwork net = build_six_ring_network(L);
  auto [primal, dual] = build_syndrome_graphs(net);
  Rng rng = Rng::from_stream(7, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Bits a(net.num_fusions()), b(net.num_fusions());
    for (int f = 0; f < net.num_fusions(); ++f) {
      if (rng.bernoulli(0.1)) a.set(f);
      if (rng.bernoulli(0.1)) b.set(f);
    }
    Bits ab = a;
    ab ^= b;
    auto sa = syndrome_of(primal, a), sb = syndrome_of(primal, b), sab = syndrome_of(primal, ab);
    for (int c = 0; c < primal.num_checks; ++c) REQUIRE(sab[c] == (sa[c] ^ sb[c]));
  }
}

TEST_CASE("membrane parity: boundary generators are trivial, wraps are not") {
  const int L = 4;
  FusionNetwork net = build_six_ring_network(L);
  auto [primal, dual] = build_syndrome_graphs(net);

  SUBCASE("zero-syndrome sets from opposite-class cell boundaries have even parity") {
    // the primal outcomes of an odd cell's 12 fusions form a primal cycle
    Rng rng = Rng::from_stream(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
      Bits flips(net.num_fusions());
      for (int dc = 0; dc < dual.num_checks; ++dc)
        if (rng.bernoulli(0.3))
          for (int f : dual.check_edges[dc]) flips.flip(f);
      auto syn = syndrome_of(primal, flips);
      REQUIRE(std::count(syn.begin(), syn.end(), 1) == 0);
      for (int axis = 0; axis < 3; ++axis)
        REQUIRE_FALSE(membrane_parity(primal, flips, axis));
    }
  }

  SUBCASE("a cycle wrapping the x axis crosses the x membrane oddly") {
    // alternate the two y-fusion diagonals to advance one x layer per step
    Bits flips(net.num_fusions());
    Coord c = {0, 0, 0};
    for (int step = 0; step < L; ++step) {
      int f;
      if (step % 2 == 0) {
        f = net.fusion_index((c[0] + 1) % L, c[1], (c[2] + 1) % L, 1);
        c = {(c[0] + 1) % L, c[1], (c[2] + 1) % L};
      } else {
        f = net.fusion_index((c[0] + 1) % L, c[1], c[2], 1);
        c = {(c[0] + 1) % L, c[1], (c[2] - 1 + L) % L};
      }
      flips.flip(f);
    }
    REQUIRE(c == Coord{0, 0, 0});
    auto syn = syndrome_of(primal, flips);
    REQUIRE(std::count(syn.begin(), syn.end(), 1) == 0);
    CHECK(membrane_parity(primal, flips, 0));
    CHECK_FALSE(membrane_parity(primal, flips, 1));
    CHECK_FALSE(membrane_parity(primal, flips, 2));
  }

  SUBCASE("single membrane edge has parity 1") {
    Bits flips(net.num_fusions());
    for (int f = 0; f < net.num_fusions(); ++f)
      if (primal.membranes[0].get(f)) {
        flips.set(f);
        break;
      }
    CHECK(membrane_parity(primal, flips, 0));
  }
}
