#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "macromux/dicing.hpp"
#include "macromux/lattice.hpp"

using namespace macromux;

namespace {

struct Fixture {
  FusionNetwork net;
  SyndromeGraph primal, dual;
  Fixture(int L) : net(build_six_ring_network(L)) {
    auto g = build_syndrome_graphs(net);
    primal = std::move(g.first);
    dual = std::move(g.second);
  }
};

}  // namespace

TEST_CASE("stage list construction") {
  Fixture fx(8);
  SUBCASE("2x2x2 doubles x, y, z") {
    DicingScheme sc = build_cuboidal_dicing(fx.net, {2, 2, 2}, 0);
    std::vector<Coord> expect = {{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}};
    CHECK(sc.stage_dims == expect);
    CHECK(sc.final_stage() == 4);
  }
  SUBCASE("4x4x4 has 6 doubling stages plus the final all-fuse stage") {
    DicingScheme sc = build_cuboidal_dicing(fx.net, {4, 4, 4}, 0);
    CHECK(sc.num_stages() - 1 == 6);
    CHECK(sc.stage_dims.front() == Coord{1, 1, 1});
    CHECK(sc.stage_dims.back() == Coord{4, 4, 4});
    for (int s = 1; s < sc.num_stages(); ++s) {
      int doubled = 0;
      for (int a = 0; a < 3; ++a) {
        if (sc.stage_dims[s][a] == 2 * sc.stage_dims[s - 1][a])
          ++doubled;
        else
          CHECK(sc.stage_dims[s][a] == sc.stage_dims[s - 1][a]);
      }
      CHECK(doubled == 1);
    }
  }
  SUBCASE("asymmetric max brick skips finished axes") {
    DicingScheme sc = build_cuboidal_dicing(fx.net, {4, 2, 2}, 0);
    std::vector<Coord> expect = {{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}, {4, 2, 2}};
    CHECK(sc.stage_dims == expect);
  }
  SUBCASE("non-dividing and non-power-of-two dims are rejected") {
    Fixture fx6(6);
    CHECK_THROWS_AS(build_cuboidal_dicing(fx6.net, {4, 4, 4}, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_cuboidal_dicing(fx6.net, {3, 1, 1}, 0), std::invalid_argument);
  }
}

TEST_CASE("bricks partition all states at every stage") {
  Fixture fx(8);
  for (int step : {0, 1}) {
    CAPTURE(step);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {2, 2, 2}, step);
    for (int s = 0; s < sc.num_stages(); ++s) {
      CAPTURE(s);
      std::set<int> seen;
      long total = 0;
      for (const Brick& b : sc.bricks[s]) {
        for (int lx = 0; lx < b.dims[0]; ++lx)
          for (int ly = 0; ly < b.dims[1]; ++ly)
            for (int lz = 0; lz < b.dims[2]; ++lz) {
              int x = (b.origin[0] + lx) % sc.L, y = (b.origin[1] + ly) % sc.L,
                  z = (b.origin[2] + lz) % sc.L;
              seen.insert(fx.net.state_index(x, y, z));
              ++total;
            }
      }
      REQUIRE(total == fx.net.num_states());
      REQUIRE(int(seen.size()) == fx.net.num_states());
      // brick_index agrees with the member listing
      for (int bi = 0; bi < int(sc.bricks[s].size()); ++bi) {
        const Brick& b = sc.bricks[s][bi];
        Coord probe = {(b.origin[0] + b.dims[0] - 1) % sc.L, b.origin[1],
                       (b.origin[2] + b.dims[2] - 1) % sc.L};
        CHECK(sc.brick_index(s, probe) == bi);
      }
    }
  }
}

TEST_CASE("fusion classification") {
  SUBCASE("L=4, 2x2x2, no offsets: 12 internal per max brick staged 1-3") {
    Fixture fx(4);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {2, 2, 2}, 0);
    const auto& stages = classify_fusions(sc);
    std::vector<long> count(sc.final_stage() + 1, 0);
    for (int f : stages) ++count[f];
    CHECK(count[0] == 0);  // 1x1x1 bricks contain no fusions
    CHECK(count[1] == 8 * 4);
    CHECK(count[2] == 8 * 4);
    CHECK(count[3] == 8 * 4);
    CHECK(count[4] == 192 - 96);  // FINAL
    long total = 0;
    for (long c : count) total += c;
    CHECK(total == 3L * 4 * 4 * 4);
    for (const Brick& b : sc.bricks[3]) CHECK(b.internal_fusions.size() == 12);
  }
  SUBCASE("all fusions FINAL iff max brick is 1x1x1") {
    Fixture fx(4);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {1, 1, 1}, 0);
    for (int f : classify_fusions(sc)) CHECK(f == sc.final_stage());
  }
  SUBCASE("conservation with offsets and with full-torus bricks") {
    for (auto [L, brick, step] : std::vector<std::tuple<int, Coord, int>>{
             {8, {2, 2, 2}, 1}, {8, {4, 4, 4}, 1}, {4, {4, 4, 4}, 0}, {4, {2, 2, 2}, 1}}) {
      CAPTURE(L);
      Fixture fx(L);
      DicingScheme sc = build_cuboidal_dicing(fx.net, brick, step);
      // every fusion sits in exactly one brick's connecting list, at its
      // classified stage, or in none when FINAL
      std::vector<int> uses(fx.net.num_fusions(), 0);
      for (int s = 1; s < sc.num_stages(); ++s)
        for (const Brick& b : sc.bricks[s])
          for (int f : b.connecting_fusions) {
            ++uses[f];
            CHECK(sc.fusion_stage[f] == s);
          }
      for (int f = 0; f < fx.net.num_fusions(); ++f)
        REQUIRE(uses[f] == (sc.fusion_stage[f] == sc.final_stage() ? 0 : 1));
      long internal = 0;
      for (const Brick& b : sc.bricks[sc.num_stages() - 1])
        internal += long(b.internal_fusions.size());
      long expect = 0;
      for (int f : sc.fusion_stage)
        if (f != sc.final_stage()) ++expect;
      CHECK(internal == expect);
    }
  }
}

TEST_CASE("brick views") {
  SUBCASE("2x2x2 brick has one complete check of a single type") {
    Fixture fx(8);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {2, 2, 2}, 0);
    BrickView v = brick_view(sc, 3, 0, fx.primal, fx.dual);
    CHECK(v.type_view[0].complete_checks.size() == 1);
    CHECK(v.type_view[1].complete_checks.size() == 0);
    CHECK(v.type_view[0].edges.empty());
    CHECK(v.type_view[0].half_edges.size() == 12);
    CHECK(v.type_view[1].half_edges.empty());
    // face load under the nearest-face rule with axis-priority ties
    std::array<int, 6> load{};
    for (const auto& [f, lc, face] : v.type_view[0].half_edges) ++load[face];
    CHECK(load == std::array<int, 6>{4, 4, 2, 2, 0, 0});
  }
  SUBCASE("1x1x1 brick is empty") {
    Fixture fx(4);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {2, 2, 2}, 0);
    BrickView v = brick_view(sc, 0, 0, fx.primal, fx.dual);
    CHECK(v.internal_fusions.empty());
    for (int t = 0; t < 2; ++t) {
      CHECK(v.type_view[t].complete_checks.empty());
      CHECK(v.type_view[t].edges.empty());
      CHECK(v.type_view[t].half_edges.empty());
    }
  }
  SUBCASE("4x4x4 brick: interior 3x3x3 block splits 14 / 13") {
    Fixture fx(8);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {4, 4, 4}, 0);
    int last = sc.num_stages() - 1;
    BrickView v = brick_view(sc, last, 0, fx.primal, fx.dual);
    CHECK(v.type_view[0].complete_checks.size() == 14);
    CHECK(v.type_view[1].complete_checks.size() == 13);
    for (int t = 0; t < 2; ++t) {
      std::size_t tracked = v.type_view[t].edges.size() + v.type_view[t].half_edges.size();
      CHECK(tracked <= v.internal_fusions.size());
      CHECK(tracked > 0);
    }
  }
  SUBCASE("monotone completeness: children's complete checks survive the merge") {
    Fixture fx(8);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {4, 4, 4}, 1);
    for (int s = 1; s < sc.num_stages(); ++s) {
      for (int bi = 0; bi < int(sc.bricks[s].size()); ++bi) {
        const Brick& b = sc.bricks[s][bi];
        BrickView parent = brick_view(sc, s, bi, fx.primal, fx.dual);
        for (int child : {b.child0, b.child1}) {
          BrickView cv = brick_view(sc, s - 1, child, fx.primal, fx.dual);
          for (int t = 0; t < 2; ++t) {
            std::set<int> pc(parent.type_view[t].complete_checks.begin(),
                             parent.type_view[t].complete_checks.end());
            for (int c : cv.type_view[t].complete_checks) REQUIRE(pc.count(c) == 1);
          }
        }
      }
    }
  }
}

TEST_CASE("check_offset_balance") {
  SUBCASE("4x4x4 offset dicing balances at L=8; unoffset does not") {
    Fixture fx(8);
    DicingScheme offset = build_cuboidal_dicing(fx.net, {4, 4, 4}, 1);
    auto [p1, d1] = check_offset_balance(offset, fx.primal, fx.dual);
    CHECK(p1 == 1008);
    CHECK(d1 == 1008);
    DicingScheme plain = build_cuboidal_dicing(fx.net, {4, 4, 4}, 0);
    auto [p0, d0] = check_offset_balance(plain, fx.primal, fx.dual);
    CHECK(p0 == 1056);
    CHECK(d0 == 960);
  }
  SUBCASE("2x2x2 without offset covers one type only") {
    Fixture fx(8);
    DicingScheme plain = build_cuboidal_dicing(fx.net, {2, 2, 2}, 0);
    auto [p, d] = check_offset_balance(plain, fx.primal, fx.dual);
    CHECK(p == 768);
    CHECK(d == 0);
    DicingScheme offset = build_cuboidal_dicing(fx.net, {2, 2, 2}, 1);
    auto [po, do_] = check_offset_balance(offset, fx.primal, fx.dual);
    CHECK(po == 384);
    CHECK(do_ == 384);
  }
  SUBCASE("1x1x1 max brick covers nothing") {
    Fixture fx(4);
    DicingScheme sc = build_cuboidal_dicing(fx.net, {1, 1, 1}, 0);
    auto [p, d] = check_offset_balance(sc, fx.primal, fx.dual);
    CHECK(p == 0);
    CHECK(d == 0);
  }
}
