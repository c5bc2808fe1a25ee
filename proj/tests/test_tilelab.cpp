#include "doctest.h"

#include <algorithm>
#include <set>

#include "hamsim/tilelab.hpp"

using namespace hamsim;

namespace {

Tileset free_set(int n) {
  Tileset ts;
  for (int i = 0; i < n; ++i) {
    ts.tiles.push_back("t" + std::to_string(i));
    ts.f1.push_back(0.0);
    for (int j = 0; j < n; ++j) {
      ts.h_ok.push_back({i, j});
      ts.v_ok.push_back({i, j});
    }
  }
  return ts;
}

// expected counter rows by integer arithmetic: row r (from the top) holds r, lsb next to the left column
std::vector<int> oracle_bits(std::uint64_t value, int width) {
  std::vector<int> b;
  for (int i = 0; i < width; ++i) b.push_back(static_cast<int>((value >> i) & 1));
  return b;
}

std::set<std::pair<int, int>> as_set(const std::vector<std::pair<int, int>>& v) { return {v.begin(), v.end()}; }

std::set<std::pair<int, int>> predicate(int W, int H, bool tri, int p) {
  std::set<std::pair<int, int>> s;
  for (int x = 0; x < W; ++x)
    for (int y = 0; y < H; ++y)
      if (tri ? x + y < p : (x < p && y < p)) s.insert({x, y});
  return s;
}

}  // namespace

TEST_CASE("tiling energy") {
  Tileset one = free_set(1);
  TileConfig c{3, 2, std::vector<int>(6, 0), 0};
  CHECK(tiling_energy(one, c) == 0.0);

  Tileset ctr = binary_counter_tileset();
  CHECK(ctr.size() == 7);
  CHECK(tiling_energy(ctr, config_from_labels(ctr, {{"S"}})) == -0.5);

  Tileset two = free_set(2);
  two.h_ok = {{0, 0}, {1, 1}};
  CHECK(tiling_energy(two, config_from_labels(two, {{"t0", "t1"}})) == 1.0);
  CHECK_THROWS_AS(config_from_labels(two, {{"t0", "zz"}}), Error);

  Tileset bad = free_set(2);
  bad.h_ok.push_back({0, 5});
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = free_set(2);
  bad.f1[0] = 0.3;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("exhaustive solver") {
  Tileset ctr = binary_counter_tileset();
  auto g = ground_exhaustive(ctr, 1, 1);
  CHECK(g.energy == -0.5);
  CHECK(g.count == 1);
  CHECK(ctr.tiles[g.minimizers[0].grid[0]] == "S");

  auto t = ground_exhaustive(free_set(1), 3, 3);
  CHECK(t.count == 1);
  CHECK(t.energy == 0.0);
  CHECK_THROWS_AS(ground_exhaustive(ctr, 4, 4), Error);
}

TEST_CASE("transfer agrees with exhaustive") {
  Tileset ctr = binary_counter_tileset();
  for (auto [W, H] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 2}, {2, 3}, {3, 3}}) {
    CAPTURE(W);
    CAPTURE(H);
    auto a = ground_exhaustive(ctr, W, H);
    auto b = ground_transfer(ctr, W, H);
    CHECK(a.energy_half == b.energy_half);
    CHECK(a.count == b.count);
    CHECK(tiling_energy_half(ctr, b.minimizers[0]) == b.energy_half);
  }
  // a set with real ties
  Tileset two = free_set(2);
  two.h_ok = {{0, 1}, {1, 0}, {0, 0}};
  two.f1 = {0.0, -0.5};
  auto a = ground_exhaustive(two, 3, 3);
  auto b = ground_transfer(two, 3, 3);
  CHECK(a.energy_half == b.energy_half);
  CHECK(a.count == b.count);
}

TEST_CASE("trivial transfer counts") {
  CHECK(ground_transfer(free_set(1), 5, 7).count == 1);
  auto g = ground_transfer(free_set(2), 3, 4);
  CHECK(g.count == 4096);
  CHECK(g.energy == 0.0);
  CHECK_THROWS_AS(ground_transfer(binary_counter_tileset(), 8, 8), Error);
}

TEST_CASE("binary counter ground states") {
  Tileset ctr = binary_counter_tileset();
  for (int W = 2; W <= 6; ++W)
    for (int H = 2; H <= 8; ++H) {
      if (H - 1 >= (1 << (W - 1))) continue;  // value does not fit
      CAPTURE(W);
      CAPTURE(H);
      auto g = ground_transfer(ctr, W, H);
      CHECK(g.count == 1);
      CHECK(g.energy == -0.5);
      const TileConfig& cfg = g.minimizers[0];
      CHECK(ctr.tiles[cfg.at(0, 0)] == "S");
      for (int r = 1; r < H; ++r) CHECK(counter_bits(cfg, r) == oracle_bits(r, W - 1));
      CHECK(cfg.grid == counter_config(W, H).grid);
    }
  auto g = ground_transfer(ctr, 6, 5);
  CHECK(bits_value(counter_bits(g.minimizers[0], 4)) == 4);
  auto sq = ground_transfer(ctr, 6, 6);
  CHECK(ctr.tiles[sq.minimizers[0].at(0, 0)] == "S");
}

TEST_CASE("mirrored counter") {
  Tileset m = binary_counter_tileset(true);
  for (auto [W, H] : std::vector<std::pair<int, int>>{{3, 3}, {5, 4}, {8, 5}}) {
    auto g = ground_transfer(m, W, H);
    CHECK(g.count == 1);
    CHECK(g.energy == -0.5);
    const TileConfig& cfg = g.minimizers[0];
    CHECK(cfg.grid == counter_config(W, H, true).grid);
    CHECK(m.tiles[cfg.xy(W - 1, 0)] == "S'");
    CHECK(counter_bits(cfg, 0, true) == oracle_bits(W - 1, H - 1));
  }
}

TEST_CASE("marker layers match the geometric predicates") {
  for (int b = 1; b <= 5; ++b)
    for (int n = 0; n <= std::min(3, b - 1); ++n) {
      CAPTURE(b);
      CAPTURE(n);
      const int W = (1 << b) + (1 << n) + 1, H = b + 2;
      TileStack st = ground_stack(W, H);
      for (auto c : st.counts) CHECK(c == 1);
      auto d = decode_layers(st);
      CHECK(d.valid);
      REQUIRE(d.n.has_value());
      CHECK(*d.n == n);
      CHECK(*d.b == b);
      CHECK(as_set(d.triangle) == predicate(W, H, true, b));
      CHECK(as_set(d.square) == predicate(W, H, false, n));
      CHECK(d.lattice_W == W);
      CHECK(d.lattice_H == H);
    }
}

TEST_CASE("triangle edge cases and decoding") {
  // width value 1: topmost 1 at offset 0
  TileStack st = ground_stack(2, 3);
  auto d = decode_layers(st);
  CHECK(d.triangle.empty());
  CHECK_FALSE(d.n.has_value());

  TileStack ten = ground_stack(11, 6);
  auto e = decode_layers(ten);
  CHECK(e.W_value == 10);
  CHECK(*e.n == 1);
  CHECK(*e.b == 3);
  CHECK(e.H_value == 5);
  CHECK(as_set(e.triangle) == predicate(11, 6, true, 3));

  TileStack broken = ten;
  int t = broken.find("triangle");
  broken.configs[t].at(0, 5) = 5;
  auto f = decode_layers(broken);
  CHECK_FALSE(f.valid);
  CHECK_FALSE(f.issues.empty());

  TileStack ragged = ten;
  ragged.configs[0].W = 3;
  CHECK_THROWS_AS(decode_layers(ragged), Error);
}
