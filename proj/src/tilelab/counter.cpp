#include <array>

#include "hamsim/tilelab.hpp"

namespace hamsim {

namespace {

// edge colors: top, right, bottom, left; "-" faces the lattice boundary
struct Colors {
  const char* label;
  char glyph;
  std::array<const char*, 4> c;
};

// bulk tile (t, c): bit t from above, carry c from the left; writes t^c below, passes t&c right
const Colors kTiles[7] = {
    {"0", '0', {"0", "0", "0", "0"}},
    {"1", '1', {"1", "0", "1", "0"}},
    {"x", 'x', {"0", "0", "1", "1"}},
    {"y", 'y', {"1", "1", "0", "1"}},
    {"R", 'R', {"R", "1", "R", "-"}},
    {"B", 'B', {"-", "B", "0", "B"}},
    {"S", 'S', {"-", "B", "R", "-"}},
};

enum { kTop, kRight, kBottom, kLeft };

int bulk(int t, int c) { return t ? (c ? 3 : 1) : (c ? 2 : 0); }

std::string s(const char* x) { return x; }

}  // namespace

Tileset binary_counter_tileset(bool mirrored) {
  Tileset ts;
  for (const auto& t : kTiles) {
    ts.tiles.push_back(t.label);
    ts.glyphs += t.glyph;
    ts.f1.push_back(s(t.label) == "S" ? -0.5 : 0.0);
  }
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      if (s(kTiles[a].c[kRight]) != "-" && s(kTiles[a].c[kRight]) == kTiles[b].c[kLeft]) ts.h_ok.push_back({a, b});
      if (s(kTiles[a].c[kBottom]) != "-" && s(kTiles[a].c[kBottom]) == kTiles[b].c[kTop]) ts.v_ok.push_back({a, b});
    }
  for (int a = 0; a < 7; ++a) {
    if (s(kTiles[a].c[kTop]) == "-") ts.top.push_back(a);
    if (s(kTiles[a].c[kLeft]) == "-") ts.left.push_back(a);
    // no carry may leave through the right edge
    if (s(kTiles[a].c[kRight]) != "1") ts.right.push_back(a);
  }
  return mirrored ? mirror_tileset(ts) : ts;
}

int counter_tile_bit(int tile) { return tile == 1 || tile == 2 ? 1 : 0; }

TileConfig counter_config(int W, int H, bool mirrored) {
  if (W < 1 || H < 1) throw Error(Error::Kind::structural, "lattice must be at least 1x1");
  if (mirrored) {
    TileConfig m = mirror_config(counter_config(H, W, false));
    m.energy = tiling_energy(binary_counter_tileset(true), m);
    return m;
  }
  TileConfig cfg;
  cfg.W = W;
  cfg.H = H;
  cfg.grid.assign(static_cast<std::size_t>(W) * H, 0);
  cfg.at(0, 0) = 6;
  for (int c = 1; c < W; ++c) cfg.at(0, c) = 5;
  for (int r = 1; r < H; ++r) {
    cfg.at(r, 0) = 4;
    int carry = 1;
    for (int c = 1; c < W; ++c) {
      int t = counter_tile_bit(cfg.at(r - 1, c));
      cfg.at(r, c) = bulk(t, carry);
      carry = t & carry;
    }
  }
  cfg.energy = tiling_energy(binary_counter_tileset(false), cfg);
  return cfg;
}

std::vector<int> counter_bits(const TileConfig& cfg, int line, bool mirrored) {
  std::vector<int> bits;
  if (!mirrored) {
    if (line < 0 || line >= cfg.H) throw Error(Error::Kind::structural, "row outside the lattice");
    for (int c = 1; c < cfg.W; ++c) bits.push_back(counter_tile_bit(cfg.at(line, c)));
  } else {
    if (line < 0 || line >= cfg.W) throw Error(Error::Kind::structural, "column outside the lattice");
    for (int y = 1; y < cfg.H; ++y) bits.push_back(counter_tile_bit(cfg.xy(line, y)));
  }
  return bits;
}

std::uint64_t bits_value(const std::vector<int>& bits) {
  std::uint64_t v = 0;
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (v >> 62) throw Error(Error::Kind::too_large, "counter value exceeds 64 bits");
    v = 2 * v + (bits[i] ? 1 : 0);
  }
  return v;
}

}  // namespace hamsim
