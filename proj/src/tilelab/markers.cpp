#include "hamsim/tilelab.hpp"

namespace hamsim {

namespace {

// diagonal layer: left column P (above) / DL (anchor) / Q (below), interior E / D / F
enum { P, DL, Q, E, D, F };

const std::vector<int> kBit1{1, 2};           // counter tiles carrying a 1
const std::vector<int> kBit0{0, 3, 4, 5, 6};  // everything else

Tileset diag_tiles() {
  Tileset ts;
  ts.tiles = {"P", "DL", "Q", "E", "D", "F"};
  ts.glyphs = "p|q./#";
  ts.f1.assign(6, 0.0);
  ts.h_ok = {{P, E}, {DL, E}, {Q, F}, {Q, D}, {F, F}, {F, D}, {D, E}, {E, E}};
  ts.v_ok = {{P, P}, {P, DL}, {DL, Q}, {Q, Q}, {E, E}, {E, D}, {D, F}, {F, F}};
  ts.left = {P, DL, Q};
  ts.top = {P, E};
  return ts;
}

std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> v;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v.push_back({a, b});
  return v;
}

Layer triangle_layer() {
  Layer L;
  L.name = "triangle";
  L.tiles = diag_tiles();
  // anchor below the topmost 1 of the width column
  L.pair_conditions = {{false, P, P, "width", true, kBit0}, {false, P, DL, "width", true, kBit1}};
  return L;
}

std::vector<Layer> square_layers() {
  Layer diag;
  diag.name = "square.diag";
  diag.tiles = diag_tiles();
  diag.tiles.bottom = {DL, Q, E, D, F};
  // anchor below the lowest 1 of the width column
  diag.pair_conditions = {{false, P, DL, "width", true, kBit1},
                          {false, DL, Q, "width", true, kBit0},
                          {false, Q, Q, "width", true, kBit0}};

  // rows y < n: flag copied rightwards from the left column
  Layer rows;
  rows.name = "square.rows";
  rows.tiles.tiles = {"rL0", "rL1", "r0", "r1"};
  rows.tiles.glyphs = "ab-=";
  rows.tiles.f1.assign(4, 0.0);
  rows.tiles.h_ok = {{0, 2}, {1, 3}, {2, 2}, {3, 3}};
  rows.tiles.v_ok = all_pairs(4);
  rows.tiles.left = {0, 1};
  rows.site_conditions = {{1, "square.diag", {Q}}, {0, "square.diag", {P, DL}}};

  // columns x < n: flag copied upwards from the bottom row
  Layer cols;
  cols.name = "square.cols";
  cols.tiles.tiles = {"cB0", "cB1", "c0", "c1"};
  cols.tiles.glyphs = "ab|!";
  cols.tiles.f1.assign(4, 0.0);
  cols.tiles.h_ok = all_pairs(4);
  cols.tiles.v_ok = {{2, 2}, {2, 0}, {3, 3}, {3, 1}};
  cols.tiles.bottom = {0, 1};
  cols.site_conditions = {{1, "square.diag", {Q, F}}, {0, "square.diag", {P, DL, E, D}}};

  Layer mark;
  mark.name = "square.mark";
  mark.tiles.tiles = {"in", "out_r", "out_c"};
  mark.tiles.glyphs = "#..";
  mark.tiles.f1.assign(3, 0.0);
  mark.tiles.h_ok = all_pairs(3);
  mark.tiles.v_ok = all_pairs(3);
  mark.site_conditions = {{0, "square.rows", {1, 3}},
                          {0, "square.cols", {1, 3}},
                          {1, "square.rows", {0, 2}},
                          {2, "square.rows", {1, 3}},
                          {2, "square.cols", {0, 2}}};
  return {diag, rows, cols, mark};
}

}  // namespace

std::vector<Layer> marker_tilesets(MarkerKind kind) {
  if (kind == MarkerKind::triangle) return {triangle_layer()};
  return square_layers();
}

TileStack ground_stack(int W, int H) {
  if (W < 2 || H < 2) throw Error(Error::Kind::structural, "stack needs at least a 2x2 lattice");
  TileStack st;
  st.W = W;
  st.H = H;
  Layer height{"height", binary_counter_tileset(false), {}, {}};
  Layer width{"width", binary_counter_tileset(true), {}, {}};
  st.layers = {height, width};
  st.configs = {counter_config(W, H, false), counter_config(W, H, true)};
  st.counts = {1, 1};
  for (auto kind : {MarkerKind::triangle, MarkerKind::square})
    for (auto& L : marker_tilesets(kind)) {
      st.layers.push_back(L);
      GroundResult g = ground_layer(st, st.layers.size() - 1);
      st.configs.push_back(g.minimizers.front());
      st.counts.push_back(g.count);
    }
  return st;
}

}  // namespace hamsim
