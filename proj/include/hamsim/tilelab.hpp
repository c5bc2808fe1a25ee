#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamsim/opcore.hpp"

namespace hamsim {

enum class Edge { top, bottom, left, right };

// Energies are integers in units of 1/2.
using Half = std::int64_t;
inline double from_half(Half h) { return 0.5 * static_cast<double>(h); }
Half to_half(double x);  // throws unless 2x is an integer

struct Tileset {
  std::vector<std::string> tiles;
  std::string glyphs;  // one character per tile for grid dumps
  std::vector<std::pair<int, int>> h_ok;  // (left, right)
  std::vector<std::pair<int, int>> v_ok;  // (upper, lower)
  std::vector<double> f1;
  // tiles allowed to touch each lattice edge; empty = every tile
  std::vector<int> top, bottom, left, right;

  std::size_t size() const { return tiles.size(); }
  int index_of(const std::string& label) const;  // -1 if absent
  void validate() const;
};

// Dense lookup built from a validated Tileset.
struct TileTables {
  int T = 0;
  std::vector<char> h, v;      // T*T, 1 = allowed
  std::vector<char> edge[4];   // T each, 1 = allowed on that edge
  std::vector<Half> f1;

  explicit TileTables(const Tileset& ts);
  bool hor(int a, int b) const { return h[a * T + b]; }
  bool ver(int a, int b) const { return v[a * T + b]; }
  bool on(Edge e, int t) const { return edge[static_cast<int>(e)][t]; }
};

// row 0 is the top row
struct TileConfig {
  int W = 0, H = 0;
  std::vector<int> grid;
  double energy = 0.0;

  int at(int row, int col) const { return grid[static_cast<std::size_t>(row) * W + col]; }
  int& at(int row, int col) { return grid[static_cast<std::size_t>(row) * W + col]; }
  // geometric coordinates: x from the left, y from the bottom
  int xy(int x, int y) const { return at(H - 1 - y, x); }
};

TileConfig config_from_labels(const Tileset& ts, const std::vector<std::vector<std::string>>& rows);
std::string dump_grid(const Tileset& ts, const TileConfig& cfg);

Half tiling_energy_half(const Tileset& ts, const TileConfig& cfg);
double tiling_energy(const Tileset& ts, const TileConfig& cfg);

// anti-diagonal reflection (lower left to upper right): top <-> right, left <-> bottom
Tileset mirror_tileset(const Tileset& ts, const std::string& suffix = "'");
// cfg of a H x W lattice in the original set -> W x H lattice in the mirrored set
TileConfig mirror_config(const TileConfig& cfg);

// ---- solvers ----
constexpr double kExhaustiveLimit = 1e8;
constexpr double kTransferLimit = 5e5;

struct GroundResult {
  double energy = 0.0;
  Half energy_half = 0;
  std::uint64_t count = 0;
  bool count_saturated = false;
  std::vector<TileConfig> minimizers;  // exhaustive: up to max_keep; transfer: one
};

GroundResult ground_exhaustive(const Tileset& ts, int W, int H, std::size_t max_keep = 64);
// row-state DP along the longer side; |tiles|^min(W,H) <= kTransferLimit
GroundResult ground_transfer(const Tileset& ts, int W, int H);

// ---- counter ----
// 7 tiles: bulk 0 1 x y indexed by (bit from above, carry from the left), R left column,
// B top row, S corner with weight -1/2
Tileset binary_counter_tileset(bool mirrored = false);
// rule-by-rule construction of the zero-violation tiling; row r (from the top) holds value r
TileConfig counter_config(int W, int H, bool mirrored = false);
// bit carried by a counter tile index (same indices in both orientations)
int counter_tile_bit(int tile);
// bits of one row (unmirrored, columns 1..W-1) or one column x (mirrored, y = 1..H-1), least significant first
std::vector<int> counter_bits(const TileConfig& cfg, int line, bool mirrored = false);
std::uint64_t bits_value(const std::vector<int>& bits);

// ---- layers ----
// A pair in `horizontal ? h_ok : v_ok` with tiles (a, b) is only allowed if the tile of layer `layer`
// at the first (left/upper) or second cell lies in `allowed`.
struct PairCondition {
  bool horizontal = false;
  int a = 0, b = 0;
  std::string layer;
  bool first = true;
  std::vector<int> allowed;
};
// tile `tile` only allowed where layer `layer` shows a tile in `allowed`
struct SiteCondition {
  int tile = 0;
  std::string layer;
  std::vector<int> allowed;
};

struct Layer {
  std::string name;
  Tileset tiles;
  std::vector<PairCondition> pair_conditions;
  std::vector<SiteCondition> site_conditions;
};

struct TileStack {
  int W = 0, H = 0;
  std::vector<Layer> layers;
  std::vector<TileConfig> configs;
  std::vector<std::uint64_t> counts;  // minimizer count per solved layer (1 for rule-built layers)

  int find(const std::string& name) const;  // -1 if absent
};

// Layer energy given the lower layers of the stack (only earlier layers may be referenced).
Half layer_energy_half(const TileStack& stack, std::size_t index);
Half stack_energy_half(const TileStack& stack);

// DP for one layer with lower layers fixed; iterative deepening on an energy bound
GroundResult ground_layer(const TileStack& stack, std::size_t index, std::size_t max_states = 4000000);

enum class MarkerKind { triangle, square };
// triangle: one layer anchored on the topmost 1 of the width column;
// square: diag, rows, cols, mark anchored on the lowest 1
std::vector<Layer> marker_tilesets(MarkerKind kind);

// counter layers "height" and "width" (rule-built) plus solved triangle and square layers
TileStack ground_stack(int W, int H);

struct DecodedStack {
  std::vector<int> H_bits, W_bits;  // least significant first
  std::uint64_t H_value = 0, W_value = 0;
  int lattice_W = 0, lattice_H = 0;
  std::optional<int> n, b;  // W_value = 2^n + 2^b, n < b
  std::vector<std::pair<int, int>> triangle, square;  // (x, y), y from the bottom
  bool valid = true;
  std::vector<std::string> issues;
};

DecodedStack decode_layers(const TileStack& stack);

}  // namespace hamsim
