#include <cmath>
#include <set>

#include "hamsim/tilelab.hpp"

namespace hamsim {

Half to_half(double x) {
  double h = 2.0 * x;
  if (!std::isfinite(h) || std::abs(h - std::round(h)) > 1e-12)
    throw Error(Error::Kind::structural, "tile weight " + std::to_string(x) + " is not a multiple of 1/2");
  return static_cast<Half>(std::llround(h));
}

int Tileset::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i] == label) return static_cast<int>(i);
  return -1;
}

void Tileset::validate() const {
  const int T = static_cast<int>(tiles.size());
  if (T == 0) throw Error(Error::Kind::structural, "tileset has no tiles");
  std::set<std::string> seen(tiles.begin(), tiles.end());
  if (static_cast<int>(seen.size()) != T) throw Error(Error::Kind::structural, "duplicate tile label");
  if (!glyphs.empty() && static_cast<int>(glyphs.size()) != T)
    throw Error(Error::Kind::structural, "glyph string length differs from tile count");
  if (static_cast<int>(f1.size()) != T) throw Error(Error::Kind::structural, "f1 needs one weight per tile");
  for (double w : f1) to_half(w);
  auto in = [&](int t) { return t >= 0 && t < T; };
  for (const auto* rel : {&h_ok, &v_ok})
    for (auto [a, b] : *rel)
      if (!in(a) || !in(b)) throw Error(Error::Kind::structural, "pair relation references a missing tile");
  for (const auto* e : {&top, &bottom, &left, &right})
    for (int t : *e)
      if (!in(t)) throw Error(Error::Kind::structural, "boundary marker references a missing tile");
}

TileTables::TileTables(const Tileset& ts) : T(static_cast<int>(ts.size())) {
  ts.validate();
  h.assign(T * T, 0);
  v.assign(T * T, 0);
  for (auto [a, b] : ts.h_ok) h[a * T + b] = 1;
  for (auto [a, b] : ts.v_ok) v[a * T + b] = 1;
  const std::vector<int>* lists[4] = {&ts.top, &ts.bottom, &ts.left, &ts.right};
  for (int e = 0; e < 4; ++e) {
    edge[e].assign(T, lists[e]->empty() ? 1 : 0);
    for (int t : *lists[e]) edge[e][t] = 1;
  }
  for (double w : ts.f1) f1.push_back(to_half(w));
}

TileConfig config_from_labels(const Tileset& ts, const std::vector<std::vector<std::string>>& rows) {
  TileConfig c;
  c.H = static_cast<int>(rows.size());
  c.W = c.H ? static_cast<int>(rows[0].size()) : 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != c.W) throw Error(Error::Kind::structural, "ragged tile grid");
    for (const auto& l : r) {
      int t = ts.index_of(l);
      if (t < 0) throw Error(Error::Kind::structural, "unknown tile label '" + l + "'");
      c.grid.push_back(t);
    }
  }
  c.energy = tiling_energy(ts, c);
  return c;
}

std::string dump_grid(const Tileset& ts, const TileConfig& cfg) {
  std::string out;
  for (int r = 0; r < cfg.H; ++r) {
    for (int c = 0; c < cfg.W; ++c) {
      int t = cfg.at(r, c);
      out += ts.glyphs.empty() ? ts.tiles[t].substr(0, 1) : std::string(1, ts.glyphs[t]);
    }
    out += '\n';
  }
  return out;
}

Half tiling_energy_half(const Tileset& ts, const TileConfig& cfg) {
  if (cfg.W <= 0 || cfg.H <= 0 || cfg.grid.size() != static_cast<std::size_t>(cfg.W) * cfg.H)
    throw Error(Error::Kind::structural, "tile config dimensions do not match its grid");
  TileTables tb(ts);
  Half e = 0;
  for (int r = 0; r < cfg.H; ++r)
    for (int c = 0; c < cfg.W; ++c) {
      int t = cfg.at(r, c);
      if (t < 0 || t >= tb.T) throw Error(Error::Kind::structural, "unknown tile index in config");
      e += tb.f1[t];
      if (r == 0 && !tb.on(Edge::top, t)) e += 2;
      if (r == cfg.H - 1 && !tb.on(Edge::bottom, t)) e += 2;
      if (c == 0 && !tb.on(Edge::left, t)) e += 2;
      if (c == cfg.W - 1 && !tb.on(Edge::right, t)) e += 2;
      if (c + 1 < cfg.W && !tb.hor(t, cfg.at(r, c + 1))) e += 2;
      if (r + 1 < cfg.H && !tb.ver(t, cfg.at(r + 1, c))) e += 2;
    }
  return e;
}

double tiling_energy(const Tileset& ts, const TileConfig& cfg) { return from_half(tiling_energy_half(ts, cfg)); }

Tileset mirror_tileset(const Tileset& ts, const std::string& suffix) {
  Tileset m;
  for (const auto& l : ts.tiles) m.tiles.push_back(l + suffix);
  m.glyphs = ts.glyphs;
  m.f1 = ts.f1;
  for (auto [u, l] : ts.v_ok) m.h_ok.push_back({l, u});
  for (auto [a, b] : ts.h_ok) m.v_ok.push_back({b, a});
  m.top = ts.right;
  m.right = ts.top;
  m.bottom = ts.left;
  m.left = ts.bottom;
  return m;
}

TileConfig mirror_config(const TileConfig& cfg) {
  TileConfig m;
  m.W = cfg.H;
  m.H = cfg.W;
  m.grid.assign(cfg.grid.size(), 0);
  for (int r = 0; r < m.H; ++r)
    for (int c = 0; c < m.W; ++c) m.at(r, c) = cfg.at(m.W - 1 - c, m.H - 1 - r);
  m.energy = cfg.energy;
  return m;
}

int TileStack::find(const std::string& name) const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].name == name) return static_cast<int>(i);
  return -1;
}

}  // namespace hamsim
