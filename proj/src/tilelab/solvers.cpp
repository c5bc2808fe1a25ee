// Ground-state solvers for diagonal tiling Hamiltonians: exhaustive DFS and a
// cell-by-cell transfer DP (broken profile) with a (min energy, count) semiring.
#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "hamsim/tilelab.hpp"

namespace hamsim {

namespace {

constexpr Half kInf = std::numeric_limits<Half>::max() / 4;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, bool& sat) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    sat = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a + b;
}

// Costs (half units) of one lattice problem. Cell k = r * cols + c, row 0 on top.
struct Model {
  int rows = 0, cols = 0, T = 0;
  std::vector<Half> site;  // cells * T
  std::vector<Half> hc;    // (uniform ? 1 : cells) * T * T, pair (k, k+1)
  std::vector<Half> vc;    // pair (k, k+cols)
  bool uniform = true;

  Half s(int k, int t) const { return site[static_cast<std::size_t>(k) * T + t]; }
  Half h(int k, int a, int b) const { return hc[(uniform ? 0 : static_cast<std::size_t>(k)) * T * T + a * T + b]; }
  Half v(int k, int a, int b) const { return vc[(uniform ? 0 : static_cast<std::size_t>(k)) * T * T + a * T + b]; }

  Model transposed() const {
    Model m;
    m.rows = cols;
    m.cols = rows;
    m.T = T;
    m.uniform = uniform;
    const int cells = rows * cols;
    m.site.resize(site.size());
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        for (int t = 0; t < T; ++t) m.site[(static_cast<std::size_t>(c) * rows + r) * T + t] = s(r * cols + c, t);
    if (uniform) {
      m.hc = vc;
      m.vc = hc;
    } else {
      m.hc.assign(static_cast<std::size_t>(cells) * T * T, 0);
      m.vc.assign(static_cast<std::size_t>(cells) * T * T, 0);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          std::size_t from = static_cast<std::size_t>(r * cols + c) * T * T;
          std::size_t to = static_cast<std::size_t>(c * rows + r) * T * T;
          std::copy(vc.begin() + from, vc.begin() + from + T * T, m.hc.begin() + to);
          std::copy(hc.begin() + from, hc.begin() + from + T * T, m.vc.begin() + to);
        }
    }
    return m;
  }

  Half evaluate(const TileConfig& cfg) const {
    Half e = 0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        int k = r * cols + c, t = cfg.at(r, c);
        e += s(k, t);
        if (c + 1 < cols) e += h(k, t, cfg.at(r, c + 1));
        if (r + 1 < rows) e += v(k, t, cfg.at(r + 1, c));
      }
    return e;
  }
};

Model tileset_model(const Tileset& ts, int W, int H) {
  TileTables tb(ts);
  Model m;
  m.rows = H;
  m.cols = W;
  m.T = tb.T;
  m.site.assign(static_cast<std::size_t>(W) * H * tb.T, 0);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c)
      for (int t = 0; t < tb.T; ++t) {
        Half e = tb.f1[t];
        if (r == 0 && !tb.on(Edge::top, t)) e += 2;
        if (r == H - 1 && !tb.on(Edge::bottom, t)) e += 2;
        if (c == 0 && !tb.on(Edge::left, t)) e += 2;
        if (c == W - 1 && !tb.on(Edge::right, t)) e += 2;
        m.site[(static_cast<std::size_t>(r) * W + c) * tb.T + t] = e;
      }
  m.hc.assign(tb.T * tb.T, 0);
  m.vc.assign(tb.T * tb.T, 0);
  for (int a = 0; a < tb.T; ++a)
    for (int b = 0; b < tb.T; ++b) {
      m.hc[a * tb.T + b] = tb.hor(a, b) ? 0 : 2;
      m.vc[a * tb.T + b] = tb.ver(a, b) ? 0 : 2;
    }
  return m;
}

Model layer_model(const TileStack& st, std::size_t index) {
  if (index >= st.layers.size() || st.configs.size() < index)
    throw Error(Error::Kind::structural, "layer index outside the stack");
  const Layer& L = st.layers[index];
  Model m = tileset_model(L.tiles, st.W, st.H);
  auto lower = [&](const std::string& name) -> const TileConfig& {
    int j = st.find(name);
    if (j < 0 || static_cast<std::size_t>(j) >= index)
      throw Error(Error::Kind::structural, "layer " + L.name + " references '" + name + "' which is not below it");
    const TileConfig& cfg = st.configs[j];
    if (cfg.W != st.W || cfg.H != st.H) throw Error(Error::Kind::structural, "layers inconsistent: size mismatch");
    return cfg;
  };
  auto has = [](const std::vector<int>& v, int t) { return std::find(v.begin(), v.end(), t) != v.end(); };
  const int T = m.T, cells = st.W * st.H;
  for (const auto& sc : L.site_conditions) {
    const TileConfig& low = lower(sc.layer);
    for (int k = 0; k < cells; ++k)
      if (!has(sc.allowed, low.grid[k])) m.site[static_cast<std::size_t>(k) * T + sc.tile] += 2;
  }
  if (!L.pair_conditions.empty()) {
    std::vector<Half> hc(static_cast<std::size_t>(cells) * T * T), vc(hc.size());
    for (int k = 0; k < cells; ++k) {
      std::copy(m.hc.begin(), m.hc.end(), hc.begin() + static_cast<std::size_t>(k) * T * T);
      std::copy(m.vc.begin(), m.vc.end(), vc.begin() + static_cast<std::size_t>(k) * T * T);
    }
    for (const auto& pc : L.pair_conditions) {
      const TileConfig& low = lower(pc.layer);
      for (int r = 0; r < st.H; ++r)
        for (int c = 0; c < st.W; ++c) {
          int k = r * st.W + c;
          if (pc.horizontal ? c + 1 >= st.W : r + 1 >= st.H) continue;
          int other = pc.horizontal ? k + 1 : k + st.W;
          int probe = low.grid[pc.first ? k : other];
          if (has(pc.allowed, probe)) continue;
          auto& tab = pc.horizontal ? hc : vc;
          tab[static_cast<std::size_t>(k) * T * T + pc.a * T + pc.b] = 2;
        }
    }
    m.hc = std::move(hc);
    m.vc = std::move(vc);
    m.uniform = false;
  }
  return m;
}

struct Solved {
  bool found = false;
  Half energy = 0;
  std::uint64_t count = 0;
  bool saturated = false;
  std::vector<int> grid;  // row-major in the model's orientation
};

// bound: prune partial configurations that cannot end at or below it
Solved transfer(const Model& m, Half bound, std::size_t max_states) {
  const int R = m.rows, C = m.cols, T = m.T, cells = R * C;
  if (C * std::log2(static_cast<double>(std::max(T, 2))) > 62)
    throw Error(Error::Kind::too_large, "row state does not fit a 64-bit code");
  std::vector<std::uint64_t> pw(C + 1, 1);
  for (int i = 1; i <= C; ++i) pw[i] = pw[i - 1] * T;
  const bool dense = static_cast<double>(pw[C]) <= 4e6;

  // floor[k] = lowest possible site cost of cells k..end
  std::vector<Half> floor(cells + 1, 0);
  for (int k = cells - 1; k >= 0; --k) {
    Half lo = kInf;
    for (int t = 0; t < T; ++t) lo = std::min(lo, m.s(k, t));
    floor[k] = floor[k + 1] + std::min<Half>(lo, 0);
  }

  struct Layer_ {
    std::vector<std::uint64_t> code;
    std::vector<Half> e;
    std::vector<std::uint64_t> cnt;
    std::vector<std::uint32_t> parent;
  };
  std::vector<Layer_> steps(cells + 1);
  steps[0].code = {0};
  steps[0].e = {0};
  steps[0].cnt = {1};
  steps[0].parent = {0};

  Solved out;
  std::vector<std::int64_t> slot_dense;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_sparse;
  if (dense) slot_dense.assign(pw[C], -1);

  for (int k = 0; k < cells; ++k) {
    const int r = k / C, c = k % C;
    const Layer_& cur = steps[k];
    Layer_& nxt = steps[k + 1];
    std::vector<std::uint64_t> touched;
    if (!dense) slot_sparse.clear();
    for (std::size_t i = 0; i < cur.code.size(); ++i) {
      const std::uint64_t code = cur.code[i];
      const int up = r > 0 ? static_cast<int>(code / pw[c] % T) : -1;
      const int lf = c > 0 ? static_cast<int>(code / pw[c - 1] % T) : -1;
      const std::uint64_t base = code - (r > 0 ? up * pw[c] : 0);
      for (int t = 0; t < T; ++t) {
        Half e = cur.e[i] + m.s(k, t);
        if (lf >= 0) e += m.h(k - 1, lf, t);
        if (up >= 0) e += m.v(k - C, up, t);
        if (e + floor[k + 1] > bound) continue;
        const std::uint64_t nc = base + t * pw[c];
        std::int64_t at;
        if (dense) {
          at = slot_dense[nc];
          if (at < 0) {
            at = static_cast<std::int64_t>(nxt.code.size());
            slot_dense[nc] = at;
            touched.push_back(nc);
          }
        } else {
          auto [it, fresh] = slot_sparse.try_emplace(nc, static_cast<std::uint32_t>(nxt.code.size()));
          at = it->second;
          (void)fresh;
        }
        if (at == static_cast<std::int64_t>(nxt.code.size())) {
          nxt.code.push_back(nc);
          nxt.e.push_back(e);
          nxt.cnt.push_back(cur.cnt[i]);
          nxt.parent.push_back(static_cast<std::uint32_t>(i));
          if (nxt.code.size() > max_states)
            throw Error(Error::Kind::too_large, "transfer DP exceeded " + std::to_string(max_states) + " live states");
        } else if (e < nxt.e[at]) {
          nxt.e[at] = e;
          nxt.cnt[at] = cur.cnt[i];
          nxt.parent[at] = static_cast<std::uint32_t>(i);
        } else if (e == nxt.e[at]) {
          nxt.cnt[at] = sat_add(nxt.cnt[at], cur.cnt[i], out.saturated);
        }
      }
    }
    for (auto nc : touched) slot_dense[nc] = -1;
    // drop history not needed for the trace
    std::vector<Half>().swap(steps[k].e);
    std::vector<std::uint64_t>().swap(steps[k].cnt);
    if (nxt.code.empty()) return out;
  }

  const Layer_& fin = steps[cells];
  Half best = kInf;
  for (Half e : fin.e) best = std::min(best, e);
  std::size_t pick = fin.e.size();
  for (std::size_t i = 0; i < fin.e.size(); ++i)
    if (fin.e[i] == best) {
      out.count = sat_add(out.count, fin.cnt[i], out.saturated);
      if (pick == fin.e.size()) pick = i;
    }
  out.found = true;
  out.energy = best;
  out.grid.assign(cells, 0);
  std::size_t idx = pick;
  for (int k = cells; k >= 1; --k) {
    out.grid[k - 1] = static_cast<int>(steps[k].code[idx] / pw[(k - 1) % C] % T);
    idx = steps[k].parent[idx];
  }
  return out;
}

GroundResult finish(const Solved& s, int W, int H, bool swapped) {
  GroundResult g;
  g.energy_half = s.energy;
  g.energy = from_half(s.energy);
  g.count = s.count;
  g.count_saturated = s.saturated;
  TileConfig cfg;
  cfg.W = W;
  cfg.H = H;
  cfg.grid.assign(static_cast<std::size_t>(W) * H, 0);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) cfg.at(r, c) = swapped ? s.grid[static_cast<std::size_t>(c) * H + r] : s.grid[static_cast<std::size_t>(r) * W + c];
  cfg.energy = g.energy;
  g.minimizers.push_back(std::move(cfg));
  return g;
}

Solved run_oriented(const Model& m, Half bound, std::size_t max_states, bool& swapped) {
  swapped = m.cols > m.rows;
  return swapped ? transfer(m.transposed(), bound, max_states) : transfer(m, bound, max_states);
}

}  // namespace

GroundResult ground_exhaustive(const Tileset& ts, int W, int H, std::size_t max_keep) {
  if (W < 1 || H < 1) throw Error(Error::Kind::structural, "lattice must be at least 1x1");
  const Model m = tileset_model(ts, W, H);
  if (std::pow(static_cast<double>(m.T), static_cast<double>(W) * H) > kExhaustiveLimit)
    throw Error(Error::Kind::too_large, "exhaustive search exceeds 1e8 configurations");
  const int cells = W * H;
  std::vector<int> g(cells, 0);
  GroundResult out;
  Half best = kInf;
  std::vector<std::vector<int>> keep;
  // depth-first over cells with running energy
  std::vector<Half> acc(cells + 1, 0);
  int k = 0;
  std::vector<int> next(cells, 0);
  while (k >= 0) {
    if (k == cells) {
      Half e = acc[cells];
      if (e < best) {
        best = e;
        out.count = 0;
        out.count_saturated = false;
        keep.clear();
      }
      if (e == best) {
        out.count = sat_add(out.count, 1, out.count_saturated);
        if (keep.size() < max_keep) keep.push_back(g);
      }
      --k;
      continue;
    }
    if (next[k] == m.T) {
      next[k] = 0;
      --k;
      continue;
    }
    const int t = next[k]++;
    const int r = k / W, c = k % W;
    Half e = acc[k] + m.s(k, t);
    if (c > 0) e += m.h(k - 1, g[k - 1], t);
    if (r > 0) e += m.v(k - W, g[k - W], t);
    g[k] = t;
    acc[k + 1] = e;
    ++k;
  }
  out.energy_half = best;
  out.energy = from_half(best);
  for (auto& grid : keep) {
    TileConfig cfg;
    cfg.W = W;
    cfg.H = H;
    cfg.grid = std::move(grid);
    cfg.energy = out.energy;
    out.minimizers.push_back(std::move(cfg));
  }
  return out;
}

GroundResult ground_transfer(const Tileset& ts, int W, int H) {
  if (W < 1 || H < 1) throw Error(Error::Kind::structural, "lattice must be at least 1x1");
  const Model m = tileset_model(ts, W, H);
  if (std::pow(static_cast<double>(m.T), std::min(W, H)) > kTransferLimit)
    throw Error(Error::Kind::too_large, "row state space exceeds 5e5");
  bool swapped = false;
  Solved s = run_oriented(m, kInf, std::numeric_limits<std::size_t>::max(), swapped);
  return finish(s, W, H, swapped);
}

Half layer_energy_half(const TileStack& stack, std::size_t index) {
  if (index >= stack.configs.size()) throw Error(Error::Kind::structural, "layer has no config");
  const TileConfig& cfg = stack.configs[index];
  if (cfg.W != stack.W || cfg.H != stack.H) throw Error(Error::Kind::structural, "layers inconsistent: size mismatch");
  for (int t : cfg.grid)
    if (t < 0 || t >= static_cast<int>(stack.layers[index].tiles.size()))
      throw Error(Error::Kind::structural, "unknown tile index in layer " + stack.layers[index].name);
  return layer_model(stack, index).evaluate(cfg);
}

Half stack_energy_half(const TileStack& stack) {
  if (stack.configs.size() != stack.layers.size())
    throw Error(Error::Kind::structural, "layers inconsistent: config count differs from layer count");
  Half e = 0;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) e += layer_energy_half(stack, i);
  return e;
}

GroundResult ground_layer(const TileStack& stack, std::size_t index, std::size_t max_states) {
  const Model m = layer_model(stack, index);
  Half lo = 0;
  for (int k = 0; k < m.rows * m.cols; ++k) {
    Half s = kInf;
    for (int t = 0; t < m.T; ++t) s = std::min(s, m.s(k, t));
    lo += std::min<Half>(s, 0);
  }
  Half step = 2;
  for (Half bound = lo;; bound += step, step *= 2) {
    bool swapped = false;
    Solved s = run_oriented(m, bound, max_states, swapped);
    if (s.found) return finish(s, stack.W, stack.H, swapped);
    if (step > (Half{1} << 40)) throw Error(Error::Kind::not_converged, "layer bound search diverged");
  }
}

}  // namespace hamsim
