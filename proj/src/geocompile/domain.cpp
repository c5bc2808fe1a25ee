// Quotient graph of a periodic window, the inductive fundamental domain, minor checks.
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <tuple>
#include <set>

#include <Eigen/Dense>

#include "hamsim/geocompile.hpp"

namespace hamsim {

namespace {

GridPoint add(GridPoint a, const GridPoint& b, int s = 1) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

int floordiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

std::string str(const GridPoint& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
  return s + ")";
}

void for_each_cell(const GridPoint& lo, const GridPoint& hi, const std::function<void(const GridPoint&)>& f) {
  const int D = static_cast<int>(lo.size());
  for (int d = 0; d < D; ++d)
    if (lo[d] > hi[d]) return;
  GridPoint k = lo;
  for (;;) {
    f(k);
    int d = 0;
    while (d < D && ++k[d] > hi[d]) {
      k[d] = lo[d];
      ++d;
    }
    if (d == D) return;
  }
}

// lattice spanned by the first j domain vectors; w_i has a positive i-th entry and zeros beyond
struct Sublattice {
  const std::vector<GridPoint>& w;
  int j;

  // components < j brought into [0, w_i[i])
  GridPoint reduce(GridPoint k) const {
    for (int i = j - 1; i >= 0; --i) {
      int q = floordiv(k[i], w[i][i]);
      if (q) k = add(k, w[i], -q);
    }
    return k;
  }
  // d = m e_j + (element of the sublattice), returns m when the rest vanishes
  std::optional<int> along(const GridPoint& d) const {
    for (std::size_t m = j + 1; m < d.size(); ++m)
      if (d[m] != 0) return std::nullopt;
    GridPoint r = d;
    r[j] = 0;
    r = reduce(r);
    for (int i = 0; i < j; ++i)
      if (r[i] != 0) return std::nullopt;
    return d[j];
  }
};

}  // namespace

std::vector<std::pair<int, GridPoint>> QuotientGraph::neighbours(int cls) const {
  std::vector<std::pair<int, GridPoint>> out;
  for (const auto& b : bonds) {
    if (b.a == cls) out.push_back({b.b, b.offset});
    if (b.b == cls) out.push_back({b.a, add(GridPoint(D, 0), b.offset, -1)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Point QuotientGraph::position(const LatticeSite& s) const {
  Point p = offsets.at(s.cls);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) p[j] += s.cell[i] * basis[i][j];
  return p;
}

QuotientGraph quotient_graph(const EmbeddedGraph& G) {
  G.validate();
  if (G.basis.empty()) throw Error(Error::Kind::structural, "graph carries no translation basis");
  if (G.size() == 0) throw Error(Error::Kind::structural, "empty graph");
  const int D = G.D;
  QuotientGraph Q;
  Q.D = D;
  Q.basis = G.basis;
  Eigen::MatrixXd B(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) B(j, i) = G.basis[i][j];
  Eigen::MatrixXd Binv = B.inverse();

  std::vector<std::vector<long long>> keys;
  std::vector<LatticeSite> site(G.size());
  for (std::size_t v = 0; v < G.size(); ++v) {
    Eigen::VectorXd x(D);
    for (int d = 0; d < D; ++d) x(d) = G.coords[v][d];
    Eigen::VectorXd f = Binv * x;
    GridPoint k(D);
    std::vector<long long> key(D);
    for (int d = 0; d < D; ++d) {
      k[d] = static_cast<int>(std::floor(f(d) + 1e-7));
      key[d] = std::llround((f(d) - k[d]) * 1e6);
    }
    auto it = std::find(keys.begin(), keys.end(), key);
    int cls = static_cast<int>(it - keys.begin());
    if (it == keys.end()) {
      keys.push_back(key);
      Point off(D, 0.0);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) off[j] += (f(i) - k[i]) * G.basis[i][j];
      Q.offsets.push_back(off);
    }
    site[v] = {cls, k};
  }
  // rebase each class so its cells start where the others do
  std::vector<GridPoint> base(keys.size());
  for (const auto& s : site) {
    auto& b = base[s.cls];
    if (b.empty()) b = s.cell;
    for (int d = 0; d < D; ++d) b[d] = std::min(b[d], s.cell[d]);
  }
  for (std::size_t c = 0; c < keys.size(); ++c)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) Q.offsets[c][j] += base[c][i] * G.basis[i][j];
  for (std::size_t v = 0; v < G.size(); ++v) {
    site[v].cell = add(site[v].cell, base[site[v].cls], -1);
    if (!Q.vertex.emplace(site[v], static_cast<int>(v)).second)
      throw Error(Error::Kind::structural, "two vertices share class and cell at " + G.ids[v]);
    if (v == 0) Q.lo = Q.hi = site[v].cell;
    for (int d = 0; d < D; ++d) {
      Q.lo[d] = std::min(Q.lo[d], site[v].cell[d]);
      Q.hi[d] = std::max(Q.hi[d], site[v].cell[d]);
    }
  }

  std::set<std::tuple<int, int, GridPoint>> seen;
  for (auto [u, w] : G.edges) {
    Bond b{site[u].cls, site[w].cls, add(site[w].cell, site[u].cell, -1)};
    Bond r{b.b, b.a, add(GridPoint(D, 0), b.offset, -1)};
    auto kb = std::make_tuple(b.a, b.b, b.offset), kr = std::make_tuple(r.a, r.b, r.offset);
    if (kr < kb) std::swap(b, r), std::swap(kb, kr);
    if (seen.insert(kb).second) Q.bonds.push_back(b);
  }
  std::sort(Q.bonds.begin(), Q.bonds.end(),
            [](const Bond& x, const Bond& y) { return std::tie(x.a, x.b, x.offset) < std::tie(y.a, y.b, y.offset); });

  GridPoint ilo = Q.lo, ihi = Q.hi;
  for (int d = 0; d < D; ++d) {
    ++ilo[d];
    --ihi[d];
    if (ilo[d] > ihi[d])
      throw Error(Error::Kind::structural, "window too small to check invariance: need at least 3 cells along v" +
                                               std::to_string(d + 1));
  }
  auto interior = [&](const GridPoint& k) {
    for (int d = 0; d < D; ++d)
      if (k[d] < ilo[d] || k[d] > ihi[d]) return false;
    return true;
  };
  const int ncls = static_cast<int>(keys.size());
  for_each_cell(ilo, ihi, [&](const GridPoint& k) {
    for (int c = 0; c < ncls; ++c)
      if (!Q.vertex.count({c, k}))
        throw Error(Error::Kind::structural, "graph is not invariant under the basis: class " + std::to_string(c) +
                                                 " missing in cell " + str(k));
    for (const auto& b : Q.bonds) {
      GridPoint t = add(k, b.offset);
      if (!interior(t)) continue;
      if (!G.has_edge(Q.vertex.at({b.a, k}), Q.vertex.at({b.b, t})))
        throw Error(Error::Kind::structural, "graph is not invariant under the basis: missing edge from cell " + str(k));
    }
  });
  return Q;
}

LatticeSite FundamentalDomain::translate(int t, const GridPoint& a) const {
  LatticeSite s = T.at(t);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) s.cell[j] += a[i] * w[i][j];
  return s;
}

FundamentalDomain extract_domain(const EmbeddedGraph& G, int window) {
  if (window < 2) throw Error(Error::Kind::structural, "domain window must be at least 2");
  QuotientGraph Q = quotient_graph(G);
  const int D = Q.D;
  FundamentalDomain dom;
  dom.D = D;
  dom.T.push_back({0, GridPoint(D, 0)});
  int reach = 1;
  for (const auto& b : Q.bonds)
    for (int x : b.offset) reach = std::max(reach, std::abs(x));
  const int bound = 4 * window * reach + 4;

  for (int j = 0; j < D; ++j) {
    Sublattice L{dom.w, j};
    int s = 0;
    for (const auto& t1 : dom.T)
      for (const auto& t2 : dom.T) {
        if (t1.cls != t2.cls) continue;
        if (auto m = L.along(add(t1.cell, t2.cell, -1))) s = std::max(s, *m);
      }
    auto is_target = [&](const LatticeSite& x) {
      for (const auto& t : dom.T)
        if (t.cls == x.cls)
          if (auto m = L.along(add(x.cell, t.cell, -1)); m && *m > s) return true;
      return false;
    };

    // BFS on (class, reduced cell)
    std::map<LatticeSite, int> seen;
    std::vector<LatticeSite> state;
    std::vector<int> parent;
    std::vector<GridPoint> step;
    std::deque<int> q;
    for (const auto& t : dom.T) {
      LatticeSite r{t.cls, L.reduce(t.cell)};
      if (seen.emplace(r, static_cast<int>(state.size())).second) {
        q.push_back(static_cast<int>(state.size()));
        state.push_back(r);
        parent.push_back(-1);
        step.push_back(t.cell);  // actual cell of the source
      }
    }
    int hit = -1;
    while (!q.empty() && hit < 0) {
      int i = q.front();
      q.pop_front();
      for (const auto& [c, off] : Q.neighbours(state[i].cls)) {
        LatticeSite n{c, L.reduce(add(state[i].cell, off))};
        bool out = false;
        for (int m = j; m < D; ++m) out = out || std::abs(n.cell[m]) > bound;
        if (out || seen.count(n)) continue;
        int id = static_cast<int>(state.size());
        seen.emplace(n, id);
        state.push_back(n);
        parent.push_back(i);
        step.push_back(off);
        q.push_back(id);
        if (is_target(n)) {
          hit = id;
          break;
        }
      }
    }
    if (hit < 0)
      throw Error(Error::Kind::structural, "no path to a translate along v" + std::to_string(j + 1) +
                                               "; graph is not connected or not periodic in that direction");

    // lift to actual cells
    std::vector<int> chain;
    for (int i = hit; i >= 0; i = parent[i]) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());
    std::vector<LatticeSite> P;
    GridPoint cell = step[chain[0]];
    P.push_back({state[chain[0]].cls, cell});
    for (std::size_t i = 1; i < chain.size(); ++i) {
      cell = add(cell, step[chain[i]]);
      P.push_back({state[chain[i]].cls, cell});
    }

    std::size_t xi = 0;
    GridPoint wj;
    for (std::size_t i = 1; i < P.size() && xi == 0; ++i) {
      std::vector<LatticeSite> ref = dom.T;
      ref.insert(ref.end(), P.begin(), P.end());
      for (const auto& r : ref) {
        if (r.cls != P[i].cls) continue;
        GridPoint d = add(P[i].cell, r.cell, -1);
        if (auto m = L.along(d); m && *m > s) {
          xi = i;
          wj = d;
          break;
        }
      }
    }
    if (xi == 0) throw Error(Error::Kind::structural, "lifted path never meets a translate");
    for (std::size_t i = 1; i < xi; ++i) dom.T.push_back(P[i]);
    dom.w.push_back(wj);
    dom.s.push_back(s);
  }

  for (const auto& wi : dom.w) {
    Point v(D, 0.0);
    for (int i = 0; i < D; ++i)
      for (int k = 0; k < D; ++k) v[k] += wi[i] * Q.basis[i][k];
    dom.w_vec.push_back(v);
  }

  // T meets none of its translates
  Sublattice full{dom.w, D};
  for (std::size_t a = 0; a < dom.T.size(); ++a)
    for (std::size_t b = 0; b < dom.T.size(); ++b) {
      if (a == b || dom.T[a].cls != dom.T[b].cls) continue;
      GridPoint r = full.reduce(add(dom.T[a].cell, dom.T[b].cell, -1));
      if (std::all_of(r.begin(), r.end(), [](int x) { return x == 0; }))
        throw Error(Error::Kind::structural, "domain overlaps one of its translates");
    }

  dom.ports.assign(2 * D, -1);
  for (int i = 0; i < D; ++i)
    for (std::size_t a = 0; a < dom.T.size() && dom.ports[2 * i] < 0; ++a)
      for (const auto& [c, off] : Q.neighbours(dom.T[a].cls)) {
        LatticeSite n{c, add(dom.T[a].cell, off)};
        auto it = std::find(dom.T.begin(), dom.T.end(), LatticeSite{c, add(n.cell, dom.w[i], -1)});
        if (it != dom.T.end()) {
          dom.ports[2 * i] = static_cast<int>(a);
          dom.ports[2 * i + 1] = static_cast<int>(it - dom.T.begin());
          break;
        }
      }
  for (int i = 0; i < D; ++i)
    if (dom.ports[2 * i] < 0)
      throw Error(Error::Kind::structural, "domain has no edge to its translate along w" + std::to_string(i + 1));

  std::vector<std::vector<int>> adj(dom.T.size());
  for (std::size_t a = 0; a < dom.T.size(); ++a)
    for (const auto& [c, off] : Q.neighbours(dom.T[a].cls)) {
      auto it = std::find(dom.T.begin(), dom.T.end(), LatticeSite{c, add(dom.T[a].cell, off)});
      if (it != dom.T.end()) adj[a].push_back(static_cast<int>(it - dom.T.begin()));
    }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  std::vector<int> first3{dom.ports[0], dom.ports[2], dom.ports[1]};
  dom.y = central_vertex(adj, first3).y;

  MinorCheck mc = verify_minor(G, dom, window);
  if (!mc.pass) throw Error(Error::Kind::structural, "domain check failed: " + mc.reason);
  return dom;
}

MinorCheck verify_minor(const EmbeddedGraph& G, const FundamentalDomain& dom, int side) {
  MinorCheck r;
  r.side = side;
  QuotientGraph Q = quotient_graph(G);
  const int D = dom.D;
  if (Q.D != D || side < 1) {
    r.reason = "dimension mismatch";
    return r;
  }
  std::vector<GridPoint> as;
  for_each_cell(GridPoint(D, 0), GridPoint(D, side - 1), [&](const GridPoint& a) { as.push_back(a); });
  GridPoint lo, hi;
  for (const auto& a : as)
    for (std::size_t t = 0; t < dom.T.size(); ++t) {
      GridPoint c = dom.translate(static_cast<int>(t), a).cell;
      if (lo.empty()) lo = hi = c;
      for (int d = 0; d < D; ++d) {
        lo[d] = std::min(lo[d], c[d]);
        hi[d] = std::max(hi[d], c[d]);
      }
    }
  for (int d = 0; d < D; ++d)
    if (hi[d] - lo[d] > Q.hi[d] - Q.lo[d]) {
      r.reason = "window too small: need " + std::to_string(hi[d] - lo[d] + 1) + " cells along v" + std::to_string(d + 1);
      return r;
    }
  GridPoint shift = add(Q.lo, lo, -1);

  std::map<GridPoint, std::vector<int>> sets;
  std::set<int> used;
  for (const auto& a : as) {
    auto& S = sets[a];
    for (std::size_t t = 0; t < dom.T.size(); ++t) {
      LatticeSite s = dom.translate(static_cast<int>(t), a);
      auto it = Q.vertex.find({s.cls, add(s.cell, shift)});
      if (it == Q.vertex.end()) {
        r.reason = "translate " + str(a) + " leaves the window";
        return r;
      }
      if (!used.insert(it->second).second) {
        r.reason = "translates overlap at " + G.ids[it->second];
        return r;
      }
      S.push_back(it->second);
    }
  }
  auto adj = G.adjacency();
  for (const auto& [a, S] : sets) {
    std::set<int> in(S.begin(), S.end()), reached{S[0]};
    std::deque<int> q{S[0]};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int n : adj[v])
        if (in.count(n) && reached.insert(n).second) q.push_back(n);
    }
    if (reached.size() != in.size()) {
      r.reason = "translate " + str(a) + " is not connected";
      return r;
    }
    for (int i = 0; i < D; ++i) {
      if (a[i] + 1 >= side) continue;
      GridPoint b = a;
      ++b[i];
      const auto& S2 = sets.at(b);
      bool touch = false;
      for (int u : S)
        for (int v : S2) touch = touch || G.has_edge(u, v);
      if (!touch) {
        r.reason = "translates " + str(a) + " and " + str(b) + " are not adjacent";
        return r;
      }
    }
  }
  r.pass = true;
  return r;
}

namespace {

std::vector<int> bfs_path(const std::vector<std::vector<int>>& adj, int src, const std::function<bool(int)>& goal) {
  std::vector<int> prev(adj.size(), -2);
  std::deque<int> q{src};
  prev[src] = -1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (goal(v)) {
      std::vector<int> p;
      for (int x = v; x != -1; x = prev[x]) p.push_back(x);
      std::reverse(p.begin(), p.end());
      return p;
    }
    for (int n : adj[v])
      if (prev[n] == -2) {
        prev[n] = v;
        q.push_back(n);
      }
  }
  return {};
}

}  // namespace

CentralVertex central_vertex(const std::vector<std::vector<int>>& adj, const std::vector<int>& ports) {
  if (ports.size() > 3) throw Error(Error::Kind::structural, "central vertex takes at most three ports");
  for (int p : ports)
    if (p < 0 || p >= static_cast<int>(adj.size())) throw Error(Error::Kind::structural, "port outside the domain");
  CentralVertex cv;
  if (ports.empty()) return cv;
  cv.y = ports[0];
  cv.paths.push_back({ports[0]});
  if (ports.size() == 1) return cv;
  std::vector<int> p12 = bfs_path(adj, ports[0], [&](int v) { return v == ports[1]; });
  if (p12.empty()) throw Error(Error::Kind::structural, "domain is not connected");
  if (ports.size() == 2) {
    cv.paths.push_back(p12);
    return cv;
  }
  std::set<int> on(p12.begin(), p12.end());
  std::vector<int> p3 = bfs_path(adj, ports[2], [&](int v) { return on.count(v) > 0; });
  if (p3.empty()) throw Error(Error::Kind::structural, "domain is not connected");
  cv.y = p3.back();
  std::size_t k = std::find(p12.begin(), p12.end(), cv.y) - p12.begin();
  std::vector<int> to1(p12.begin(), p12.begin() + k + 1), to2(p12.begin() + k, p12.end());
  std::reverse(to1.begin(), to1.end());
  std::reverse(p3.begin(), p3.end());
  cv.paths = {to1, to2, p3};
  return cv;
}

bool paths_disjoint(const CentralVertex& cv) {
  std::set<int> used;
  for (const auto& p : cv.paths) {
    if (p.empty() || p[0] != cv.y) return false;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] == cv.y || !used.insert(p[i]).second) return false;
  }
  return true;
}

}  // namespace hamsim
