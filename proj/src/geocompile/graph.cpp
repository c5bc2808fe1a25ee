#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "hamsim/geocompile.hpp"

namespace hamsim {

int EmbeddedGraph::add_vertex(const std::string& id, Point x) {
  if (index_.count(id)) throw Error(Error::Kind::structural, "duplicate vertex " + id);
  int i = static_cast<int>(ids.size());
  ids.push_back(id);
  coords.push_back(std::move(x));
  index_[id] = i;
  return i;
}

void EmbeddedGraph::add_edge(int a, int b) {
  if (a == b) throw Error(Error::Kind::structural, "self loop on " + ids.at(a));
  auto e = std::minmax(a, b);
  if (edge_set_.insert(e).second) edges.push_back(e);
}

int EmbeddedGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool EmbeddedGraph::has_edge(int a, int b) const { return edge_set_.count(std::minmax(a, b)) != 0; }

std::vector<std::vector<int>> EmbeddedGraph::adjacency() const {
  std::vector<std::vector<int>> adj(ids.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  return adj;
}

void EmbeddedGraph::validate() const {
  if (D < 2) throw Error(Error::Kind::structural, "graph dimension must be at least 2");
  if (coords.size() != ids.size()) throw Error(Error::Kind::structural, "coordinate table size mismatch");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (static_cast<int>(coords[i].size()) != D)
      throw Error(Error::Kind::structural, "vertex " + ids[i] + " needs " + std::to_string(D) + " coordinates");
    for (double x : coords[i])
      if (!std::isfinite(x)) throw Error(Error::Kind::structural, "vertex " + ids[i] + " has a non-finite coordinate");
  }
  for (auto [a, b] : edges)
    if (a < 0 || b < 0 || a >= static_cast<int>(ids.size()) || b >= static_cast<int>(ids.size()) || a == b)
      throw Error(Error::Kind::structural, "edge references a missing vertex");
  if (!basis.empty()) {
    if (static_cast<int>(basis.size()) != D) throw Error(Error::Kind::structural, "basis needs D vectors");
    Eigen::MatrixXd B(D, D);
    for (int i = 0; i < D; ++i) {
      if (static_cast<int>(basis[i].size()) != D) throw Error(Error::Kind::structural, "basis vector has wrong length");
      for (int j = 0; j < D; ++j) B(j, i) = basis[i][j];
    }
    if (std::abs(B.determinant()) < 1e-9) throw Error(Error::Kind::structural, "basis is degenerate");
  }
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace {

struct PeriodicSpec {
  int D;
  std::vector<Point> basis;
  std::vector<std::string> names;
  std::vector<Point> offsets;
  std::vector<Bond> bonds;
};

PeriodicSpec spec_of(const std::string& name) {
  const double r3 = std::sqrt(3.0);
  if (name == "square") return {2, {{1, 0}, {0, 1}}, {"v"}, {{0, 0}}, {{0, 0, {1, 0}}, {0, 0, {0, 1}}}};
  if (name == "hexagonal")
    return {2,
            {{r3, 0}, {r3 / 2, 1.5}},
            {"a", "b"},
            {{0, 0}, {0, 1}},
            {{0, 1, {0, 0}}, {1, 0, {0, 1}}, {1, 0, {-1, 1}}}};
  if (name == "square_subdivided")
    return {2,
            {{1, 0}, {0, 1}},
            {"v", "h", "u"},
            {{0, 0}, {0.5, 0}, {0, 0.5}},
            {{0, 1, {0, 0}}, {1, 0, {1, 0}}, {0, 2, {0, 0}}, {2, 0, {0, 1}}}};
  if (name == "cubic")
    return {3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {"v"}, {{0, 0, 0}}, {{0, 0, {1, 0, 0}}, {0, 0, {0, 1, 0}}, {0, 0, {0, 0, 1}}}};
  throw Error(Error::Kind::parse, "unknown lattice '" + name + "'");
}

std::string cell_id(const std::string& cls, const GridPoint& k) {
  std::string s = cls + ":";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s;
}

}  // namespace

const std::vector<std::string>& lattice_names() {
  static const std::vector<std::string> n{"square", "hexagonal", "square_subdivided", "cubic"};
  return n;
}

EmbeddedGraph lattice_window(const std::string& name, int L) {
  PeriodicSpec sp = spec_of(name);
  if (L < 1) throw Error(Error::Kind::structural, "lattice window needs L >= 1");
  EmbeddedGraph G;
  G.D = sp.D;
  G.basis = sp.basis;
  std::vector<GridPoint> cells;
  GridPoint k(sp.D, 0);
  std::function<void(int)> rec = [&](int d) {
    if (d < 0) {
      cells.push_back(k);
      return;
    }
    for (k[d] = 0; k[d] < L; ++k[d]) rec(d - 1);
  };
  rec(sp.D - 1);
  for (const auto& c : cells)
    for (std::size_t cl = 0; cl < sp.names.size(); ++cl) {
      Point x = sp.offsets[cl];
      for (int i = 0; i < sp.D; ++i)
        for (int j = 0; j < sp.D; ++j) x[j] += c[i] * sp.basis[i][j];
      G.add_vertex(cell_id(sp.names[cl], c), x);
    }
  for (const auto& c : cells)
    for (const auto& b : sp.bonds) {
      GridPoint t = c;
      bool inside = true;
      for (int i = 0; i < sp.D; ++i) {
        t[i] += b.offset[i];
        inside = inside && t[i] >= 0 && t[i] < L;
      }
      if (!inside) continue;
      G.add_edge(G.index_of(cell_id(sp.names[b.a], c)), G.index_of(cell_id(sp.names[b.b], t)));
    }
  return G;
}

std::map<std::string, Point> site_coords(const HamiltonianExpr& H) {
  std::map<std::string, Point> m;
  for (const auto& s : H.system.sites())
    if (!s.coord.empty()) m[s.id] = s.coord;
  return m;
}

EmbeddedGraph interaction_graph(const HamiltonianExpr& H, const std::map<std::string, Point>& coords, int D) {
  EmbeddedGraph G;
  G.D = D;
  for (const auto& s : H.system.sites()) {
    auto it = coords.find(s.id);
    if (it == coords.end() || static_cast<int>(it->second.size()) != D)
      throw Error(Error::Kind::structural, "site " + s.id + " has no " + std::to_string(D) + "-dimensional coordinate");
    G.add_vertex(s.id, it->second);
  }
  for (const auto& t : H.terms) {
    if (t.support.size() > 2) throw Error(Error::Kind::structural, "only 1- and 2-local terms can be embedded");
    if (t.support.size() == 2) G.add_edge(G.index_of(t.support[0]), G.index_of(t.support[1]));
  }
  return G;
}

EmbeddedGraph interaction_graph(const HamiltonianExpr& H, int D) { return interaction_graph(H, site_coords(H), D); }

}  // namespace hamsim
