#include <algorithm>
#include <cmath>

#include "hamsim/geocompile.hpp"

namespace hamsim {

void LocalityParams::validate() const {
  if (!(c >= 1.0)) throw Error(Error::Kind::structural, "locality constant c must be at least 1");
  if (!(C > 0.0)) throw Error(Error::Kind::structural, "locality constant C must be positive");
}

LocalityReport check_locality(const EmbeddedGraph& G, const LocalityParams& p) {
  p.validate();
  G.validate();
  LocalityReport r;
  const std::size_t n = G.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> ball;
    for (std::size_t j = 0; j < n; ++j)
      if (distance(G.coords[i], G.coords[j]) <= 1.0 + 1e-9) ball.push_back(G.ids[j]);
    int cnt = static_cast<int>(ball.size());
    r.max_ball = std::max(r.max_ball, cnt);
    if (cnt > p.c) r.violations.push_back({"ball", ball, static_cast<double>(cnt)});
  }
  for (auto [a, b] : G.edges) {
    double d = distance(G.coords[a], G.coords[b]);
    r.max_edge = std::max(r.max_edge, d);
    if (d > p.C + 1e-9) r.violations.push_back({"edge", {G.ids[a], G.ids[b]}, d});
  }
  r.pass = r.violations.empty();
  return r;
}

namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// proper intersection of two segments in the (x, y) projection
bool segments_cross(const Point& p, const Point& q, const Point& r, const Point& s) {
  double d1 = cross(q[0] - p[0], q[1] - p[1], r[0] - p[0], r[1] - p[1]);
  double d2 = cross(q[0] - p[0], q[1] - p[1], s[0] - p[0], s[1] - p[1]);
  double d3 = cross(s[0] - r[0], s[1] - r[1], p[0] - r[0], p[1] - r[1]);
  double d4 = cross(s[0] - r[0], s[1] - r[1], q[0] - r[0], q[1] - r[1]);
  const double e = 1e-12;
  return ((d1 > e && d2 < -e) || (d1 < -e && d2 > e)) && ((d3 > e && d4 < -e) || (d3 < -e && d4 > e));
}

}  // namespace

SparsityReport spatial_sparsity(const EmbeddedGraph& G) {
  SparsityReport r;
  auto adj = G.adjacency();
  for (const auto& l : adj) r.max_degree = std::max(r.max_degree, static_cast<int>(l.size()));
  for (std::size_t i = 0; i < G.edges.size(); ++i) {
    auto [a, b] = G.edges[i];
    r.max_length = std::max(r.max_length, distance(G.coords[a], G.coords[b]));
    int over = 0;
    for (std::size_t j = 0; j < G.edges.size(); ++j) {
      if (i == j) continue;
      auto [c, d] = G.edges[j];
      if (a == c || a == d || b == c || b == d) continue;
      if (segments_cross(G.coords[a], G.coords[b], G.coords[c], G.coords[d])) ++over;
    }
    r.max_overlaps = std::max(r.max_overlaps, over);
  }
  return r;
}

}  // namespace hamsim
