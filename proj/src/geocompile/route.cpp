// Disjoint lattice routing with rip-up; in 2D leftover edges may cross one path per point.
#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

#include "hamsim/geocompile.hpp"

namespace hamsim {

int route_length_bound(int l1) { return l1 + std::max(2, l1 / 2); }

namespace {

int l1(const GridPoint& a, const GridPoint& b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

struct Region {
  int D;
  GridPoint lo, ext;
  std::size_t cells = 1;

  Region(const std::vector<GridPoint>& pts, int margin) : D(static_cast<int>(pts[0].size())) {
    lo = pts[0];
    GridPoint hi = pts[0];
    for (const auto& p : pts)
      for (int d = 0; d < D; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    ext.resize(D);
    for (int d = 0; d < D; ++d) {
      lo[d] -= margin;
      ext[d] = hi[d] + margin - lo[d] + 1;
      cells *= static_cast<std::size_t>(ext[d]);
    }
  }
  int index(const GridPoint& p) const {
    int i = 0;
    for (int d = D - 1; d >= 0; --d) i = i * ext[d] + (p[d] - lo[d]);
    return i;
  }
  GridPoint point(int i) const {
    GridPoint p(D);
    for (int d = 0; d < D; ++d) {
      p[d] = lo[d] + i % ext[d];
      i /= ext[d];
    }
    return p;
  }
  // neighbours in fixed order: -x, +x, -y, +y, ...
  std::vector<int> neighbours(int i) const {
    std::vector<int> out;
    GridPoint p = point(i);
    for (int d = 0; d < D; ++d)
      for (int s : {-1, 1}) {
        p[d] += s;
        if (p[d] >= lo[d] && p[d] < lo[d] + ext[d]) out.push_back(index(p));
        p[d] -= s;
      }
    return out;
  }
};

struct Router {
  const Region& R;
  std::vector<int> terminal;  // vertex at cell or -1
  std::vector<int> occ;       // edge owning the cell interior or -1
  std::vector<int> crossed;   // second edge through a crossing cell or -1

  // shortest free path, fewest turns among those; empty if none within the bound
  std::vector<int> bfs(int src, int dst, int bound) const {
    // state = cell * (2D + 1) + incoming direction, 2D at the source
    const int nd = 2 * R.D + 1;
    const long INF = std::numeric_limits<long>::max();
    std::vector<long> cost(R.cells * nd, INF);
    std::vector<int> prev(R.cells * nd, -1);
    using Item = std::pair<long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const long TURN = 1, STEP = 1L << 20;
    cost[src * nd + 2 * R.D] = 0;
    pq.push({0, src * nd + 2 * R.D});
    int end = -1;
    while (!pq.empty()) {
      auto [c0, st] = pq.top();
      pq.pop();
      if (c0 != cost[st]) continue;
      int c = st / nd, din = st % nd;
      if (c == dst) {
        end = st;
        break;
      }
      GridPoint p = R.point(c);
      for (int d = 0; d < R.D; ++d)
        for (int sg : {-1, 1}) {
          p[d] += sg;
          bool inside = p[d] >= R.lo[d] && p[d] < R.lo[d] + R.ext[d];
          int n = inside ? R.index(p) : -1;
          p[d] -= sg;
          if (n < 0 || (n != dst && (terminal[n] >= 0 || occ[n] >= 0))) continue;
          int dir = 2 * d + (sg > 0 ? 0 : 1);
          long v = c0 + STEP + (din != 2 * R.D && din != dir ? TURN : 0);
          int ns = n * nd + dir;
          if (v < cost[ns]) {
            cost[ns] = v;
            prev[ns] = st;
            pq.push({v, ns});
          }
        }
    }
    if (end < 0) return {};
    std::vector<int> path;
    for (int st = end; st != -1; st = prev[st]) path.push_back(st / nd);
    std::reverse(path.begin(), path.end());
    if (static_cast<int>(path.size()) - 1 > bound) return {};
    return path;
  }

  // fewest crossings within the length bound; no two crossed cells in a row
  std::vector<int> crossing_path(int src, int dst, int bound, const std::vector<char>& forbid) const {
    const int INF = std::numeric_limits<int>::max();
    std::vector<std::vector<int>> best(bound + 1, std::vector<int>(R.cells, INF));
    std::vector<std::vector<int>> prev(bound + 1, std::vector<int>(R.cells, -1));
    best[0][src] = 0;
    for (int len = 0; len < bound; ++len)
      for (int c = 0; c < static_cast<int>(R.cells); ++c) {
        if (best[len][c] == INF || c == dst) continue;
        for (int n : R.neighbours(c)) {
          if (n != dst && terminal[n] >= 0) continue;
          bool cross = n != dst && occ[n] >= 0;
          if (cross && (crossed[n] >= 0 || forbid[occ[n]] || (c != src && occ[c] >= 0))) continue;
          int v = best[len][c] + (cross ? 1 : 0);
          if (v < best[len + 1][n]) {
            best[len + 1][n] = v;
            prev[len + 1][n] = c;
          }
        }
      }
    int bl = -1;
    for (int len = 1; len <= bound; ++len)
      if (best[len][dst] != INF && (bl < 0 || best[len][dst] < best[bl][dst])) bl = len;
    if (bl < 0) return {};
    std::vector<int> path{dst};
    for (int len = bl, c = dst; len > 0; --len) {
      c = prev[len][c];
      path.push_back(c);
    }
    std::reverse(path.begin(), path.end());
    if (std::set<int>(path.begin(), path.end()).size() != path.size()) return {};
    return path;
  }
};

}  // namespace

RoutePlan route_paths(const std::vector<GridPoint>& assignment, const std::vector<std::pair<int, int>>& edges,
                      const RouteOptions& opt) {
  RoutePlan plan;
  plan.assignment = assignment;
  plan.edges = edges;
  if (assignment.empty()) return plan;
  plan.D = static_cast<int>(assignment[0].size());
  std::set<GridPoint> uniq;
  for (const auto& g : assignment) {
    if (static_cast<int>(g.size()) != plan.D) throw Error(Error::Kind::structural, "mixed grid dimensions");
    if (!uniq.insert(g).second) throw Error(Error::Kind::structural, "vertex assignment is not injective");
  }
  for (auto [a, b] : edges)
    if (a < 0 || b < 0 || a >= static_cast<int>(assignment.size()) || b >= static_cast<int>(assignment.size()) || a == b)
      throw Error(Error::Kind::structural, "route edge references a missing vertex");

  Region R(assignment, std::max(0, opt.margin));
  Router rt{R, std::vector<int>(R.cells, -1), {}, {}};
  for (std::size_t v = 0; v < assignment.size(); ++v) rt.terminal[R.index(assignment[v])] = static_cast<int>(v);

  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return l1(assignment[edges[x].first], assignment[edges[x].second]) >
           l1(assignment[edges[y].first], assignment[edges[y].second]);
  });

  std::vector<std::vector<int>> cells(edges.size());
  std::vector<int> failed;
  for (int round = 0; round <= opt.retries; ++round) {
    plan.rounds = round + 1;
    rt.occ.assign(R.cells, -1);
    failed.clear();
    for (int e : order) {
      int s = R.index(assignment[edges[e].first]), t = R.index(assignment[edges[e].second]);
      cells[e] = rt.bfs(s, t, route_length_bound(l1(assignment[edges[e].first], assignment[edges[e].second])));
      if (cells[e].empty()) {
        failed.push_back(e);
        continue;
      }
      for (std::size_t i = 1; i + 1 < cells[e].size(); ++i) rt.occ[cells[e][i]] = e;
    }
    if (failed.empty()) break;
    // rip-up: failed edges go first next round
    std::vector<int> next = failed;
    for (int e : order)
      if (std::find(failed.begin(), failed.end(), e) == failed.end()) next.push_back(e);
    if (round < opt.retries) order = next;
  }

  if (!failed.empty()) {
    if (plan.D != 2)
      throw Error(Error::Kind::not_converged, "routing failed for " + std::to_string(failed.size()) +
                                                  " edges after " + std::to_string(opt.retries) +
                                                  " rip-up rounds; halve the spacing and retry");
    rt.crossed.assign(R.cells, -1);
    for (int e : failed) {
      int s = R.index(assignment[edges[e].first]), t = R.index(assignment[edges[e].second]);
      // edges sharing an endpoint cannot be uncrossed by a gadget
      std::vector<char> forbid(edges.size(), 0);
      for (std::size_t f = 0; f < edges.size(); ++f) {
        auto [a, b] = edges[f];
        forbid[f] = a == edges[e].first || a == edges[e].second || b == edges[e].first || b == edges[e].second;
      }
      cells[e] = rt.crossing_path(s, t, route_length_bound(l1(assignment[edges[e].first], assignment[edges[e].second])),
                                  forbid);
      if (cells[e].empty())
        throw Error(Error::Kind::not_converged, "routing failed for edge " + std::to_string(e) +
                                                    " even with crossings; halve the spacing and retry");
      for (std::size_t i = 1; i + 1 < cells[e].size(); ++i) {
        int c = cells[e][i];
        if (rt.occ[c] >= 0) {
          rt.crossed[c] = e;
          plan.crossings.push_back({rt.occ[c], e, R.point(c)});
        } else {
          rt.occ[c] = e;
        }
      }
    }
  }

  plan.paths.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (int c : cells[e]) plan.paths[e].push_back(R.point(c));
  plan.validate();
  return plan;
}

void RoutePlan::validate() const {
  std::set<GridPoint> terms(assignment.begin(), assignment.end());
  if (terms.size() != assignment.size()) throw Error(Error::Kind::structural, "route assignment is not injective");
  if (paths.size() != edges.size()) throw Error(Error::Kind::structural, "route plan needs one path per edge");
  std::set<GridPoint> declared;
  for (const auto& c : crossings) declared.insert(c.at);
  std::map<GridPoint, int> use;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& p = paths[e];
    if (p.size() < 2 || p.front() != assignment[edges[e].first] || p.back() != assignment[edges[e].second])
      throw Error(Error::Kind::structural, "path " + std::to_string(e) + " does not join its endpoints");
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (l1(p[i], p[i + 1]) != 1) throw Error(Error::Kind::structural, "path " + std::to_string(e) + " is not a lattice path");
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (terms.count(p[i])) throw Error(Error::Kind::structural, "path " + std::to_string(e) + " runs through a vertex");
      ++use[p[i]];
    }
  }
  for (const auto& [pt, n] : use)
    if (n > 2 || (n == 2 && !declared.count(pt)))
      throw Error(Error::Kind::structural, "paths overlap at an undeclared point");
}

}  // namespace hamsim
