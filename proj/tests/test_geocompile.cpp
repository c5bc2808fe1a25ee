#include "doctest.h"

#include <cmath>
#include <deque>
#include <random>
#include <set>

#include "hamsim/geocompile.hpp"

using namespace hamsim;

namespace {

EmbeddedGraph points(const std::vector<Point>& xs, const std::vector<std::pair<int, int>>& es) {
  EmbeddedGraph G;
  G.D = static_cast<int>(xs[0].size());
  for (std::size_t i = 0; i < xs.size(); ++i) G.add_vertex("p" + std::to_string(i), xs[i]);
  for (auto [a, b] : es) G.add_edge(a, b);
  return G;
}

HamiltonianExpr target(const std::vector<Point>& xs, const std::vector<std::pair<int, int>>& es,
                       const std::string& kind = "heisenberg") {
  HamiltonianExpr H;
  for (std::size_t i = 0; i < xs.size(); ++i) H.system.add({"q" + std::to_string(i), 2, xs[i]});
  for (auto [a, b] : es) H.add_named(kind, {"q" + std::to_string(a), "q" + std::to_string(b)}, 1.0);
  return H;
}

// n = 2..6: line, line, plaquette, plaquette with a tail, 2x3 ladder
HamiltonianExpr family_member(int n) {
  switch (n) {
    case 2: return target({{0, 0}, {1, 0}}, {{0, 1}});
    case 3: return target({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}});
    case 4: return target({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    case 5: return target({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 4}});
    default:
      return target({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}},
                    {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}});
  }
}

// degree straight from the term list
int degree_oracle(const HamiltonianExpr& H) {
  std::map<std::string, std::set<std::string>> nb;
  for (const auto& t : H.terms)
    if (t.support.size() == 2) {
      nb[t.support[0]].insert(t.support[1]);
      nb[t.support[1]].insert(t.support[0]);
    }
  int d = 0;
  for (const auto& [k, s] : nb) d = std::max(d, static_cast<int>(s.size()));
  return d;
}

// lattice paths, endpoints, and overlaps only at declared points
void check_route(const RoutePlan& r, const std::vector<GridPoint>& assign, const std::vector<std::pair<int, int>>& es) {
  REQUIRE(r.paths.size() == es.size());
  std::set<GridPoint> terminals(assign.begin(), assign.end());
  std::map<GridPoint, int> use;
  for (std::size_t e = 0; e < es.size(); ++e) {
    const auto& p = r.paths[e];
    CHECK(p.front() == assign[es[e].first]);
    CHECK(p.back() == assign[es[e].second]);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      int l1 = 0;
      for (std::size_t d = 0; d < p[i].size(); ++d) l1 += std::abs(p[i][d] - p[i + 1][d]);
      CHECK(l1 == 1);
    }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      CHECK(terminals.count(p[i]) == 0);
      ++use[p[i]];
    }
  }
  std::set<GridPoint> declared;
  for (const auto& c : r.crossings) declared.insert(c.at);
  for (const auto& [pt, n] : use) CHECK((n == 1 || (n == 2 && declared.count(pt))));
}

// vertex sets of translates built from lattice ids, grid-minor checked on the raw edge list
bool minor_oracle(const EmbeddedGraph& G, const FundamentalDomain& dom, const std::vector<std::string>& names, int side,
                  const GridPoint& shift) {
  std::map<GridPoint, std::vector<int>> sets;
  std::set<int> used;
  for (int a0 = 0; a0 < side; ++a0)
    for (int a1 = 0; a1 < side; ++a1) {
      for (const auto& t : dom.T) {
        int k0 = t.cell[0] + a0 * dom.w[0][0] + a1 * dom.w[1][0] + shift[0];
        int k1 = t.cell[1] + a0 * dom.w[0][1] + a1 * dom.w[1][1] + shift[1];
        int v = G.index_of(names[t.cls] + ":" + std::to_string(k0) + "," + std::to_string(k1));
        if (v < 0 || !used.insert(v).second) return false;
        sets[{a0, a1}].push_back(v);
      }
    }
  auto touching = [&](const std::vector<int>& A, const std::vector<int>& B) {
    for (auto [u, v] : G.edges)
      for (int x : A)
        for (int y : B)
          if ((u == x && v == y) || (u == y && v == x)) return true;
    return false;
  };
  for (const auto& [a, S] : sets) {
    // connected: grow from S[0] over edges inside S
    std::set<int> in{S[0]};
    for (bool grew = true; grew;) {
      grew = false;
      for (auto [u, v] : G.edges) {
        bool su = std::count(S.begin(), S.end(), u), sv = std::count(S.begin(), S.end(), v);
        if (su && sv && in.count(u) != in.count(v)) {
          in.insert(u);
          in.insert(v);
          grew = true;
        }
      }
    }
    if (in.size() != S.size()) return false;
    if (a[0] + 1 < side && !touching(S, sets[{a[0] + 1, a[1]}])) return false;
    if (a[1] + 1 < side && !touching(S, sets[{a[0], a[1] + 1}])) return false;
  }
  return true;
}


// dense matrix of a term list, embedding built here (site 0 most significant)
Mat dense(const HamiltonianExpr& H) {
  const int n = static_cast<int>(H.system.size());
  const int N = 1 << n;
  Mat M = Mat::Identity(N, N) * H.constant;
  for (const auto& t : H.terms) {
    std::vector<int> q;
    for (const auto& s : t.support) q.push_back(n - 1 - static_cast<int>(H.system.index_of(s)));
    const int k = static_cast<int>(q.size());
    for (int col = 0; col < N; ++col)
      for (int r = 0; r < (1 << k); ++r) {
        int c = 0;
        for (int i = 0; i < k; ++i) c = (c << 1) | ((col >> q[i]) & 1);
        cplx v = t.coeff * t.op(r, c);
        if (v == cplx(0)) continue;
        int row = col;
        for (int i = 0; i < k; ++i) {
          int bit = (r >> (k - 1 - i)) & 1;
          row = (row & ~(1 << q[i])) | (bit << q[i]);
        }
        M(row, col) += v;
      }
  }
  return M;
}

}  // namespace

TEST_CASE("embedded graph validation") {
  EmbeddedGraph G = points({{0, 0}, {1, 0}}, {{0, 1}});
  CHECK_NOTHROW(G.validate());
  CHECK_THROWS_AS(G.add_vertex("p0", {2, 0}), Error);
  G.coords[1] = {std::nan(""), 0};
  CHECK_THROWS_AS(G.validate(), Error);
  EmbeddedGraph B = points({{0, 0}, {1, 0}}, {});
  B.basis = {{1, 0}, {2, 0}};
  CHECK_THROWS_AS(B.validate(), Error);
  CHECK_THROWS_AS(lattice_window("kagome", 3), Error);
}

TEST_CASE("check_locality examples") {
  // 3x3 unit patch, c = 5, C = 1
  std::vector<Point> xs;
  std::vector<std::pair<int, int>> es;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      xs.push_back({double(x), double(y)});
      int i = y * 3 + x;
      if (x) es.push_back({i - 1, i});
      if (y) es.push_back({i - 3, i});
    }
  auto r = check_locality(points(xs, es), {5, 1});
  CHECK(r.pass);
  CHECK(r.max_ball == 5);
  CHECK(!check_locality(points(xs, es), {4, 1}).pass);

  auto r2 = check_locality(points({{0, 0}, {10, 0}}, {{0, 1}}), {5, 2});
  REQUIRE(!r2.pass);
  REQUIRE(r2.violations.size() == 1);
  CHECK(r2.violations[0].kind == "edge");
  CHECK(r2.violations[0].witness == std::vector<std::string>{"p0", "p1"});
  CHECK(r2.violations[0].value == doctest::Approx(10.0));

  auto r3 = check_locality(points({{0, 0}, {0.1, 0}, {0, 0.1}}, {}), {2, 1});
  CHECK(!r3.pass);
  CHECK(r3.violations[0].kind == "ball");
  CHECK(r3.violations[0].witness.size() == 3);
  CHECK_THROWS_AS(LocalityParams({0.5, 1}).validate(), Error);
  CHECK_THROWS_AS(LocalityParams({1, 0}).validate(), Error);
}

TEST_CASE("spatial sparsity counts crossings") {
  auto G = points({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {{0, 1}, {2, 3}});
  auto s = spatial_sparsity(G);
  CHECK(s.max_overlaps == 1);
  CHECK(s.max_degree == 1);
  CHECK(s.max_length == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("reduce_degree: star of degree 4") {
  auto H = target({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto r = reduce_degree(H, Family::heisenberg);
  CHECK(r.forks == 2);
  CHECK(r.subdivisions == 4);
  CHECK(degree_oracle(r.H) <= 3);
  CHECK(r.degree_in == 4);
  CHECK(r.plan.depth() <= 3);
  CHECK_NOTHROW(r.plan.validate());
  // replay reproduces the staged expression term by term
  auto rep = apply_plan(H, r.plan);
  REQUIRE(rep.H.terms.size() == r.H.terms.size());
  CHECK(rep.H.system == r.H.system);
  for (std::size_t i = 0; i < rep.H.terms.size(); ++i) {
    CHECK(rep.H.terms[i].support == r.H.terms[i].support);
    CHECK(rep.H.terms[i].coeff == doctest::Approx(r.H.terms[i].coeff).epsilon(1e-12));
  }
  CHECK(rep.H.constant == doctest::Approx(r.H.constant).epsilon(1e-12));
  // every mediator got a coordinate
  CHECK(r.coords.size() == r.H.system.size());
}

TEST_CASE("reduce_degree: degree 8 and a path") {
  std::vector<Point> xs{{0, 0}};
  std::vector<std::pair<int, int>> es;
  for (int k = 0; k < 8; ++k) {
    xs.push_back({std::cos(k * M_PI / 4), std::sin(k * M_PI / 4)});
    es.push_back({0, k + 1});
  }
  auto r = reduce_degree(target(xs, es), Family::heisenberg);
  CHECK(degree_oracle(r.H) <= 3);
  CHECK(r.plan.depth() <= 4);  // ceil(log2 8) + 1
  // deltas grow outwards
  for (std::size_t i = 0; i + 1 < r.plan.rounds.size(); ++i) CHECK(r.plan.rounds[i].delta > r.plan.rounds[i + 1].delta);

  auto p = reduce_degree(target({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}, "xy"), Family::xy);
  CHECK(p.forks == 0);
  CHECK(p.subdivisions == 2);
  CHECK(p.plan.depth() == 1);

  auto bad = target({{0, 0}, {1, 0}}, {{0, 1}}, "xy");
  CHECK_NOTHROW(reduce_degree(bad, Family::xy));
  CHECK_THROWS_AS(reduce_degree(bad, Family::heisenberg), Error);
  CHECK(outward_schedule(1e4, 3) == std::vector<double>{1e9, 1e6, 1e4});
}

TEST_CASE("snap_to_grid examples") {
  auto s = snap_to_grid(points({{0.1, 0.2}, {0.9, 1.1}}, {}), 1.0);
  CHECK(s.grid == std::vector<GridPoint>{{0, 0}, {1, 1}});
  CHECK(s.halvings == 0);

  auto G = points({{0.1, 0.1}, {-0.1, 0.2}}, {});
  auto c = snap_to_grid(G, 1.0);
  CHECK(c.halvings > 0);
  CHECK(c.grid[0] != c.grid[1]);
  for (int i = 0; i < 2; ++i) {
    Point q = grid_position(c.grid[i], c.spacing);
    CHECK(distance(q, G.coords[i]) <= 1.0);
    CHECK(distance(q, G.coords[i]) <= c.spacing * std::sqrt(2.0) + 1e-12);
  }

  auto e = snap_to_grid(points({{2, 3}, {-1, 0}}, {}), 1.0);
  CHECK(e.grid == std::vector<GridPoint>{{2, 3}, {-1, 0}});
  CHECK(e.max_displacement == 0.0);
  CHECK_THROWS_AS(snap_to_grid(points({{0, 0}, {0, 0}}, {}), 1.0), Error);
}

TEST_CASE("route_paths: parallel edges and crossings") {
  std::vector<GridPoint> a{{0, 0}, {3, 0}, {0, 1}, {3, 1}};
  std::vector<std::pair<int, int>> es{{0, 1}, {2, 3}};
  auto r = route_paths(a, es);
  check_route(r, a, es);
  CHECK(r.crossings.empty());
  CHECK(r.paths[0].size() == 4);
  CHECK(r.paths[1].size() == 4);

  // diagonals of a 3x3 block
  std::vector<GridPoint> d{{0, 0}, {2, 2}, {0, 2}, {2, 0}};
  auto x = route_paths(d, es);
  check_route(x, d, es);
  REQUIRE(x.crossings.size() == 1);
  for (const auto& p : x.paths) CHECK(static_cast<int>(p.size()) - 1 <= route_length_bound(4));

  std::vector<GridPoint> d3{{0, 0, 0}, {2, 2, 0}, {0, 2, 0}, {2, 0, 0}};
  auto y = route_paths(d3, es);
  check_route(y, d3, es);
  CHECK(y.crossings.empty());

  CHECK_THROWS_AS(route_paths({{0, 0}, {0, 0}}, {{0, 1}}), Error);
}

TEST_CASE("route_paths: a grid of unit edges") {
  std::vector<GridPoint> a;
  std::vector<std::pair<int, int>> es;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      a.push_back({3 * x, 3 * y});
      int i = y * 4 + x;
      if (x) es.push_back({i - 1, i});
      if (y) es.push_back({i - 4, i});
    }
  auto r = route_paths(a, es);
  check_route(r, a, es);
  CHECK(r.crossings.empty());
}

TEST_CASE("quotient graph and invariance") {
  auto G = lattice_window("hexagonal", 4);
  auto Q = quotient_graph(G);
  CHECK(Q.offsets.size() == 2);
  CHECK(Q.bonds.size() == 3);
  for (const auto& [s, v] : Q.vertex) {
    Point p = Q.position(s);
    CHECK(distance(p, G.coords[v]) < 1e-9);
  }
  // drop an interior edge
  auto H = lattice_window("square", 4);
  EmbeddedGraph K;
  K.D = 2;
  K.basis = H.basis;
  for (std::size_t i = 0; i < H.size(); ++i) K.add_vertex(H.ids[i], H.coords[i]);
  int u = H.index_of("v:1,1"), w = H.index_of("v:2,1");
  for (auto [a, b] : H.edges)
    if (!(a == std::min(u, w) && b == std::max(u, w))) K.add_edge(a, b);
  CHECK_THROWS_AS(quotient_graph(K), Error);
  CHECK_THROWS_AS(quotient_graph(lattice_window("square", 2)), Error);
  CHECK_THROWS_AS(quotient_graph(points({{0, 0}}, {})), Error);
}

TEST_CASE("extract_domain: square, hexagonal, subdivided, cubic") {
  auto sq = lattice_window("square", 8);
  auto ds = extract_domain(sq);
  CHECK(ds.T.size() == 1);
  CHECK(ds.w == std::vector<GridPoint>{{1, 0}, {0, 1}});
  CHECK(minor_oracle(sq, ds, {"v"}, 6, {1, 1}));

  auto hx = lattice_window("hexagonal", 14);
  auto dh = extract_domain(hx);
  CHECK(dh.T.size() == 2);
  auto m = verify_minor(hx, dh, 6);
  CHECK(m.pass);
  CHECK(minor_oracle(hx, dh, {"a", "b"}, 6, {6, 1}));
  // a 2x2 window cannot host the 6x6 minor
  auto small = verify_minor(lattice_window("hexagonal", 4), dh, 6);
  CHECK(!small.pass);
  CHECK(small.reason.find("window too small") != std::string::npos);
  CHECK_THROWS_AS(extract_domain(lattice_window("hexagonal", 6)), Error);

  auto sd = lattice_window("square_subdivided", 8);
  auto dd = extract_domain(sd);
  CHECK(dd.T.size() == 3);
  CHECK(minor_oracle(sd, dd, {"v", "h", "u"}, 6, {1, 1}));

  auto cu = extract_domain(lattice_window("cubic", 7));
  CHECK(cu.T.size() == 1);
  CHECK(cu.w.size() == 3);

  // ports: 2i reaches T + w_i, 2i+1 is its partner
  for (const auto* d : {&ds, &dh, &dd})
    for (int i = 0; i < 2; ++i) {
      LatticeSite a = d->T[d->ports[2 * i]];
      LatticeSite b = d->translate(d->ports[2 * i + 1], i == 0 ? GridPoint{1, 0} : GridPoint{0, 1});
      const auto& G = d == &ds ? sq : d == &dh ? hx : sd;
      const std::vector<std::string> nm = d == &ds   ? std::vector<std::string>{"v"}
                                          : d == &dh ? std::vector<std::string>{"a", "b"}
                                                     : std::vector<std::string>{"v", "h", "u"};
      auto id = [&](const LatticeSite& s) {
        return G.index_of(nm[s.cls] + ":" + std::to_string(s.cell[0] + 3) + "," + std::to_string(s.cell[1] + 3));
      };
      REQUIRE(id(a) >= 0);
      REQUIRE(id(b) >= 0);
      CHECK(G.has_edge(id(a), id(b)));
    }
}

TEST_CASE("central_vertex examples") {
  // K13: center 0
  std::vector<std::vector<int>> star{{1, 2, 3}, {0}, {0}, {0}};
  auto c = central_vertex(star, {1, 2, 3});
  CHECK(c.y == 0);
  CHECK(paths_disjoint(c));
  // a - b - c with ports a, c, b
  std::vector<std::vector<int>> path{{1}, {0, 2}, {1}};
  auto p = central_vertex(path, {0, 2, 1});
  CHECK(p.y == 1);
  CHECK(paths_disjoint(p));
  // fewer ports
  CHECK(central_vertex(path, {2}).y == 2);
  auto two = central_vertex(path, {0, 2});
  CHECK(two.y == 0);
  CHECK(two.paths.size() == 2);
  CHECK_THROWS_AS(central_vertex(path, {0, 1, 2, 0}), Error);

  // random 7-vertex trees with three leaves
  std::mt19937 rng(7);
  int done = 0;
  while (done < 20) {
    const int n = 7;
    std::vector<int> pr(n - 2);
    for (auto& x : pr) x = static_cast<int>(rng() % n);
    std::vector<int> deg(n, 1);
    for (int x : pr) ++deg[x];
    std::vector<std::vector<int>> adj(n);
    for (int x : pr)
      for (int l = 0; l < n; ++l)
        if (deg[l] == 1) {
          adj[l].push_back(x);
          adj[x].push_back(l);
          --deg[l];
          --deg[x];
          break;
        }
    std::vector<int> last;
    for (int l = 0; l < n; ++l)
      if (deg[l] == 1) last.push_back(l);
    adj[last[0]].push_back(last[1]);
    adj[last[1]].push_back(last[0]);
    std::vector<int> leaves;
    for (int l = 0; l < n; ++l)
      if (adj[l].size() == 1) leaves.push_back(l);
    if (leaves.size() != 3) continue;
    for (auto& l : adj) std::sort(l.begin(), l.end());
    ++done;

    auto cv = central_vertex(adj, leaves);
    REQUIRE(cv.paths.size() == 3);
    // each path is a walk in the tree from y to its leaf
    for (int i = 0; i < 3; ++i) {
      const auto& q = cv.paths[i];
      CHECK(q.front() == cv.y);
      CHECK(q.back() == leaves[i]);
      for (std::size_t k = 0; k + 1 < q.size(); ++k)
        CHECK(std::count(adj[q[k]].begin(), adj[q[k]].end(), q[k + 1]) == 1);
    }
    // exhaustive: the unique vertex whose tree paths to the leaves share nothing else
    auto tree_path = [&](int s, int t) {
      std::vector<int> prev(n, -2);
      std::deque<int> dq{s};
      prev[s] = -1;
      while (!dq.empty()) {
        int v = dq.front();
        dq.pop_front();
        for (int w : adj[v])
          if (prev[w] == -2) {
            prev[w] = v;
            dq.push_back(w);
          }
      }
      std::vector<int> out;
      for (int v = t; v != -1; v = prev[v]) out.push_back(v);
      return out;
    };
    int hits = 0, ybest = -1;
    for (int y = 0; y < n; ++y) {
      std::multiset<int> seen;
      for (int l : leaves)
        for (int v : tree_path(y, l))
          if (v != y) seen.insert(v);
      if (std::set<int>(seen.begin(), seen.end()).size() == seen.size()) {
        ++hits;
        ybest = y;
      }
    }
    CHECK(hits == 1);
    CHECK(cv.y == ybest);
    CHECK(paths_disjoint(cv));
  }
}

TEST_CASE("compile: 2-qubit square instance certifies") {
  CompileParams p;
  p.spacing = 1.0 / 3;
  p.certify = true;
  auto r = compile(family_member(2), lattice_window("square", 8), p);
  CHECK(r.plan.depth() == 1);
  REQUIRE(r.chains.size() == 3);
  for (const auto& c : r.chains) CHECK(c.size() == 2);
  CHECK(r.lattice_H.system.size() == 4);
  REQUIRE(r.certificate);
  CHECK(r.certificate->pass);
  CHECK(r.certificate->eps_achieved <= 0.1);

  // independent check: four lowest levels of the dense lattice Hamiltonian track {-3, 1, 1, 1}
  Eigen::SelfAdjointEigenSolver<Mat> es(dense(r.lattice_H));
  std::vector<double> want{-3, 1, 1, 1};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(es.eigenvalues()(i) - want[i]) <= 0.1);
  CHECK(es.eigenvalues()(4) > 1e4 / 2);
  // every 2-local term lies on a lattice edge
  auto L = lattice_window("square", 8);
  for (const auto& t : r.lattice_H.terms)
    if (t.support.size() == 2) CHECK(L.has_edge(L.index_of(t.support[0]), L.index_of(t.support[1])));
}

TEST_CASE("compile: hexagonal path length within twice the square one") {
  CompileParams p;
  p.spacing = 1.0 / 3;
  for (int n : {2, 3, 4}) {
    auto s = compile(family_member(n), lattice_window("square", 20), p);
    auto h = compile(family_member(n), lattice_window("hexagonal", 20), p);
    std::size_t ls = 0, lh = 0;
    for (const auto& c : s.chains) ls += c.size() - 1;
    for (const auto& c : h.chains) lh += c.size() - 1;
    CHECK(lh <= 2 * ls);
    CHECK(h.domain.T.size() == 2);
  }
}

TEST_CASE("compile: depth independent of n, lattice paths disjoint") {
  CompileParams p;
  p.spacing = 1.0 / 3;
  for (const std::string lat : {"square", "hexagonal"}) {
    auto L = lattice_window(lat, 24);
    std::set<std::size_t> depths;
    for (int n = 2; n <= 6; ++n) {
      auto r = compile(family_member(n), L, p);
      depths.insert(r.plan.depth());
      CHECK(r.route.crossings.empty());
      // chains: shared vertices only at their ends
      std::map<std::string, int> interior;
      std::set<std::string> ends;
      for (const auto& c : r.chains) {
        ends.insert(c.front());
        ends.insert(c.back());
        for (std::size_t i = 1; i + 1 < c.size(); ++i) ++interior[c[i]];
        for (std::size_t i = 0; i + 1 < c.size(); ++i) CHECK(L.has_edge(L.index_of(c[i]), L.index_of(c[i + 1])));
      }
      for (const auto& [v, k] : interior) {
        CHECK(k == 1);
        CHECK(ends.count(v) == 0);
      }
      std::set<std::string> placed;
      for (const auto& [s, v] : r.placement) placed.insert(v);
      CHECK(placed.size() == r.placement.size());
      for (const auto& t : r.lattice_H.terms)
        if (t.support.size() == 2) CHECK(L.has_edge(L.index_of(t.support[0]), L.index_of(t.support[1])));
    }
    CHECK(depths.size() == 1);
  }
}

TEST_CASE("compile: crossing round, xy family, errors") {
  // the two diagonals of a unit square cross
  auto X = target({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {{0, 1}, {2, 3}}, "xy");
  CompileParams p;
  p.family = Family::xy;
  p.locality.C = 1.5;
  p.spacing = 1.0 / 3;
  auto r = compile(X, lattice_window("square", 24), p);
  CHECK(r.route.crossings.empty());
  bool crossed = false;
  for (const auto& rd : r.plan.rounds)
    for (const auto& a : rd.apps) crossed = crossed || a.kind == GadgetKind::crossing;
  CHECK(crossed);

  auto far = target({{0, 0}, {3, 0}}, {{0, 1}});
  try {
    compile(far, lattice_window("square", 8));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("[locality]", 0) == 0);
  }
  CHECK_THROWS_AS(compile(family_member(2), lattice_window("cubic", 4)), Error);

  auto e = compile(HamiltonianExpr{}, lattice_window("square", 4));
  CHECK(e.plan.depth() == 0);
  CHECK(e.result.H.terms.empty());
}

TEST_CASE("compile is deterministic") {
  CompileParams p;
  p.spacing = 1.0 / 3;
  auto a = compile(family_member(5), lattice_window("hexagonal", 24), p);
  auto b = compile(family_member(5), lattice_window("hexagonal", 24), p);
  CHECK(a.placement == b.placement);
  CHECK(a.chains == b.chains);
  REQUIRE(a.lattice_H.terms.size() == b.lattice_H.terms.size());
  for (std::size_t i = 0; i < a.lattice_H.terms.size(); ++i) {
    CHECK(a.lattice_H.terms[i].support == b.lattice_H.terms[i].support);
    CHECK(a.lattice_H.terms[i].coeff == b.lattice_H.terms[i].coeff);
  }
}
