// locality -> degree -> snap/route -> crossing -> domain -> embed -> chains -> assemble
#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "hamsim/geocompile.hpp"

namespace hamsim {

namespace {

template <class F>
auto staged(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "[" + name + "] " + e.what());
  }
}

Point mid(const Point& a, const Point& b) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = 0.5 * (a[i] + b[i]);
  return p;
}

std::vector<std::size_t> family_terms(const HamiltonianExpr& H, const std::string& fam, const std::string& a,
                                      const std::string& b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < H.terms.size(); ++i) {
    const auto& t = H.terms[i];
    if (t.kind == fam && t.support.size() == 2 &&
        ((t.support[0] == a && t.support[1] == b) || (t.support[0] == b && t.support[1] == a)))
      out.push_back(i);
  }
  return out;
}

StageRecord record(const std::string& stage, const std::string& detail, const EmbeddedGraph& G,
                   const LocalityParams& lp) {
  LocalityReport r = check_locality(G, lp);
  return {stage, detail, r.max_ball, r.max_edge};
}

struct Routed {
  EmbeddedGraph G;
  SnapResult snap;
  RoutePlan route;
};

Routed snap_and_route(const HamiltonianExpr& H, const std::map<std::string, Point>& coords, int D,
                      const CompileParams& p) {
  Routed r;
  r.G = interaction_graph(H, coords, D);
  double spacing = p.spacing;
  int extra = 0;
  std::string last;
  for (int h = 0; h <= p.max_halvings; ++h) {
    r.snap = snap_to_grid(r.G, spacing);
    r.snap.halvings += extra;
    try {
      r.route = route_paths(r.snap.grid, r.G.edges, p.route);
      return r;
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::not_converged) throw;
      last = e.what();
    }
    extra = r.snap.halvings + 1;
    spacing = r.snap.spacing / 2;
  }
  throw Error(Error::Kind::not_converged,
              "no routing after " + std::to_string(p.max_halvings) + " spacing halvings: " + last);
}

int direction(const GridPoint& a, const GridPoint& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return 2 * static_cast<int>(i) + (b[i] > a[i] ? 0 : 1);
  throw Error(Error::Kind::structural, "zero route step");
}

// y and one path per direction code inside the domain
struct Hub {
  int y = 0;
  std::map<int, std::vector<int>> path;
};

Hub make_hub(const std::vector<std::vector<int>>& adj, const FundamentalDomain& dom, const std::vector<int>& codes,
             int fallback_y) {
  Hub h;
  if (codes.empty()) {
    h.y = fallback_y;
    return h;
  }
  std::vector<int> ports;
  for (int c : codes) ports.push_back(dom.ports[c]);
  if (ports.size() <= 3) {
    CentralVertex cv = central_vertex(adj, ports);
    if (paths_disjoint(cv)) {
      h.y = cv.y;
      for (std::size_t i = 0; i < codes.size(); ++i) h.path[codes[i]] = cv.paths[i];
      return h;
    }
  }
  // greedy: each y, shortest paths avoiding the ones already taken
  for (int y = 0; y < static_cast<int>(adj.size()); ++y) {
    std::set<int> taken;
    Hub g;
    g.y = y;
    bool ok = true;
    for (std::size_t i = 0; i < codes.size() && ok; ++i) {
      std::vector<int> prev(adj.size(), -2);
      std::deque<int> q{y};
      prev[y] = -1;
      while (!q.empty() && prev[ports[i]] == -2) {
        int v = q.front();
        q.pop_front();
        for (int n : adj[v])
          if (prev[n] == -2 && n != y && !taken.count(n)) {
            prev[n] = v;
            q.push_back(n);
          }
      }
      if (prev[ports[i]] == -2) {
        ok = false;
        break;
      }
      std::vector<int> p;
      for (int x = ports[i]; x != -1; x = prev[x]) p.push_back(x);
      std::reverse(p.begin(), p.end());
      for (std::size_t k = 1; k < p.size(); ++k) taken.insert(p[k]);
      g.path[codes[i]] = p;
    }
    if (ok) return g;
  }
  throw Error(Error::Kind::structural, "domain cannot host " + std::to_string(codes.size()) + " disjoint port paths");
}

}  // namespace

CompileResult compile(const HamiltonianExpr& target, const EmbeddedGraph& lattice, const CompileParams& p) {
  p.locality.validate();
  target.validate();
  CompileResult out;
  const std::string fam = to_string(p.family);
  if (target.system.size() == 0) {
    out.result.H = target;
    return out;
  }

  // locality
  const int D = staged("locality", [&] {
    auto coords = site_coords(target);
    if (coords.size() != target.system.size())
      throw Error(Error::Kind::structural, "every site needs coordinates");
    int d = static_cast<int>(coords.begin()->second.size());
    if (d != lattice.D)
      throw Error(Error::Kind::structural, "target is " + std::to_string(d) + "-dimensional, lattice is " +
                                               std::to_string(lattice.D) + "-dimensional");
    EmbeddedGraph G = interaction_graph(target, coords, d);
    LocalityReport r = check_locality(G, p.locality);
    if (!r.pass) {
      const auto& v = r.violations.front();
      std::string w;
      for (const auto& s : v.witness) w += (w.empty() ? "" : ",") + s;
      throw Error(Error::Kind::structural, "target is not geometrically local: " + v.kind + " violation at " + w);
    }
    out.stages.push_back({"locality", "ok", r.max_ball, r.max_edge});
    return d;
  });

  // degree
  DegreeReduction dr = staged("degree", [&] { return reduce_degree(target, p.family, 3, p.delta_inner); });
  std::vector<PlanRound> inner_first(dr.plan.rounds.rbegin(), dr.plan.rounds.rend());
  HamiltonianExpr H = dr.H;
  std::map<std::string, Point> coords = dr.coords;
  double delta = inner_first.empty() ? p.delta_inner : inner_first.back().delta;
  out.stages.push_back(record("degree",
                              "max degree " + std::to_string(dr.degree_in) + " -> " + std::to_string(dr.degree_out) +
                                  ", " + std::to_string(dr.subdivisions) + " subdivisions, " +
                                  std::to_string(dr.forks) + " forks",
                              interaction_graph(H, coords, D), p.locality));

  auto run = [&](PlanRound& rd, GadgetApplication app, std::size_t expect) {
    GadgetResult g = apply_gadget(H, app, rd.delta);
    if (g.removed.size() != expect)
      throw Error(Error::Kind::structural, "host term not found at " + app.sites[0] + "-" + app.sites[1]);
    app.lambda = g.lambda;
    app.mediators = {g.mediators[0], g.mediators[1]};
    H = std::move(g.H);
    rd.apps.push_back(app);
    return g.mediators;
  };

  // snap and route
  Routed rt = staged("route", [&] { return snap_and_route(H, coords, D, p); });
  auto route_detail = [&] {
    return "spacing " + std::to_string(rt.snap.spacing) + ", " + std::to_string(rt.snap.halvings) + " halvings, " +
           std::to_string(rt.route.rounds) + " rounds, " + std::to_string(rt.route.crossings.size()) + " crossings";
  };
  out.stages.push_back(record("route", route_detail(), rt.G, p.locality));

  // crossing round
  if (!rt.route.crossings.empty()) {
    staged("crossing", [&] {
      delta = next_outer_delta(delta);
      PlanRound rd;
      rd.delta = delta;
      std::set<int> done;
      for (const auto& c : rt.route.crossings) {
        if (done.count(c.a) || done.count(c.b)) continue;
        done.insert(c.a);
        done.insert(c.b);
        const std::string P = rt.G.ids[rt.G.edges[c.a].first], Qs = rt.G.ids[rt.G.edges[c.a].second];
        const std::string R = rt.G.ids[rt.G.edges[c.b].first], S = rt.G.ids[rt.G.edges[c.b].second];
        auto ea = family_terms(H, fam, P, Qs), eb = family_terms(H, fam, R, S);
        if (ea.size() != 1 || eb.size() != 1)
          throw Error(Error::Kind::structural, "crossed edges must carry one " + fam + " term each");
        GadgetApplication app;
        app.kind = GadgetKind::crossing;
        app.sites = {P, R, S, Qs};
        app.lambda = H.terms[ea[0]].coeff;
        app.mu = H.terms[eb[0]].coeff;
        app.family = p.family;
        auto m = run(rd, app, 2);
        coords[m[0]] = mid(coords[P], coords[R]);
        coords[m[1]] = mid(coords[S], coords[Qs]);
      }
      inner_first.push_back(std::move(rd));
      rt = snap_and_route(H, coords, D, p);
      if (!rt.route.crossings.empty())
        throw Error(Error::Kind::not_converged,
                    std::to_string(rt.route.crossings.size()) + " crossings remain after the crossing round");
    });
    out.stages.push_back(record("crossing", route_detail(), rt.G, p.locality));
  }
  out.snap = rt.snap;
  out.route = rt.route;
  out.route_sites = rt.G.ids;

  // domain
  out.domain = staged("domain", [&] { return extract_domain(lattice, p.window); });
  const FundamentalDomain& dom = out.domain;
  out.stages.push_back({"domain", "|T| = " + std::to_string(dom.T.size()), 0, 0.0});

  // embed: grid step = stride translates; stride 2 keeps free cells beside every path for pendants
  QuotientGraph Q = quotient_graph(lattice);
  const auto ladj = lattice.adjacency();
  std::vector<std::vector<int>> tadj(dom.T.size());
  for (std::size_t a = 0; a < dom.T.size(); ++a)
    for (const auto& [c, off] : Q.neighbours(dom.T[a].cls)) {
      GridPoint n = dom.T[a].cell;
      for (int d = 0; d < D; ++d) n[d] += off[d];
      auto it = std::find(dom.T.begin(), dom.T.end(), LatticeSite{c, n});
      if (it != dom.T.end()) tadj[a].push_back(static_cast<int>(it - dom.T.begin()));
    }
  for (auto& l : tadj) std::sort(l.begin(), l.end());

  std::map<std::string, int> at;  // simulator site -> lattice vertex
  for (int stride = 1;; ++stride) {
    const HamiltonianExpr H0 = H;
    const std::vector<PlanRound> rounds0 = inner_first;
    const double delta0 = delta;
    std::vector<std::vector<int>> path_ids(rt.G.edges.size());
    std::set<int> occupied;
    at.clear();
    out.chains.clear();
    try {
      staged("embed", [&] {
        std::vector<GridPoint> terms;
        for (auto g : rt.route.assignment) {
          for (auto& x : g) x *= stride;
          terms.push_back(g);
        }
        std::vector<std::vector<GridPoint>> tpaths;
        for (const auto& path : rt.route.paths) {
          std::vector<GridPoint> tp;
          for (std::size_t k = 0; k < path.size(); ++k)
            for (int m = k ? 1 : stride; m <= stride; ++m) {
              GridPoint g = path[k];
              for (int d = 0; d < D; ++d) g[d] = stride * path[k][d] - (stride - m) * (path[k][d] - path[k - (k ? 1 : 0)][d]);
              tp.push_back(g);
            }
          tpaths.push_back(tp);
        }

        std::map<GridPoint, std::set<int>> dirs;
        for (const auto& g : terms) dirs[g];
        for (const auto& path : tpaths)
          for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            int c = direction(path[k], path[k + 1]);
            dirs[path[k]].insert(c);
            dirs[path[k + 1]].insert(c ^ 1);
          }

        GridPoint lo, hi;
        for (const auto& [g, cs] : dirs)
          for (std::size_t t = 0; t < dom.T.size(); ++t) {
            GridPoint c = dom.translate(static_cast<int>(t), g).cell;
            if (lo.empty()) lo = hi = c;
            for (int d = 0; d < D; ++d) {
              lo[d] = std::min(lo[d], c[d]);
              hi[d] = std::max(hi[d], c[d]);
            }
          }
        GridPoint shift(D);
        for (int d = 0; d < D; ++d) {
          shift[d] = Q.lo[d] + 1 - lo[d];
          if (hi[d] + shift[d] > Q.hi[d] - 1)
            throw Error(Error::Kind::structural, "lattice window too small: need " + std::to_string(hi[d] - lo[d] + 3) +
                                                     " cells along v" + std::to_string(d + 1));
        }
        auto vertex_of = [&](int t, const GridPoint& g) {
          LatticeSite s = dom.translate(t, g);
          for (int d = 0; d < D; ++d) s.cell[d] += shift[d];
          auto it = Q.vertex.find(s);
          if (it == Q.vertex.end()) throw Error(Error::Kind::structural, "translate leaves the lattice window");
          return it->second;
        };

        std::map<GridPoint, Hub> hubs;
        for (const auto& [g, cs] : dirs) hubs[g] = make_hub(tadj, dom, std::vector<int>(cs.begin(), cs.end()), dom.y);

        for (std::size_t v = 0; v < rt.G.size(); ++v) {
          const GridPoint& g = terms[v];
          int id = vertex_of(hubs[g].y, g);
          at[rt.G.ids[v]] = id;
          occupied.insert(id);
        }
        for (std::size_t e = 0; e < tpaths.size(); ++e) {
          const auto& path = tpaths[e];
          std::vector<int> seq;
          auto push = [&](int t, const GridPoint& g) { seq.push_back(vertex_of(t, g)); };
          for (std::size_t k = 0; k < path.size(); ++k) {
            const Hub& h = hubs[path[k]];
            if (k > 0) {
              auto in = h.path.at(direction(path[k - 1], path[k]) ^ 1);
              for (auto it = in.rbegin(); it != in.rend(); ++it) push(*it, path[k]);
            } else {
              push(h.y, path[k]);
            }
            if (k + 1 < path.size()) {
              const auto& o = h.path.at(direction(path[k], path[k + 1]));
              for (std::size_t i = 1; i < o.size(); ++i) push(o[i], path[k]);
            }
          }
          for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            if (!lattice.has_edge(seq[i], seq[i + 1]))
              throw Error(Error::Kind::structural, "embedded path leaves the lattice edges");
          for (std::size_t i = 1; i + 1 < seq.size(); ++i)
            if (!occupied.insert(seq[i]).second)
              throw Error(Error::Kind::structural, "embedded paths share lattice vertex " + lattice.ids[seq[i]]);
          path_ids[e] = seq;
        }
      });

      staged("chain", [&] {
        const std::size_t ne = rt.G.edges.size();
        std::vector<std::vector<std::string>> chain(ne);
        std::vector<std::pair<std::string, std::string>> pendants;
        for (std::size_t e = 0; e < ne; ++e) {
          chain[e] = {rt.G.ids[rt.G.edges[e].first], rt.G.ids[rt.G.edges[e].second]};
          if (path_ids[e].size() > 2 && family_terms(H, fam, chain[e][0], chain[e][1]).size() != 1)
            throw Error(Error::Kind::structural,
                        "edge " + chain[e][0] + "-" + chain[e][1] + " must carry exactly one " + fam + " term");
        }
        for (int round = 0;; ++round) {
          PlanRound rd;
          for (std::size_t e = 0; e < ne; ++e) {
            const std::size_t L = path_ids[e].size() - 1;
            std::size_t K = chain[e].size() - 1;
            if (K >= L) continue;
            if (rd.apps.empty() && rd.delta == 0.0) rd.delta = delta = next_outer_delta(delta);
            GadgetApplication app;
            app.lambda = std::nan("");
            app.family = p.family;
            if (round == 0) {
              app.kind = L % 2 ? GadgetKind::subdiv_pos : GadgetKind::subdiv_neg;
              app.sites = {chain[e][0], chain[e][1]};
              auto m = run(rd, app, 1);
              if (L % 2) {
                chain[e] = {chain[e][0], m[0], m[1], chain[e][1]};
              } else {
                chain[e] = {chain[e][0], m[0], chain[e][1]};
                pendants.push_back({m[0], m[1]});
              }
              continue;
            }
            std::size_t need = std::min((L - K) / 2, K);
            std::vector<std::string> next{chain[e][0]};
            for (std::size_t i = 0; i < K; ++i) {
              if (i < need) {
                app.kind = GadgetKind::subdiv_pos;
                app.sites = {chain[e][i], chain[e][i + 1]};
                auto m = run(rd, app, 1);
                next.push_back(m[0]);
                next.push_back(m[1]);
              }
              next.push_back(chain[e][i + 1]);
            }
            chain[e] = next;
          }
          if (rd.apps.empty()) break;
          inner_first.push_back(std::move(rd));
        }

        for (std::size_t e = 0; e < ne; ++e) {
          if (chain[e].size() != path_ids[e].size())
            throw Error(Error::Kind::structural, "chain length does not match the embedded path");
          std::vector<std::string> names;
          for (std::size_t i = 0; i < chain[e].size(); ++i) {
            at[chain[e][i]] = path_ids[e][i];
            names.push_back(lattice.ids[path_ids[e][i]]);
          }
          out.chains.push_back(names);
        }
        for (const auto& [a, b] : pendants) {
          int free = -1;
          for (int n : ladj[at.at(a)])
            if (!occupied.count(n)) {
              free = n;
              break;
            }
          if (free < 0)
            throw Error(Error::Kind::not_converged, "no free lattice neighbour for the pendant mediator of " + a);
          occupied.insert(free);
          at[b] = free;
        }
      });
        std::size_t total = 0;
        for (const auto& s : path_ids) total += s.size() - 1;
        out.stages.push_back({"embed", "stride " + std::to_string(stride) + ", " + std::to_string(total) +
                                           " lattice edges on " + std::to_string(path_ids.size()) + " paths",
                              0, 0.0});
        break;
    } catch (const Error& e) {
      if (stride >= 2 || e.kind() != Error::Kind::not_converged) throw;
      H = H0;
      inner_first = rounds0;
      delta = delta0;
    }
  }

  // assemble
  staged("assemble", [&] {
    out.plan.rounds.assign(inner_first.rbegin(), inner_first.rend());
    out.plan.delta_base = out.plan.rounds.empty() ? 0.0 : out.plan.rounds.front().delta;
    out.plan.validate();
    out.result = apply_plan(target, out.plan);
    const HamiltonianExpr& S = out.result.H;
    if (!(S.system == H.system) || S.terms.size() != H.terms.size())
      throw Error(Error::Kind::structural, "plan replay disagrees with the staged construction");
    SiteSystem sys;
    for (const auto& s : S.system.sites()) {
      auto it = at.find(s.id);
      if (it == at.end()) throw Error(Error::Kind::structural, "site " + s.id + " was never placed");
      out.placement[s.id] = lattice.ids[it->second];
      sys.add({lattice.ids[it->second], s.dim, lattice.coords[it->second]});
    }
    out.lattice_H.system = sys;
    out.lattice_H.constant = S.constant;
    for (auto t : S.terms) {
      for (auto& x : t.support) x = out.placement.at(x);
      if (t.support.size() == 2 &&
          !lattice.has_edge(lattice.index_of(t.support[0]), lattice.index_of(t.support[1])))
        throw Error(Error::Kind::structural, "term on " + t.support[0] + "-" + t.support[1] + " is not a lattice edge");
      if (t.support.size() > 2) throw Error(Error::Kind::structural, "term wider than a lattice edge");
      out.lattice_H.terms.push_back(std::move(t));
    }
    out.lattice_H.validate();
  });
  out.stages.push_back(record("lattice",
                              std::to_string(out.lattice_H.system.size()) + " qubits, depth " +
                                  std::to_string(out.plan.depth()),
                              interaction_graph(out.lattice_H, D), p.locality));

  if (p.certify) {
    if (out.result.H.system.size() > p.certify_limit) {
      out.stages.push_back({"certify",
                            "skipped: " + std::to_string(out.result.H.system.size()) + " qubits exceed the limit " +
                                std::to_string(p.certify_limit),
                            0, 0.0});
    } else {
      out.certificate = staged("certify", [&] { return certify_plan(target, out.result, out.plan, p.eta, p.eps); });
      out.stages.push_back({"certify", out.certificate->pass ? "pass" : "fail", 0, 0.0});
    }
  }
  return out;
}

}  // namespace hamsim
