#include <algorithm>
#include <cmath>
#include <set>

#include "hamsim/geocompile.hpp"

namespace hamsim {

namespace {

using Adj = std::map<std::string, std::set<std::string>>;

Adj neighbour_sets(const HamiltonianExpr& H) {
  Adj adj;
  for (const auto& s : H.system.sites()) adj[s.id];
  for (const auto& t : H.terms)
    if (t.support.size() == 2) {
      adj[t.support[0]].insert(t.support[1]);
      adj[t.support[1]].insert(t.support[0]);
    }
  return adj;
}

double edge_coeff(const HamiltonianExpr& H, const std::string& fam, const std::string& a, const std::string& b) {
  double c = 0.0;
  for (const auto& t : H.terms)
    if (t.kind == fam && t.support.size() == 2 &&
        ((t.support[0] == a && t.support[1] == b) || (t.support[0] == b && t.support[1] == a)))
      c += t.coeff;
  return c;
}

Point lerp(const Point& a, const Point& b, double t) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

}  // namespace

int max_degree(const HamiltonianExpr& H) {
  int d = 0;
  for (const auto& [id, nb] : neighbour_sets(H)) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

double next_outer_delta(double delta) { return std::pow(10.0, std::round(1.5 * std::log10(delta))); }

std::vector<double> outward_schedule(double delta_inner, int count) {
  if (!(delta_inner > 1.0)) throw Error(Error::Kind::structural, "innermost delta must exceed 1");
  std::vector<double> d;
  for (int r = 0; r < count; ++r) d.push_back(r == 0 ? delta_inner : next_outer_delta(d.back()));
  std::reverse(d.begin(), d.end());
  return d;
}

DegreeReduction reduce_degree(const HamiltonianExpr& H, Family family, int max_deg, double delta_inner) {
  if (max_deg < 3) throw Error(Error::Kind::structural, "fork trees need max_deg >= 3");
  H.validate();
  const std::string fam = to_string(family);
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& t : H.terms) {
    if (t.support.size() > 2) throw Error(Error::Kind::structural, "degree reduction handles 2-local terms only");
    if (t.support.size() != 2) continue;
    if (t.kind != fam) throw Error(Error::Kind::structural, "2-local term on " + t.support[0] + "-" + t.support[1] + " is not " + fam);
    auto key = std::minmax(t.support[0], t.support[1]);
    if (!seen.insert({key.first, key.second}).second)
      throw Error(Error::Kind::structural, "duplicate terms on " + key.first + "-" + key.second + "; merge them first");
    edges.push_back({t.support[0], t.support[1]});
  }

  DegreeReduction out;
  out.H = H;
  out.degree_in = max_degree(H);
  auto coords = site_coords(H);
  const bool geo = coords.size() == H.system.size();
  if (geo) out.coords = coords;
  if (edges.empty()) {
    out.degree_out = out.degree_in;
    return out;
  }

  std::vector<PlanRound> inner_first;
  if (!(delta_inner > 1.0)) throw Error(Error::Kind::structural, "innermost delta must exceed 1");
  double delta = delta_inner;
  auto run = [&](PlanRound& rd, GadgetApplication app, std::size_t expect) {
    GadgetResult g = apply_gadget(out.H, app, rd.delta);
    if (g.removed.size() != expect)
      throw Error(Error::Kind::structural, "degree reduction lost track of a host term at " + app.sites[0]);
    app.lambda = g.lambda;
    app.mediators = {g.mediators[0], g.mediators[1]};
    out.H = std::move(g.H);
    rd.apps.push_back(app);
    return g.mediators;
  };

  PlanRound sub;
  sub.delta = delta;
  for (const auto& [u, v] : edges) {
    GadgetApplication app;
    app.kind = GadgetKind::subdiv_pos;
    app.sites = {u, v};
    app.lambda = std::nan("");
    app.family = family;
    auto m = run(sub, app, 1);
    ++out.subdivisions;
    if (geo) {
      out.coords[m[0]] = lerp(out.coords[u], out.coords[v], 1.0 / 3);
      out.coords[m[1]] = lerp(out.coords[u], out.coords[v], 2.0 / 3);
    }
  }
  inner_first.push_back(std::move(sub));

  for (int guard = 0; max_degree(out.H) > max_deg; ++guard) {
    if (guard > 64) throw Error(Error::Kind::not_converged, "fork rounds did not reduce the degree");
    delta = next_outer_delta(delta);
    PlanRound rd;
    rd.delta = delta;
    Adj adj = neighbour_sets(out.H);
    std::set<std::string> busy;
    const std::vector<Site> sites = out.H.system.sites();
    for (const auto& s : sites) {
      const std::string c = s.id;
      if (static_cast<int>(adj[c].size()) <= max_deg || busy.count(c)) continue;
      std::vector<std::string> nb;
      for (const auto& x : sites)
        if (adj[c].count(x.id) && !busy.count(x.id)) nb.push_back(x.id);
      busy.insert(c);
      for (std::size_t i = 0; i + 1 < nb.size(); i += 2) {
        GadgetApplication app;
        app.kind = GadgetKind::fork;
        app.sites = {nb[i], nb[i + 1], c};
        app.lambda = edge_coeff(out.H, fam, nb[i], c);
        app.mu = edge_coeff(out.H, fam, nb[i + 1], c);
        app.family = family;
        auto m = run(rd, app, 2);
        busy.insert(nb[i]);
        busy.insert(nb[i + 1]);
        ++out.forks;
        if (geo) {
          out.coords[m[0]] = lerp(out.coords[nb[i]], out.coords[nb[i + 1]], 0.5);
          out.coords[m[1]] = lerp(out.coords[m[0]], out.coords[c], 0.5);
        }
      }
    }
    if (rd.apps.empty()) throw Error(Error::Kind::not_converged, "no fork applies");
    inner_first.push_back(std::move(rd));
  }

  out.plan.rounds.assign(inner_first.rbegin(), inner_first.rend());
  out.plan.delta_base = out.plan.rounds.front().delta;
  out.degree_out = max_degree(out.H);
  return out;
}

}  // namespace hamsim
