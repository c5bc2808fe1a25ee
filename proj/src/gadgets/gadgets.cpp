#include <algorithm>
#include <cmath>
#include <set>

#include "hamsim/gadgets.hpp"

namespace hamsim {

std::string to_string(Family f) { return f == Family::heisenberg ? "heisenberg" : "xy"; }

std::string to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::subdiv_pos: return "subdiv_pos";
    case GadgetKind::subdiv_neg: return "subdiv_neg";
    case GadgetKind::fork: return "fork";
    case GadgetKind::crossing: return "crossing";
  }
  return "?";
}

std::string to_string(Split s) { return s == Split::standard ? "standard" : "balanced"; }

Family parse_family(const std::string& s) {
  if (s == "heisenberg") return Family::heisenberg;
  if (s == "xy") return Family::xy;
  throw Error(Error::Kind::parse, "unknown interaction family '" + s + "'");
}

GadgetKind parse_gadget_kind(const std::string& s) {
  for (auto k : {GadgetKind::subdiv_pos, GadgetKind::subdiv_neg, GadgetKind::fork, GadgetKind::crossing})
    if (to_string(k) == s) return k;
  throw Error(Error::Kind::parse, "unknown gadget kind '" + s + "'");
}

Split parse_split(const std::string& s) {
  if (s == "standard") return Split::standard;
  if (s == "balanced") return Split::balanced;
  throw Error(Error::Kind::parse, "unknown split '" + s + "'");
}

FamilyConstants family_constants(Family f) {
  if (f == Family::heisenberg) return {3.0, 4.0, std::sqrt(2.0)};
  return {2.0, 2.0, 1.0};
}

Vec mediator_ground_state() {
  Vec s = Vec::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

namespace {

std::size_t arity(GadgetKind k) {
  switch (k) {
    case GadgetKind::fork: return 3;
    case GadgetKind::crossing: return 4;
    default: return 2;
  }
}

bool same_edge(const LocalTerm& t, const std::string& a, const std::string& b) {
  return t.support.size() == 2 &&
         ((t.support[0] == a && t.support[1] == b) || (t.support[0] == b && t.support[1] == a));
}

bool close(double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)); }

// index of the host term that the gadget compiles away, if present
std::optional<std::size_t> find_target(const HamiltonianExpr& H, const std::set<std::size_t>& taken,
                                       const std::string& fam, const std::string& a, const std::string& b,
                                       double coeff) {
  for (std::size_t i = 0; i < H.terms.size(); ++i)
    if (!taken.count(i) && H.terms[i].kind == fam && same_edge(H.terms[i], a, b) && close(H.terms[i].coeff, coeff))
      return i;
  return std::nullopt;
}

struct Coupling {
  double c;
  std::string x, y;
};

}  // namespace

GadgetResult apply_gadget(const HamiltonianExpr& H, const GadgetApplication& app, double delta) {
  if (!(delta > 0.0)) throw Error(Error::Kind::structural, "gadget delta must be positive");
  if (app.sites.size() != arity(app.kind))
    throw Error(Error::Kind::structural, to_string(app.kind) + " needs " + std::to_string(arity(app.kind)) + " sites");
  std::set<std::string> uniq(app.sites.begin(), app.sites.end());
  if (uniq.size() != app.sites.size()) throw Error(Error::Kind::structural, "gadget sites must be distinct");
  for (const auto& s : app.sites) {
    if (!H.system.has(s)) throw Error(Error::Kind::structural, "gadget site " + s + " not in host");
    if (H.system.dim_of(s) != 2) throw Error(Error::Kind::structural, "gadget site " + s + " is not a qubit");
  }
  const std::string fam = to_string(app.family);
  const auto fc = family_constants(app.family);
  const auto& s = app.sites;

  double lambda = app.lambda;
  const bool subdiv = app.kind == GadgetKind::subdiv_pos || app.kind == GadgetKind::subdiv_neg;
  if (std::isnan(lambda)) {
    if (!subdiv) throw Error(Error::Kind::structural, "only subdivisions inherit lambda from the host");
    double sum = 0.0;
    bool found = false;
    for (const auto& t : H.terms)
      if (t.kind == fam && same_edge(t, s[0], s[1])) {
        sum += t.coeff;
        found = true;
      }
    if (!found) throw Error(Error::Kind::structural, "no host " + fam + " term on " + s[0] + "-" + s[1] + " to inherit");
    lambda = app.kind == GadgetKind::subdiv_pos ? sum : -sum;
  }
  if (subdiv && lambda == 0.0) throw Error(Error::Kind::structural, "subdivision with lambda = 0 is degenerate");

  GadgetResult out;
  out.lambda = lambda;
  out.H = H;
  std::string a, b;
  if (app.mediators.empty()) {
    a = out.H.system.fresh_id("m");
    out.H.system.add({a, 2, {}});
    b = out.H.system.fresh_id("m");
    out.H.system.add({b, 2, {}});
  } else {
    if (app.mediators.size() != 2) throw Error(Error::Kind::structural, "a gadget takes exactly two mediators");
    a = app.mediators[0];
    b = app.mediators[1];
    if (H.system.has(a) || H.system.has(b) || a == b)
      throw Error(Error::Kind::structural, "mediator id collision on " + a + "/" + b);
    out.H.system.add({a, 2, {}});
    out.H.system.add({b, 2, {}});
  }
  out.mediators = {a, b};

  // compiled target terms
  std::vector<std::tuple<std::string, std::string, double>> targets;
  std::vector<Coupling> h2, h1;
  const double root = std::sqrt(std::abs(lambda));
  const double sgn = lambda < 0 ? -1.0 : 1.0;
  switch (app.kind) {
    case GadgetKind::subdiv_pos:
      targets.push_back({s[0], s[1], lambda});
      if (app.split == Split::balanced)
        h2 = {{root, s[0], a}, {sgn * root, s[1], b}};
      else
        h2 = {{1.0, s[0], a}, {lambda, s[1], b}};
      break;
    case GadgetKind::subdiv_neg:
      targets.push_back({s[0], s[1], -lambda});
      if (app.split == Split::balanced)
        h2 = {{root, s[0], a}, {sgn * root, s[1], a}};
      else
        h2 = {{1.0, s[0], a}, {lambda, s[1], a}};
      break;
    case GadgetKind::fork:
      targets.push_back({s[0], s[2], lambda});
      targets.push_back({s[1], s[2], app.mu});
      h2 = {{1.0, s[2], b}, {lambda, s[0], a}, {app.mu, s[1], a}};
      h1 = {{lambda * app.mu, s[0], s[1]}};
      break;
    case GadgetKind::crossing:
      targets.push_back({s[0], s[3], lambda});
      targets.push_back({s[1], s[2], app.mu});
      h2 = {{1.0, s[0], a}, {1.0, s[1], a}, {lambda, b, s[3]}, {app.mu, b, s[2]}};
      h1 = {{1.0, s[0], s[1]}, {-lambda, s[1], s[3]}, {-app.mu, s[0], s[2]}, {lambda * app.mu, s[2], s[3]}};
      break;
  }

  std::set<std::size_t> taken;
  for (const auto& [x, y, c] : targets)
    if (auto i = find_target(H, taken, fam, x, y, c)) taken.insert(*i);
  out.removed.assign(taken.begin(), taken.end());
  std::vector<LocalTerm> kept;
  for (std::size_t i = 0; i < out.H.terms.size(); ++i)
    if (!taken.count(i)) kept.push_back(std::move(out.H.terms[i]));
  out.H.terms = std::move(kept);

  out.H.add_named(fam, {a, b}, delta);
  double sq = 0.0;
  for (const auto& c : h2) {
    sq += c.c * c.c;
    if (c.c != 0.0) out.H.add_named(fam, {c.x, c.y}, fc.kappa * std::sqrt(delta) * c.c);
  }
  for (const auto& c : h1)
    if (c.c != 0.0) out.H.add_named(fam, {c.x, c.y}, c.c);
  out.H.constant += fc.shift * delta + 0.5 * fc.shift * sq;
  return out;
}

HamiltonianExpr subdivide(const HamiltonianExpr& H, const std::string& s1, const std::string& s2, double lambda,
                          int sign, double delta, Family family, Split split) {
  GadgetApplication app;
  app.kind = sign >= 0 ? GadgetKind::subdiv_pos : GadgetKind::subdiv_neg;
  app.sites = {s1, s2};
  app.lambda = lambda;
  app.family = family;
  app.split = split;
  return apply_gadget(H, app, delta).H;
}

HamiltonianExpr fork(const HamiltonianExpr& H, const std::string& s1, const std::string& s2, const std::string& s3,
                     double lambda, double mu, double delta, Family family) {
  GadgetApplication app;
  app.kind = GadgetKind::fork;
  app.sites = {s1, s2, s3};
  app.lambda = lambda;
  app.mu = mu;
  app.family = family;
  return apply_gadget(H, app, delta).H;
}

HamiltonianExpr crossing(const HamiltonianExpr& H, const std::string& s1, const std::string& s2,
                         const std::string& s3, const std::string& s4, double lambda, double mu, double delta,
                         Family family) {
  GadgetApplication app;
  app.kind = GadgetKind::crossing;
  app.sites = {s1, s2, s3, s4};
  app.lambda = lambda;
  app.mu = mu;
  app.family = family;
  return apply_gadget(H, app, delta).H;
}

HamiltonianExpr gadget_target(const SiteSystem& logical, const GadgetApplication& app) {
  HamiltonianExpr t;
  t.system = logical;
  const std::string fam = to_string(app.family);
  const auto& s = app.sites;
  auto add = [&](const std::string& x, const std::string& y, double c) {
    if (c != 0.0) t.add_named(fam, {x, y}, c);
  };
  switch (app.kind) {
    case GadgetKind::subdiv_pos: add(s[0], s[1], app.lambda); break;
    case GadgetKind::subdiv_neg: add(s[0], s[1], -app.lambda); break;
    case GadgetKind::fork:
      add(s[0], s[2], app.lambda);
      add(s[1], s[2], app.mu);
      break;
    case GadgetKind::crossing:
      add(s[0], s[3], app.lambda);
      add(s[1], s[2], app.mu);
      break;
  }
  return t;
}

LocalIsometry mediator_isometry(const SiteSystem& logical, const std::vector<std::array<std::string, 2>>& pairs) {
  LocalIsometry v = LocalIsometry::identity(logical);
  for (const auto& p : pairs) v.ancillas.push_back({{p[0], p[1]}, mediator_ground_state()});
  return v;
}

static HamiltonianExpr bare_host(const GadgetApplication& app) {
  HamiltonianExpr h;
  for (const auto& s : app.sites) h.system.add({s, 2, {}});
  return h;
}

SimulationReport certify_gadget(const GadgetApplication& app, double delta, double eta, double eps,
                                const SolverOptions& opt) {
  auto host = bare_host(app);
  auto target = gadget_target(host.system, app);
  auto g = apply_gadget(host, app, delta);
  return verify_simulation(g.H, target, delta / 2, eta, eps, mediator_isometry(host.system, {g.mediators}), opt);
}

ScanBuilder gadget_builder(const GadgetApplication& app) {
  return [app](double delta) {
    auto host = bare_host(app);
    auto g = apply_gadget(host, app, delta);
    return SimInstance{g.H, mediator_isometry(host.system, {g.mediators})};
  };
}

}  // namespace hamsim
