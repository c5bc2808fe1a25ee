// Structured-text (JSON) documents: Hamiltonians, graphs, plans, tilesets, layers, gate sequences, fields.
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hamsim/io.hpp"

namespace hamsim::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(Error::Kind::parse, (path.empty() ? std::string("/") : path) + ": " + msg);
}

// field access that remembers where it is
struct At {
  const Json& j;
  std::string path;

  bool has(const std::string& k) const { return j.is_object() && j.contains(k) && !j.at(k).is_null(); }
  At operator[](const std::string& k) const {
    if (!j.is_object()) fail(path, "expected an object");
    if (!j.contains(k)) fail(path, "missing field '" + k + "'");
    return {j.at(k), path + "/" + k};
  }
  At operator[](std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }
  std::size_t size() const {
    if (!j.is_array()) fail(path, "expected an array");
    return j.size();
  }
  double num() const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }
  double num_or_nan() const { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : num(); }
  int integer() const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
  }
  std::string str() const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }
  bool boolean() const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }
  std::vector<double> nums() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].num());
    return v;
  }
  std::vector<int> ints() const {
    std::vector<int> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].integer());
    return v;
  }
  std::vector<std::string> strs() const {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].str());
    return v;
  }
};

At root(const Json& j, const std::string& format) {
  At a{j, ""};
  if (!j.is_object()) fail("", "expected a document object");
  if (a.has("format") && a["format"].str() != format)
    fail("/format", "expected '" + format + "', got '" + a["format"].str() + "'");
  return a;
}

// rethrow validation failures as located parse errors
template <class F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (e.kind() == Error::Kind::parse && !msg.empty() && msg[0] == '/') throw;
    fail(path, msg);
  }
}

Json matrix_json(const Mat& m) {
  Json re = Json::array(), im = Json::array();
  bool complex = false;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
      complex = complex || m(r, c).imag() != 0.0;
    }
  Json j{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}};
  if (complex) j["im"] = im;
  return j;
}

Mat matrix_from(const At& a) {
  int r = a["rows"].integer(), c = a["cols"].integer();
  if (r < 1 || c < 1) fail(a.path, "matrix needs positive rows and cols");
  auto re = a["re"].nums();
  std::vector<double> im(re.size(), 0.0);
  if (a.has("im")) im = a["im"].nums();
  if (re.size() != static_cast<std::size_t>(r) * c || im.size() != re.size())
    fail(a.path, "matrix needs rows*cols entries");
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = cplx(re[i * c + k], im[i * c + k]);
  return m;
}

Json vec_json(const Vec& v) { return matrix_json(Mat(v)); }

bool same(const Mat& a, const Mat& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

bool same_nan(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

const char* version() { return HAMSIM_VERSION; }

Json parse_text(const std::string& text, const std::string& name) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte offset -> line:col
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Error::Kind::parse, name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::parse, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(Error::Kind::structural, path + ": cannot write");
  out << dump(doc);
}

std::string format_of(const Json& doc) {
  if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
    throw Error(Error::Kind::parse, "/format: missing document format");
  return doc["format"].get<std::string>();
}

// ---- Hamiltonian ----
Json to_json(const HamiltonianExpr& H) {
  Json sites = Json::array();
  for (const auto& s : H.system.sites()) {
    Json j{{"id", s.id}, {"dim", s.dim}};
    if (!s.coord.empty()) j["coord"] = s.coord;
    sites.push_back(j);
  }
  Json terms = Json::array();
  for (const auto& t : H.terms) {
    Json j{{"support", t.support}};
    if (t.kind == "heisenberg" || t.kind == "xy") {
      j["kind"] = t.kind;
    } else {
      if (!t.kind.empty()) j["kind"] = t.kind;
      j["matrix"] = matrix_json(t.op);
    }
    j["coeff"] = t.coeff;
    terms.push_back(j);
  }
  return {{"format", "hamsim.hamiltonian"}, {"system", sites}, {"terms", terms}, {"constant", H.constant}};
}

HamiltonianExpr hamiltonian_from_json(const Json& doc) {
  At a = root(doc, "hamsim.hamiltonian");
  HamiltonianExpr H;
  At sites = a["system"];
  for (std::size_t i = 0; i < sites.size(); ++i) {
    At s = sites[i];
    Site x{s["id"].str(), s.has("dim") ? s["dim"].integer() : 2, {}};
    if (s.has("coord")) x.coord = s["coord"].nums();
    checked(s.path, [&] { H.system.add(x); });
  }
  if (a.has("terms")) {
    At terms = a["terms"];
    for (std::size_t i = 0; i < terms.size(); ++i) {
      At t = terms[i];
      LocalTerm lt;
      lt.support = t["support"].strs();
      lt.coeff = t.has("coeff") ? t["coeff"].num() : 1.0;
      if (t.has("kind")) lt.kind = t["kind"].str();
      if (t.has("matrix")) {
        lt.op = matrix_from(t["matrix"]);
      } else {
        if (lt.kind.empty()) fail(t.path, "term needs a kind or a matrix");
        InteractionParams p;
        if (t.has("word")) p.word = t["word"].str();
        if (t.has("index")) p.index = t["index"].integer();
        checked(t.path, [&] {
          std::vector<int> dims;
          for (const auto& s : lt.support) dims.push_back(H.system.dim_of(s));
          if (t.has("dim")) p.dim = t["dim"].integer();
          lt.op = named_interaction_for(lt.kind, dims, p);
        });
      }
      checked(t.path, [&] { H.add_term(lt); });
    }
  }
  if (a.has("constant")) H.constant = a["constant"].num();
  checked("", [&] { H.validate(); });
  return H;
}

bool equal(const HamiltonianExpr& a, const HamiltonianExpr& b) {
  if (!(a.system == b.system) || a.constant != b.constant || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    const auto &x = a.terms[i], &y = b.terms[i];
    if (x.support != y.support || x.coeff != y.coeff || x.kind != y.kind || !same(x.op, y.op)) return false;
  }
  return true;
}

// ---- graph ----
Json to_json(const EmbeddedGraph& G) {
  Json vs = Json::array(), es = Json::array();
  for (std::size_t i = 0; i < G.size(); ++i) vs.push_back({{"id", G.ids[i]}, {"coord", G.coords[i]}});
  for (auto [u, v] : G.edges) es.push_back({G.ids[u], G.ids[v]});
  Json j{{"format", "hamsim.graph"}, {"D", G.D}, {"vertices", vs}, {"edges", es}};
  if (!G.basis.empty()) j["basis"] = G.basis;
  return j;
}

EmbeddedGraph graph_from_json(const Json& doc) {
  At a = root(doc, "hamsim.graph");
  EmbeddedGraph G;
  G.D = a["D"].integer();
  At vs = a["vertices"];
  for (std::size_t i = 0; i < vs.size(); ++i) checked(vs[i].path, [&] { G.add_vertex(vs[i]["id"].str(), vs[i]["coord"].nums()); });
  At es = a["edges"];
  for (std::size_t i = 0; i < es.size(); ++i) {
    auto e = es[i].strs();
    if (e.size() != 2) fail(es[i].path, "edge needs two vertex ids");
    int u = G.index_of(e[0]), v = G.index_of(e[1]);
    if (u < 0 || v < 0) fail(es[i].path, "edge references a missing vertex");
    checked(es[i].path, [&] { G.add_edge(u, v); });
  }
  if (a.has("basis")) {
    At b = a["basis"];
    for (std::size_t i = 0; i < b.size(); ++i) G.basis.push_back(b[i].nums());
  }
  checked("", [&] { G.validate(); });
  return G;
}

// ---- plan ----
Json to_json(const GadgetPlan& plan) {
  Json rounds = Json::array();
  for (const auto& r : plan.rounds) {
    Json apps = Json::array();
    for (const auto& ap : r.apps) {
      Json j{{"kind", to_string(ap.kind)}, {"sites", ap.sites}, {"family", to_string(ap.family)}};
      j["lambda"] = std::isnan(ap.lambda) ? Json(nullptr) : Json(ap.lambda);
      if (ap.kind == GadgetKind::fork || ap.kind == GadgetKind::crossing) j["mu"] = ap.mu;
      if (!ap.mediators.empty()) j["mediators"] = ap.mediators;
      if (ap.split != Split::standard) j["split"] = to_string(ap.split);
      apps.push_back(j);
    }
    rounds.push_back({{"delta", r.delta}, {"apps", apps}});
  }
  return {{"format", "hamsim.plan"}, {"delta_base", plan.delta_base}, {"rounds", rounds}};
}

GadgetPlan plan_from_json(const Json& doc) {
  At a = root(doc, "hamsim.plan");
  GadgetPlan plan;
  plan.delta_base = a.has("delta_base") ? a["delta_base"].num() : 0.0;
  At rounds = a["rounds"];
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    PlanRound r;
    r.delta = rounds[i]["delta"].num();
    At apps = rounds[i]["apps"];
    for (std::size_t k = 0; k < apps.size(); ++k) {
      At x = apps[k];
      GadgetApplication ap;
      checked(x.path, [&] {
        ap.kind = parse_gadget_kind(x["kind"].str());
        if (x.has("family")) ap.family = parse_family(x["family"].str());
        if (x.has("split")) ap.split = parse_split(x["split"].str());
      });
      ap.sites = x["sites"].strs();
      ap.lambda = x.j.contains("lambda") ? x["lambda"].num_or_nan() : 1.0;
      if (x.has("mu")) ap.mu = x["mu"].num();
      if (x.has("mediators")) ap.mediators = x["mediators"].strs();
      r.apps.push_back(ap);
    }
    plan.rounds.push_back(r);
  }
  if (!a.has("delta_base") && !plan.rounds.empty()) plan.delta_base = plan.rounds.front().delta;
  checked("", [&] { plan.validate(); });
  return plan;
}

bool equal(const GadgetPlan& a, const GadgetPlan& b) {
  if (a.delta_base != b.delta_base || a.rounds.size() != b.rounds.size()) return false;
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    const auto &x = a.rounds[i], &y = b.rounds[i];
    if (x.delta != y.delta || x.apps.size() != y.apps.size()) return false;
    for (std::size_t k = 0; k < x.apps.size(); ++k) {
      const auto &p = x.apps[k], &q = y.apps[k];
      if (p.kind != q.kind || p.sites != q.sites || !same_nan(p.lambda, q.lambda) || p.mediators != q.mediators ||
          p.family != q.family || p.split != q.split)
        return false;
      if ((p.kind == GadgetKind::fork || p.kind == GadgetKind::crossing) && p.mu != q.mu) return false;
    }
  }
  return true;
}

// ---- tilesets ----
Json to_json(const Tileset& ts) {
  auto pairs = [&](const std::vector<std::pair<int, int>>& ps) {
    Json out = Json::array();
    for (auto [a, b] : ps) out.push_back({ts.tiles[a], ts.tiles[b]});
    return out;
  };
  auto labels = [&](const std::vector<int>& v) {
    Json out = Json::array();
    for (int t : v) out.push_back(ts.tiles[t]);
    return out;
  };
  Json j{{"format", "hamsim.tileset"}, {"tiles", ts.tiles}, {"glyphs", ts.glyphs},
         {"h_ok", pairs(ts.h_ok)},      {"v_ok", pairs(ts.v_ok)}, {"weights", ts.f1}};
  Json bd = Json::object();
  if (!ts.top.empty()) bd["top"] = labels(ts.top);
  if (!ts.bottom.empty()) bd["bottom"] = labels(ts.bottom);
  if (!ts.left.empty()) bd["left"] = labels(ts.left);
  if (!ts.right.empty()) bd["right"] = labels(ts.right);
  j["boundary"] = bd;
  return j;
}

Tileset tileset_from_json(const Json& doc) {
  At a = root(doc, "hamsim.tileset");
  Tileset ts;
  ts.tiles = a["tiles"].strs();
  ts.glyphs = a.has("glyphs") ? a["glyphs"].str() : "";
  auto idx = [&](const At& x) {
    int i = ts.index_of(x.str());
    if (i < 0) fail(x.path, "unknown tile '" + x.str() + "'");
    return i;
  };
  auto pairs = [&](const At& x) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != 2) fail(x[i].path, "pair needs two tiles");
      out.push_back({idx(x[i][0]), idx(x[i][1])});
    }
    return out;
  };
  ts.h_ok = pairs(a["h_ok"]);
  ts.v_ok = pairs(a["v_ok"]);
  ts.f1 = a.has("weights") ? a["weights"].nums() : std::vector<double>(ts.tiles.size(), 0.0);
  if (a.has("boundary")) {
    At b = a["boundary"];
    for (auto [name, dst] : {std::pair{"top", &ts.top}, {"bottom", &ts.bottom}, {"left", &ts.left}, {"right", &ts.right}})
      if (b.has(name)) {
        At l = b[name];
        for (std::size_t i = 0; i < l.size(); ++i) dst->push_back(idx(l[i]));
      }
  }
  checked("", [&] { ts.validate(); });
  return ts;
}

bool equal(const Tileset& a, const Tileset& b) {
  return a.tiles == b.tiles && a.glyphs == b.glyphs && a.h_ok == b.h_ok && a.v_ok == b.v_ok && a.f1 == b.f1 &&
         a.top == b.top && a.bottom == b.bottom && a.left == b.left && a.right == b.right;
}

Json layers_to_json(const std::vector<Layer>& layers) {
  Json out = Json::array();
  for (const auto& l : layers) {
    Json pc = Json::array(), sc = Json::array();
    for (const auto& c : l.pair_conditions)
      pc.push_back({{"horizontal", c.horizontal},
                    {"a", l.tiles.tiles[c.a]},
                    {"b", l.tiles.tiles[c.b]},
                    {"layer", c.layer},
                    {"first", c.first},
                    {"allowed", c.allowed}});
    for (const auto& c : l.site_conditions)
      sc.push_back({{"tile", l.tiles.tiles[c.tile]}, {"layer", c.layer}, {"allowed", c.allowed}});
    Json ts = to_json(l.tiles);
    ts.erase("format");
    out.push_back({{"name", l.name}, {"tileset", ts}, {"pair_conditions", pc}, {"site_conditions", sc}});
  }
  return {{"format", "hamsim.layers"}, {"layers", out}};
}

namespace {

std::vector<Layer> layers_from(const At& ls) {
  std::vector<Layer> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    At x = ls[i];
    Layer l;
    l.name = x["name"].str();
    try {
      l.tiles = tileset_from_json(x["tileset"].j);
    } catch (const Error& e) {
      fail(x.path + "/tileset", e.what());
    }
    auto idx = [&](const At& t) {
      int k = l.tiles.index_of(t.str());
      if (k < 0) fail(t.path, "unknown tile '" + t.str() + "'");
      return k;
    };
    if (x.has("pair_conditions")) {
      At pc = x["pair_conditions"];
      for (std::size_t k = 0; k < pc.size(); ++k) {
        PairCondition c;
        c.horizontal = pc[k]["horizontal"].boolean();
        c.a = idx(pc[k]["a"]);
        c.b = idx(pc[k]["b"]);
        c.layer = pc[k]["layer"].str();
        c.first = pc[k]["first"].boolean();
        c.allowed = pc[k]["allowed"].ints();
        l.pair_conditions.push_back(c);
      }
    }
    if (x.has("site_conditions")) {
      At sc = x["site_conditions"];
      for (std::size_t k = 0; k < sc.size(); ++k) {
        SiteCondition c;
        c.tile = idx(sc[k]["tile"]);
        c.layer = sc[k]["layer"].str();
        c.allowed = sc[k]["allowed"].ints();
        l.site_conditions.push_back(c);
      }
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

std::vector<Layer> layers_from_json(const Json& doc) { return layers_from(root(doc, "hamsim.layers")["layers"]); }

bool equal(const std::vector<Layer>& a, const std::vector<Layer>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &x = a[i], &y = b[i];
    if (x.name != y.name || !equal(x.tiles, y.tiles) || x.pair_conditions.size() != y.pair_conditions.size() ||
        x.site_conditions.size() != y.site_conditions.size())
      return false;
    for (std::size_t k = 0; k < x.pair_conditions.size(); ++k) {
      const auto &p = x.pair_conditions[k], &q = y.pair_conditions[k];
      if (p.horizontal != q.horizontal || p.a != q.a || p.b != q.b || p.layer != q.layer || p.first != q.first ||
          p.allowed != q.allowed)
        return false;
    }
    for (std::size_t k = 0; k < x.site_conditions.size(); ++k) {
      const auto &p = x.site_conditions[k], &q = y.site_conditions[k];
      if (p.tile != q.tile || p.layer != q.layer || p.allowed != q.allowed) return false;
    }
  }
  return true;
}

Json markers_to_json() {
  Json t = layers_to_json(marker_tilesets(MarkerKind::triangle)), s = layers_to_json(marker_tilesets(MarkerKind::square));
  return {{"format", "hamsim.markers"}, {"triangle", t["layers"]}, {"square", s["layers"]}};
}

std::vector<Layer> markers_from_json(const Json& doc, MarkerKind kind) {
  return layers_from(root(doc, "hamsim.markers")[kind == MarkerKind::triangle ? "triangle" : "square"]);
}

// ---- gate sequences ----
Json to_json(const GateSequence& seq) {
  Json steps = Json::array();
  for (std::size_t t = 0; t < seq.steps.size(); ++t) {
    const auto& g = seq.steps[t];
    Json j{{"t", t + 1}, {"gate", g.name}, {"qubits", g.qubits}};
    if (!seq.layout.empty()) {
      Json cells = Json::array();
      for (int q : g.qubits) cells.push_back({seq.layout[q].first, seq.layout[q].second});
      j["cells"] = cells;
    }
    if (g.name == "U") j["matrix"] = matrix_json(g.U);
    steps.push_back(j);
  }
  Json j{{"format", "hamsim.gates"}, {"qubits", seq.qubits}, {"steps", steps}};
  if (seq.psi_in.size()) j["psi_in"] = vec_json(seq.psi_in);
  if (!seq.layout.empty()) {
    Json l = Json::array();
    for (auto [x, y] : seq.layout) l.push_back({x, y});
    j["layout"] = l;
  }
  return j;
}

GateSequence sequence_from_json(const Json& doc) {
  At a = root(doc, "hamsim.gates");
  GateSequence seq;
  seq.qubits = a["qubits"].integer();
  At steps = a["steps"];
  for (std::size_t i = 0; i < steps.size(); ++i) {
    At s = steps[i];
    std::string name = s["gate"].str();
    auto qs = s["qubits"].ints();
    if (name == "U") {
      seq.steps.push_back({name, qs, matrix_from(s["matrix"])});
    } else {
      checked(s.path, [&] { seq.steps.push_back(make_gate(name, qs)); });
    }
  }
  if (a.has("psi_in")) {
    Mat m = matrix_from(a["psi_in"]);
    if (m.cols() != 1) fail("/psi_in", "state must be a column");
    seq.psi_in = m.col(0);
  }
  if (a.has("layout")) {
    At l = a["layout"];
    for (std::size_t i = 0; i < l.size(); ++i) {
      auto c = l[i].ints();
      if (c.size() != 2) fail(l[i].path, "cell needs (x, y)");
      seq.layout.push_back({c[0], c[1]});
    }
  }
  checked("", [&] { seq.validate(); });
  return seq;
}

bool equal(const GateSequence& a, const GateSequence& b) {
  if (a.qubits != b.qubits || a.layout != b.layout || a.steps.size() != b.steps.size()) return false;
  if (a.psi_in.size() != b.psi_in.size() || (a.psi_in.size() && a.psi_in != b.psi_in)) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    if (a.steps[i].name != b.steps[i].name || a.steps[i].qubits != b.steps[i].qubits || !same(a.steps[i].U, b.steps[i].U))
      return false;
  return true;
}

// ---- angle fields ----
Json to_json(const AngleField& f) {
  return {{"format", "hamsim.field"}, {"n", f.n},         {"delta2", f.delta2},
          {"eps", f.eps},             {"alpha", f.alpha}, {"beta", f.beta}};
}

AngleField field_from_json(const Json& doc) {
  At a = root(doc, "hamsim.field");
  AngleField f;
  f.n = a["n"].integer();
  if (a.has("delta2")) f.delta2 = a["delta2"].num();
  if (a.has("eps")) f.eps = a["eps"].num();
  for (auto [name, dst] : {std::pair{"alpha", &f.alpha}, {"beta", &f.beta}}) {
    At t = a[name];
    for (std::size_t i = 0; i < t.size(); ++i) dst->push_back(t[i].nums());
  }
  checked("", [&] { f.validate(); });
  return f;
}

bool equal(const AngleField& a, const AngleField& b) {
  return a.n == b.n && a.delta2 == b.delta2 && a.eps == b.eps && a.alpha == b.alpha && a.beta == b.beta;
}

// ---- route plans (emitted only) ----
Json to_json(const RoutePlan& r) {
  Json cr = Json::array();
  for (const auto& c : r.crossings) cr.push_back({{"a", c.a}, {"b", c.b}, {"at", c.at}});
  Json es = Json::array();
  for (auto [a, b] : r.edges) es.push_back({a, b});
  return {{"format", "hamsim.route"}, {"D", r.D},         {"assignment", r.assignment}, {"edges", es},
          {"paths", r.paths},         {"crossings", cr}, {"rounds", r.rounds}};
}

}  // namespace hamsim::io
