// hamsim command-line front end.
// exit codes: 0 pass, 1 certified failure, 2 malformed input or structural error
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "hamsim/io.hpp"

using namespace hamsim;
using io::Json;

namespace {

struct Job {
  std::string command;
  std::string out;
  std::uint64_t seed = SolverOptions{}.seed;
  std::string solver = "auto";

  // inputs
  std::string input, sim, target, plan, lattice_file, tileset, field;
  std::string lattice = "square";
  std::vector<std::string> pairs;

  // numbers
  std::optional<double> cut;
  double eta = 0.1, eps = 0.1;
  double delta = 1e5, lambda = 1.0, mu = 0.0;
  std::vector<double> deltas{1e2, 1e3, 1e4, 1e5};
  std::optional<double> slope_min, slope_max;
  int k = 4;
  double tol = 1e-9;
  int L = 10, W = 4, H = 4, window = 5;
  std::string kind = "subdiv_pos", family = "heisenberg", split = "standard";
  std::vector<int> Ts{1, 2, 4, 8, 16};
  double theta = 0.5, synth_delta = 0.01;
  int max_length = 40;
  std::vector<int> cell{0, 0};
  bool mirrored = false, certify = false, exhaustive = false;
  double spacing = 1.0, delta_inner = 1e4;
  std::size_t certify_limit = 12;

  // extra outputs
  std::string markers_out, plan_out, sim_out, gates_out;

  SolverOptions options() const {
    SolverOptions o;
    o.seed = seed;
    if (solver == "dense") o.path = SolverPath::dense;
    else if (solver == "iterative") o.path = SolverPath::iterative;
    else if (solver != "auto") throw Error(Error::Kind::parse, "--solver: expected auto, dense or iterative");
    return o;
  }
};

struct Outcome {
  Json body = Json::object();
  bool pass = true;
};

GadgetApplication application(const Job& j) {
  GadgetApplication a;
  a.kind = parse_gadget_kind(j.kind);
  a.family = parse_family(j.family);
  a.split = parse_split(j.split);
  a.lambda = j.lambda;
  a.mu = j.mu;
  static const char* names[] = {"1", "2", "3", "4"};
  std::size_t n = a.kind == GadgetKind::fork ? 3 : a.kind == GadgetKind::crossing ? 4 : 2;
  for (std::size_t i = 0; i < n; ++i) a.sites.push_back(names[i]);
  return a;
}

Json application_json(const GadgetApplication& a) {
  GadgetPlan p;
  p.rounds = {{1.0, {a}}};
  return io::to_json(p)["rounds"][0]["apps"][0];
}

Json summary_of(const Json& doc) {
  const std::string fmt = io::format_of(doc);
  if (fmt == "hamsim.hamiltonian") {
    auto H = io::hamiltonian_from_json(doc);
    return {{"sites", H.system.size()}, {"terms", H.terms.size()}, {"dim", H.system.total_dim()},
            {"max_degree", max_degree(H)}};
  }
  if (fmt == "hamsim.graph") {
    auto G = io::graph_from_json(doc);
    return {{"D", G.D}, {"vertices", G.size()}, {"edges", G.edges.size()}, {"periodic", !G.basis.empty()}};
  }
  if (fmt == "hamsim.plan") {
    auto p = io::plan_from_json(doc);
    std::size_t apps = 0;
    for (const auto& r : p.rounds) apps += r.apps.size();
    return {{"depth", p.depth()}, {"applications", apps}};
  }
  if (fmt == "hamsim.tileset") return {{"tiles", io::tileset_from_json(doc).size()}};
  if (fmt == "hamsim.layers") return {{"layers", io::layers_from_json(doc).size()}};
  if (fmt == "hamsim.markers")
    return {{"triangle", io::markers_from_json(doc, MarkerKind::triangle).size()},
            {"square", io::markers_from_json(doc, MarkerKind::square).size()}};
  if (fmt == "hamsim.gates") {
    auto s = io::sequence_from_json(doc);
    return {{"qubits", s.qubits}, {"T", s.T()}};
  }
  if (fmt == "hamsim.field") return {{"n", io::field_from_json(doc).n}};
  throw Error(Error::Kind::parse, "/format: unknown document format '" + fmt + "'");
}

Outcome run_validate(const Job& j) {
  Json doc = io::read_file(j.input);
  Outcome o;
  o.body = {{"input", j.input}, {"format", io::format_of(doc)}, {"summary", summary_of(doc)}, {"valid", true}};
  return o;
}

Outcome run_diag(const Job& j) {
  auto H = io::hamiltonian_from_json(io::read_file(j.input));
  Outcome o;
  o.body = {{"input", j.input}, {"k", j.k}, {"spectrum", io::spectrum_report(low_spectrum(H, j.k, j.tol, j.options()))}};
  return o;
}

std::vector<std::array<std::string, 2>> parse_pairs(const std::vector<std::string>& raw) {
  std::vector<std::array<std::string, 2>> out;
  for (const auto& p : raw) {
    auto c = p.find(':');
    if (c == std::string::npos || c == 0 || c + 1 == p.size())
      throw Error(Error::Kind::parse, "--pairs: expected a:b, got '" + p + "'");
    out.push_back({p.substr(0, c), p.substr(c + 1)});
  }
  return out;
}

Outcome run_verify(const Job& j) {
  auto target = io::hamiltonian_from_json(io::read_file(j.target));
  Outcome o;
  o.body["target"] = j.target;
  SimulationReport rep;
  try {
    if (!j.plan.empty()) {
      auto plan = io::plan_from_json(io::read_file(j.plan));
      auto res = apply_plan(target, plan);
      o.body["plan"] = j.plan;
      o.body["ledger"] = io::ledger_report(res);
      if (!j.sim_out.empty()) io::write_file(j.sim_out, io::to_json(res.H));
      rep = certify_plan(target, res, plan, j.eta, j.eps, j.options());
    } else {
      if (j.sim.empty()) throw Error(Error::Kind::parse, "verify needs --sim or --plan");
      if (!j.cut) throw Error(Error::Kind::parse, "verify --sim needs --cut");
      auto sim = io::hamiltonian_from_json(io::read_file(j.sim));
      o.body["sim"] = j.sim;
      auto V = j.pairs.empty() ? LocalIsometry::identity(target.system) : mediator_isometry(target.system, parse_pairs(j.pairs));
      rep = verify_simulation(sim, target, *j.cut, j.eta, j.eps, V, j.options());
    }
  } catch (const Error& e) {
    if (e.kind() != Error::Kind::rank_mismatch) throw;
    o.body["simulation"] = {{"pass_rank", false}, {"pass", false}, {"reason", e.what()}};
    o.pass = false;
    return o;
  }
  o.body["simulation"] = io::simulation_report(rep);
  o.pass = rep.pass;
  return o;
}

Outcome run_gadget(const Job& j) {
  auto a = application(j);
  auto rep = certify_gadget(a, j.delta, j.eta, j.eps, j.options());
  Outcome o;
  o.body = {{"application", application_json(a)}, {"delta", j.delta}, {"simulation", io::simulation_report(rep)}};
  if (!j.plan_out.empty()) {
    GadgetPlan p;
    p.delta_base = j.delta;
    p.rounds = {{j.delta, {a}}};
    io::write_file(j.plan_out, io::to_json(p));
  }
  o.pass = rep.pass;
  return o;
}

Outcome run_scan(const Job& j) {
  auto a = application(j);
  SiteSystem logical;
  for (const auto& s : a.sites) logical.add({s, 2, {}});
  auto s = error_scan(gadget_target(logical, a), gadget_builder(a), j.deltas, j.options());
  Outcome o;
  o.body = {{"application", application_json(a)}, {"scan", io::scan_report(s)}};
  if (j.slope_min || j.slope_max) {
    bool in = s.slope && (!j.slope_min || *s.slope >= *j.slope_min) && (!j.slope_max || *s.slope <= *j.slope_max);
    o.body["slope_range"] = {j.slope_min ? Json(*j.slope_min) : Json(nullptr), j.slope_max ? Json(*j.slope_max) : Json(nullptr)};
    o.body["slope_in_range"] = in;
    o.pass = in;
  }
  return o;
}

Outcome run_tile_ground(const Job& j) {
  Tileset ts = j.tileset.empty() ? binary_counter_tileset(j.mirrored) : io::tileset_from_json(io::read_file(j.tileset));
  GroundResult g = j.exhaustive ? ground_exhaustive(ts, j.W, j.H) : ground_transfer(ts, j.W, j.H);
  Outcome o;
  o.body = {{"tileset", j.tileset.empty() ? Json(j.mirrored ? "counter-mirrored" : "counter") : Json(j.tileset)},
            {"W", j.W},
            {"H", j.H},
            {"solver", j.exhaustive ? "exhaustive" : "transfer"},
            {"ground", io::ground_report(ts, g)}};
  for (const auto& m : g.minimizers)
    if (tiling_energy_half(ts, m) != g.energy_half) o.pass = false;
  o.body["energy_consistent"] = o.pass;
  return o;
}

Outcome run_tile_stack(const Job& j) {
  TileStack st = ground_stack(j.W, j.H);
  DecodedStack d = decode_layers(st);
  Json layers = Json::array();
  for (std::size_t i = 0; i < st.layers.size(); ++i)
    layers.push_back({{"name", st.layers[i].name},
                      {"energy", from_half(layer_energy_half(st, i))},
                      {"count", st.counts[i]},
                      {"text", dump_grid(st.layers[i].tiles, st.configs[i])}});
  Outcome o;
  o.body = {{"W", j.W}, {"H", j.H}, {"layers", layers}, {"energy", from_half(stack_energy_half(st))},
            {"decoded", io::decoded_report(d)}};
  o.pass = d.valid;
  return o;
}

Outcome run_tile_markers(const Job& j) {
  Json doc = io::markers_to_json();
  if (!j.markers_out.empty()) io::write_file(j.markers_out, doc);
  Outcome o;
  o.body = {{"markers", doc}};
  return o;
}

Outcome run_clock_gap(const Job& j) {
  Outcome o;
  o.body = {{"gap", io::gap_report(gap_scan(j.Ts))}};
  return o;
}

Outcome run_clock_synth(const Job& j) {
  auto s = synthesize_rotation(j.theta, j.synth_delta, j.max_length);
  Outcome o;
  o.body = {{"synthesis", io::synthesis_report(j.theta, j.synth_delta, s)}};
  o.pass = s.reached;
  return o;
}

FieldProgram load_program(const Job& j, AngleField& f) {
  f = io::field_from_json(io::read_file(j.field));
  FieldProgram fp = field_program(f, snake_path(2 * f.n - 1));
  if (!j.gates_out.empty()) io::write_file(j.gates_out, io::to_json(fp.seq));
  return fp;
}

Outcome run_clock_field(const Job& j) {
  AngleField f;
  FieldProgram fp = load_program(j, f);
  Json cells = Json::array();
  Outcome o;
  for (int y = 0; y < f.n; ++y)
    for (int x = 0; x < f.n; ++x)
      for (bool beta : {false, true}) {
        int q = field_qubit(f.n, x, y, beta);
        bool ok = fp.word_error[q] <= f.delta();
        o.pass = o.pass && ok;
        cells.push_back({{"x", x}, {"y", y}, {"angle", beta ? "beta" : "alpha"}, {"qubit", q},
                         {"theta", fp.targets[q]}, {"error", fp.word_error[q]}, {"ok", ok}});
      }
  o.body = {{"field", j.field}, {"n", f.n}, {"delta", f.delta()}, {"T", fp.seq.T()}, {"cells", cells}};
  return o;
}

Outcome run_clock_blink(const Job& j) {
  AngleField f;
  FieldProgram fp = load_program(j, f);
  if (j.cell.size() != 2) throw Error(Error::Kind::parse, "--cell: expected x,y");
  const int x = j.cell[0], y = j.cell[1];
  if (x < 0 || y < 0 || x >= f.n || y >= f.n) throw Error(Error::Kind::structural, "flag cell outside the layout");
  const int flag = field_qubit(f.n, x, y, false);
  BlinkProgram bp = blink_schedule(fp.seq, flag);
  // flag population at the end of the computation
  Vec st = replay(fp.seq, fp.seq.input()).back();
  const Eigen::Index m = Eigen::Index{1} << (fp.seq.qubits - 1 - flag);
  double pop = 0.0;
  for (Eigen::Index i = 0; i < st.size(); ++i)
    if (i & m) pop += std::norm(st(i));
  const double e = blink_expectation(bp);
  Outcome o;
  o.body = {{"field", j.field},       {"cell", {x, y}},         {"T", bp.seq.T()},
            {"on_steps", bp.on_steps}, {"alpha_realized", pop}, {"alpha_requested", f.alpha[x][y] / f.delta2},
            {"expectation", e},        {"difference", std::abs(e - pop / 2)}};
  o.pass = std::abs(e - pop / 2) <= 1e-8;
  return o;
}

Outcome run_compile(const Job& j) {
  auto target = io::hamiltonian_from_json(io::read_file(j.target));
  EmbeddedGraph G = j.lattice_file.empty() ? lattice_window(j.lattice, j.L) : io::graph_from_json(io::read_file(j.lattice_file));
  CompileParams p;
  p.family = parse_family(j.family);
  p.spacing = j.spacing;
  p.delta_inner = j.delta_inner;
  p.window = j.window;
  p.certify = j.certify;
  p.eta = j.eta;
  p.eps = j.eps;
  p.certify_limit = j.certify_limit;
  CompileResult c = compile(target, G, p);
  if (!j.plan_out.empty()) io::write_file(j.plan_out, io::to_json(c.plan));
  if (!j.sim_out.empty()) io::write_file(j.sim_out, io::to_json(c.lattice_H));
  Outcome o;
  o.body = {{"target", j.target}, {"lattice", j.lattice_file.empty() ? Json(j.lattice) : Json(j.lattice_file)}};
  if (j.lattice_file.empty()) o.body["L"] = j.L;
  o.body["compile"] = io::compile_report(c);
  o.pass = !c.certificate || c.certificate->pass;
  return o;
}

std::string kind_name(Error::Kind k) {
  switch (k) {
    case Error::Kind::structural: return "structural";
    case Error::Kind::rank_mismatch: return "rank_mismatch";
    case Error::Kind::ambiguous_cut: return "ambiguous_cut";
    case Error::Kind::not_converged: return "not_converged";
    case Error::Kind::too_large: return "too_large";
    case Error::Kind::parse: return "parse";
  }
  return "unknown";
}

void emit(const Job& j, const Json& report) {
  if (j.out.empty()) {
    std::cout << io::dump(report);
    return;
  }
  io::write_file(j.out, report);
}

}  // namespace

int main(int argc, char** argv) {
  Job j;
  CLI::App app{"hamsim: compile and certify Hamiltonian simulations"};
  app.set_version_flag("--version", std::string(io::version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--out", j.out, "report file (default stdout)");
  app.add_option("--seed", j.seed, "eigensolver seed");
  app.add_option("--solver", j.solver, "auto | dense | iterative");

  std::map<std::string, std::function<Outcome(const Job&)>> runners;
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& path, const std::string& help,
                 std::function<Outcome(const Job&)> f) {
    auto* s = parent->add_subcommand(name, help);
    s->callback([&j, path] { j.command = path; });
    runners[path] = std::move(f);
    return s;
  };
  auto gadget_flags = [&](CLI::App* s) {
    s->add_option("--kind", j.kind, "subdiv_pos | subdiv_neg | fork | crossing");
    s->add_option("--family", j.family, "heisenberg | xy");
    s->add_option("--split", j.split, "standard | balanced");
    s->add_option("--lambda", j.lambda);
    s->add_option("--mu", j.mu);
  };

  auto* v = sub(&app, "validate", "validate", "parse and validate a document", run_validate);
  v->add_option("input", j.input)->required();

  auto* d = sub(&app, "diag", "diag", "low spectrum of a Hamiltonian document", run_diag);
  d->add_option("input", j.input)->required();
  d->add_option("-k", j.k, "eigenpairs");
  d->add_option("--tol", j.tol);

  auto* ve = sub(&app, "verify", "verify", "check a simulation against its target", run_verify);
  ve->add_option("--target", j.target)->required();
  ve->add_option("--sim", j.sim);
  ve->add_option("--plan", j.plan, "gadget plan applied to the target");
  ve->add_option("--cut", j.cut);
  ve->add_option("--eta", j.eta);
  ve->add_option("--eps", j.eps);
  ve->add_option("--pairs", j.pairs, "mediator pairs a:b")->delimiter(',');
  ve->add_option("--sim-out", j.sim_out);

  auto* g = sub(&app, "gadget", "gadget", "certify one gadget on a bare host", run_gadget);
  gadget_flags(g);
  g->add_option("--delta", j.delta);
  g->add_option("--eta", j.eta);
  g->add_option("--eps", j.eps);
  g->add_option("--plan-out", j.plan_out);

  auto* sc = sub(&app, "scan", "scan", "error scan over a geometric delta sweep", run_scan);
  gadget_flags(sc);
  sc->add_option("--deltas", j.deltas)->delimiter(',');
  sc->add_option("--slope-min", j.slope_min);
  sc->add_option("--slope-max", j.slope_max);

  auto* t = app.add_subcommand("tile", "tiling ground states and marker layers");
  t->require_subcommand(1);
  auto* tg = sub(t, "ground", "tile ground", "ground states of a tileset", run_tile_ground);
  tg->add_option("--tileset", j.tileset, "tileset document (default: binary counter)");
  tg->add_flag("--mirrored", j.mirrored);
  tg->add_flag("--exhaustive", j.exhaustive);
  tg->add_option("--W", j.W);
  tg->add_option("--H", j.H);
  auto* ts = sub(t, "stack", "tile stack", "counter plus marker layers, decoded", run_tile_stack);
  ts->add_option("--W", j.W);
  ts->add_option("--H", j.H);
  auto* tm = sub(t, "markers", "tile markers", "emit the marker layer design", run_tile_markers);
  tm->add_option("--markers-out", j.markers_out);

  auto* c = app.add_subcommand("clock", "clock gaps, synthesis, field programs");
  c->require_subcommand(1);
  auto* cg = sub(c, "gap", "clock gap", "clock gap scan", run_clock_gap);
  cg->add_option("--T", j.Ts)->delimiter(',');
  auto* cs = sub(c, "synth", "clock synth", "single-qubit rotation synthesis", run_clock_synth);
  cs->add_option("--theta", j.theta);
  cs->add_option("--delta", j.synth_delta);
  cs->add_option("--max-length", j.max_length);
  auto* cf = sub(c, "field", "clock field", "gate program writing an angle field", run_clock_field);
  cf->add_option("--field", j.field)->required();
  cf->add_option("--gates-out", j.gates_out);
  auto* cb = sub(c, "blink", "clock blink", "blink expectation at a flag cell", run_clock_blink);
  cb->add_option("--field", j.field)->required();
  cb->add_option("--cell", j.cell, "x,y")->delimiter(',');
  cb->add_option("--gates-out", j.gates_out);

  auto* co = sub(&app, "compile", "compile", "compile a target onto a periodic lattice", run_compile);
  co->add_option("--target", j.target)->required();
  co->add_option("--lattice", j.lattice, "square | hexagonal | square_subdivided | cubic");
  co->add_option("--L", j.L, "window cells per side");
  co->add_option("--lattice-file", j.lattice_file);
  co->add_option("--family", j.family);
  co->add_option("--spacing", j.spacing);
  co->add_option("--delta-inner", j.delta_inner);
  co->add_option("--window", j.window);
  co->add_flag("--certify", j.certify);
  co->add_option("--eta", j.eta);
  co->add_option("--eps", j.eps);
  co->add_option("--certify-limit", j.certify_limit);
  co->add_option("--plan-out", j.plan_out);
  co->add_option("--sim-out", j.sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Json report = io::report_header(j.command);
  int code = 0;
  try {
    Outcome o = runners.at(j.command)(j);
    for (auto& [k, val] : o.body.items()) report[k] = val;
    report["pass"] = o.pass;
    code = o.pass ? 0 : 1;
  } catch (const Error& e) {
    report["pass"] = false;
    report["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}};
    std::cerr << "hamsim " << j.command << ": " << e.what() << "\n";
    code = e.kind() == Error::Kind::rank_mismatch ? 1 : 2;
  }
  try {
    emit(j, report);
  } catch (const Error& e) {
    std::cerr << "hamsim: " << e.what() << "\n";
    return 2;
  }
  return code;
}
