// Report documents. Every report starts with the same header.
#include <cmath>

#include "hamsim/io.hpp"

namespace hamsim::io {

namespace {

Json real_list(const RealVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json grid_rows(const TileConfig& cfg) {
  Json rows = Json::array();
  for (int r = 0; r < cfg.H; ++r) {
    Json row = Json::array();
    for (int c = 0; c < cfg.W; ++c) row.push_back(cfg.at(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json cells(const std::vector<std::pair<int, int>>& cs) {
  Json out = Json::array();
  for (auto [x, y] : cs) out.push_back({x, y});
  return out;
}

}  // namespace

Json report_header(const std::string& command) {
  return {{"tool", "hamsim"}, {"version", version()}, {"command", command}};
}

Json spectrum_report(const Spectrum& s) {
  return {{"method", s.method}, {"eigenvalues", real_list(s.eigenvalues)}, {"max_residual", s.max_residual}};
}

Json simulation_report(const SimulationReport& r) {
  Json table = Json::array();
  Eigen::Index n = std::max(r.sim_low.size(), r.target_eigs.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    Json row{{"k", i}};
    row["simulator"] = i < r.sim_low.size() ? Json(r.sim_low(i)) : Json(nullptr);
    row["target"] = i < r.target_eigs.size() ? Json(r.target_eigs(i)) : Json(nullptr);
    table.push_back(row);
  }
  Json j{{"cut", r.delta},
         {"low_dim", r.low_dim},
         {"target_dim", r.target_dim},
         {"next_eigenvalue", opt(r.next_eigenvalue)},
         {"eta", {{"requested", r.eta_requested}, {"achieved", r.eta_achieved}}},
         {"eps", {{"requested", r.eps_requested}, {"achieved", r.eps_achieved}}},
         {"eigenvalues", table},
         {"pass_rank", r.pass_rank},
         {"pass_eta", r.pass_eta},
         {"pass_eps", r.pass_eps},
         {"pass", r.pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json scan_report(const ScanResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) rows.push_back({{"delta", r.delta}, {"eps", r.eps}, {"eta", r.eta}});
  return {{"rows", rows}, {"slope", opt(s.slope)}, {"exact", s.exact}, {"monotone", s.monotone}};
}

Json ground_report(const Tileset& ts, const GroundResult& g) {
  Json mins = Json::array();
  for (const auto& m : g.minimizers) mins.push_back({{"W", m.W}, {"H", m.H}, {"grid", grid_rows(m)}, {"text", dump_grid(ts, m)}});
  return {{"energy", g.energy},
          {"count", g.count},
          {"count_saturated", g.count_saturated},
          {"minimizers", mins}};
}

Json decoded_report(const DecodedStack& d) {
  Json j{{"lattice", {{"W", d.lattice_W}, {"H", d.lattice_H}}},
         {"height", {{"bits", d.H_bits}, {"value", d.H_value}}},
         {"width", {{"bits", d.W_bits}, {"value", d.W_value}}}};
  j["n"] = d.n ? Json(*d.n) : Json(nullptr);
  j["b"] = d.b ? Json(*d.b) : Json(nullptr);
  j["triangle"] = cells(d.triangle);
  j["square"] = cells(d.square);
  j["valid"] = d.valid;
  j["issues"] = d.issues;
  return j;
}

Json gap_report(const std::vector<GapRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"T", r.T}, {"gap", r.gap}, {"scaled", r.scaled}, {"closed_form", r.closed_form}});
  return {{"rows", out}};
}

Json synthesis_report(double theta, double delta, const SynthResult& s) {
  return {{"theta", theta},       {"delta", delta},       {"word", s.word},
          {"length", s.word.size()}, {"distance", s.distance}, {"reached", s.reached},
          {"explored", s.explored}};
}

Json ledger_report(const PlanResult& r) {
  Json out = Json::array();
  for (const auto& e : r.ledger) {
    Json chain = Json::array();
    for (const auto& c : e.chain)
      chain.push_back({{"round", c.round}, {"app", c.app}, {"kind", to_string(c.kind)}, {"mediators", c.mediators}});
    out.push_back({{"support", e.support}, {"kind", e.kind}, {"coeff", e.coeff}, {"chain", chain}});
  }
  return out;
}

Json compile_report(const CompileResult& c) {
  Json stages = Json::array();
  for (const auto& s : c.stages)
    stages.push_back({{"stage", s.stage}, {"detail", s.detail}, {"max_ball", s.max_ball}, {"max_edge", s.max_edge}});
  Json placement = Json::object();
  for (const auto& [k, v] : c.placement) placement[k] = v;
  Json dom{{"D", c.domain.D}, {"w", c.domain.w}, {"ports", c.domain.ports}, {"y", c.domain.y}};
  Json T = Json::array();
  for (const auto& t : c.domain.T) T.push_back({{"class", t.cls}, {"cell", t.cell}});
  dom["T"] = T;
  Json route = to_json(c.route);
  route.erase("format");
  route["sites"] = c.route_sites;
  Json j{{"depth", c.plan.depth()},
         {"plan", to_json(c.plan)},
         {"domain", dom},
         {"route", route},
         {"placement", placement},
         {"chains", c.chains},
         {"stages", stages},
         {"ledger", ledger_report(c.result)},
         {"simulator", to_json(c.lattice_H)}};
  j["certificate"] = c.certificate ? simulation_report(*c.certificate) : Json(nullptr);
  return j;
}

}  // namespace hamsim::io
