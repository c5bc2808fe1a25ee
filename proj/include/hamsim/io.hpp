#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hamsim/clocklab.hpp"
#include "hamsim/gadgets.hpp"
#include "hamsim/geocompile.hpp"
#include "hamsim/tilelab.hpp"

namespace hamsim::io {

using Json = nlohmann::ordered_json;

const char* version();

// parse failures -> Error(parse) with "file:line:col" or a /json/pointer to the bad field
Json parse_text(const std::string& text, const std::string& name = "<input>");
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& doc);
std::string dump(const Json& doc);  // 2-space indent, trailing newline
std::string format_of(const Json& doc);

// ---- documents; every writer stamps "format" ----
Json to_json(const HamiltonianExpr& H);
HamiltonianExpr hamiltonian_from_json(const Json& j);

Json to_json(const EmbeddedGraph& G);
EmbeddedGraph graph_from_json(const Json& j);

Json to_json(const GadgetPlan& plan);
GadgetPlan plan_from_json(const Json& j);

Json to_json(const Tileset& ts);
Tileset tileset_from_json(const Json& j);

Json layers_to_json(const std::vector<Layer>& layers);
std::vector<Layer> layers_from_json(const Json& j);

// triangle and square marker layers together
Json markers_to_json();
std::vector<Layer> markers_from_json(const Json& j, MarkerKind kind);

Json to_json(const GateSequence& seq);
GateSequence sequence_from_json(const Json& j);

Json to_json(const AngleField& f);
AngleField field_from_json(const Json& j);

Json to_json(const RoutePlan& r);

// structural equality for round trips
bool equal(const HamiltonianExpr& a, const HamiltonianExpr& b);
bool equal(const GadgetPlan& a, const GadgetPlan& b);
bool equal(const Tileset& a, const Tileset& b);
bool equal(const std::vector<Layer>& a, const std::vector<Layer>& b);
bool equal(const GateSequence& a, const GateSequence& b);
bool equal(const AngleField& a, const AngleField& b);

// ---- reports ----
Json report_header(const std::string& command);
Json spectrum_report(const Spectrum& s);
Json simulation_report(const SimulationReport& r);
Json scan_report(const ScanResult& s);
Json ground_report(const Tileset& ts, const GroundResult& g);
Json decoded_report(const DecodedStack& d);
Json gap_report(const std::vector<GapRow>& rows);
Json synthesis_report(double theta, double delta, const SynthResult& s);
Json compile_report(const CompileResult& c);
Json ledger_report(const PlanResult& r);

}  // namespace hamsim::io
