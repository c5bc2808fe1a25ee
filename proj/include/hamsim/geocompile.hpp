#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hamsim/gadgets.hpp"

namespace hamsim {

using Point = std::vector<double>;
using GridPoint = std::vector<int>;

// ---- embedded graphs ----
class EmbeddedGraph {
 public:
  int D = 2;
  std::vector<std::string> ids;
  std::vector<Point> coords;
  std::vector<std::pair<int, int>> edges;  // first < second
  std::vector<Point> basis;                // translation vectors v_i, empty if none

  std::size_t size() const { return ids.size(); }
  int add_vertex(const std::string& id, Point x);
  void add_edge(int a, int b);  // duplicates ignored
  int index_of(const std::string& id) const;  // -1 if absent
  bool has_edge(int a, int b) const;
  std::vector<std::vector<int>> adjacency() const;
  void validate() const;

  bool operator==(const EmbeddedGraph& o) const {
    return D == o.D && ids == o.ids && coords == o.coords && edges == o.edges && basis == o.basis;
  }

 private:
  std::map<std::string, int> index_;
  std::set<std::pair<int, int>> edge_set_;
};

double distance(const Point& a, const Point& b);

// cells k in [0, L)^D of a named periodic lattice: square, hexagonal, square_subdivided, cubic
EmbeddedGraph lattice_window(const std::string& name, int L);
const std::vector<std::string>& lattice_names();

// vertices = sites, edges = 2-local supports; every site needs D coordinates
EmbeddedGraph interaction_graph(const HamiltonianExpr& H, const std::map<std::string, Point>& coords, int D);
EmbeddedGraph interaction_graph(const HamiltonianExpr& H, int D);
std::map<std::string, Point> site_coords(const HamiltonianExpr& H);

// ---- locality ----
struct LocalityParams {
  double c = 4.0;  // vertices per closed unit ball
  double C = 1.0;  // edge length
  void validate() const;
};

struct LocalityViolation {
  std::string kind;  // "ball" or "edge"
  std::vector<std::string> witness;
  double value = 0.0;
};

struct LocalityReport {
  bool pass = true;
  int max_ball = 0;
  double max_edge = 0.0;
  std::vector<LocalityViolation> violations;
};

LocalityReport check_locality(const EmbeddedGraph& G, const LocalityParams& p);

// older sparsity notion, diagnostics only; overlaps counted in the (x, y) projection
struct SparsityReport {
  int max_degree = 0;
  int max_overlaps = 0;
  double max_length = 0.0;
};
SparsityReport spatial_sparsity(const EmbeddedGraph& G);

// ---- degree reduction ----
int max_degree(const HamiltonianExpr& H);

struct DegreeReduction {
  GadgetPlan plan;
  HamiltonianExpr H;
  std::map<std::string, Point> coords;  // every site of H when the input carries coordinates
  int degree_in = 0, degree_out = 0;
  int subdivisions = 0, forks = 0;
};

// subdivide every edge, then fork rounds pairing the edges of every vertex above max_deg
DegreeReduction reduce_degree(const HamiltonianExpr& H, Family family, int max_deg = 3, double delta_inner = 1e4);

// next heavier round: exponent times 3/2, rounded to a power of ten
double next_outer_delta(double delta);
// count rounds from delta_inner outwards, listed outermost first
std::vector<double> outward_schedule(double delta_inner, int count);

// ---- snapping and routing ----
struct SnapResult {
  double spacing = 0.0;  // final
  int halvings = 0;
  std::vector<GridPoint> grid;  // per vertex, in units of spacing
  double max_displacement = 0.0;
};

SnapResult snap_to_grid(const EmbeddedGraph& G, double spacing);
Point grid_position(const GridPoint& g, double spacing);

struct Crossing {
  int a = 0, b = 0;  // edge indices
  GridPoint at;
};

struct RoutePlan {
  int D = 2;
  std::vector<GridPoint> assignment;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<GridPoint>> paths;  // per edge, from its first vertex to its second
  std::vector<Crossing> crossings;
  int rounds = 0;

  void validate() const;
};

struct RouteOptions {
  int retries = 8;
  int margin = 1;
};

// longest admissible path for endpoints l1 apart
int route_length_bound(int l1);
RoutePlan route_paths(const std::vector<GridPoint>& assignment, const std::vector<std::pair<int, int>>& edges,
                      const RouteOptions& opt = {});

// ---- fundamental domains ----
struct LatticeSite {
  int cls = 0;
  GridPoint cell;
  auto operator<=>(const LatticeSite&) const = default;
};

struct Bond {
  int a = 0, b = 0;
  GridPoint offset;  // a in cell k to b in cell k + offset
};

// translation classes of a periodic window
struct QuotientGraph {
  int D = 2;
  std::vector<Point> basis;
  std::vector<Point> offsets;  // class positions inside the cell
  std::vector<Bond> bonds;
  std::map<LatticeSite, int> vertex;  // window vertex of each (class, cell)
  GridPoint lo, hi;                   // cell range of the window

  std::vector<std::pair<int, GridPoint>> neighbours(int cls) const;  // (class, offset)
  Point position(const LatticeSite& s) const;
};

QuotientGraph quotient_graph(const EmbeddedGraph& G);

struct FundamentalDomain {
  int D = 2;
  std::vector<LatticeSite> T;     // cell 0 translate
  std::vector<GridPoint> w;       // in units of the v_i
  std::vector<Point> w_vec;
  // 2i: vertex of T with an edge to T + w_i; 2i+1: its partner, the vertex of T with that edge to T - w_i
  std::vector<int> ports;
  int y = 0;                      // central vertex for the first three directions
  std::vector<int> s;             // self-intersection offsets per stage

  LatticeSite translate(int t, const GridPoint& a) const;  // T[t] + sum a_i w_i
};

FundamentalDomain extract_domain(const EmbeddedGraph& G, int window = 5);

struct MinorCheck {
  bool pass = false;
  int side = 0;
  std::string reason;
};
// contracting T(a), a in [0, side)^D, leaves the grid graph as a subgraph
MinorCheck verify_minor(const EmbeddedGraph& G, const FundamentalDomain& dom, int side);

struct CentralVertex {
  int y = -1;
  std::vector<std::vector<int>> paths;  // y to each port, internally disjoint
};
CentralVertex central_vertex(const std::vector<std::vector<int>>& adj, const std::vector<int>& ports);
bool paths_disjoint(const CentralVertex& cv);

// ---- pipeline ----
struct CompileParams {
  Family family = Family::heisenberg;
  LocalityParams locality;
  double spacing = 1.0;
  double delta_inner = 1e4;
  int window = 5;
  int max_halvings = 6;
  RouteOptions route;
  bool certify = false;
  double eta = 0.1, eps = 0.1;
  std::size_t certify_limit = 12;  // qubits
};

struct StageRecord {
  std::string stage;
  std::string detail;
  int max_ball = 0;
  double max_edge = 0.0;
};

struct CompileResult {
  GadgetPlan plan;
  PlanResult result;  // result.H is the simulator
  SnapResult snap;
  RoutePlan route;
  FundamentalDomain domain;
  std::vector<std::string> route_sites;           // vertex order of the route plan
  std::map<std::string, std::string> placement;   // simulator site -> lattice vertex id
  std::vector<std::vector<std::string>> chains;   // lattice vertex ids along each routed edge
  HamiltonianExpr lattice_H;                      // simulator relabelled onto lattice vertices
  std::vector<StageRecord> stages;
  std::optional<SimulationReport> certificate;
};

CompileResult compile(const HamiltonianExpr& target, const EmbeddedGraph& lattice, const CompileParams& p = {});

}  // namespace hamsim
