#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hamsim/opcore.hpp"
#include "hamsim/simcheck.hpp"

namespace hamsim {

enum class Family { heisenberg, xy };
enum class GadgetKind { subdiv_pos, subdiv_neg, fork, crossing };
// standard: couplings (1, lambda); balanced: sqrt|lambda| on both legs (subdivisions only)
enum class Split { standard, balanced };

std::string to_string(Family f);
std::string to_string(GadgetKind k);
std::string to_string(Split s);
Family parse_family(const std::string& s);
GadgetKind parse_gadget_kind(const std::string& s);
Split parse_split(const std::string& s);

struct FamilyConstants {
  double shift;  // -(ground energy of h)
  double gap;    // h spectral gap above its ground state
  double kappa;  // coupling normalization sqrt(gap / 2)
};
FamilyConstants family_constants(Family f);
// two-qubit ground state of h (the singlet for both families)
Vec mediator_ground_state();

struct GadgetApplication {
  GadgetKind kind = GadgetKind::subdiv_pos;
  // subdivisions (1,2); fork (1,2,3); crossing (1,2,3,4) realizing pairs (1,4) and (2,3)
  std::vector<std::string> sites;
  double lambda = 1.0;  // NaN: take the coefficient of the host term being compiled (subdivisions)
  double mu = 0.0;
  std::vector<std::string> mediators;  // empty: allocate m0, m1, ...
  Family family = Family::heisenberg;
  Split split = Split::standard;
};

struct GadgetResult {
  HamiltonianExpr H;
  std::array<std::string, 2> mediators;
  std::vector<std::size_t> removed;  // indices (in the input) of compiled target terms
  double lambda = 0.0;               // resolved lambda
};

GadgetResult apply_gadget(const HamiltonianExpr& H, const GadgetApplication& app, double delta);

HamiltonianExpr subdivide(const HamiltonianExpr& H, const std::string& s1, const std::string& s2, double lambda,
                          int sign, double delta, Family family = Family::heisenberg, Split split = Split::standard);
HamiltonianExpr fork(const HamiltonianExpr& H, const std::string& s1, const std::string& s2, const std::string& s3,
                     double lambda, double mu, double delta, Family family = Family::heisenberg);
HamiltonianExpr crossing(const HamiltonianExpr& H, const std::string& s1, const std::string& s2,
                         const std::string& s3, const std::string& s4, double lambda, double mu, double delta,
                         Family family = Family::heisenberg);

// interaction the application claims to realize, on the host's logical sites
HamiltonianExpr gadget_target(const SiteSystem& logical, const GadgetApplication& app);
// identity on logical sites, mediator ground state on every pair
LocalIsometry mediator_isometry(const SiteSystem& logical, const std::vector<std::array<std::string, 2>>& pairs);

// single gadget on a bare host holding only its logical sites; cut delta/2
SimulationReport certify_gadget(const GadgetApplication& app, double delta, double eta, double eps,
                                const SolverOptions& opt = {});

// ---- plans ----
struct PlanRound {
  double delta = 0.0;
  std::vector<GadgetApplication> apps;
};

// rounds listed outermost first: round 0 carries the heaviest delta
struct GadgetPlan {
  double delta_base = 0.0;
  std::vector<PlanRound> rounds;

  // delta_r = base^((2/3)^r) rounded to a power of ten, r = 0..count-1
  static std::vector<double> schedule(double base, int count);
  void validate() const;
  std::size_t depth() const { return rounds.size(); }
};

struct ChainLink {
  int round = 0;
  int app = 0;
  GadgetKind kind = GadgetKind::subdiv_pos;
  std::array<std::string, 2> mediators;
};

struct LedgerEntry {
  std::vector<std::string> support;
  std::string kind;
  double coeff = 0.0;
  std::vector<ChainLink> chain;
};

struct PlanResult {
  HamiltonianExpr H;
  std::vector<LedgerEntry> ledger;
  std::vector<std::array<std::string, 2>> mediator_pairs;
  std::vector<GadgetApplication> resolved;  // applications in execution order with lambda and mediators filled
};

// applies the innermost (lightest) round first, so heavier rounds act on the output of lighter ones
PlanResult apply_plan(const HamiltonianExpr& H, const GadgetPlan& plan);
// cut at half the lightest round's delta
SimulationReport certify_plan(const HamiltonianExpr& target, const PlanResult& result, const GadgetPlan& plan,
                              double eta, double eps, const SolverOptions& opt = {});

// ---- scans ----
struct ScanRow {
  double delta = 0.0;
  double eps = 0.0;
  double eta = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<double> slope;  // least squares on log eps vs log delta
  bool exact = false;           // every eps is 0
  bool monotone = false;        // eps nonincreasing
};

struct SimInstance {
  HamiltonianExpr sim;
  LocalIsometry V;
};
using ScanBuilder = std::function<SimInstance(double delta)>;

ScanResult error_scan(const HamiltonianExpr& target, const ScanBuilder& builder, const std::vector<double>& deltas,
                      const SolverOptions& opt = {});
ScanBuilder gadget_builder(const GadgetApplication& app);
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hamsim
