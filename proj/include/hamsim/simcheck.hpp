#pragma once

#include <string>
#include <vector>

#include "hamsim/opcore.hpp"

namespace hamsim {

// V = (tensor of per-target-site factors) x (fixed states on ancilla sites)
struct IsometryFactor {
  std::string target;             // target site id
  std::vector<std::string> image;  // simulator site ids
  Mat V;                           // dim(image) x dim(target)
};

struct AncillaState {
  std::vector<std::string> sites;
  Vec state;  // normalized, dim = product of site dims
};

struct LocalIsometry {
  std::vector<IsometryFactor> factors;
  std::vector<AncillaState> ancillas;

  // identity embedding of every target site onto the site with the same id
  static LocalIsometry identity(const SiteSystem& target);
  void validate(const SiteSystem& target, const SiteSystem& sim) const;
  // dense dim(sim) x dim(target) matrix
  Mat matrix(const SiteSystem& target, const SiteSystem& sim) const;
};

inline constexpr double kReportFloor = 1e-10;  // achieved values below this are reported as 0

struct SimulationReport {
  double delta = 0.0;  // cut
  double eta_requested = 0.0, eps_requested = 0.0;
  double eta_achieved = 0.0, eps_achieved = 0.0;
  int low_dim = 0;
  int target_dim = 0;
  bool pass_rank = false, pass_eta = false, pass_eps = false;
  bool pass = false;
  std::optional<double> next_eigenvalue;
  RealVec sim_low;     // eigenvalues of H' below the cut
  RealVec target_eigs;  // eigenvalues of H
  std::string note;
};

struct IsometryWitness {
  Mat Vt;        // dim(sim) x dim(target)
  Mat U;         // low eigenvectors
  RealVec lam;   // low eigenvalues
  Mat W;         // polar factor, Vt = U W
  Mat C;         // U^dag V
  std::optional<double> next;
};

IsometryWitness low_energy_isometry(const HamiltonianExpr& sim, double cut, const Mat& V,
                                    const SolverOptions& opt = {});
IsometryWitness low_energy_isometry(const HamiltonianExpr& sim, double cut, const LocalIsometry& V,
                                    const SiteSystem& target, const SolverOptions& opt = {});

SimulationReport verify_simulation(const HamiltonianExpr& sim, const HamiltonianExpr& target, double cut,
                                   double eta, double eps, const LocalIsometry& V, const SolverOptions& opt = {});
// target given as a dense matrix on V's domain (used when the target is not an expression)
SimulationReport verify_simulation(const HamiltonianExpr& sim, const Mat& target, double cut, double eta, double eps,
                                   const Mat& V, const SolverOptions& opt = {});

// ---- first-order builder ----
inline constexpr double kFirstOrderKappa = 8.0;

double first_order_required_delta(double h1_norm, double eps, double eta, double kappa = kFirstOrderKappa);

struct FirstOrderBuild {
  HamiltonianExpr H;
  std::vector<std::string> warnings;
};
// eps/eta <= 0 skip the requirement check
FirstOrderBuild build_first_order(const HamiltonianExpr& H0, const HamiltonianExpr& H1, double delta,
                                  double eps = 0.0, double eta = 0.0);

// ---- synthetic ground-state oracle and the H_A + H_B assembly ----
struct CouplingGrid {
  int n = 0;
  std::vector<std::vector<double>> alpha, beta;  // [i][j], 0-based, i = column, j = row
  double delta2 = 1.0;
  int bits = 8;

  void validate() const;
};

// 5-dim site: flag (x) glag qubit pair plus an "out" level
inline constexpr int kSyntheticDim = 5;

struct SyntheticHA {
  HamiltonianExpr HA;
  Mat P1, P2, P3;
  std::vector<Vec> states;  // per A site, row-major over the W x H grid
  int W = 0, Hh = 0, n = 0;
};

SyntheticHA synthetic_HA(const CouplingGrid& grid, int W, int H);

std::string a_site(int i, int j);
std::string b_site(int i, int j);

struct HABBuild {
  HamiltonianExpr H;
  std::vector<std::string> warnings;
};
// eps/eta > 0 enable the delta1 bound check
HABBuild assemble_HAB(const HamiltonianExpr& HA, const Mat& P1, const Mat& P2, const Mat& P3, double delta1,
                      double delta2, int W, int H, int n, double eps = 0.0, double eta = 0.0);
double hab_delta1(double delta2, int W, int H, double eps, double eta);

// target on the n x n corner of B qubits
HamiltonianExpr corner_target(const CouplingGrid& grid);
// identity on corner B qubits, A ground state, |0> on B qubits outside the corner
LocalIsometry corner_isometry(const SyntheticHA& ha);

}  // namespace hamsim
