#include "hamsim/simcheck.hpp"

namespace hamsim {

namespace {

double floor_small(double x) { return x < kReportFloor ? 0.0 : x; }

double herm_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

SimulationReport verify_simulation(const HamiltonianExpr& sim, const Mat& target, double cut, double eta, double eps,
                                   const Mat& V, const SolverOptions& opt) {
  if (target.rows() != V.cols() || target.cols() != V.cols())
    throw Error(Error::Kind::structural, "target dimension does not match isometry domain");
  if (herm_defect(target) > 1e-10) throw Error(Error::Kind::structural, "target is not Hermitian");
  SimulationReport rep;
  rep.delta = cut;
  rep.eta_requested = eta;
  rep.eps_requested = eps;
  rep.target_dim = static_cast<int>(V.cols());
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(target, Eigen::EigenvaluesOnly);
    rep.target_eigs = es.eigenvalues();
  }
  IsometryWitness w = low_energy_isometry(sim, cut, V, opt);
  rep.low_dim = static_cast<int>(w.lam.size());
  rep.sim_low = w.lam;
  rep.next_eigenvalue = w.next;
  rep.pass_rank = true;

  Mat D = w.Vt - V;
  Mat DD = D.adjoint() * D;
  double eta2 = DD.size() ? herm_norm(DD) : 0.0;
  rep.eta_achieved = floor_small(std::sqrt(std::max(0.0, eta2)));

  Mat E = w.lam.cast<cplx>().asDiagonal().toDenseMatrix() - w.W * target * w.W.adjoint();
  rep.eps_achieved = floor_small(herm_norm(E));

  rep.pass_eta = rep.eta_achieved <= eta;
  rep.pass_eps = rep.eps_achieved <= eps;
  rep.pass = rep.pass_rank && rep.pass_eta && rep.pass_eps;
  if (!rep.pass_eta) rep.note = "witness failed: polar isometry exceeds eta (a closer isometry may exist)";
  return rep;
}

SimulationReport verify_simulation(const HamiltonianExpr& sim, const HamiltonianExpr& target, double cut, double eta,
                                   double eps, const LocalIsometry& V, const SolverOptions& opt) {
  Mat v = V.matrix(target.system, sim.system);
  Mat t = target.system.total_dim() < kDenseSwitch ? assemble(target) : Mat(assemble_sparse(target));
  return verify_simulation(sim, t, cut, eta, eps, v, opt);
}

}  // namespace hamsim
