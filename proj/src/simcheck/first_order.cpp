#include "hamsim/simcheck.hpp"

namespace hamsim {

double first_order_required_delta(double h1_norm, double eps, double eta, double kappa) {
  if (!(eps > 0.0) || !(eta > 0.0)) throw Error(Error::Kind::structural, "eps and eta must be positive");
  return kappa * (h1_norm * h1_norm / eps + h1_norm / eta);
}

FirstOrderBuild build_first_order(const HamiltonianExpr& H0, const HamiltonianExpr& H1, double delta, double eps,
                                  double eta) {
  if (!(H0.system == H1.system)) throw Error(Error::Kind::structural, "H0 and H1 must share one site system");
  if (!(delta > 0.0)) throw Error(Error::Kind::structural, "delta must be positive");
  auto dim = H0.system.total_dim();
  LowSpace ls = low_space(H0, 0.5);
  if (ls.below.eigenvalues.size() == 0 || ls.below.eigenvalues.cwiseAbs().maxCoeff() > 1e-9)
    throw Error(Error::Kind::structural, "H0 ground energy is not 0");
  if (ls.next && *ls.next < 1.0 - 1e-9)
    throw Error(Error::Kind::structural, "H0 spectral gap " + std::to_string(*ls.next) + " is below 1");

  FirstOrderBuild out;
  out.H.system = H0.system;
  for (auto t : H0.terms) {
    t.coeff *= delta;
    out.H.terms.push_back(std::move(t));
  }
  for (const auto& t : H1.terms) out.H.terms.push_back(t);
  out.H.constant = delta * H0.constant + H1.constant;

  if (eps > 0.0 && eta > 0.0) {
    if (dim < kDenseSwitch) {
      double need = first_order_required_delta(op_norm(assemble(H1)), eps, eta);
      if (delta < need)
        out.warnings.push_back("delta " + std::to_string(delta) + " below the first-order requirement " +
                               std::to_string(need));
    } else {
      out.warnings.push_back("requirement check skipped: H1 norm not computed above the dense switch");
    }
  }
  return out;
}

}  // namespace hamsim
