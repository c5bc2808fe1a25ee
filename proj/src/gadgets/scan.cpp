#include <cmath>
#include <limits>

#include "hamsim/gadgets.hpp"

namespace hamsim {

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) return std::nullopt;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

ScanResult error_scan(const HamiltonianExpr& target, const ScanBuilder& builder, const std::vector<double>& deltas,
                      const SolverOptions& opt) {
  if (deltas.size() < 3) throw Error(Error::Kind::structural, "scan needs at least 3 delta values");
  for (double d : deltas)
    if (!(d > 0)) throw Error(Error::Kind::structural, "scan deltas must be positive");
  const double ratio = deltas[1] / deltas[0];
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (std::abs(deltas[i] / deltas[i - 1] - ratio) > 1e-9 * ratio || ratio <= 1.0)
      throw Error(Error::Kind::structural, "scan deltas must be increasing and geometrically spaced");
  const double inf = std::numeric_limits<double>::infinity();
  ScanResult out;
  std::vector<double> xs, ys;
  for (double d : deltas) {
    auto inst = builder(d);
    auto rep = verify_simulation(inst.sim, target, d / 2, inf, inf, inst.V, opt);
    out.rows.push_back({d, rep.eps_achieved, rep.eta_achieved});
    xs.push_back(d);
    ys.push_back(rep.eps_achieved);
  }
  out.exact = true;
  out.monotone = true;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] != 0.0) out.exact = false;
    if (i > 0 && ys[i] > ys[i - 1]) out.monotone = false;
  }
  if (!out.exact) out.slope = loglog_slope(xs, ys);
  return out;
}

}  // namespace hamsim
