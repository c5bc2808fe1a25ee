#include <cmath>

#include "hamsim/simcheck.hpp"

namespace hamsim {

std::string a_site(int i, int j) { return "a" + std::to_string(i) + "_" + std::to_string(j); }
std::string b_site(int i, int j) { return "b" + std::to_string(i) + "_" + std::to_string(j); }

void CouplingGrid::validate() const {
  if (n < 1) throw Error(Error::Kind::structural, "coupling grid needs n >= 1");
  if (!(delta2 > 0.0)) throw Error(Error::Kind::structural, "delta2 must be positive");
  auto check = [&](const std::vector<std::vector<double>>& g, const char* name) {
    if (static_cast<int>(g.size()) != n) throw Error(Error::Kind::structural, std::string(name) + " must be n x n");
    for (const auto& col : g) {
      if (static_cast<int>(col.size()) != n) throw Error(Error::Kind::structural, std::string(name) + " must be n x n");
      for (double v : col) {
        if (!(v >= 0.0 && v <= delta2))
          throw Error(Error::Kind::structural, std::string(name) + " coupling outside [0, delta2]");
        if (bits >= 0) {
          double scaled = v / delta2 * std::ldexp(1.0, bits);
          if (std::abs(scaled - std::round(scaled)) > 1e-9)
            throw Error(Error::Kind::structural,
                        std::string(name) + " coupling not representable in " + std::to_string(bits) + " bits");
        }
      }
    }
  };
  check(alpha, "alpha");
  check(beta, "beta");
}

SyntheticHA synthetic_HA(const CouplingGrid& grid, int W, int H) {
  grid.validate();
  if (grid.n > W || grid.n > H) throw Error(Error::Kind::structural, "n must not exceed W and H");
  SyntheticHA out;
  out.W = W;
  out.Hh = H;
  out.n = grid.n;
  // basis: |flag glag> at 2f+g, out level at 4
  out.P1 = Mat::Zero(kSyntheticDim, kSyntheticDim);
  out.P2 = Mat::Zero(kSyntheticDim, kSyntheticDim);
  out.P3 = Mat::Zero(kSyntheticDim, kSyntheticDim);
  out.P1(2, 2) = out.P1(3, 3) = 1.0;
  out.P2(1, 1) = out.P2(3, 3) = 1.0;
  out.P3(4, 4) = 1.0;
  for (int j = 1; j <= H; ++j)
    for (int i = 1; i <= W; ++i) out.HA.system.add({a_site(i, j), kSyntheticDim, {double(i), double(j)}});
  for (int j = 1; j <= H; ++j)
    for (int i = 1; i <= W; ++i) {
      Vec phi = Vec::Zero(kSyntheticDim);
      if (i <= grid.n && j <= grid.n) {
        double a = std::asin(std::sqrt(grid.alpha[i - 1][j - 1] / grid.delta2));
        double b = std::asin(std::sqrt(grid.beta[i - 1][j - 1] / grid.delta2));
        phi(0) = std::cos(a) * std::cos(b);
        phi(1) = std::cos(a) * std::sin(b);
        phi(2) = std::sin(a) * std::cos(b);
        phi(3) = std::sin(a) * std::sin(b);
      } else {
        phi(4) = 1.0;
      }
      Mat term = Mat::Identity(kSyntheticDim, kSyntheticDim) - phi * phi.adjoint();
      out.HA.add_term({{a_site(i, j)}, term, 1.0, ""});
      out.states.push_back(phi);
    }
  return out;
}

double hab_delta1(double delta2, int W, int H, double eps, double eta) {
  double wh = double(W) * H;
  return delta2 * delta2 * wh * wh / eps + delta2 * wh / eta;
}

HABBuild assemble_HAB(const HamiltonianExpr& HA, const Mat& P1, const Mat& P2, const Mat& P3, double delta1,
                      double delta2, int W, int H, int n, double eps, double eta) {
  if (n > W || n > H || n < 1) throw Error(Error::Kind::structural, "need 1 <= n <= min(W, H)");
  for (int j = 1; j <= H; ++j)
    for (int i = 1; i <= W; ++i)
      if (!HA.system.has(a_site(i, j))) throw Error(Error::Kind::structural, "H_A lacks site " + a_site(i, j));
  const int d = HA.system.dim_of(a_site(1, 1));
  for (const Mat* p : {&P1, &P2, &P3})
    if (p->rows() != d || p->cols() != d)
      throw Error(Error::Kind::structural, "projector dimension does not match the H_A local dimension");
  HABBuild out;
  out.H.system = HA.system;
  for (int j = 1; j <= H; ++j)
    for (int i = 1; i <= W; ++i) out.H.system.add({b_site(i, j), 2, {double(i), double(j)}});
  for (auto t : HA.terms) {
    t.coeff *= delta1;
    out.H.terms.push_back(std::move(t));
  }
  out.H.constant = delta1 * HA.constant;
  Mat one = Mat::Zero(2, 2);
  one(1, 1) = 1.0;
  Mat heis = named_interaction("heisenberg");
  for (int j = 1; j <= H; ++j)
    for (int i = 1; i <= W; ++i) out.H.terms.push_back({{a_site(i, j), b_site(i, j)}, kron(P3, one), delta1, ""});
  for (int i = 1; i <= W; ++i)
    for (int j = 1; j < H; ++j)
      out.H.terms.push_back({{a_site(i, j), b_site(i, j), b_site(i, j + 1)}, kron(P1, heis), delta2, ""});
  for (int i = 1; i < W; ++i)
    for (int j = 1; j <= H; ++j)
      out.H.terms.push_back({{a_site(i, j), b_site(i, j), b_site(i + 1, j)}, kron(P2, heis), delta2, ""});
  if (eps > 0.0 && eta > 0.0) {
    double need = hab_delta1(delta2, W, H, eps, eta);
    if (delta1 < need)
      out.warnings.push_back("delta1 " + std::to_string(delta1) + " below the bound " + std::to_string(need));
  }
  if (W > n || H > n)
    out.warnings.push_back("couplings on the corner's outer row/column act on idle B qubits as fields; set them to 0");
  return out;
}

HamiltonianExpr corner_target(const CouplingGrid& grid) {
  grid.validate();
  HamiltonianExpr t;
  const int n = grid.n;
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) t.system.add({b_site(i, j), 2, {double(i), double(j)}});
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j < n; ++j) t.add_named("heisenberg", {b_site(i, j), b_site(i, j + 1)}, grid.alpha[i - 1][j - 1]);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j <= n; ++j) t.add_named("heisenberg", {b_site(i, j), b_site(i + 1, j)}, grid.beta[i - 1][j - 1]);
  return t;
}

LocalIsometry corner_isometry(const SyntheticHA& ha) {
  LocalIsometry v;
  std::size_t k = 0;
  for (int j = 1; j <= ha.Hh; ++j)
    for (int i = 1; i <= ha.W; ++i) {
      v.ancillas.push_back({{a_site(i, j)}, ha.states[k++]});
      if (i <= ha.n && j <= ha.n) {
        v.factors.push_back({b_site(i, j), {b_site(i, j)}, Mat::Identity(2, 2)});
      } else {
        Vec zero = Vec::Zero(2);
        zero(0) = 1.0;
        v.ancillas.push_back({{b_site(i, j)}, zero});
      }
    }
  return v;
}

}  // namespace hamsim
