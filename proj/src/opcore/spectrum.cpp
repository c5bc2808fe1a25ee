#include "hamsim/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamsim {

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Spectrum dense_spectrum(const Mat& m, int k) {
  if (k < 0 || k > m.rows()) throw Error(Error::Kind::structural, "requested eigenpair count outside [0, dimension]");
  Spectrum s;
  s.method = "dense";
  if (m.rows() == 0) {
    s.eigenvalues = RealVec(0);
    s.eigenvectors = Mat(0, 0);
    return s;
  }
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw Error(Error::Kind::not_converged, "dense eigensolver failed");
  s.eigenvalues = es.eigenvalues().head(k);
  s.eigenvectors = es.eigenvectors().leftCols(k);
  if (k > 0) {
    Mat r = h * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal();
    s.max_residual = r.colwise().norm().maxCoeff();
  }
  return s;
}

static bool use_dense(const HamiltonianExpr& h, const SolverOptions& opt) {
  if (opt.path == SolverPath::dense) return true;
  if (opt.path == SolverPath::iterative) return false;
  return h.system.total_dim() < kDenseSwitch;
}

Spectrum low_spectrum(const HamiltonianExpr& h, int k, double tol, const SolverOptions& opt) {
  const auto n = h.system.total_dim();
  if (k < 0 || static_cast<std::uint64_t>(k) > n)
    throw Error(Error::Kind::structural, "k exceeds total dimension");
  Spectrum s;
  if (use_dense(h, opt)) {
    s = dense_spectrum(assemble(h), k);
  } else {
    if (k == 0) {
      s.eigenvalues = RealVec(0);
      s.eigenvectors = Mat(static_cast<Eigen::Index>(n), 0);
      s.method = "krylov";
    } else {
      s = krylov_spectrum(assemble_sparse(h), k, tol, opt);
    }
  }
  s.residual_tol = tol;
  if (s.max_residual > tol)
    throw Error(Error::Kind::not_converged, "residual " + std::to_string(s.max_residual) + " above tolerance");
  return s;
}

LowSpace low_space(const HamiltonianExpr& h, double cut, double tol, const SolverOptions& opt) {
  if (!std::isfinite(cut)) throw Error(Error::Kind::structural, "cut must be finite");
  const auto n = static_cast<Eigen::Index>(h.system.total_dim());
  LowSpace out;
  auto check_gap = [&](double lam) {
    if (std::abs(lam - cut) <= kCutTol)
      throw Error(Error::Kind::ambiguous_cut, "eigenvalue " + std::to_string(lam) + " lies within 1e-9 of the cut " +
                                                  std::to_string(cut) + "; shift the cut");
  };
  if (use_dense(h, opt)) {
    Spectrum all = dense_spectrum(assemble(h), static_cast<int>(n));
    Eigen::Index r = 0;
    while (r < n && all.eigenvalues(r) <= cut) check_gap(all.eigenvalues(r++));
    if (r < n) {
      check_gap(all.eigenvalues(r));
      out.next = all.eigenvalues(r);
    }
    out.below.method = "dense";
    out.below.residual_tol = tol;
    out.below.eigenvalues = all.eigenvalues.head(r);
    out.below.eigenvectors = all.eigenvectors.leftCols(r);
    if (r > 0) {
      Mat hm = assemble(h);
      out.below.max_residual =
          (hm * out.below.eigenvectors - out.below.eigenvectors * out.below.eigenvalues.asDiagonal())
              .colwise()
              .norm()
              .maxCoeff();
    }
    return out;
  }
  SpMat a = assemble_sparse(h);
  int k = std::min<int>(16, static_cast<int>(n));
  for (;;) {
    auto res = krylov_core(a, k, opt, [&](const RealVec& theta, const RealVec& rn) {
      int r = 0;
      while (r < theta.size() && theta(r) <= cut) ++r;
      if (r >= k && k < n) return kNeedLarger;
      for (int j = 0; j < r; ++j)
        if (rn(j) > tol) return -1;
      if (r < theta.size() && !(theta(r) - rn(r) > cut + kCutTol)) return -1;
      return std::min<int>(r + 1, static_cast<int>(theta.size()));
    });
    if (res.take == kNeedLarger) {
      k = static_cast<int>(std::min<Eigen::Index>(2 * k, n));
      continue;
    }
    int r = 0;
    while (r < res.take && res.theta(r) <= cut) check_gap(res.theta(r++));
    if (r < res.take) {
      check_gap(res.theta(r));
      out.next = res.theta(r);
    }
    out.below.method = "krylov";
    out.below.residual_tol = tol;
    out.below.eigenvalues = res.theta.head(r);
    out.below.eigenvectors = res.vectors.leftCols(r);
    out.below.max_residual = r ? res.residuals.head(r).maxCoeff() : 0.0;
    return out;
  }
}

Restriction restrict_below(const HamiltonianExpr& h, double cut, const SolverOptions& opt) {
  LowSpace ls = low_space(h, cut, 1e-9, opt);
  const auto n = static_cast<Eigen::Index>(h.system.total_dim());
  Restriction r;
  r.rank = static_cast<int>(ls.below.eigenvalues.size());
  const Mat& u = ls.below.eigenvectors;
  if (r.rank == 0) {
    r.P = Mat::Zero(n, n);
    r.H_low = Mat::Zero(n, n);
    return r;
  }
  r.P = u * u.adjoint();
  r.H_low = u * ls.below.eigenvalues.cast<cplx>().asDiagonal() * u.adjoint();
  return r;
}

}  // namespace hamsim
