// Block Krylov eigensolver, thick restart, full reorthogonalization (CGS2).
#include "hamsim/opcore.hpp"

#include <random>

namespace hamsim {

namespace {

struct Rng {
  std::mt19937_64 gen;
  std::normal_distribution<double> nd{0.0, 1.0};
  explicit Rng(std::uint64_t s) : gen(s) {}
  Vec vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double re = nd(gen);
      double im = nd(gen);
      v(i) = cplx(re, im);
    }
    return v;
  }
};

// orthogonalize x against the first `cols` columns of V, twice
void cgs2(const Mat& V, Eigen::Index cols, Vec& x) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    Vec c = V.leftCols(cols).adjoint() * x;
    x.noalias() -= V.leftCols(cols) * c;
  }
}

}  // namespace

KrylovResult krylov_core(const SpMat& A, int k, const SolverOptions& opt, const KrylovAccept& accept) {
  const Eigen::Index n = A.rows();
  if (k < 1 || k > n) throw Error(Error::Kind::structural, "requested eigenpair count outside [1, dimension]");
  const Eigen::Index b = std::max<Eigen::Index>(1, std::min<Eigen::Index>(opt.block, n));
  Eigen::Index m = opt.basis > 0 ? opt.basis : std::max<Eigen::Index>(2 * k + 2 * b, k + 4 * b + 16);
  m = std::min(m, n);
  if (m <= k + 1 || n <= 64) {
    // tiny problem: basis would span the space anyway
    KrylovResult out;
    Spectrum s = dense_spectrum(Mat(A), static_cast<int>(std::min<Eigen::Index>(n, k + 1)));
    out.theta = s.eigenvalues;
    out.vectors = s.eigenvectors;
    out.residuals = (Mat(A) * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).colwise().norm();
    out.take = accept(out.theta, out.residuals);
    if (out.take < 0) throw Error(Error::Kind::not_converged, "dense fallback rejected by acceptance test");
    return out;
  }
  const Eigen::Index keep = std::min<Eigen::Index>(k + b, m - b);

  Rng rng(opt.seed);
  Mat V(n, m), AV(n, m);
  Eigen::Index cols = 0;
  std::vector<Vec> next;
  for (Eigen::Index j = 0; j < b; ++j) next.push_back(rng.vec(n));

  auto push = [&](Vec x) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      double before = x.norm();
      cgs2(V, cols, x);
      double after = x.norm();
      if (before > 0 && after > 1e-10 * before) {
        V.col(cols) = x / after;
        AV.col(cols) = A * V.col(cols);
        ++cols;
        return true;
      }
      x = rng.vec(n);  // deflated direction, replace
    }
    return false;
  };

  int confirmed = -1;
  RealVec confirmed_theta;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    while (cols + static_cast<Eigen::Index>(next.size()) <= m && !next.empty()) {
      Eigen::Index first = cols;
      for (auto& x : next) push(std::move(x));
      next.clear();
      if (cols + b > m) break;
      for (Eigen::Index j = first; j < cols; ++j) next.push_back(AV.col(j));
    }
    Mat T = V.leftCols(cols).adjoint() * AV.leftCols(cols);
    T = 0.5 * (T + T.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    const Eigen::Index p = std::min(keep, cols);
    Mat Y = V.leftCols(cols) * es.eigenvectors().leftCols(p);
    Mat AY(n, p);
    for (Eigen::Index j = 0; j < p; ++j) AY.col(j) = A * Y.col(j);
    RealVec theta = es.eigenvalues().head(p);
    Mat R = AY - Y * theta.asDiagonal();
    RealVec res = R.colwise().norm();
    int take = accept(theta, res);
    if (take == kNeedLarger) {
      KrylovResult out;
      out.take = kNeedLarger;
      return out;
    }
    bool fresh = false;
    if (take >= 0) {
      // confirm with a fresh random block: degenerate eigenspaces wider than the block only show up this way
      bool same = take == confirmed;
      for (int j = 0; same && j < take; ++j)
        same = res(j) > 1e-6 || std::abs(theta(j) - confirmed_theta(j)) <= 1e-8 * std::max(1.0, std::abs(theta(j)));
      if (!same) {
        confirmed = take;
        confirmed_theta = theta.head(take);
        fresh = true;
      }
    }
    if (take >= 0 && !fresh) {
      KrylovResult out;
      out.take = take;
      out.theta = theta;
      out.vectors = Y;
      out.residuals = res;
      return out;
    }
    V.leftCols(p) = Y;
    AV.leftCols(p) = AY;
    cols = p;
    for (Eigen::Index j = 0; !fresh && j < p && static_cast<Eigen::Index>(next.size()) < b; ++j)
      if (res(j) > 1e-14 * std::max(1.0, std::abs(theta(j)))) next.push_back(R.col(j));
    while (static_cast<Eigen::Index>(next.size()) < b) next.push_back(rng.vec(n));
  }
  throw Error(Error::Kind::not_converged,
              "Krylov solver did not converge within " + std::to_string(opt.max_restarts) + " restarts");
}


Spectrum krylov_spectrum(const SpMat& A, int k, double tol, const SolverOptions& opt, int strict, double loose_tol) {
  if (strict < 0 || strict > k) strict = k;
  auto r = krylov_core(A, k, opt, [&](const RealVec&, const RealVec& res) {
    for (int j = 0; j < k; ++j)
      if (res(j) > (j < strict ? tol : loose_tol)) return -1;
    return k;
  });
  Spectrum s;
  s.method = "krylov";
  s.residual_tol = tol;
  s.eigenvalues = r.theta.head(k);
  s.eigenvectors = r.vectors.leftCols(k);
  s.max_residual = strict ? r.residuals.head(strict).maxCoeff() : 0.0;
  return s;
}

}  // namespace hamsim
