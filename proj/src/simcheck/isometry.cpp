#include <set>

#include "hamsim/simcheck.hpp"

namespace hamsim {

namespace {

std::int64_t support_dim(const SiteSystem& s, const std::vector<std::string>& ids) {
  std::int64_t d = 1;
  for (const auto& id : ids) d *= s.dim_of(id);
  return d;
}

// global offsets of every local index on `ids`
std::vector<std::uint64_t> offsets(const SiteSystem& s, const std::vector<std::string>& ids) {
  auto st = s.strides();
  std::vector<std::uint64_t> off(support_dim(s, ids), 0);
  for (std::size_t l = 0; l < off.size(); ++l) {
    std::uint64_t rem = l, o = 0;
    for (std::size_t k = ids.size(); k-- > 0;) {
      auto i = s.index_of(ids[k]);
      o += (rem % s.at(i).dim) * st[i];
      rem /= s.at(i).dim;
    }
    off[l] = o;
  }
  return off;
}

}  // namespace

LocalIsometry LocalIsometry::identity(const SiteSystem& target) {
  LocalIsometry v;
  for (const auto& s : target.sites()) v.factors.push_back({s.id, {s.id}, Mat::Identity(s.dim, s.dim)});
  return v;
}

void LocalIsometry::validate(const SiteSystem& target, const SiteSystem& sim) const {
  std::set<std::string> tseen, sseen;
  auto claim = [&](const std::string& id) {
    if (!sim.has(id)) throw Error(Error::Kind::structural, "isometry maps onto unknown simulator site " + id);
    if (!sseen.insert(id).second)
      throw Error(Error::Kind::structural, "simulator site " + id + " used by two isometry factors");
  };
  for (const auto& f : factors) {
    if (!target.has(f.target)) throw Error(Error::Kind::structural, "isometry factor for unknown target site " + f.target);
    if (!tseen.insert(f.target).second) throw Error(Error::Kind::structural, "two factors for target site " + f.target);
    for (const auto& id : f.image) claim(id);
    if (f.V.rows() != support_dim(sim, f.image) || f.V.cols() != target.dim_of(f.target))
      throw Error(Error::Kind::structural, "factor for " + f.target + " has wrong shape");
    if ((f.V.adjoint() * f.V - Mat::Identity(f.V.cols(), f.V.cols())).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(Error::Kind::structural, "factor for " + f.target + " is not an isometry");
  }
  for (const auto& a : ancillas) {
    for (const auto& id : a.sites) claim(id);
    if (a.state.size() != support_dim(sim, a.sites))
      throw Error(Error::Kind::structural, "ancilla state has wrong dimension");
    if (std::abs(a.state.norm() - 1.0) > 1e-12) throw Error(Error::Kind::structural, "ancilla state not normalized");
  }
  if (tseen.size() != target.size()) throw Error(Error::Kind::structural, "isometry does not cover every target site");
  if (sseen.size() != sim.size()) throw Error(Error::Kind::structural, "isometry does not cover every simulator site");
}

Mat LocalIsometry::matrix(const SiteSystem& target, const SiteSystem& sim) const {
  validate(target, sim);
  const auto nt = static_cast<Eigen::Index>(target.total_dim());
  const auto ns = static_cast<Eigen::Index>(sim.total_dim());
  auto tst = target.strides();
  // fixed ancilla part, shared by every column
  std::vector<std::pair<std::uint64_t, cplx>> base{{0, 1.0}};
  auto expand = [](const std::vector<std::pair<std::uint64_t, cplx>>& in, const std::vector<std::uint64_t>& off,
                   const Vec& v) {
    std::vector<std::pair<std::uint64_t, cplx>> out;
    for (const auto& [idx, amp] : in)
      for (Eigen::Index l = 0; l < v.size(); ++l)
        if (v(l) != cplx(0.0)) out.push_back({idx + off[l], amp * v(l)});
    return out;
  };
  for (const auto& a : ancillas) base = expand(base, offsets(sim, a.sites), a.state);
  std::vector<std::vector<std::uint64_t>> foff;
  for (const auto& f : factors) foff.push_back(offsets(sim, f.image));

  Mat V = Mat::Zero(ns, nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    auto cur = base;
    for (std::size_t q = 0; q < factors.size(); ++q) {
      const auto& f = factors[q];
      auto ti = target.index_of(f.target);
      auto digit = static_cast<Eigen::Index>((t / tst[ti]) % target.at(ti).dim);
      cur = expand(cur, foff[q], f.V.col(digit));
    }
    for (const auto& [idx, amp] : cur) V(static_cast<Eigen::Index>(idx), t) += amp;
  }
  return V;
}

IsometryWitness low_energy_isometry(const HamiltonianExpr& sim, double cut, const Mat& V, const SolverOptions& opt) {
  if (V.rows() != static_cast<Eigen::Index>(sim.system.total_dim()))
    throw Error(Error::Kind::structural, "isometry codomain does not match simulator dimension");
  LowSpace ls = low_space(sim, cut, 1e-9, opt);
  const auto r = ls.below.eigenvalues.size();
  if (r != V.cols())
    throw Error(Error::Kind::rank_mismatch, "rank mismatch: " + std::to_string(r) +
                                                " eigenvalues below the cut, target dimension " +
                                                std::to_string(V.cols()));
  IsometryWitness w;
  w.U = ls.below.eigenvectors;
  w.lam = ls.below.eigenvalues;
  w.next = ls.next;
  w.C = w.U.adjoint() * V;
  if (r == 0) {
    w.W = Mat(0, 0);
    w.Vt = Mat(V.rows(), 0);
    return w;
  }
  Eigen::JacobiSVD<Mat> svd(w.C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-12)
    throw Error(Error::Kind::structural, "M^dag M is singular: isometry range misses the low-energy space");
  w.W = svd.matrixU() * svd.matrixV().adjoint();
  w.Vt = w.U * w.W;
  return w;
}

IsometryWitness low_energy_isometry(const HamiltonianExpr& sim, double cut, const LocalIsometry& V,
                                    const SiteSystem& target, const SolverOptions& opt) {
  return low_energy_isometry(sim, cut, V.matrix(target, sim.system), opt);
}

}  // namespace hamsim
