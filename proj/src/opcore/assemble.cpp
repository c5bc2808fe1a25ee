#include "hamsim/opcore.hpp"

namespace hamsim {

namespace {

std::vector<std::uint64_t> local_offsets(const SiteSystem& sys, const std::vector<std::string>& support,
                                         std::vector<std::uint64_t>& strides_out, std::vector<int>& dims_out) {
  auto st = sys.strides();
  strides_out.clear();
  dims_out.clear();
  std::uint64_t d = 1;
  for (const auto& s : support) {
    auto i = sys.index_of(s);
    strides_out.push_back(st[i]);
    dims_out.push_back(sys.at(i).dim);
    d *= sys.at(i).dim;
  }
  std::vector<std::uint64_t> off(d, 0);
  for (std::uint64_t l = 0; l < d; ++l) {
    std::uint64_t rem = l, o = 0;
    for (std::size_t k = support.size(); k-- > 0;) {
      o += (rem % dims_out[k]) * strides_out[k];
      rem /= dims_out[k];
    }
    off[l] = o;
  }
  return off;
}

void add_triplets(const SiteSystem& sys, const std::vector<std::string>& support, const Mat& op, cplx scale,
                  std::vector<Eigen::Triplet<cplx>>& trip) {
  std::vector<std::uint64_t> st;
  std::vector<int> dims;
  auto off = local_offsets(sys, support, st, dims);
  const std::uint64_t n = sys.total_dim();
  const auto d = static_cast<Eigen::Index>(off.size());
  if (op.rows() != d || op.cols() != d) throw Error(Error::Kind::structural, "operator does not match support dimension");
  // sparsity pattern of op, rows first
  std::vector<std::vector<std::pair<Eigen::Index, cplx>>> nz(d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      if (op(r, c) != cplx(0.0)) nz[r].push_back({c, op(r, c) * scale});
  for (std::uint64_t row = 0; row < n; ++row) {
    std::uint64_t rl = 0;
    for (std::size_t k = 0; k < support.size(); ++k) rl = rl * dims[k] + (row / st[k]) % dims[k];
    const std::uint64_t base = row - off[rl];
    for (const auto& [c, v] : nz[rl])
      trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(base + off[c]), v);
  }
}

void check_cap(const SiteSystem& sys) {
  if (sys.total_dim() > sys.cap())
    throw Error(Error::Kind::too_large, "total Hilbert dimension exceeds cap " + std::to_string(sys.cap()));
}

}  // namespace

SpMat embed_sparse(const SiteSystem& sys, const std::vector<std::string>& support, const Mat& op) {
  check_cap(sys);
  std::vector<Eigen::Triplet<cplx>> trip;
  add_triplets(sys, support, op, 1.0, trip);
  const auto n = static_cast<Eigen::Index>(sys.total_dim());
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat assemble_sparse(const HamiltonianExpr& h) {
  h.validate();
  check_cap(h.system);
  const auto n = static_cast<Eigen::Index>(h.system.total_dim());
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const auto& t : h.terms)
    if (t.coeff != 0.0) add_triplets(h.system, t.support, t.op, t.coeff, trip);
  if (h.constant != 0.0)
    for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(i, i, h.constant);
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

Mat assemble(const HamiltonianExpr& h) {
  return Mat(assemble_sparse(h));
}

}  // namespace hamsim
