#include "hamsim/opcore.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace hamsim {

SiteSystem::SiteSystem(std::vector<Site> sites, std::uint64_t cap) : cap_(cap) {
  for (auto& s : sites) add(std::move(s));
}

void SiteSystem::add(Site s) {
  if (s.id.empty()) throw Error(Error::Kind::structural, "empty site id");
  if (s.dim < 2) throw Error(Error::Kind::structural, "site " + s.id + ": local dimension must be >= 2");
  if (index_.count(s.id)) throw Error(Error::Kind::structural, "duplicate site id " + s.id);
  index_[s.id] = sites_.size();
  sites_.push_back(std::move(s));
}

std::size_t SiteSystem::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Error::Kind::structural, "unknown site id " + id);
  return it->second;
}

std::uint64_t SiteSystem::total_dim() const {
  std::uint64_t d = 1;
  const auto big = std::numeric_limits<std::uint64_t>::max();
  for (const auto& s : sites_) {
    if (d > big / static_cast<std::uint64_t>(s.dim)) return big;
    d *= static_cast<std::uint64_t>(s.dim);
  }
  return d;
}

std::vector<std::uint64_t> SiteSystem::strides() const {
  std::vector<std::uint64_t> st(sites_.size(), 1);
  for (std::size_t i = sites_.size(); i-- > 1;) st[i - 1] = st[i] * sites_[i].dim;
  return st;
}

SiteSystem SiteSystem::row_major() const {
  std::vector<std::size_t> idx(sites_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = sites_[a].coord;
    const auto& cb = sites_[b].coord;
    if (ca.empty() || cb.empty()) return !ca.empty() && cb.empty();
    // slowest axis last coordinate: (x,y) sorts by y then x
    for (std::size_t k = std::max(ca.size(), cb.size()); k-- > 0;) {
      double va = k < ca.size() ? ca[k] : 0.0, vb = k < cb.size() ? cb[k] : 0.0;
      if (va != vb) return va < vb;
    }
    return false;
  });
  SiteSystem out;
  out.cap_ = cap_;
  for (auto i : idx) out.add(sites_[i]);
  return out;
}

std::string SiteSystem::fresh_id(const std::string& prefix) const {
  for (std::size_t k = 0;; ++k) {
    auto id = prefix + std::to_string(k);
    if (!has(id)) return id;
  }
}

bool SiteSystem::operator==(const SiteSystem& o) const {
  if (sites_.size() != o.sites_.size()) return false;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto &a = sites_[i], &b = o.sites_[i];
    if (a.id != b.id || a.dim != b.dim || a.coord != b.coord) return false;
  }
  return true;
}

void HamiltonianExpr::add_term(LocalTerm t) {
  terms.push_back(std::move(t));
}

void HamiltonianExpr::add_named(const std::string& kind, std::vector<std::string> support, double coeff) {
  std::vector<int> dims;
  for (const auto& s : support) dims.push_back(system.dim_of(s));
  LocalTerm t;
  t.op = named_interaction_for(kind, dims);
  t.support = std::move(support);
  t.coeff = coeff;
  t.kind = kind;
  terms.push_back(std::move(t));
}

void HamiltonianExpr::validate() const {
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const auto& t = terms[n];
    const auto where = "term " + std::to_string(n) + ": ";
    if (t.support.empty() || t.support.size() > 3)
      throw Error(Error::Kind::structural, where + "support must hold 1 to 3 sites");
    std::set<std::string> uniq(t.support.begin(), t.support.end());
    if (uniq.size() != t.support.size()) throw Error(Error::Kind::structural, where + "repeated site in support");
    std::int64_t d = 1;
    for (const auto& s : t.support) d *= system.dim_of(s);
    if (t.op.rows() != d || t.op.cols() != d)
      throw Error(Error::Kind::structural, where + "operator dimension " + std::to_string(t.op.rows()) +
                                               " does not match support dimension " + std::to_string(d));
    if (herm_defect(t.op) > kHermTol) throw Error(Error::Kind::structural, where + "operator is not Hermitian");
    if (!std::isfinite(t.coeff)) throw Error(Error::Kind::structural, where + "non-finite coefficient");
  }
  if (!std::isfinite(constant)) throw Error(Error::Kind::structural, "non-finite constant");
}

}  // namespace hamsim
