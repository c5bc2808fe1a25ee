#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hamsim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Error taxonomy. Callers (the CLI in particular) triage on the kind.
class Error : public std::runtime_error {
 public:
  enum class Kind { structural, rank_mismatch, ambiguous_cut, not_converged, too_large, parse };
  Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::uint64_t kDefaultDimCap = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kDenseSwitch = 4096;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kCutTol = 1e-9;

struct Site {
  std::string id;
  int dim = 2;
  std::vector<double> coord;  // may be empty
};

// Tensor order is the list order; site 0 is the most significant factor.
class SiteSystem {
 public:
  SiteSystem() = default;
  explicit SiteSystem(std::vector<Site> sites, std::uint64_t cap = kDefaultDimCap);

  void add(Site s);
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& at(std::size_t i) const { return sites_.at(i); }
  bool has(const std::string& id) const { return index_.count(id) != 0; }
  std::size_t index_of(const std::string& id) const;
  int dim_of(const std::string& id) const { return sites_[index_of(id)].dim; }

  // saturates at UINT64_MAX
  std::uint64_t total_dim() const;
  std::uint64_t cap() const { return cap_; }
  void set_cap(std::uint64_t c) { cap_ = c; }
  std::vector<std::uint64_t> strides() const;

  // row-major over (y, x, ...) coordinates; sites without coords keep their relative order at the end
  SiteSystem row_major() const;
  // fresh id "<prefix><k>" with the smallest unused k
  std::string fresh_id(const std::string& prefix) const;

  bool operator==(const SiteSystem& o) const;

 private:
  std::vector<Site> sites_;
  std::map<std::string, std::size_t> index_;
  std::uint64_t cap_ = kDefaultDimCap;
};

struct LocalTerm {
  std::vector<std::string> support;  // 1..3 distinct ids
  Mat op;
  double coeff = 1.0;
  std::string kind;  // named interaction kind if built from one, else empty
};

struct HamiltonianExpr {
  SiteSystem system;
  std::vector<LocalTerm> terms;
  double constant = 0.0;  // multiple of the identity

  void add_term(LocalTerm t);
  void add_named(const std::string& kind, std::vector<std::string> support, double coeff);
  void validate() const;
};

// ---- named interactions ----
struct InteractionParams {
  std::string word;  // pauli-word letters
  int dim = 2;       // basis-projector local dimension
  int index = 0;     // basis-projector index
};

Mat named_interaction(const std::string& kind, const InteractionParams& params = {});
// kind with the default parameters, checked against the support's dims
Mat named_interaction_for(const std::string& kind, const std::vector<int>& dims,
                          const InteractionParams& params = {});
Mat pauli(char c);
Mat kron(const Mat& a, const Mat& b);
double herm_defect(const Mat& m);

// ---- assembly ----
Mat assemble(const HamiltonianExpr& h);
SpMat assemble_sparse(const HamiltonianExpr& h);
// embed one operator acting on `support` (ordered) into the full space
SpMat embed_sparse(const SiteSystem& sys, const std::vector<std::string>& support, const Mat& op);

// ---- spectra ----
struct Spectrum {
  RealVec eigenvalues;  // ascending
  Mat eigenvectors;     // columns
  double residual_tol = 0.0;
  double max_residual = 0.0;
  std::string method;  // "dense" | "krylov"
};

enum class SolverPath { automatic, dense, iterative };

struct SolverOptions {
  SolverPath path = SolverPath::automatic;
  std::uint64_t seed = 20240917;
  int block = 8;
  int max_restarts = 400;
  int basis = 0;  // Krylov basis size; 0 picks a default from k
};

Spectrum low_spectrum(const HamiltonianExpr& h, int k, double tol = 1e-9, const SolverOptions& opt = {});
Spectrum dense_spectrum(const Mat& m, int k);
// pairs past `strict` only need residual <= loose_tol (used to bound the first eigenvalue above a cut)
Spectrum krylov_spectrum(const SpMat& m, int k, double tol, const SolverOptions& opt, int strict = -1,
                         double loose_tol = 1e-4);

// Thick-restart block Krylov core. `accept` sees the kept Ritz values/residual norms after each restart and
// returns -1 to continue, kNeedLarger to give up for a larger k, or the number of leading pairs to return.
inline constexpr int kNeedLarger = -2;
using KrylovAccept = std::function<int(const RealVec& theta, const RealVec& residuals)>;
struct KrylovResult {
  int take = -1;
  RealVec theta;
  Mat vectors;
  RealVec residuals;
};
KrylovResult krylov_core(const SpMat& m, int k, const SolverOptions& opt, const KrylovAccept& accept);

// eigenpairs with eigenvalue <= cut, plus the first eigenvalue above it (if any)
struct LowSpace {
  Spectrum below;
  std::optional<double> next;
};
LowSpace low_space(const HamiltonianExpr& h, double cut, double tol = 1e-9, const SolverOptions& opt = {});

struct Restriction {
  Mat P;
  Mat H_low;
  int rank = 0;
};
Restriction restrict_below(const HamiltonianExpr& h, double cut, const SolverOptions& opt = {});

double op_norm(const Mat& m);

}  // namespace hamsim
