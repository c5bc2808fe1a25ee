#include "hamsim/opcore.hpp"

#include <limits>

namespace hamsim {

Mat pauli(char c) {
  Mat m = Mat::Zero(2, 2);
  switch (c) {
    case 'I': m(0, 0) = m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw Error(Error::Kind::structural, std::string("bad pauli letter '") + c + "'");
  }
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double herm_defect(const Mat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

static Mat word_op(const std::string& w) {
  if (w.empty()) throw Error(Error::Kind::structural, "empty pauli word");
  Mat m = pauli(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) m = kron(m, pauli(w[i]));
  return m;
}

Mat named_interaction(const std::string& kind, const InteractionParams& p) {
  if (kind == "heisenberg") return word_op("XX") + word_op("YY") + word_op("ZZ");
  if (kind == "xy") return word_op("XX") + word_op("YY");
  if (kind == "pauli-word") return word_op(p.word);
  if (kind == "basis-projector") {
    if (p.dim < 2) throw Error(Error::Kind::structural, "basis-projector: dimension must be >= 2");
    if (p.index < 0 || p.index >= p.dim)
      throw Error(Error::Kind::structural, "basis-projector: index " + std::to_string(p.index) +
                                               " outside local dimension " + std::to_string(p.dim));
    Mat m = Mat::Zero(p.dim, p.dim);
    m(p.index, p.index) = 1.0;
    return m;
  }
  throw Error(Error::Kind::structural, "unknown interaction kind '" + kind + "'");
}

Mat named_interaction_for(const std::string& kind, const std::vector<int>& dims, const InteractionParams& params) {
  auto mismatch = [&](const std::string& need) {
    return Error(Error::Kind::structural, kind + " needs " + need + " support");
  };
  if (kind == "heisenberg" || kind == "xy") {
    if (dims != std::vector<int>{2, 2}) throw mismatch("a two-qubit");
    return named_interaction(kind, params);
  }
  if (kind == "pauli-word") {
    if (dims.size() != params.word.size()) throw mismatch(std::to_string(params.word.size()) + "-site");
    for (int d : dims)
      if (d != 2) throw mismatch("an all-qubit");
    return named_interaction(kind, params);
  }
  if (kind == "basis-projector") {
    if (dims.size() != 1) throw mismatch("a single-site");
    InteractionParams q = params;
    q.dim = dims[0];
    return named_interaction(kind, q);
  }
  return named_interaction(kind, params);
}

}  // namespace hamsim
