#include <cmath>
#include <numbers>

#include "hamsim/clocklab.hpp"

namespace hamsim {

Mat named_gate(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  Mat m;
  if (name == "I") m = Mat::Identity(2, 2);
  else if (name == "X") (m = Mat(2, 2)) << 0, 1, 1, 0;
  else if (name == "Y") (m = Mat(2, 2)) << 0, -i, i, 0;
  else if (name == "Z") (m = Mat(2, 2)) << 1, 0, 0, -1;
  else if (name == "H") (m = Mat(2, 2)) << r, r, r, -r;
  else if (name == "S") (m = Mat(2, 2)) << 1, 0, 0, i;
  else if (name == "Sdg") (m = Mat(2, 2)) << 1, 0, 0, -i;
  else if (name == "T") (m = Mat(2, 2)) << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  else if (name == "Tdg") (m = Mat(2, 2)) << 1, 0, 0, std::polar(1.0, -std::numbers::pi / 4);
  else if (name == "CNOT") {
    m = Mat::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  } else if (name == "SWAP") {
    m = Mat::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  } else {
    throw Error(Error::Kind::parse, "unknown gate '" + name + "'");
  }
  return m;
}

Gate make_gate(const std::string& name, std::vector<int> qubits) {
  Gate g{name, std::move(qubits), named_gate(name)};
  if (g.qubits.empty() && name == "I") g.U = Mat::Identity(1, 1);
  return g;
}

Vec GateSequence::input() const {
  if (psi_in.size() > 0) return psi_in;
  Vec v = Vec::Zero(Eigen::Index{1} << qubits);
  v(0) = 1;
  return v;
}

void GateSequence::validate() const {
  if (qubits < 0 || qubits > 20) throw Error(Error::Kind::structural, "register size outside [0, 20] qubits");
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  if (psi_in.size() > 0) {
    if (psi_in.size() != dim) throw Error(Error::Kind::structural, "input state has the wrong dimension");
    if (std::abs(psi_in.norm() - 1.0) > 1e-10) throw Error(Error::Kind::structural, "input state is not normalized");
  }
  if (!layout.empty() && static_cast<int>(layout.size()) != qubits)
    throw Error(Error::Kind::structural, "layout needs one cell per qubit");
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const Gate& g = steps[t];
    const std::string where = "step " + std::to_string(t + 1);
    if (g.qubits.size() > 2) throw Error(Error::Kind::structural, where + " acts on more than 2 qubits");
    const Eigen::Index d = Eigen::Index{1} << g.qubits.size();
    if (g.U.rows() != d || g.U.cols() != d) throw Error(Error::Kind::structural, where + " has a mismatched matrix");
    if ((g.U.adjoint() * g.U - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(Error::Kind::structural, where + " is not unitary");
    for (int q : g.qubits)
      if (q < 0 || q >= qubits) throw Error(Error::Kind::structural, where + " addresses a missing qubit");
    if (g.qubits.size() == 2) {
      if (g.qubits[0] == g.qubits[1]) throw Error(Error::Kind::structural, where + " repeats a qubit");
      if (!layout.empty()) {
        auto a = layout[g.qubits[0]], b = layout[g.qubits[1]];
        if (std::abs(a.first - b.first) + std::abs(a.second - b.second) > 1)
          throw Error(Error::Kind::structural, where + " couples non-adjacent cells");
      }
    }
  }
}

void apply_gate(Vec& psi, const Gate& g, int qubits) {
  const std::size_t k = g.qubits.size();
  if (k == 0) {
    psi *= g.U(0, 0);
    return;
  }
  const Eigen::Index dim = psi.size();
  if (k == 1) {
    const Eigen::Index m = Eigen::Index{1} << (qubits - 1 - g.qubits[0]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i & m) continue;
      cplx a = psi(i), b = psi(i | m);
      psi(i) = g.U(0, 0) * a + g.U(0, 1) * b;
      psi(i | m) = g.U(1, 0) * a + g.U(1, 1) * b;
    }
    return;
  }
  const Eigen::Index m0 = Eigen::Index{1} << (qubits - 1 - g.qubits[0]);
  const Eigen::Index m1 = Eigen::Index{1} << (qubits - 1 - g.qubits[1]);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if ((i & m0) || (i & m1)) continue;
    const Eigen::Index idx[4] = {i, i | m1, i | m0, i | m0 | m1};
    cplx in[4], out[4];
    for (int a = 0; a < 4; ++a) in[a] = psi(idx[a]);
    for (int a = 0; a < 4; ++a) {
      out[a] = 0;
      for (int b = 0; b < 4; ++b) out[a] += g.U(a, b) * in[b];
    }
    for (int a = 0; a < 4; ++a) psi(idx[a]) = out[a];
  }
}

std::vector<Vec> replay(const GateSequence& seq, const Vec& psi_in) {
  std::vector<Vec> out{psi_in};
  Vec psi = psi_in;
  for (const auto& g : seq.steps) {
    apply_gate(psi, g, seq.qubits);
    out.push_back(psi);
  }
  return out;
}

namespace {

// entries of a 1-2 qubit gate embedded in the full register, as (row, col, value)
void embedded(const Gate& g, int qubits, std::vector<Eigen::Triplet<cplx>>& out, Eigen::Index roff,
              Eigen::Index coff, cplx scale, bool adjoint) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  const int k = static_cast<int>(g.qubits.size());
  std::vector<Eigen::Index> masks;
  for (int q : g.qubits) masks.push_back(Eigen::Index{1} << (qubits - 1 - q));
  const Mat U = adjoint ? Mat(g.U.adjoint()) : g.U;
  for (Eigen::Index col = 0; col < dim; ++col) {
    int lin = 0;
    Eigen::Index rest = col;
    for (int j = 0; j < k; ++j) {
      lin = 2 * lin + ((col & masks[j]) ? 1 : 0);
      rest &= ~masks[j];
    }
    for (int lout = 0; lout < (1 << k); ++lout) {
      cplx v = U(lout, lin);
      if (v == cplx(0)) continue;
      Eigen::Index row = rest;
      for (int j = 0; j < k; ++j)
        if ((lout >> (k - 1 - j)) & 1) row |= masks[j];
      out.emplace_back(roff + row, coff + col, scale * v);
    }
  }
}

}  // namespace

ClockHamiltonian clock_hamiltonian(const GateSequence& seq) {
  seq.validate();
  if (seq.T() < 1) throw Error(Error::Kind::structural, "clock Hamiltonian needs T >= 1");
  ClockHamiltonian ch;
  ch.T = seq.T();
  ch.qdim = 1 << seq.qubits;
  const Eigen::Index q = ch.qdim, N = (ch.T + 1) * q;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int t = 1; t <= ch.T; ++t) {
    for (Eigen::Index i = 0; i < q; ++i) {
      trip.emplace_back((t - 1) * q + i, (t - 1) * q + i, 1.0);
      trip.emplace_back(t * q + i, t * q + i, 1.0);
    }
    embedded(seq.steps[t - 1], seq.qubits, trip, (t - 1) * q, t * q, -1.0, true);
    embedded(seq.steps[t - 1], seq.qubits, trip, t * q, (t - 1) * q, -1.0, false);
  }
  const Vec in = seq.input();
  Mat pen = Mat::Identity(q, q) - in * in.adjoint();
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      if (std::abs(pen(i, j)) > 0) trip.emplace_back(i, j, pen(i, j));
  ch.H.resize(N, N);
  ch.H.setFromTriplets(trip.begin(), trip.end());
  return ch;
}

Vec history_state(const GateSequence& seq, const Vec& psi_in) {
  const Eigen::Index q = Eigen::Index{1} << seq.qubits;
  if (psi_in.size() != q) throw Error(Error::Kind::structural, "input state has the wrong dimension");
  auto states = replay(seq, psi_in);
  Vec h(static_cast<Eigen::Index>(states.size()) * q);
  const double norm = 1.0 / std::sqrt(static_cast<double>(states.size()));
  for (std::size_t t = 0; t < states.size(); ++t) h.segment(static_cast<Eigen::Index>(t) * q, q) = norm * states[t];
  return h;
}

std::vector<GapRow> gap_scan(const std::vector<int>& Ts) {
  std::vector<GapRow> rows;
  for (int T : Ts) {
    if (T < 1) throw Error(Error::Kind::structural, "gap scan needs T >= 1");
    GateSequence seq;
    seq.qubits = 0;
    for (int t = 0; t < T; ++t) seq.steps.push_back(make_gate("I", {}));
    ClockHamiltonian ch = clock_hamiltonian(seq);
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(ch.H)};
    GapRow r;
    r.T = T;
    r.gap = es.eigenvalues()(1) - es.eigenvalues()(0);
    r.scaled = r.gap * (T + 1.0) * (T + 1.0);
    r.closed_form = 2.0 * (1.0 - std::cos(std::numbers::pi / (T + 1.0)));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hamsim
