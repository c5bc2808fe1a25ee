#include <algorithm>
#include <cmath>
#include <map>

#include "hamsim/clocklab.hpp"

namespace hamsim {

double AngleField::theta_alpha(int i, int j) const { return std::asin(std::sqrt(alpha[i][j] / delta2)); }
double AngleField::theta_beta(int i, int j) const { return std::asin(std::sqrt(beta[i][j] / delta2)); }

void AngleField::validate() const {
  if (n < 1) throw Error(Error::Kind::structural, "angle field needs n >= 1");
  if (!(delta2 > 0) || !(eps > 0)) throw Error(Error::Kind::structural, "delta2 and eps must be positive");
  for (const auto* m : {&alpha, &beta}) {
    if (static_cast<int>(m->size()) != n) throw Error(Error::Kind::structural, "coupling table is not n x n");
    for (const auto& row : *m) {
      if (static_cast<int>(row.size()) != n) throw Error(Error::Kind::structural, "coupling table is not n x n");
      for (double v : row)
        if (!(v >= 0 && v <= delta2)) throw Error(Error::Kind::structural, "coupling outside [0, delta2]");
    }
  }
}

int field_qubit(int n, int x, int y, bool beta) { return 2 * (y * n + x) + (beta ? 1 : 0); }

namespace {

// synthesize each distinct angle once
struct WordCache {
  double delta;
  std::map<double, SynthResult> memo;
  const SynthResult& get(double theta) {
    auto it = memo.find(theta);
    if (it != memo.end()) return it->second;
    SynthResult r = synthesize_rotation(theta, delta);
    if (!r.reached)
      throw Error(Error::Kind::not_converged, "rotation synthesis for theta = " + std::to_string(theta) +
                                                  " stopped at distance " + std::to_string(r.distance));
    return memo.emplace(theta, std::move(r)).first->second;
  }
};

void emit(FieldProgram& fp, WordCache& cache, int qubit, double theta) {
  const SynthResult& r = cache.get(theta);
  for (const auto& g : r.word) fp.seq.steps.push_back(make_gate(g, {qubit}));
  fp.targets[qubit] = theta;
  fp.word_error[qubit] = r.distance;
}

}  // namespace

FieldProgram field_program(const AngleField& field, const SnakePath& layout) {
  field.validate();
  const int n = field.n;
  FieldProgram fp;
  fp.seq.qubits = 2 * n * n;
  fp.seq.layout.assign(fp.seq.qubits, {0, 0});
  fp.targets.assign(fp.seq.qubits, 0.0);
  fp.word_error.assign(fp.seq.qubits, 0.0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (std::find(layout.cells.begin(), layout.cells.end(), std::pair{x, y}) == layout.cells.end())
        throw Error(Error::Kind::structural, "square cell (" + std::to_string(x) + "," + std::to_string(y) +
                                                 ") lies outside the snake layout");
      fp.seq.layout[field_qubit(n, x, y, false)] = {x, y};
      fp.seq.layout[field_qubit(n, x, y, true)] = {x, y};
    }
  WordCache cache{field.delta(), {}};
  for (auto [x, y] : layout.cells) {
    if (x >= n || y >= n) continue;
    fp.cells.push_back({x, y});
    emit(fp, cache, field_qubit(n, x, y, false), field.theta_alpha(x, y));
    emit(fp, cache, field_qubit(n, x, y, true), field.theta_beta(x, y));
  }
  return fp;
}

PeriodicLayout periodic_layout(int k, int n, int W, int H) {
  if (k < 1 || n < 1) throw Error(Error::Kind::structural, "periodic layout needs k, n >= 1");
  if (n * k > std::min(W, H)) throw Error(Error::Kind::structural, "patch exceeds lattice");
  PeriodicLayout p;
  p.k = k;
  p.n = n;
  for (int y = 0; y < n * k; ++y)
    for (int x = 0; x < n * k; ++x) {
      p.cells.push_back({x, y});
      p.source.push_back({x % k, y % k});
    }
  return p;
}

FieldProgram periodic_field_program(const AngleField& field, const PeriodicLayout& layout) {
  field.validate();
  if (field.n != layout.k) throw Error(Error::Kind::structural, "field patch size differs from the layout period");
  const int side = layout.n * layout.k;
  FieldProgram fp;
  fp.seq.qubits = 2 * side * side;
  fp.seq.layout.assign(fp.seq.qubits, {0, 0});
  fp.targets.assign(fp.seq.qubits, 0.0);
  fp.word_error.assign(fp.seq.qubits, 0.0);
  // per-cell tolerance uses the full written square
  WordCache cache{field.eps / (4.0 * field.delta2 * side * side), {}};
  for (std::size_t i = 0; i < layout.cells.size(); ++i) {
    auto [x, y] = layout.cells[i];
    auto [sx, sy] = layout.source[i];
    fp.cells.push_back({x, y});
    fp.seq.layout[field_qubit(side, x, y, false)] = {x, y};
    fp.seq.layout[field_qubit(side, x, y, true)] = {x, y};
    emit(fp, cache, field_qubit(side, x, y, false), field.theta_alpha(sx, sy));
    emit(fp, cache, field_qubit(side, x, y, true), field.theta_beta(sx, sy));
  }
  return fp;
}

BlinkProgram blink_schedule(const GateSequence& seq, int flag_qubit) {
  seq.validate();
  if (flag_qubit < 0 || flag_qubit >= seq.qubits) throw Error(Error::Kind::structural, "flag cell outside layout");
  BlinkProgram p;
  p.compute_steps = seq.T();
  p.blink_qubit = seq.qubits;
  p.flag_qubit = flag_qubit;
  p.seq = seq;
  p.seq.qubits = seq.qubits + 1;
  if (seq.psi_in.size() > 0) {
    Vec in = Vec::Zero(2 * seq.psi_in.size());
    for (Eigen::Index i = 0; i < seq.psi_in.size(); ++i) in(2 * i) = seq.psi_in(i);
    p.seq.psi_in = in;
  }
  if (!seq.layout.empty()) p.seq.layout.push_back(seq.layout[flag_qubit]);
  // on for t = T_c + 1 .. 2 T_c + 1: (T+1)/2 of the T+1 steps
  p.seq.steps.push_back(make_gate("X", {p.blink_qubit}));
  for (int t = 0; t < p.compute_steps; ++t) p.seq.steps.push_back(make_gate("I", {p.blink_qubit}));
  p.on_steps = p.compute_steps + 1;
  return p;
}

double blink_expectation(const BlinkProgram& p) {
  const int nq = p.seq.qubits;
  const Eigen::Index mb = Eigen::Index{1} << (nq - 1 - p.blink_qubit);
  const Eigen::Index mf = Eigen::Index{1} << (nq - 1 - p.flag_qubit);
  auto states = replay(p.seq, p.seq.input());
  double acc = 0.0;
  for (const auto& s : states)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if ((i & mb) && (i & mf)) acc += std::norm(s(i));
  return acc / static_cast<double>(states.size());
}

}  // namespace hamsim
