// Breadth-first synthesis of single-qubit state preparations over {H, T, Tdg, S, X}.
#include <array>
#include <cmath>
#include <map>

#include "hamsim/clocklab.hpp"

namespace hamsim {

const std::vector<std::string>& synthesis_gate_set() {
  static const std::vector<std::string> set{"H", "T", "Tdg", "S", "X"};
  return set;
}

double state_distance(const Vec& v, const Vec& w) {
  double ov = std::abs(v.dot(w));  // conj(v) . w
  return std::sqrt(std::max(0.0, v.squaredNorm() + w.squaredNorm() - 2.0 * ov));
}

Vec rotation_target(double theta) {
  Vec t(2);
  t << std::cos(theta), std::sin(theta);
  return t;
}

Mat word_matrix(const std::vector<std::string>& word) {
  Mat U = Mat::Identity(2, 2);
  for (const auto& g : word) U = named_gate(g) * U;
  return U;
}

namespace {

using Key = std::array<long long, 4>;

// projective key: phase fixed so the leading component is real positive
Key key_of(const Vec& v) {
  cplx lead = std::abs(v(0)) > 1e-9 ? v(0) : v(1);
  cplx ph = std::conj(lead) / std::abs(lead);
  Key k;
  for (int i = 0; i < 2; ++i) {
    cplx c = v(i) * ph;
    k[2 * i] = std::llround(c.real() * 1e9);
    k[2 * i + 1] = std::llround(c.imag() * 1e9);
  }
  return k;
}

struct Node {
  Vec v;
  int parent;
  int gate;
};

}  // namespace

SynthResult synthesize_rotation(double theta, double delta, int max_length, std::size_t max_nodes) {
  if (!(delta > 0)) throw Error(Error::Kind::structural, "synthesis tolerance must be positive");
  const Vec target = rotation_target(theta);
  const auto& set = synthesis_gate_set();
  std::vector<Mat> mats;
  for (const auto& g : set) mats.push_back(named_gate(g));

  std::vector<Node> nodes;
  Vec start = Vec::Zero(2);
  start(0) = 1;
  nodes.push_back({start, -1, -1});
  std::map<Key, int> seen{{key_of(start), 0}};

  int best = 0;
  double best_d = state_distance(start, target);
  std::size_t lo = 0, hi = 1;
  for (int len = 0; best_d > delta && len < max_length && nodes.size() < max_nodes; ++len) {
    for (std::size_t i = lo; i < hi && nodes.size() < max_nodes; ++i)
      for (std::size_t g = 0; g < mats.size(); ++g) {
        Vec u = mats[g] * nodes[i].v;
        auto [it, fresh] = seen.try_emplace(key_of(u), static_cast<int>(nodes.size()));
        if (!fresh) continue;
        nodes.push_back({u, static_cast<int>(i), static_cast<int>(g)});
        double d = state_distance(u, target);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(nodes.size()) - 1;
        }
      }
    lo = hi;
    hi = nodes.size();
  }

  SynthResult r;
  r.distance = best_d;
  r.reached = best_d <= delta;
  r.explored = nodes.size();
  for (int i = best; nodes[i].parent >= 0; i = nodes[i].parent) r.word.insert(r.word.begin(), set[nodes[i].gate]);
  return r;
}

}  // namespace hamsim
