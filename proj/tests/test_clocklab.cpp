#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hamsim/clocklab.hpp"

using namespace hamsim;

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec k(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) k.segment(i * b.size(), b.size()) = a(i) * b;
  return k;
}

// full 2^n matrix of a gate, built from Kronecker products and swaps
Mat full_gate(const Gate& g, int n) {
  const Mat I2 = Mat::Identity(2, 2);
  if (g.qubits.size() == 1) {
    Mat m = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) m = kron(m, q == g.qubits[0] ? g.U : I2);
    return m;
  }
  // two-qubit gates only on n = 2 here
  REQUIRE(n == 2);
  if (g.qubits[0] == 0) return g.U;
  Mat sw = named_gate("SWAP");
  return sw * g.U * sw;
}

Mat dense_clock(const GateSequence& seq) {
  const int T = seq.T();
  const Eigen::Index q = Eigen::Index{1} << seq.qubits;
  Mat H = Mat::Zero((T + 1) * q, (T + 1) * q);
  const Mat Iq = Mat::Identity(q, q);
  for (int t = 1; t <= T; ++t) {
    Mat U = full_gate(seq.steps[t - 1], seq.qubits);
    H.block((t - 1) * q, (t - 1) * q, q, q) += Iq;
    H.block(t * q, t * q, q, q) += Iq;
    H.block(t * q, (t - 1) * q, q, q) -= U;
    H.block((t - 1) * q, t * q, q, q) -= U.adjoint();
  }
  Vec in = seq.input();
  H.block(0, 0, q, q) += Iq - in * in.adjoint();
  return H;
}

GateSequence random_circuit(std::mt19937& rng, int T) {
  const std::vector<std::string> one{"X", "Y", "Z", "H", "S", "T", "Tdg"};
  GateSequence seq;
  seq.qubits = 2;
  std::uniform_int_distribution<int> pick(0, 9), qb(0, 1);
  for (int t = 0; t < T; ++t) {
    int r = pick(rng);
    if (r < 7) seq.steps.push_back(make_gate(one[r], {qb(rng)}));
    else if (r < 9) {
      int c = qb(rng);
      seq.steps.push_back(make_gate("CNOT", {c, 1 - c}));
    } else seq.steps.push_back(make_gate("SWAP", {0, 1}));
  }
  return seq;
}

double lowest(const Mat& H) { return Eigen::SelfAdjointEigenSolver<Mat>(H).eigenvalues()(0); }

Vec target_product(const FieldProgram& fp) {
  Vec v = Vec::Ones(1);
  for (double th : fp.targets) v = kron(v, rotation_target(th));
  return v;
}

}  // namespace

TEST_CASE("clock Hamiltonian matches the dense oracle") {
  std::mt19937 rng(7);
  for (int T : {1, 2, 4, 7, 12}) {
    GateSequence seq = random_circuit(rng, T);
    ClockHamiltonian ch = clock_hamiltonian(seq);
    CHECK(ch.T == T);
    CHECK(ch.qdim == 4);
    Mat diff = Mat(ch.H) - dense_clock(seq);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("T = 1 identity: ground state is the history state") {
  GateSequence seq;
  seq.qubits = 1;
  seq.steps.push_back(make_gate("I", {0}));
  ClockHamiltonian ch = clock_hamiltonian(seq);
  Eigen::SelfAdjointEigenSolver<Mat> es{Mat(ch.H)};
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
  // register |1>: [[2,-1],[-1,1]], lowest (3 - sqrt 5)/2
  CHECK(std::abs(es.eigenvalues()(1) - (3.0 - std::sqrt(5.0)) / 2) < 1e-12);
  Vec h = history_state(seq, seq.input());
  Vec expect = Vec::Zero(4);
  expect(0) = expect(2) = 1.0 / std::sqrt(2.0);
  CHECK((h - expect).norm() < 1e-14);
  CHECK(std::abs(std::abs(es.eigenvectors().col(0).dot(h)) - 1.0) < 1e-12);
}

TEST_CASE("random circuits: history state is the unique ground state") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const int T = 1 + trial;
    GateSequence seq = random_circuit(rng, T);
    Mat H = dense_clock(seq);
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-10);
    CHECK(es.eigenvalues()(1) > 1e-4);
    Vec h = history_state(seq, seq.input());
    CHECK(std::abs(h.norm() - 1.0) < 1e-12);
    CHECK(std::abs(es.eigenvectors().col(0).dot(h)) >= 1.0 - 1e-10);
    CHECK(std::abs(cplx(h.dot(Mat(clock_hamiltonian(seq).H) * h)).real()) < 1e-12);
  }
}

TEST_CASE("T = 4 ground energy is zero") {
  std::mt19937 rng(4);
  GateSequence seq = random_circuit(rng, 4);
  CHECK(std::abs(lowest(dense_clock(seq))) < 1e-12);
  CHECK(std::abs(lowest(Mat(clock_hamiltonian(seq).H))) < 1e-12);
}

TEST_CASE("wrong input gives an orthogonal history state with energy 1/(T+1)") {
  std::mt19937 rng(11);
  GateSequence seq = random_circuit(rng, 5);
  Vec good = seq.input();
  Vec bad = Vec::Zero(4);
  bad(3) = 1;
  Vec hg = history_state(seq, good), hb = history_state(seq, bad);
  CHECK(std::abs(hg.dot(hb)) < 1e-12);
  Mat H = dense_clock(seq);
  CHECK(std::abs(cplx(hb.dot(H * hb)).real() - 1.0 / 6.0) < 1e-12);
}

TEST_CASE("gap scan follows the path Laplacian") {
  auto rows = gap_scan({1, 4, 16, 32, 64});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].gap == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rows[1].gap == doctest::Approx(0.3819660112501051).epsilon(1e-10));
  for (const auto& r : rows) CHECK(std::abs(r.gap - 2.0 * (1.0 - std::cos(std::numbers::pi / (r.T + 1)))) < 1e-10);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::abs(rows[i].scaled - pi2) / pi2 < 0.1);
  CHECK_THROWS_AS(gap_scan({0}), Error);
}

TEST_CASE("validation") {
  GateSequence seq;
  seq.qubits = 2;
  seq.steps.push_back(make_gate("H", {2}));
  CHECK_THROWS_AS(seq.validate(), Error);
  seq.steps = {make_gate("CNOT", {1, 1})};
  CHECK_THROWS_AS(seq.validate(), Error);
  Gate bad{"U", {0}, Mat::Ones(2, 2)};
  seq.steps = {bad};
  CHECK_THROWS_AS(seq.validate(), Error);
  seq.steps = {make_gate("CNOT", {0, 1})};
  seq.layout = {{0, 0}, {2, 0}};
  CHECK_THROWS_AS(seq.validate(), Error);
  seq.layout = {{0, 0}, {1, 0}};
  CHECK_NOTHROW(seq.validate());
  seq.psi_in = Vec::Ones(4);
  CHECK_THROWS_AS(seq.validate(), Error);
  CHECK_THROWS_AS(named_gate("Q"), Error);
  GateSequence empty;
  CHECK_THROWS_AS(clock_hamiltonian(empty), Error);
}

TEST_CASE("snake path covers the triangle with local steps") {
  for (int b = 1; b <= 7; ++b) {
    SnakePath p = snake_path(b);
    std::set<std::pair<int, int>> tri, seen(p.cells.begin(), p.cells.end());
    for (int y = 0; y < b; ++y)
      for (int x = 0; x + y < b; ++x) tri.insert({x, y});
    CHECK(p.cells.size() == tri.size());
    CHECK(seen == tri);
    CHECK(static_cast<int>(p.turns.size()) == b - 1);
    // every step moves the head by at most one lattice unit
    auto tr = p.track();
    REQUIRE(tr.size() == p.steps.size() + 1);
    for (std::size_t i = 0; i + 1 < tr.size(); ++i)
      CHECK(std::abs(tr[i].first - tr[i + 1].first) + std::abs(tr[i].second - tr[i + 1].second) <= 1);
    CHECK(p.steps.size() == tri.size() - 1 + 2 * (b - 1));
    for (const auto& t : p.turns) {
      for (int k = 0; k < 3; ++k) CHECK(p.steps[t.first_step + k].kind != SnakeStepKind::move);
    }
  }
  SnakePath p3 = snake_path(3);
  CHECK(p3.cells.size() == 6);
  CHECK(p3.turns.size() == 2);
  CHECK(p3.turns[0].right);
  CHECK_FALSE(p3.turns[1].right);
  CHECK(p3.cells.back() == std::pair{0, 2});
  CHECK(snake_path(1).cells.size() == 1);
  CHECK_THROWS_AS(snake_path(0), Error);
}

TEST_CASE("snake carries data along the visiting order") {
  // swaps between lattice-adjacent consecutive cells; the diagonal right turn breaks the chain
  SnakePath p = snake_path(3);
  GateSequence seq;
  seq.qubits = static_cast<int>(p.cells.size());
  seq.layout = p.cells;
  seq.steps.push_back(make_gate("X", {0}));
  for (int i = 0; i + 1 < seq.qubits; ++i) {
    auto a = p.cells[i], b = p.cells[i + 1];
    if (std::abs(a.first - b.first) + std::abs(a.second - b.second) == 1) seq.steps.push_back(make_gate("SWAP", {i, i + 1}));
  }
  CHECK_NOTHROW(seq.validate());
  auto states = replay(seq, seq.input());
  const Vec& last = states.back();
  int hot = -1;
  for (Eigen::Index i = 0; i < last.size(); ++i)
    if (std::abs(last(i)) > 0.5) hot = static_cast<int>(i);
  REQUIRE(hot >= 0);
  // |1> stops at the row end (2, 0), qubit 2 of 6
  CHECK(hot == 1 << (6 - 1 - 2));
  CHECK(seq.T() == 5);
}

TEST_CASE("rotation synthesis") {
  auto r0 = synthesize_rotation(0.0, 1e-3);
  CHECK(r0.word.empty());
  CHECK(r0.reached);
  auto rx = synthesize_rotation(std::numbers::pi / 2, 1e-3);
  CHECK(rx.word == std::vector<std::string>{"X"});
  auto rh = synthesize_rotation(std::numbers::pi / 4, 1e-3);
  CHECK(rh.word == std::vector<std::string>{"H"});
  auto r7 = synthesize_rotation(std::numbers::pi / 7, 0.01);
  CHECK(r7.reached);
  CHECK(r7.word.size() <= 40);
  // replay the word independently
  Vec v = Vec::Zero(2);
  v(0) = 1;
  for (const auto& g : r7.word) v = named_gate(g) * v;
  Vec t = rotation_target(std::numbers::pi / 7);
  double d = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(v.dot(t))));
  CHECK(std::abs(d - r7.distance) < 1e-9);
  CHECK(d <= 0.01);
  CHECK(state_distance(rotation_target(0.3), std::polar(1.0, 0.7) * rotation_target(0.3)) < 1e-7);
  CHECK_THROWS_AS(synthesize_rotation(0.1, 0.0), Error);
  auto starved = synthesize_rotation(0.1, 1e-12, 3);
  CHECK_FALSE(starved.reached);
}

TEST_CASE("field programs stay within the per-cell tolerance") {
  for (int n : {1, 2}) {
    AngleField f;
    f.n = n;
    f.alpha.assign(n, std::vector<double>(n));
    f.beta.assign(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        f.alpha[i][j] = 0.1 + 0.2 * i + 0.3 * j;
        f.beta[i][j] = 0.9 - 0.25 * i - 0.15 * j;
      }
    const int b = 2 * n - 1;
    FieldProgram fp = field_program(f, snake_path(b));
    REQUIRE(fp.seq.qubits == 2 * n * n);
    CHECK(static_cast<int>(fp.cells.size()) == n * n);
    double total = 0.0;
    for (double e : fp.word_error) {
      CHECK(e <= f.delta());
      total += e;
    }
    CHECK(total <= 2 * n * n * f.delta());
    CHECK(total <= 8 * f.delta());
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        CHECK(fp.targets[field_qubit(n, x, y, false)] == doctest::Approx(std::asin(std::sqrt(f.alpha[x][y]))));
        CHECK(fp.targets[field_qubit(n, x, y, true)] == doctest::Approx(std::asin(std::sqrt(f.beta[x][y]))));
      }
    auto states = replay(fp.seq, fp.seq.input());
    CHECK(state_distance(states.back(), target_product(fp)) <= total + 1e-12);
  }
  AngleField f;
  f.n = 2;
  f.alpha = f.beta = {{0.1, 0.2}, {0.3, 0.4}};
  CHECK_THROWS_AS(field_program(f, snake_path(2)), Error);
  f.alpha[0][0] = 1.5;
  CHECK_THROWS_AS(field_program(f, snake_path(3)), Error);
}

TEST_CASE("zero field gives the identity program") {
  AngleField f;
  f.n = 1;
  f.alpha = f.beta = {{0.0}};
  FieldProgram fp = field_program(f, snake_path(1));
  CHECK(fp.seq.T() == 0);
}

TEST_CASE("blink expectation is half the flag population") {
  auto one_qubit = [](const std::vector<std::string>& gates) {
    GateSequence s;
    s.qubits = 1;
    for (const auto& g : gates) s.steps.push_back(make_gate(g, {0}));
    return s;
  };
  CHECK(blink_expectation(blink_schedule(one_qubit({"X"}), 0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(blink_expectation(blink_schedule(one_qubit({"I"}), 0))) < 1e-15);
  auto p = blink_schedule(one_qubit({"H", "I", "I", "I"}), 0);
  CHECK(p.seq.T() == 9);
  CHECK(p.on_steps == 5);
  CHECK(std::abs(blink_expectation(p) - 0.25) < 1e-8);
  CHECK_THROWS_AS(blink_schedule(one_qubit({"X"}), 1), Error);

  for (int n : {1, 2}) {
    AngleField f;
    f.n = n;
    f.alpha.assign(n, std::vector<double>(n, 0.35));
    f.beta.assign(n, std::vector<double>(n, 0.6));
    FieldProgram fp = field_program(f, snake_path(2 * n - 1));
    const int flag = field_qubit(n, n - 1, 0, false);
    BlinkProgram bp = blink_schedule(fp.seq, flag);
    CHECK(bp.seq.T() == 2 * fp.seq.T() + 1);
    CHECK(2 * bp.on_steps == bp.seq.T() + 1);
    // flag population after the computation, from the program replay
    auto st = replay(fp.seq, fp.seq.input()).back();
    const Eigen::Index m = Eigen::Index{1} << (fp.seq.qubits - 1 - flag);
    double pop = 0.0;
    for (Eigen::Index i = 0; i < st.size(); ++i)
      if (i & m) pop += std::norm(st(i));
    CHECK(std::abs(blink_expectation(bp) - pop / 2) < 1e-12);
    CHECK(std::abs(pop - 0.35) <= 2 * f.delta());
  }
}

TEST_CASE("periodic layout") {
  PeriodicLayout p = periodic_layout(2, 3, 7, 6);
  CHECK(p.cells.size() == 36);
  std::map<std::pair<int, int>, int> hits;
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    CHECK(p.source[i] == std::pair{p.cells[i].first % 2, p.cells[i].second % 2});
    ++hits[p.source[i]];
  }
  CHECK(hits.size() == 4);
  for (auto& [k, v] : hits) CHECK(v == 9);
  CHECK_THROWS_AS(periodic_layout(2, 4, 7, 6), Error);

  AngleField f;
  f.n = 1;
  f.alpha = {{0.3}};
  f.beta = {{0.7}};
  FieldProgram fp = periodic_field_program(f, periodic_layout(1, 2, 2, 2));
  REQUIRE(fp.seq.qubits == 8);
  for (std::size_t q = 0; q < 8; ++q)
    CHECK(fp.targets[q] == doctest::Approx(std::asin(std::sqrt(q % 2 ? 0.7 : 0.3))));
  double total = 0.0;
  for (double e : fp.word_error) total += e;
  auto st = replay(fp.seq, fp.seq.input()).back();
  CHECK(state_distance(st, target_product(fp)) <= total + 1e-12);
  f.n = 2;
  f.alpha = f.beta = {{0, 0}, {0, 0}};
  CHECK_THROWS_AS(periodic_field_program(f, periodic_layout(1, 2, 2, 2)), Error);
}
