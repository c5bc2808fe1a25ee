#include "doctest.h"

#include <cmath>

#include "hamsim/simcheck.hpp"

using namespace hamsim;

namespace {

HamiltonianExpr qubits(std::initializer_list<const char*> ids) {
  HamiltonianExpr h;
  for (auto id : ids) h.system.add({id, 2, {}});
  return h;
}

Mat word(const char* w) {
  InteractionParams p;
  p.word = w;
  return named_interaction("pauli-word", p);
}

Vec ket(std::initializer_list<double> a) {
  Vec v(a.size());
  int i = 0;
  for (double x : a) v(i++) = x;
  return v;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("self simulation") {
  auto h = qubits({"p", "q"});
  h.add_named("heisenberg", {"p", "q"}, 0.7);
  h.add_term({{"q"}, word("Z"), 0.3, ""});
  auto v = LocalIsometry::identity(h.system);
  double norm = op_norm(assemble(h));
  auto w = low_energy_isometry(h, norm + 1, v, h.system);
  CHECK((w.Vt - Mat::Identity(4, 4)).norm() < 1e-12);
  auto rep = verify_simulation(h, h, norm + 1, 0.0, 0.0, v);
  CHECK(rep.eta_achieved == 0.0);
  CHECK(rep.eps_achieved == 0.0);
  CHECK(rep.pass);
  CHECK(rep.low_dim == 4);
}

TEST_CASE("rank mismatch below the ground energy") {
  auto h = qubits({"p", "q"});
  h.add_named("heisenberg", {"p", "q"}, 1.0);
  auto v = LocalIsometry::identity(h.system);
  try {
    low_energy_isometry(h, -3.5, v, h.system);
    FAIL("expected rank mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::rank_mismatch);
  }
}

TEST_CASE("perturbed instance fails with a large epsilon") {
  auto h = qubits({"p", "q"});
  h.add_named("heisenberg", {"p", "q"}, 1.0);
  auto hp = h;
  hp.add_term({{"p"}, word("X"), 10.0, ""});
  auto v = LocalIsometry::identity(h.system);
  auto rep = verify_simulation(hp, h, 100.0, 1.0, 0.1, v);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.pass_eps);
  // oracle: restriction is the whole space and V = I, so eps is the perturbation norm up to the polar rotation
  CHECK(rep.eps_achieved > 0.1);
  CHECK(rep.eps_achieved <= 10.0 + 1e-9);
}

TEST_CASE("subdivision witness sits close to V") {
  // 4 qubits: 1,2 logical, a,b mediators; hand-built gadget at delta = 1e4
  const double D = 1e4, kap = std::sqrt(2.0);
  auto h = qubits({"1", "2", "a", "b"});
  h.add_named("heisenberg", {"a", "b"}, D);
  h.add_named("heisenberg", {"1", "a"}, kap * std::sqrt(D));
  h.add_named("heisenberg", {"2", "b"}, kap * std::sqrt(D));
  h.constant = 3 * D + 1.5 * 2;
  LocalIsometry v;
  v.factors.push_back({"1", {"1"}, Mat::Identity(2, 2)});
  v.factors.push_back({"2", {"2"}, Mat::Identity(2, 2)});
  v.ancillas.push_back({{"a", "b"}, ket({0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0})});
  auto t = qubits({"1", "2"});
  t.add_named("heisenberg", {"1", "2"}, 1.0);
  Mat V = v.matrix(t.system, h.system);
  auto w = low_energy_isometry(h, D / 2, V);
  CHECK(op_norm(w.Vt - V) <= 0.05);
  // polar witness property
  Mat P = w.U * w.U.adjoint();
  CHECK((w.Vt * w.Vt.adjoint() - P).norm() <= 1e-10);
  auto rep = verify_simulation(h, t, D / 2, 0.05, 0.1, v);
  CHECK(rep.pass);
  CHECK(rep.eta_achieved == doctest::Approx(op_norm(w.Vt - V)).epsilon(1e-9));
}

TEST_CASE("isometry structure checks") {
  auto t = qubits({"x"});
  auto s = qubits({"x", "y"});
  auto v = LocalIsometry::identity(t.system);
  CHECK_THROWS_AS(v.matrix(t.system, s.system), Error);
  v.ancillas.push_back({{"y"}, ket({1, 1})});
  CHECK_THROWS_AS(v.matrix(t.system, s.system), Error);
  v.ancillas.back().state = ket({0, 1});
  Mat m = v.matrix(t.system, s.system);
  CHECK(m(1, 0) == cplx(1.0));
  CHECK(m(3, 1) == cplx(1.0));
  CHECK(std::abs(m.norm() - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("first order delta formula") {
  CHECK(first_order_required_delta(1, 1, 1) == 16.0);
  CHECK(first_order_required_delta(0, 0.3, 0.2) == 0.0);
  CHECK(first_order_required_delta(4, 0.1, 0.5) == doctest::Approx(1344.0).epsilon(1e-14));
  CHECK_THROWS_AS(first_order_required_delta(1, 0, 1), Error);
}

TEST_CASE("first order builder") {
  auto h0 = qubits({"p", "q"});
  InteractionParams pr;
  pr.index = 1;
  h0.add_term({{"p"}, named_interaction("basis-projector", pr), 1.0, "basis-projector"});
  auto h1 = qubits({"p", "q"});
  h1.add_term({{"q"}, word("X"), 0.3, ""});
  auto b = build_first_order(h0, h1, 10.0);
  CHECK(b.H.terms.size() == 2);
  CHECK(b.H.terms[0].coeff == 10.0);
  auto t = qubits({"q"});
  t.add_term({{"q"}, word("X"), 0.3, ""});
  LocalIsometry v;
  v.factors.push_back({"q", {"q"}, Mat::Identity(2, 2)});
  v.ancillas.push_back({{"p"}, ket({1, 0})});
  auto rep = verify_simulation(b.H, t, 5.0, 1e-9, 1e-9, v);
  CHECK(rep.pass);
  CHECK(rep.sim_low(0) == doctest::Approx(-0.3));
  CHECK(rep.sim_low(1) == doctest::Approx(0.3));

  auto zero = qubits({"p", "q"});
  auto bz = build_first_order(h0, zero, 10.0);
  auto ls = low_space(bz.H, 5.0);
  CHECK(ls.below.eigenvalues.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ls.below.eigenvalues.size() == 2);

  auto bad = qubits({"p", "q"});
  bad.add_term({{"p"}, named_interaction("basis-projector", pr), 0.5, ""});
  CHECK_THROWS_AS(build_first_order(bad, h1, 10.0), Error);
  auto warn = build_first_order(h0, h1, 1.0, 0.01, 0.01);
  CHECK(warn.warnings.size() == 1);
}

TEST_CASE("first order error decays like 1/delta") {
  auto h0 = qubits({"p", "q"});
  InteractionParams pr;
  pr.index = 1;
  h0.add_term({{"p"}, named_interaction("basis-projector", pr), 1.0, ""});
  auto h1 = qubits({"p", "q"});
  h1.add_term({{"p", "q"}, word("XX"), 0.3, ""});
  h1.add_term({{"q"}, word("Z"), 0.2, ""});
  auto t = qubits({"q"});
  t.add_term({{"q"}, word("Z"), 0.2, ""});
  LocalIsometry v;
  v.factors.push_back({"q", {"q"}, Mat::Identity(2, 2)});
  v.ancillas.push_back({{"p"}, ket({1, 0})});
  std::vector<double> ds{1e2, 1e3, 1e4}, es;
  for (double d : ds) {
    auto b = build_first_order(h0, h1, d);
    es.push_back(verify_simulation(b.H, t, d / 2, 1.0, 1.0, v).eps_achieved);
  }
  CHECK(es[0] > es[1]);
  CHECK(es[1] > es[2]);
  CHECK(slope(ds, es) <= -0.8);
  // second-order oracle: |0.3|^2 / delta per branch
  CHECK(es[2] == doctest::Approx(0.09 / 1e4).epsilon(0.05));
}

TEST_CASE("synthetic H_A single site") {
  for (double a : {0.0, 0.5, 1.0}) {
    CouplingGrid g;
    g.n = 1;
    g.alpha = {{a}};
    g.beta = {{0.25}};
    auto ha = synthetic_HA(g, 1, 1);
    Vec phi = ha.states[0];
    CHECK(std::abs((phi.adjoint() * ha.P1 * phi)(0).real() - a) < 1e-14);
    CHECK(std::abs((phi.adjoint() * ha.P2 * phi)(0).real() - 0.25) < 1e-14);
    CHECK(std::abs((phi.adjoint() * ha.P3 * phi)(0).real()) < 1e-15);
    // gap from direct diagonalization of the site term
    Eigen::SelfAdjointEigenSolver<Mat> es(ha.HA.terms[0].op);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-14);
    CHECK(std::abs(es.eigenvalues()(1) - 1.0) < 1e-14);
  }
  CouplingGrid bad;
  bad.n = 1;
  bad.alpha = {{1.5}};
  bad.beta = {{0}};
  CHECK_THROWS_AS(synthetic_HA(bad, 1, 1), Error);
}

TEST_CASE("synthetic H_A outside the corner") {
  CouplingGrid g;
  g.n = 1;
  g.alpha = {{0.5}};
  g.beta = {{0.5}};
  auto ha = synthetic_HA(g, 2, 1);
  Vec out = ha.states[1];
  CHECK(std::abs((out.adjoint() * ha.P3 * out)(0).real() - 1.0) < 1e-15);
  auto s = low_spectrum(ha.HA, 2);
  CHECK(std::abs(s.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(s.eigenvalues(1) - 1.0) < 1e-12);
}

TEST_CASE("H_AB with a single cell has no edges") {
  CouplingGrid g;
  g.n = 1;
  g.alpha = {{0.5}};
  g.beta = {{0.5}};
  auto ha = synthetic_HA(g, 1, 1);
  auto b = assemble_HAB(ha.HA, ha.P1, ha.P2, ha.P3, 10.0, 1.0, 1, 1, 1);
  for (const auto& t : b.H.terms) CHECK(t.support.size() <= 2);
  auto s = low_spectrum(b.H, 4);
  CHECK(std::abs(s.eigenvalues(0)) < 1e-12);
  CHECK(std::abs(s.eigenvalues(1)) < 1e-12);
  CHECK(std::abs(s.eigenvalues(2) - 10.0) < 1e-12);
}

TEST_CASE("H_AB assembly on a 2x2 grid") {
  CouplingGrid g;
  g.n = 2;
  g.alpha = {{0.5, 0.25}, {0.25, 0.5}};
  g.beta = {{0.75, 0.5}, {0.5, 0.25}};
  const double eps = 0.1, eta = 0.1;
  double d1 = hab_delta1(1.0, 2, 2, eps, eta);
  CHECK(d1 == doctest::Approx(200.0));
  auto ha = synthetic_HA(g, 2, 2);
  auto b = assemble_HAB(ha.HA, ha.P1, ha.P2, ha.P3, d1, 1.0, 2, 2, 2, eps, eta);
  CHECK(b.warnings.empty());
  CHECK(b.H.system.total_dim() == 10000);
  auto t = corner_target(g);
  auto rep = verify_simulation(b.H, t, d1 / 2, eta, eps, corner_isometry(ha));
  CHECK(rep.low_dim == 16);
  CHECK(rep.pass);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(rep.sim_low(k) - rep.target_eigs(k)) <= eps);
}

TEST_CASE("H_AB with zero couplings") {
  CouplingGrid g;
  g.n = 2;
  g.alpha = {{0, 0}, {0, 0}};
  g.beta = g.alpha;
  auto ha = synthetic_HA(g, 2, 2);
  auto b = assemble_HAB(ha.HA, ha.P1, ha.P2, ha.P3, 200.0, 1.0, 2, 2, 2);
  auto ls = low_space(b.H, 100.0);
  REQUIRE(ls.below.eigenvalues.size() == 16);
  CHECK(ls.below.eigenvalues.cwiseAbs().maxCoeff() < 1e-9);
}
