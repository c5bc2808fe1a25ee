#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamsim/opcore.hpp"

namespace hamsim {

// ---- gates and sequences ----
struct Gate {
  std::string name;         // named gate, or "U" for an explicit matrix
  std::vector<int> qubits;  // 1 or 2 register qubits, qubit 0 most significant
  Mat U;
};

Mat named_gate(const std::string& name);  // I X Y Z H S Sdg T Tdg CNOT SWAP
Gate make_gate(const std::string& name, std::vector<int> qubits);

struct GateSequence {
  int qubits = 0;
  std::vector<Gate> steps;
  Vec psi_in;                                // empty: |0...0>
  std::vector<std::pair<int, int>> layout;   // optional cell (x, y) per qubit

  int T() const { return static_cast<int>(steps.size()); }
  Vec input() const;
  void validate() const;  // unitarity 1e-12, qubit range, adjacency when a layout is given
};

void apply_gate(Vec& psi, const Gate& g, int qubits);
// |psi_t> for t = 0..T
std::vector<Vec> replay(const GateSequence& seq, const Vec& psi_in);

// ---- clock ----
struct ClockHamiltonian {
  int T = 0;
  int qdim = 1;
  SpMat H;  // clock (dimension T+1, one-hot) tensor register; index = t * qdim + q
};

ClockHamiltonian clock_hamiltonian(const GateSequence& seq);
// (T+1)^(-1/2) sum_t |t> (x) U_t...U_1 |psi_in>
Vec history_state(const GateSequence& seq, const Vec& psi_in);

struct GapRow {
  int T = 0;
  double gap = 0.0;
  double scaled = 0.0;       // gap * (T+1)^2
  double closed_form = 0.0;  // 2 (1 - cos(pi / (T+1)))
};
// identity gates on a trivial register: the clock alone
std::vector<GapRow> gap_scan(const std::vector<int>& Ts);

// ---- snake ----
enum class SnakeStepKind { move, turn_out, turn_along, turn_flip, turn_in };
std::string to_string(SnakeStepKind k);

struct SnakeStep {
  std::pair<int, int> from, to;  // head positions; boundary positions lie outside the triangle
  SnakeStepKind kind = SnakeStepKind::move;
  int row = 0;
  int dx = 0;  // physical direction of the row being swept; the logical move is always "right"
};

struct SnakeTurn {
  int row = 0;     // row being left
  bool right = true;  // turn at the diagonal (right) end or the left edge
  int first_step = 0;  // index of the first of its three steps
};

struct SnakePath {
  int b = 0;
  std::vector<std::pair<int, int>> cells;  // visiting order over {x + y < b}
  std::vector<SnakeStep> steps;
  std::vector<SnakeTurn> turns;
  std::vector<std::pair<int, int>> track() const;  // head positions, start cell first
};

SnakePath snake_path(int b);

// ---- rotation synthesis ----
struct SynthResult {
  std::vector<std::string> word;  // applied left to right
  double distance = 0.0;          // phase-invariant ||U|0> - target||
  bool reached = false;
  std::size_t explored = 0;
};

const std::vector<std::string>& synthesis_gate_set();  // H T Tdg S X
// min over phases of || e^{i phi} v - w ||
double state_distance(const Vec& v, const Vec& w);
Vec rotation_target(double theta);  // cos(theta)|0> + sin(theta)|1>
SynthResult synthesize_rotation(double theta, double delta, int max_length = 40, std::size_t max_nodes = 4000000);
Mat word_matrix(const std::vector<std::string>& word);

// ---- field programs ----
struct AngleField {
  int n = 0;
  std::vector<std::vector<double>> alpha, beta;  // n x n, in [0, delta2]
  double delta2 = 1.0;
  double eps = 0.1;

  double theta_alpha(int i, int j) const;  // arcsin sqrt(alpha / delta2)
  double theta_beta(int i, int j) const;
  double delta() const { return eps / (4.0 * delta2 * n * n); }
  void validate() const;
};

struct FieldProgram {
  GateSequence seq;
  // register qubit of each square cell (x, y): 2 * (y * n + x) for alpha, +1 for beta
  std::vector<std::pair<int, int>> cells;
  std::vector<double> targets;     // theta per qubit
  std::vector<double> word_error;  // synthesis distance per qubit
};

int field_qubit(int n, int x, int y, bool beta);
FieldProgram field_program(const AngleField& field, const SnakePath& layout);

// cells (x, y) with x, y < n k mapped to (x mod k, y mod k)
struct PeriodicLayout {
  int k = 0, n = 0;
  std::vector<std::pair<int, int>> cells;
  std::vector<std::pair<int, int>> source;
};
PeriodicLayout periodic_layout(int k, int n, int W, int H);
// program writing the k x k patch of `field` onto every cell of the layout
FieldProgram periodic_field_program(const AngleField& field, const PeriodicLayout& layout);

// ---- blink ----
struct BlinkProgram {
  GateSequence seq;  // original steps, one blink X, identity padding; blink qubit appended last
  int compute_steps = 0;
  int blink_qubit = 0;
  int flag_qubit = 0;
  int on_steps = 0;  // clock steps t with the blink qubit in |1>
};

// blink on for exactly (T+1)/2 of the T+1 clock steps, all after the computation is done
BlinkProgram blink_schedule(const GateSequence& seq, int flag_qubit);
// <Psi_0| |1><1|_blink (x) |1><1|_flag |Psi_0> on the history state
double blink_expectation(const BlinkProgram& p);

}  // namespace hamsim
