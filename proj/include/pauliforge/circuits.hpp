#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pauliforge/channels.hpp"
#include "pauliforge/pauli_algebra.hpp"
#include "pauliforge/types.hpp"

namespace pauliforge {

// Qubit convention used throughout: qubit 0 is the most significant bit of
// the computational-basis index, so |q0 q1 ... q_{n-1}> reads left to right.

enum class GateKind { X, Y, Z, H, RX, RY, RZ };

bool is_rotation(GateKind k);
std::string gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

struct Control {
  int qubit = 0;
  int value = 1;  // fire when the control qubit reads this bit
  friend bool operator==(const Control&, const Control&) = default;
};

struct Gate {
  GateKind kind = GateKind::X;
  double angle = 0.0;  // rotations only
  int target = 0;
  std::vector<Control> controls;

  static Gate x(int t) { return {GateKind::X, 0.0, t, {}}; }
  static Gate y(int t) { return {GateKind::Y, 0.0, t, {}}; }
  static Gate z(int t) { return {GateKind::Z, 0.0, t, {}}; }
  static Gate h(int t) { return {GateKind::H, 0.0, t, {}}; }
  static Gate rx(int t, double a) { return {GateKind::RX, a, t, {}}; }
  static Gate ry(int t, double a) { return {GateKind::RY, a, t, {}}; }
  static Gate rz(int t, double a) { return {GateKind::RZ, a, t, {}}; }
  static Gate cx(int c, int t) { return {GateKind::X, 0.0, t, {{c, 1}}}; }
  static Gate cy(int c, int t) { return {GateKind::Y, 0.0, t, {{c, 1}}}; }
  static Gate cz(int c, int t) { return {GateKind::Z, 0.0, t, {{c, 1}}}; }

  Gate with_control(int q, int v = 1) const;
};

// 2x2 matrix of the uncontrolled gate body. Rotation conventions:
// RZ(a) = diag(e^{-ia/2}, e^{ia/2}), RY(a) = [[cos a/2, -sin a/2],
// [sin a/2, cos a/2]], RX(a) = exp(-i a X / 2).
Matrix2cd gate_matrix(GateKind kind, double angle = 0.0);

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  // Ancilla qubits as a trailing half-open range [first, last); empty when
  // first == last. simulate_channel traces these out.
  std::pair<int, int> ancilla_range{0, 0};

  void add(Gate g);
  int n_ancilla() const { return ancilla_range.second - ancilla_range.first; }
  int n_main() const { return n_qubits - n_ancilla(); }
  Circuit inverse() const;  // gate-wise inverse, reversed order
};

// Dense statevector evolution; preserves norm to 1e-12.
VectorXcd simulate_unitary(const Circuit& c, VectorXcd psi);

// Full unitary of the circuit (columns = images of basis states).
MatrixXcd circuit_unitary(const Circuit& c);

// Evolves rho_main (x) |0..0><0..0| on the ancillas and traces the ancillas
// back out. The density-matrix path is capped at 8 total qubits.
DensityMatrix simulate_channel(const Circuit& c, const DensityMatrix& rho_main);

// Linear extension of simulate_channel to arbitrary input matrices, usable
// as a ChannelFn for Choi/CP probes.
MatrixXcd simulate_channel_matrix(const Circuit& c, const MatrixXcd& m_main);
ChannelFn circuit_channel(const Circuit& c);

// Gate-local noise: a depolarizing kick of strength lambda_1q after every
// single-qubit gate and lambda_2q (jointly on the touched qubits) after
// every controlled gate, plus classical readout flips with probability
// epsilon per measured bit (applied by the tomography sampler, not here).
struct NoiseModel {
  double lambda_1q = 0.0;
  double lambda_2q = 0.0;
  double epsilon = 0.0;

  void validate() const;
  bool is_zero() const { return lambda_1q == 0.0 && lambda_2q == 0.0; }
};

DensityMatrix apply_noise(const Circuit& c, const NoiseModel& nm,
                          const DensityMatrix& rho_main);
MatrixXcd apply_noise_matrix(const Circuit& c, const NoiseModel& nm,
                             const MatrixXcd& m_main);

// Depolarize the given qubits of an n-qubit density matrix in place:
// rho -> (1-lambda) rho + lambda * (I/2^m (x) tr_qubits rho).
void depolarize_qubits(MatrixXcd& rho, const std::vector<int>& qubits,
                       double lambda, int n_qubits);

// --- state preparation and channel synthesis ---------------------------

// Rotation angles of the three-rotation two-qubit preparation of
// sum sqrt(k_g)|g>: cos(theta0/2) = sqrt(k0+k1),
// tan((theta1+theta2)/2) = sqrt(k1/k0), tan((theta2-theta1)/2) = sqrt(k3/k2),
// with 0/0 ratios read as 0. Angles are stored in [0, 2pi).
struct AngleTriple {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

AngleTriple one_qubit_angles(const PauliProbVector& k);

// Two-qubit circuit realizing sum sqrt(k_g)|g> from |00> with exactly the
// three rotations of `angles`: RY(theta0) on the high qubit, then a
// uniformly controlled RY on the low qubit written as CX RY(theta1) CX
// RY(theta2).
Circuit three_rotation_prep(const AngleTriple& angles);

// RY/CX gate sequence mapping |0..0> on `qubits` (qubits[0] = most
// significant) to the state with the given real nonnegative amplitudes.
std::vector<Gate> amplitude_encoding_gates(const VectorXd& amplitudes,
                                           const std::vector<int>& qubits);

// Circuit on 2N qubits preparing sum_g sqrt(k_g)|g> from |0..0>, RY and CX
// gates only.
Circuit prepare_ancilla_state(const PauliProbVector& k);

// Full channel circuit on N main + 2N ancilla qubits: ancilla preparation
// followed by CX (low ancilla bit) and CY (high ancilla bit) onto each main
// qubit. Tracing the ancillas implements the Pauli channel exactly.
Circuit synthesize_channel_circuit(const PauliProbVector& k, int n_qubits);

}  // namespace pauliforge
