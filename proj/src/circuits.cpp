#include "pauliforge/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace pauliforge {

namespace {

constexpr int kMaxStatevectorQubits = 12;
constexpr int kMaxDensityQubits = 8;

std::int64_t bit_mask(int qubit, int n_qubits) {
  return std::int64_t(1) << (n_qubits - 1 - qubit);
}

void check_gate_indices(const Gate& g, int n_qubits) {
  auto ok = [&](int q) { return q >= 0 && q < n_qubits; };
  if (!ok(g.target)) throw std::invalid_argument("Gate: target out of range");
  for (const Control& c : g.controls) {
    if (!ok(c.qubit)) throw std::invalid_argument("Gate: control out of range");
    if (c.qubit == g.target) {
      throw std::invalid_argument("Gate: control collides with target");
    }
    if (c.value != 0 && c.value != 1) {
      throw std::invalid_argument("Gate: control value must be 0 or 1");
    }
  }
  if (is_rotation(g.kind) && !std::isfinite(g.angle)) {
    throw std::invalid_argument("Gate: non-finite angle");
  }
}

// Left-multiply the (controlled) gate into columns of a matrix viewed as a
// collection of statevectors, i.e. M <- U M restricted to the target bit.
void apply_gate_left(MatrixXcd& m, const Gate& g, int n_qubits) {
  Matrix2cd u = gate_matrix(g.kind, g.angle);
  std::int64_t dim = std::int64_t(1) << n_qubits;
  std::int64_t tmask = bit_mask(g.target, n_qubits);
  std::int64_t cmask = 0, cvals = 0;
  for (const Control& c : g.controls) {
    std::int64_t b = bit_mask(c.qubit, n_qubits);
    cmask |= b;
    if (c.value) cvals |= b;
  }
  for (std::int64_t i = 0; i < dim; ++i) {
    if (i & tmask) continue;
    if ((i & cmask) != cvals) continue;
    std::int64_t j = i | tmask;
    for (std::int64_t col = 0; col < m.cols(); ++col) {
      cxd a = m(i, col), b = m(j, col);
      m(i, col) = u(0, 0) * a + u(0, 1) * b;
      m(j, col) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

// M <- M U^dagger, the column-index side of rho -> U rho U^dagger.
void apply_gate_right_adjoint(MatrixXcd& m, const Gate& g, int n_qubits) {
  Matrix2cd u = gate_matrix(g.kind, g.angle);
  std::int64_t dim = std::int64_t(1) << n_qubits;
  std::int64_t tmask = bit_mask(g.target, n_qubits);
  std::int64_t cmask = 0, cvals = 0;
  for (const Control& c : g.controls) {
    std::int64_t b = bit_mask(c.qubit, n_qubits);
    cmask |= b;
    if (c.value) cvals |= b;
  }
  for (std::int64_t j = 0; j < dim; ++j) {
    if (j & tmask) continue;
    if ((j & cmask) != cvals) continue;
    std::int64_t k = j | tmask;
    for (std::int64_t row = 0; row < m.rows(); ++row) {
      cxd a = m(row, j), b = m(row, k);
      m(row, j) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      m(row, k) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

void conjugate_gate(MatrixXcd& rho, const Gate& g, int n_qubits) {
  apply_gate_left(rho, g, n_qubits);
  apply_gate_right_adjoint(rho, g, n_qubits);
}

// Trace out the trailing qubits [n_keep, n): block-diagonal sum.
MatrixXcd trace_out_trailing(const MatrixXcd& rho, int n_qubits, int n_keep) {
  std::int64_t d_keep = std::int64_t(1) << n_keep;
  std::int64_t d_rest = std::int64_t(1) << (n_qubits - n_keep);
  MatrixXcd out = MatrixXcd::Zero(d_keep, d_keep);
  for (std::int64_t i = 0; i < d_keep; ++i) {
    for (std::int64_t j = 0; j < d_keep; ++j) {
      cxd s = 0.0;
      for (std::int64_t a = 0; a < d_rest; ++a) {
        s += rho(i * d_rest + a, j * d_rest + a);
      }
      out(i, j) = s;
    }
  }
  return out;
}

void check_trailing_ancillas(const Circuit& c) {
  auto [first, last] = c.ancilla_range;
  if (first == last) return;
  if (first < 0 || last != c.n_qubits || first > last) {
    throw std::invalid_argument(
        "Circuit: ancilla_range must be a trailing block [first, n_qubits)");
  }
}

MatrixXcd run_density(const Circuit& c, const MatrixXcd& m_main,
                      const NoiseModel* nm) {
  check_trailing_ancillas(c);
  if (c.n_qubits > kMaxDensityQubits) {
    throw std::invalid_argument("density-matrix simulation capped at 8 qubits");
  }
  int n_main = c.n_main();
  std::int64_t d_main = std::int64_t(1) << n_main;
  if (m_main.rows() != d_main || m_main.cols() != d_main) {
    throw std::invalid_argument("simulate_channel: dimension mismatch");
  }
  std::int64_t d_anc = std::int64_t(1) << c.n_ancilla();
  std::int64_t d = d_main * d_anc;
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  // rho_main (x) |0..0><0..0| with main qubits on the significant side.
  for (std::int64_t i = 0; i < d_main; ++i) {
    for (std::int64_t j = 0; j < d_main; ++j) {
      rho(i * d_anc, j * d_anc) = m_main(i, j);
    }
  }
  for (const Gate& g : c.gates) {
    check_gate_indices(g, c.n_qubits);
    conjugate_gate(rho, g, c.n_qubits);
    if (nm != nullptr && !nm->is_zero()) {
      std::vector<int> touched{g.target};
      for (const Control& ctl : g.controls) touched.push_back(ctl.qubit);
      double lambda = touched.size() == 1 ? nm->lambda_1q : nm->lambda_2q;
      depolarize_qubits(rho, touched, lambda, c.n_qubits);
    }
  }
  return trace_out_trailing(rho, c.n_qubits, n_main);
}

}  // namespace

bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

std::string gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
  }
  throw std::logic_error("gate_kind_name: bad enum");
}

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "x") return GateKind::X;
  if (name == "y") return GateKind::Y;
  if (name == "z") return GateKind::Z;
  if (name == "h") return GateKind::H;
  if (name == "rx") return GateKind::RX;
  if (name == "ry") return GateKind::RY;
  if (name == "rz") return GateKind::RZ;
  throw std::invalid_argument("unknown gate kind '" + name + "'");
}

Gate Gate::with_control(int q, int v) const {
  Gate g = *this;
  g.controls.push_back({q, v});
  return g;
}

Matrix2cd gate_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  Matrix2cd m;
  switch (kind) {
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, cxd(0, -1), cxd(0, 1), 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::H: {
      double r = 1.0 / std::numbers::sqrt2;
      m << r, r, r, -r;
      break;
    }
    case GateKind::RX: m << c, cxd(0, -s), cxd(0, -s), c; break;
    case GateKind::RY: m << c, -s, s, c; break;
    case GateKind::RZ: m << cxd(c, -s), 0, 0, cxd(c, s); break;
  }
  return m;
}

void Circuit::add(Gate g) {
  check_gate_indices(g, n_qubits);
  gates.push_back(std::move(g));
}

Circuit Circuit::inverse() const {
  Circuit inv;
  inv.n_qubits = n_qubits;
  inv.ancilla_range = ancilla_range;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    if (is_rotation(g.kind)) g.angle = -g.angle;
    inv.gates.push_back(std::move(g));
  }
  return inv;
}

VectorXcd simulate_unitary(const Circuit& c, VectorXcd psi) {
  if (c.n_qubits > kMaxStatevectorQubits) {
    throw std::invalid_argument("statevector simulation capped at 12 qubits");
  }
  std::int64_t dim = std::int64_t(1) << c.n_qubits;
  if (psi.size() != dim) {
    throw std::invalid_argument("simulate_unitary: dimension mismatch");
  }
  MatrixXcd m = std::move(psi);
  for (const Gate& g : c.gates) {
    check_gate_indices(g, c.n_qubits);
    apply_gate_left(m, g, c.n_qubits);
  }
  return m.col(0);
}

MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.n_qubits > kMaxDensityQubits) {
    throw std::invalid_argument("circuit_unitary capped at 8 qubits");
  }
  std::int64_t dim = std::int64_t(1) << c.n_qubits;
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  for (const Gate& g : c.gates) {
    check_gate_indices(g, c.n_qubits);
    apply_gate_left(u, g, c.n_qubits);
  }
  return u;
}

DensityMatrix simulate_channel(const Circuit& c, const DensityMatrix& rho_main) {
  return DensityMatrix(run_density(c, rho_main.matrix(), nullptr));
}

MatrixXcd simulate_channel_matrix(const Circuit& c, const MatrixXcd& m_main) {
  return run_density(c, m_main, nullptr);
}

ChannelFn circuit_channel(const Circuit& c) {
  Circuit copy = c;
  return [copy](const MatrixXcd& m) { return simulate_channel_matrix(copy, m); };
}

void NoiseModel::validate() const {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(lambda_1q, 0.0, 1.0) || !in(lambda_2q, 0.0, 1.0) ||
      !in(epsilon, 0.0, 0.5)) {
    throw std::invalid_argument(
        "NoiseModel: lambdas in [0,1], epsilon in [0, 1/2]");
  }
}

void depolarize_qubits(MatrixXcd& rho, const std::vector<int>& qubits,
                       double lambda, int n_qubits) {
  if (lambda == 0.0) return;
  int m = static_cast<int>(qubits.size());
  std::int64_t terms = std::int64_t(1) << (2 * m);
  MatrixXcd mixed = MatrixXcd::Zero(rho.rows(), rho.cols());
  for (std::int64_t t = 0; t < terms; ++t) {
    MatrixXcd conj = rho;
    std::int64_t rest = t;
    for (int qi = m - 1; qi >= 0; --qi) {
      int p = static_cast<int>(rest & 3);
      rest >>= 2;
      if (p == 0) continue;
      Gate g{p == 1 ? GateKind::X : (p == 2 ? GateKind::Y : GateKind::Z), 0.0,
             qubits[qi], {}};
      conjugate_gate(conj, g, n_qubits);
    }
    mixed += conj;
  }
  rho = (1.0 - lambda) * rho + (lambda / static_cast<double>(terms)) * mixed;
}

DensityMatrix apply_noise(const Circuit& c, const NoiseModel& nm,
                          const DensityMatrix& rho_main) {
  nm.validate();
  return DensityMatrix(run_density(c, rho_main.matrix(), &nm));
}

MatrixXcd apply_noise_matrix(const Circuit& c, const NoiseModel& nm,
                             const MatrixXcd& m_main) {
  nm.validate();
  return run_density(c, m_main, &nm);
}

AngleTriple one_qubit_angles(const PauliProbVector& k) {
  if (k.n_qubits() != 1) {
    throw std::invalid_argument("one_qubit_angles: N = 1 only");
  }
  double s0 = std::sqrt(k[0]), s1 = std::sqrt(k[1]);
  double s2 = std::sqrt(k[2]), s3 = std::sqrt(k[3]);
  double theta0 = 2.0 * std::acos(std::clamp(std::sqrt(k[0] + k[1]), 0.0, 1.0));
  // Half-angle branches in [0, pi/2]; atan2(0, 0) = 0 covers the 0/0 ratios.
  double half_sum = std::atan2(s1, s0);
  double half_diff = std::atan2(s3, s2);
  double theta1 = half_sum - half_diff;
  double theta2 = half_sum + half_diff;
  const double two_pi = 2.0 * std::numbers::pi;
  if (theta1 < 0.0) theta1 += two_pi;
  return {theta0, theta1, theta2};
}

Circuit three_rotation_prep(const AngleTriple& angles) {
  // RY angles are 4pi-periodic: a 2pi shift flips the sign of the prepared
  // amplitudes, so use the representative in (-pi, pi].
  auto balanced = [](double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a > std::numbers::pi) a -= two_pi;
    if (a <= -std::numbers::pi) a += two_pi;
    return a;
  };
  Circuit c;
  c.n_qubits = 2;
  c.add(Gate::ry(0, angles.theta0));
  c.add(Gate::cx(0, 1));
  c.add(Gate::ry(1, balanced(angles.theta1)));
  c.add(Gate::cx(0, 1));
  c.add(Gate::ry(1, balanced(angles.theta2)));
  return c;
}

std::vector<Gate> amplitude_encoding_gates(const VectorXd& amplitudes,
                                           const std::vector<int>& qubits) {
  int n = static_cast<int>(qubits.size());
  std::int64_t dim = std::int64_t(1) << n;
  if (amplitudes.size() != dim) {
    throw std::invalid_argument("amplitude_encoding_gates: need 2^n amplitudes");
  }
  if (amplitudes.minCoeff() < -kProbTol) {
    throw std::invalid_argument("amplitude_encoding_gates: amplitudes must be >= 0");
  }
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-9) {
    throw std::invalid_argument("amplitude_encoding_gates: amplitudes must be normalized");
  }

  // Partial norms of the binary tree over the amplitudes: w[j][m] is the
  // norm of the block with j leading bits fixed to m.
  std::vector<VectorXd> w(n + 1);
  w[n] = amplitudes.cwiseMax(0.0);
  for (int j = n - 1; j >= 0; --j) {
    std::int64_t nodes = std::int64_t(1) << j;
    w[j].resize(nodes);
    for (std::int64_t m = 0; m < nodes; ++m) {
      w[j](m) = std::hypot(w[j + 1](2 * m), w[j + 1](2 * m + 1));
    }
  }

  std::vector<Gate> gates;
  for (int j = 0; j < n; ++j) {
    std::int64_t nodes = std::int64_t(1) << j;
    VectorXd theta(nodes);
    for (std::int64_t m = 0; m < nodes; ++m) {
      theta(m) = 2.0 * std::atan2(w[j + 1](2 * m + 1), w[j + 1](2 * m));
    }
    if (j == 0) {
      gates.push_back(Gate::ry(qubits[0], theta(0)));
      continue;
    }
    // Uniformly controlled RY on qubits[j]: interleave RY(phi_i) with CX
    // gates along the Gray-code ordering of the control patterns. The
    // transformed angles phi recover RY(theta_m) on every control branch.
    std::int64_t k = nodes;
    for (std::int64_t i = 0; i < k; ++i) {
      std::int64_t gray_i = i ^ (i >> 1);
      double phi = 0.0;
      for (std::int64_t m = 0; m < k; ++m) {
        int parity = std::popcount(static_cast<std::uint64_t>(m & gray_i)) & 1;
        phi += (parity ? -1.0 : 1.0) * theta(m);
      }
      phi /= static_cast<double>(k);
      gates.push_back(Gate::ry(qubits[j], phi));
      int flip_bit = (i == k - 1)
                         ? j - 1
                         : std::countr_zero(static_cast<std::uint64_t>(i + 1));
      gates.push_back(Gate::cx(qubits[j - 1 - flip_bit], qubits[j]));
    }
  }
  return gates;
}

Circuit prepare_ancilla_state(const PauliProbVector& k) {
  int n = 2 * k.n_qubits();
  std::vector<int> qubits(n);
  for (int i = 0; i < n; ++i) qubits[i] = i;
  Circuit c;
  c.n_qubits = n;
  for (Gate& g : amplitude_encoding_gates(k.values().cwiseSqrt(), qubits)) {
    c.add(std::move(g));
  }
  return c;
}

Circuit synthesize_channel_circuit(const PauliProbVector& k, int n_qubits) {
  if (k.n_qubits() != n_qubits) {
    throw std::invalid_argument("synthesize_channel_circuit: k has wrong length");
  }
  int n = n_qubits;
  Circuit c;
  c.n_qubits = 3 * n;
  c.ancilla_range = {n, 3 * n};
  std::vector<int> anc(2 * n);
  for (int i = 0; i < 2 * n; ++i) anc[i] = n + i;
  for (Gate& g : amplitude_encoding_gates(k.values().cwiseSqrt(), anc)) {
    c.add(std::move(g));
  }
  // Ancilla pair (high, low) = (n+2i, n+2i+1) encodes the Pauli on main
  // qubit i: 01 -> X, 10 -> Y, 11 -> YX (= Z up to a branch phase that the
  // ancilla trace removes).
  for (int i = 0; i < n; ++i) {
    c.add(Gate::cx(n + 2 * i + 1, i));
    c.add(Gate::cy(n + 2 * i, i));
  }
  return c;
}

}  // namespace pauliforge
