#pragma once

#include <string>

#include "pauliforge/pauli_algebra.hpp"
#include "pauliforge/types.hpp"

namespace pauliforge {

// Validated quantum state: Hermitian within kHermTol, unit trace, spectrum
// above -kPsdTol.
class DensityMatrix {
 public:
  explicit DensityMatrix(MatrixXcd m);
  static DensityMatrix pure(const VectorXcd& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_; }
  std::int64_t dim() const { return m_.rows(); }
  const MatrixXcd& matrix() const { return m_; }

 private:
  MatrixXcd m_;
  int n_;
};

// Real coefficients r with rho = 2^-N sum_alpha r_alpha sigma_alpha and
// r[0] = 1. For one qubit the reduced vector (r1,r2,r3) is the Bloch vector.
class BlochCoefficients {
 public:
  explicit BlochCoefficients(VectorXd r);

  int n_qubits() const { return n_; }
  const VectorXd& values() const { return r_; }
  double operator[](std::int64_t i) const { return r_(i); }

 private:
  VectorXd r_;
  int n_;
};

BlochCoefficients bloch_decompose(const DensityMatrix& rho);
DensityMatrix bloch_compose(const BlochCoefficients& r);

// Channel applying sigma_gamma with probability k_gamma. Acting on Pauli
// coefficients it multiplies each r_alpha by tau_alpha.
class PauliChannel {
 public:
  explicit PauliChannel(PauliProbVector k);
  static PauliChannel identity(int n_qubits);

  int n_qubits() const { return k_.n_qubits(); }
  const PauliProbVector& k() const { return k_; }
  TauVector tau() const { return k_to_tau(k_); }

  DensityMatrix apply(const DensityMatrix& rho) const;
  MatrixXcd apply_matrix(const MatrixXcd& m) const;  // linear extension
  ChannelFn evaluator() const;

 private:
  PauliProbVector k_;
};

DensityMatrix apply_channel(const PauliChannel& ch, const DensityMatrix& rho);

// Choi (dynamical) matrix of a channel, trace-1 convention:
// D = (I (x) E)|Omega><Omega| with |Omega> = 2^{-N/2} sum_i |i>|i>.
// For a Pauli channel the spectrum is exactly {k_gamma}.
class ChoiMatrix {
 public:
  explicit ChoiMatrix(MatrixXcd m);

  std::int64_t dim() const { return m_.rows(); }
  const MatrixXcd& matrix() const { return m_; }
  VectorXd eigenvalues() const;
  double min_eigenvalue() const;

 private:
  MatrixXcd m_;
};

ChoiMatrix choi_matrix(const ChannelFn& ch, int n_qubits);

bool is_completely_positive(const ChannelFn& ch, int n_qubits);
bool is_trace_preserving(const ChannelFn& ch, int n_qubits);

// A continuously parametrized curve of Pauli channels over [p_min, p_max]
// that starts at the identity channel.
struct DynamicalMap {
  int n_qubits = 1;
  double p_min = 0.0;
  double p_max = 1.0;
  std::function<PauliProbVector(double)> k_of_p;

  // Checks k_of_p at `samples` evenly spaced parameters: every sample must
  // be a valid probability vector, the curve must start at the identity
  // channel, and adjacent samples may not jump discontinuously.
  void validate(int samples = 101) const;
};

// The named one-qubit map families: bitflip (sigma_1), phaseflip (sigma_3),
// bitphaseflip (sigma_2), depolarizing, and the parabolic map
// k = ((1-p)^2, 1-p^2, 1-p^2, (1+p)^2)/4 on p in [-1, 1].
PauliProbVector named_map(const std::string& name, double p);
DynamicalMap named_dynamical_map(const std::string& name);

}  // namespace pauliforge
