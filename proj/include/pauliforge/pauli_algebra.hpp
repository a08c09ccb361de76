#pragma once

#include <cstdint>
#include <vector>

#include "pauliforge/types.hpp"

namespace pauliforge {

// Single-qubit Pauli operator by index: 0 = identity, 1 = X, 2 = Y, 3 = Z.
const Matrix2cd& pauli_matrix(int index);

// Tensor product of single-qubit Paulis, indexed with the leftmost qubit as
// the most significant base-4 digit. Flat index of (a_1,...,a_N) is
// sum_i a_i * 4^(N-1-i).
class PauliString {
 public:
  explicit PauliString(std::vector<int> indices);
  static PauliString from_flat(std::int64_t flat, int n_qubits);

  int n_qubits() const { return static_cast<int>(indices_.size()); }
  std::int64_t flat() const;
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

// Dense 2^N x 2^N matrix of a Pauli string. Hermitian, unitary, self-inverse.
MatrixXcd pauli_string_matrix(const PauliString& s);

// The {-1,+1} sign matrix A^{(tensor N)} with entry (alpha, gamma) equal to
// the sign in sigma_gamma sigma_alpha sigma_gamma = +/- sigma_alpha, applied
// digit-wise. For N = 1 it is the 4x4 matrix with rows
// (1,1,1,1), (1,1,-1,-1), (1,-1,1,-1), (1,-1,-1,1); A*A = 4*I.
//
// Entries are computed on demand from index digits; a dense matrix is only
// materialized for N <= 4. apply() contracts A^{(tensor N)} with a vector in
// O(N 4^N) without forming the matrix.
class SignMatrix {
 public:
  explicit SignMatrix(int n_qubits);  // rejects N < 1 and N > 8

  int order() const { return n_; }
  std::int64_t dim() const { return dim_; }

  double entry(std::int64_t alpha, std::int64_t gamma) const;
  MatrixXd dense() const;  // N <= 4 only
  VectorXd apply(const Eigen::Ref<const VectorXd>& v) const;

 private:
  int n_;
  std::int64_t dim_;
};

SignMatrix sign_matrix(int n_qubits);

// Probability vector k over Pauli strings. Entries within kProbTol below
// zero are clamped to 0 and the vector is renormalized to sum exactly 1;
// anything worse is rejected.
class PauliProbVector {
 public:
  explicit PauliProbVector(VectorXd k);
  static PauliProbVector identity(int n_qubits);

  int n_qubits() const { return n_; }
  std::int64_t dim() const { return k_.size(); }
  const VectorXd& values() const { return k_; }
  double operator[](std::int64_t i) const { return k_(i); }

 private:
  VectorXd k_;
  int n_;
};

// Attenuation multipliers tau = A^{(tensor N)} k. tau[0] = 1 and every entry
// lies in [-1, 1]; membership in the channel polytope is a separate question
// answered by tau_to_k / tetrahedron_contains.
class TauVector {
 public:
  explicit TauVector(VectorXd tau);

  int n_qubits() const { return n_; }
  std::int64_t dim() const { return tau_.size(); }
  const VectorXd& values() const { return tau_; }
  double operator[](std::int64_t i) const { return tau_(i); }

 private:
  VectorXd tau_;
  int n_;
};

TauVector k_to_tau(const PauliProbVector& k);

// Inverse conversion k = A^{(tensor N)} tau / 4^N. Throws NotAChannelError
// when any resulting entry falls below -kProbTol.
PauliProbVector tau_to_k(const TauVector& tau);

// One-qubit polytope test: (tau1,tau2,tau3) inside the tetrahedron with
// vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1), within kProbTol.
bool tetrahedron_contains(const TauVector& tau);

}  // namespace pauliforge
