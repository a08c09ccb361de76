#include "pauliforge/pauli_algebra.hpp"

#include <cmath>
#include <string>

namespace pauliforge {

namespace {

int checked_order_from_dim(std::int64_t dim, const char* what) {
  int n = 0;
  std::int64_t d = dim;
  while (d > 1 && d % 4 == 0) {
    d /= 4;
    ++n;
  }
  if (d != 1 || n < 1) {
    throw std::invalid_argument(std::string(what) +
                                ": length must be 4^N for some N >= 1");
  }
  return n;
}

// Sign of sigma_g sigma_a sigma_g = +/- sigma_a for single-qubit indices:
// +1 when either index is 0 or they coincide, -1 otherwise.
double pauli_conj_sign(int a, int g) {
  return (a == 0 || g == 0 || a == g) ? 1.0 : -1.0;
}

}  // namespace

const Matrix2cd& pauli_matrix(int index) {
  static const Matrix2cd sigma[4] = {
      (Matrix2cd() << 1, 0, 0, 1).finished(),
      (Matrix2cd() << 0, 1, 1, 0).finished(),
      (Matrix2cd() << 0, cxd(0, -1), cxd(0, 1), 0).finished(),
      (Matrix2cd() << 1, 0, 0, -1).finished(),
  };
  if (index < 0 || index > 3) {
    throw std::invalid_argument("pauli_matrix: index must be in {0,1,2,3}");
  }
  return sigma[index];
}

PauliString::PauliString(std::vector<int> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) {
    throw std::invalid_argument("PauliString: needs at least one qubit");
  }
  for (int v : indices_) {
    if (v < 0 || v > 3) {
      throw std::invalid_argument("PauliString: indices must be in {0,1,2,3}");
    }
  }
}

PauliString PauliString::from_flat(std::int64_t flat, int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("PauliString::from_flat: n_qubits must be >= 1");
  }
  std::int64_t dim = std::int64_t(1) << (2 * n_qubits);
  if (flat < 0 || flat >= dim) {
    throw std::invalid_argument("PauliString::from_flat: index out of range");
  }
  std::vector<int> idx(n_qubits);
  for (int i = n_qubits - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat & 3);
    flat >>= 2;
  }
  return PauliString(std::move(idx));
}

std::int64_t PauliString::flat() const {
  std::int64_t f = 0;
  for (int v : indices_) f = 4 * f + v;
  return f;
}

MatrixXcd pauli_string_matrix(const PauliString& s) {
  MatrixXcd m = pauli_matrix(s.indices()[0]);
  for (int i = 1; i < s.n_qubits(); ++i) {
    const Matrix2cd& p = pauli_matrix(s.indices()[i]);
    MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (std::int64_t r = 0; r < m.rows(); ++r) {
      for (std::int64_t c = 0; c < m.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = m(r, c) * p;
      }
    }
    m.swap(next);
  }
  return m;
}

SignMatrix::SignMatrix(int n_qubits) : n_(n_qubits) {
  if (n_ < 1) throw std::invalid_argument("SignMatrix: N must be >= 1");
  if (n_ > 8) throw std::invalid_argument("SignMatrix: N > 8 not supported");
  dim_ = std::int64_t(1) << (2 * n_);
}

double SignMatrix::entry(std::int64_t alpha, std::int64_t gamma) const {
  if (alpha < 0 || alpha >= dim_ || gamma < 0 || gamma >= dim_) {
    throw std::invalid_argument("SignMatrix::entry: index out of range");
  }
  double s = 1.0;
  for (int i = 0; i < n_; ++i) {
    s *= pauli_conj_sign(static_cast<int>(alpha & 3), static_cast<int>(gamma & 3));
    alpha >>= 2;
    gamma >>= 2;
  }
  return s;
}

MatrixXd SignMatrix::dense() const {
  if (n_ > 4) {
    throw std::invalid_argument("SignMatrix::dense: too large, use entry()/apply()");
  }
  MatrixXd m(dim_, dim_);
  for (std::int64_t a = 0; a < dim_; ++a) {
    for (std::int64_t g = 0; g < dim_; ++g) m(a, g) = entry(a, g);
  }
  return m;
}

VectorXd SignMatrix::apply(const Eigen::Ref<const VectorXd>& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("SignMatrix::apply: dimension mismatch");
  }
  // Contract the single-qubit A along each base-4 digit in turn.
  VectorXd out = v;
  for (int axis = 0; axis < n_; ++axis) {
    std::int64_t stride = std::int64_t(1) << (2 * (n_ - 1 - axis));
    VectorXd next(dim_);
    for (std::int64_t base = 0; base < dim_; ++base) {
      std::int64_t digit = (base / stride) % 4;
      if (digit != 0) continue;
      double x0 = out(base);
      double x1 = out(base + stride);
      double x2 = out(base + 2 * stride);
      double x3 = out(base + 3 * stride);
      next(base) = x0 + x1 + x2 + x3;
      next(base + stride) = x0 + x1 - x2 - x3;
      next(base + 2 * stride) = x0 - x1 + x2 - x3;
      next(base + 3 * stride) = x0 - x1 - x2 + x3;
    }
    out.swap(next);
  }
  return out;
}

SignMatrix sign_matrix(int n_qubits) { return SignMatrix(n_qubits); }

PauliProbVector::PauliProbVector(VectorXd k) : k_(std::move(k)) {
  n_ = checked_order_from_dim(k_.size(), "PauliProbVector");
  double sum = 0.0;
  for (std::int64_t i = 0; i < k_.size(); ++i) {
    if (!std::isfinite(k_(i)) || k_(i) < -kProbTol) {
      throw std::invalid_argument("PauliProbVector: negative probability");
    }
    if (k_(i) < 0.0) k_(i) = 0.0;
    sum += k_(i);
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw std::invalid_argument("PauliProbVector: probabilities must sum to 1");
  }
  k_ /= sum;
}

PauliProbVector PauliProbVector::identity(int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("PauliProbVector::identity: n_qubits must be >= 1");
  }
  VectorXd k = VectorXd::Zero(std::int64_t(1) << (2 * n_qubits));
  k(0) = 1.0;
  return PauliProbVector(std::move(k));
}

TauVector::TauVector(VectorXd tau) : tau_(std::move(tau)) {
  n_ = checked_order_from_dim(tau_.size(), "TauVector");
  if (std::abs(tau_(0) - 1.0) > kProbTol) {
    throw std::invalid_argument("TauVector: tau[0] must be 1");
  }
  tau_(0) = 1.0;
  for (std::int64_t i = 0; i < tau_.size(); ++i) {
    if (!std::isfinite(tau_(i)) || std::abs(tau_(i)) > 1.0 + kProbTol) {
      throw std::invalid_argument("TauVector: entries must lie in [-1, 1]");
    }
    tau_(i) = std::clamp(tau_(i), -1.0, 1.0);
  }
}

TauVector k_to_tau(const PauliProbVector& k) {
  SignMatrix a(k.n_qubits());
  return TauVector(a.apply(k.values()));
}

PauliProbVector tau_to_k(const TauVector& tau) {
  SignMatrix a(tau.n_qubits());
  VectorXd k = a.apply(tau.values()) / static_cast<double>(a.dim());
  for (std::int64_t i = 0; i < k.size(); ++i) {
    if (k(i) < -kProbTol) {
      throw NotAChannelError("tau_to_k: multipliers outside the channel polytope");
    }
  }
  return PauliProbVector(std::move(k));
}

bool tetrahedron_contains(const TauVector& tau) {
  if (tau.n_qubits() != 1) {
    throw std::invalid_argument("tetrahedron_contains: defined for N = 1 only");
  }
  double t1 = tau[1], t2 = tau[2], t3 = tau[3];
  return 1.0 + t1 - t2 - t3 >= -kProbTol && 1.0 + t2 - t1 - t3 >= -kProbTol &&
         1.0 + t3 - t1 - t2 >= -kProbTol && 1.0 + t1 + t2 + t3 >= -kProbTol;
}

}  // namespace pauliforge
