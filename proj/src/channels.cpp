#include "pauliforge/channels.hpp"

#include <cmath>

namespace pauliforge {

namespace {

int order_from_power_of_two(std::int64_t dim, const char* what) {
  int n = 0;
  std::int64_t d = dim;
  while (d > 1 && d % 2 == 0) {
    d /= 2;
    ++n;
  }
  if (d != 1 || n < 1) {
    throw std::invalid_argument(std::string(what) + ": dimension must be 2^N");
  }
  return n;
}

}  // namespace

DensityMatrix::DensityMatrix(MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  }
  n_ = order_from_power_of_two(m_.rows(), "DensityMatrix");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  cxd tr = m_.trace();
  if (std::abs(tr - cxd(1.0, 0.0)) > kHermTol) {
    throw std::invalid_argument("DensityMatrix: trace must be 1");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::pure(const VectorXcd& psi) {
  double norm = psi.norm();
  if (norm < 1e-12) {
    throw std::invalid_argument("DensityMatrix::pure: zero vector");
  }
  VectorXcd v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  std::int64_t d = std::int64_t(1) << n_qubits;
  return DensityMatrix(MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

BlochCoefficients::BlochCoefficients(VectorXd r) : r_(std::move(r)) {
  std::int64_t dim = r_.size();
  n_ = 0;
  std::int64_t d = dim;
  while (d > 1 && d % 4 == 0) {
    d /= 4;
    ++n_;
  }
  if (d != 1 || n_ < 1) {
    throw std::invalid_argument("BlochCoefficients: length must be 4^N");
  }
  if (std::abs(r_(0) - 1.0) > kHermTol) {
    throw std::invalid_argument("BlochCoefficients: r[0] must be 1");
  }
  if (n_ == 1) {
    double len = std::sqrt(r_(1) * r_(1) + r_(2) * r_(2) + r_(3) * r_(3));
    if (len > 1.0 + kHermTol) {
      throw std::invalid_argument("BlochCoefficients: Bloch vector outside unit ball");
    }
  }
}

BlochCoefficients bloch_decompose(const DensityMatrix& rho) {
  int n = rho.n_qubits();
  std::int64_t dim = std::int64_t(1) << (2 * n);
  VectorXd r(dim);
  for (std::int64_t a = 0; a < dim; ++a) {
    MatrixXcd sigma = pauli_string_matrix(PauliString::from_flat(a, n));
    r(a) = (rho.matrix() * sigma).trace().real();
  }
  return BlochCoefficients(std::move(r));
}

DensityMatrix bloch_compose(const BlochCoefficients& r) {
  int n = r.n_qubits();
  std::int64_t d = std::int64_t(1) << n;
  std::int64_t dim = r.values().size();
  MatrixXcd m = MatrixXcd::Zero(d, d);
  for (std::int64_t a = 0; a < dim; ++a) {
    if (r[a] == 0.0) continue;
    m += r[a] * pauli_string_matrix(PauliString::from_flat(a, n));
  }
  m /= static_cast<double>(d);
  return DensityMatrix(std::move(m));
}

PauliChannel::PauliChannel(PauliProbVector k) : k_(std::move(k)) {}

PauliChannel PauliChannel::identity(int n_qubits) {
  return PauliChannel(PauliProbVector::identity(n_qubits));
}

MatrixXcd PauliChannel::apply_matrix(const MatrixXcd& m) const {
  std::int64_t d = std::int64_t(1) << n_qubits();
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("PauliChannel: dimension mismatch");
  }
  MatrixXcd out = MatrixXcd::Zero(d, d);
  for (std::int64_t g = 0; g < k_.dim(); ++g) {
    if (k_[g] == 0.0) continue;
    MatrixXcd sigma = pauli_string_matrix(PauliString::from_flat(g, n_qubits()));
    out += k_[g] * (sigma * m * sigma);
  }
  return out;
}

DensityMatrix PauliChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply_matrix(rho.matrix()));
}

ChannelFn PauliChannel::evaluator() const {
  PauliChannel copy = *this;
  return [copy](const MatrixXcd& m) { return copy.apply_matrix(m); };
}

DensityMatrix apply_channel(const PauliChannel& ch, const DensityMatrix& rho) {
  return ch.apply(rho);
}

ChoiMatrix::ChoiMatrix(MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("ChoiMatrix: matrix must be square");
  }
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw std::invalid_argument("ChoiMatrix: not Hermitian");
  }
  if (std::abs(m_.trace() - cxd(1.0, 0.0)) > kHermTol) {
    throw std::invalid_argument("ChoiMatrix: trace must be 1");
  }
}

VectorXd ChoiMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double ChoiMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

ChoiMatrix choi_matrix(const ChannelFn& ch, int n_qubits) {
  std::int64_t d = std::int64_t(1) << n_qubits;
  MatrixXcd choi(d * d, d * d);
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      MatrixXcd basis = MatrixXcd::Zero(d, d);
      basis(i, j) = 1.0;
      MatrixXcd image = ch(basis);
      if (image.rows() != d || image.cols() != d) {
        throw std::invalid_argument("choi_matrix: evaluator dimension mismatch");
      }
      choi.block(i * d, j * d, d, d) = image / static_cast<double>(d);
    }
  }
  // Symmetrize away roundoff so the constructor's Hermiticity check reflects
  // the channel, not the evaluator's arithmetic order.
  choi = (choi + choi.adjoint().eval()) / 2.0;
  return ChoiMatrix(std::move(choi));
}

bool is_completely_positive(const ChannelFn& ch, int n_qubits) {
  return choi_matrix(ch, n_qubits).min_eigenvalue() >= -kPsdTol;
}

bool is_trace_preserving(const ChannelFn& ch, int n_qubits) {
  std::int64_t d = std::int64_t(1) << n_qubits;
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      MatrixXcd basis = MatrixXcd::Zero(d, d);
      basis(i, j) = 1.0;
      cxd expected = (i == j) ? cxd(1.0, 0.0) : cxd(0.0, 0.0);
      if (std::abs(ch(basis).trace() - expected) > kHermTol) return false;
    }
  }
  return true;
}

void DynamicalMap::validate(int samples) const {
  if (!k_of_p) throw std::invalid_argument("DynamicalMap: k_of_p not set");
  if (samples < 2 || !(p_max > p_min)) {
    throw std::invalid_argument("DynamicalMap: bad domain or sample count");
  }
  VectorXd prev;
  // A continuous curve sampled this finely cannot jump by O(1) between
  // neighbours; the bound is loose on purpose.
  double max_step = 25.0 / samples;
  for (int i = 0; i < samples; ++i) {
    double p = p_min + (p_max - p_min) * i / (samples - 1);
    PauliProbVector k = k_of_p(p);
    if (k.n_qubits() != n_qubits) {
      throw std::invalid_argument("DynamicalMap: sample order mismatch");
    }
    if (i == 0) {
      VectorXd e0 = VectorXd::Zero(k.dim());
      e0(0) = 1.0;
      if ((k.values() - e0).cwiseAbs().maxCoeff() > kHermTol) {
        throw std::invalid_argument("DynamicalMap: must start at the identity channel");
      }
    } else if ((k.values() - prev).cwiseAbs().maxCoeff() > max_step) {
      throw std::invalid_argument("DynamicalMap: discontinuity at sample resolution");
    }
    prev = k.values();
  }
}

PauliProbVector named_map(const std::string& name, double p) {
  auto in01 = [&](double lo, double hi) {
    if (!(p >= lo && p <= hi)) {
      throw std::domain_error("named_map: parameter out of domain for " + name);
    }
  };
  VectorXd k(4);
  if (name == "bitflip") {
    in01(0.0, 1.0);
    k << 1.0 - p, p, 0.0, 0.0;
  } else if (name == "phaseflip") {
    in01(0.0, 1.0);
    k << 1.0 - p, 0.0, 0.0, p;
  } else if (name == "bitphaseflip") {
    in01(0.0, 1.0);
    k << 1.0 - p, 0.0, p, 0.0;
  } else if (name == "depolarizing") {
    in01(0.0, 1.0);
    k << 1.0 - 3.0 * p / 4.0, p / 4.0, p / 4.0, p / 4.0;
  } else if (name == "parabolic") {
    in01(-1.0, 1.0);
    k << (1.0 - p) * (1.0 - p) / 4.0, (1.0 - p * p) / 4.0, (1.0 - p * p) / 4.0,
        (1.0 + p) * (1.0 + p) / 4.0;
  } else {
    throw std::domain_error("named_map: unknown map '" + name + "'");
  }
  return PauliProbVector(std::move(k));
}

DynamicalMap named_dynamical_map(const std::string& name) {
  DynamicalMap map;
  map.n_qubits = 1;
  map.p_min = (name == "parabolic") ? -1.0 : 0.0;
  map.p_max = 1.0;
  map.k_of_p = [name](double p) { return named_map(name, p); };
  map.validate();
  return map;
}

}  // namespace pauliforge
