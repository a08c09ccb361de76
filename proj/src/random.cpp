#include "pauliforge/random.hpp"

namespace pauliforge {

VectorXcd random_complex_gaussian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(normal(rng), normal(rng));
  return v;
}

VectorXcd random_unit_vector(int dim, std::mt19937_64& rng) {
  VectorXcd v = random_complex_gaussian(dim, rng);
  while (v.norm() < 1e-12) v = random_complex_gaussian(dim, rng);
  return v / v.norm();
}

MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  MatrixXcd g(dim, dim);
  for (int c = 0; c < dim; ++c) g.col(c) = random_complex_gaussian(dim, rng);
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ();
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cxd d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : cxd(1.0, 0.0);
  }
  return q;
}

VectorXd random_prob_vector(int dim, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  VectorXd k(dim);
  for (int i = 0; i < dim; ++i) k(i) = expo(rng);
  return k / k.sum();
}

}  // namespace pauliforge
