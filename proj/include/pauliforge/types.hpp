#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace pauliforge {

using cxd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Tolerances used across modules. Probability-level quantities are checked
// at 1e-12, spectra and matrix comparisons at 1e-10.
inline constexpr double kProbTol = 1e-12;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// A channel as a linear matrix-on-matrices evaluator. Must be linear so it
// can be probed on non-Hermitian basis matrices |i><j|.
using ChannelFn = std::function<MatrixXcd(const MatrixXcd&)>;

// Thrown when a multiplier vector tau lies outside the channel polytope,
// i.e. tau_to_k would produce negative probabilities.
class NotAChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pauliforge
