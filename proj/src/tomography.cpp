#include "pauliforge/tomography.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

namespace pauliforge {

namespace {

DensityMatrix one_qubit_state(cxd a0, cxd a1) {
  VectorXcd v(2);
  v << a0, a1;
  return DensityMatrix::pure(v);
}

// Rotation into the measurement basis: H for X, H after S^dagger for Y.
MatrixXcd basis_rotation(MeasBasis basis) {
  MatrixXcd h(2, 2), sdg(2, 2);
  double r = 1.0 / std::numbers::sqrt2;
  h << r, r, r, -r;
  sdg << 1, 0, 0, cxd(0, -1);
  switch (basis) {
    case MeasBasis::X: return h;
    case MeasBasis::Y: return h * sdg;
    case MeasBasis::Z: return MatrixXcd::Identity(2, 2);
  }
  throw std::logic_error("basis_rotation: bad enum");
}

}  // namespace

const std::array<DensityMatrix, 4>& tomography_input_states() {
  static const std::array<DensityMatrix, 4> states = {
      one_qubit_state(1.0, 0.0),
      one_qubit_state(0.0, 1.0),
      one_qubit_state(1.0, 1.0),
      one_qubit_state(1.0, cxd(0.0, 1.0)),
  };
  return states;
}

Counts simulate_counts(const Circuit& c, const NoiseModel& nm,
                       const DensityMatrix& input, MeasBasis basis,
                       std::int64_t shots, std::uint64_t seed) {
  nm.validate();
  if (c.n_main() != 1 || input.n_qubits() != 1) {
    throw std::invalid_argument("simulate_counts: one main qubit only");
  }
  MatrixXcd rho = apply_noise_matrix(c, nm, input.matrix());
  MatrixXcd u = basis_rotation(basis);
  rho = u * rho * u.adjoint();
  double p1 = std::clamp(rho(1, 1).real(), 0.0, 1.0);
  // Readout flips before sampling.
  p1 = (1.0 - nm.epsilon) * p1 + nm.epsilon * (1.0 - p1);
  if (shots == 0) {
    return {1.0 - p1, p1};
  }
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::int64_t> binom(shots, p1);
  std::int64_t n1 = binom(rng);
  return {static_cast<double>(shots - n1), static_cast<double>(n1)};
}

TomographyData collect_tomography_data(const Circuit& c, const NoiseModel& nm,
                                       const TomographyConfig& config) {
  TomographyData data;
  const auto& inputs = tomography_input_states();
  for (int t = 0; t < 4; ++t) {
    for (int b = 0; b < 3; ++b) {
      Counts counts =
          simulate_counts(c, nm, inputs[t], static_cast<MeasBasis>(b),
                          config.shots, config.seed + 3 * t + b);
      data.expectation[t][b] = 1.0 - 2.0 * counts.frequency1();
    }
  }
  return data;
}

PauliTransferMatrix PauliTransferMatrix::from_channel(const ChannelFn& ch) {
  PauliTransferMatrix ptm;
  for (int a = 0; a < 4; ++a) {
    MatrixXcd sigma_a = pauli_matrix(a);
    for (int b = 0; b < 4; ++b) {
      MatrixXcd image = ch(pauli_matrix(b));
      ptm.r(a, b) = 0.5 * (sigma_a * image).trace().real();
    }
  }
  return ptm;
}

MatrixXcd PauliTransferMatrix::apply_matrix(const MatrixXcd& m) const {
  if (m.rows() != 2 || m.cols() != 2) {
    throw std::invalid_argument("PauliTransferMatrix: 2x2 input expected");
  }
  Eigen::Vector4cd coeffs;
  for (int b = 0; b < 4; ++b) {
    coeffs(b) = (m * pauli_matrix(b)).trace();
  }
  Eigen::Vector4cd out = r.cast<cxd>() * coeffs;
  MatrixXcd result = MatrixXcd::Zero(2, 2);
  for (int a = 0; a < 4; ++a) result += 0.5 * out(a) * pauli_matrix(a);
  return result;
}

DensityMatrix PauliTransferMatrix::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply_matrix(rho.matrix()));
}

MatrixXcd PauliTransferMatrix::choi() const {
  // D = 1/4 sum_ab R_ab sigma_b^T (x) sigma_a for the (I (x) E) convention.
  MatrixXcd choi = MatrixXcd::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (r(a, b) == 0.0) continue;
      MatrixXcd bt = pauli_matrix(b).transpose();
      MatrixXcd term(4, 4);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          term.block(2 * i, 2 * j, 2, 2) = bt(i, j) * pauli_matrix(a);
        }
      }
      choi += 0.25 * r(a, b) * term;
    }
  }
  return choi;
}

PauliTransferMatrix PauliTransferMatrix::from_choi(const MatrixXcd& choi) {
  PauliTransferMatrix ptm;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      MatrixXcd bt = pauli_matrix(b).transpose();
      MatrixXcd op(4, 4);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          op.block(2 * i, 2 * j, 2, 2) = bt(i, j) * pauli_matrix(a);
        }
      }
      ptm.r(a, b) = (choi * op.adjoint()).trace().real();
    }
  }
  return ptm;
}

ChannelFn PauliTransferMatrix::evaluator() const {
  PauliTransferMatrix copy = *this;
  return [copy](const MatrixXcd& m) { return copy.apply_matrix(m); };
}

PauliTransferMatrix reconstruct_channel(const TomographyData& data) {
  // Extended Bloch rows (1, r) of the four input states.
  Eigen::Matrix4d inputs;
  inputs << 1, 0, 0, 1,   // |0>
      1, 0, 0, -1,        // |1>
      1, 1, 0, 0,         // |+>
      1, 0, 1, 0;         // |+i>
  PauliTransferMatrix ptm;
  ptm.r.row(0) << 1, 0, 0, 0;
  for (int b = 0; b < 3; ++b) {
    Eigen::Vector4d y;
    for (int t = 0; t < 4; ++t) y(t) = data.expectation[t][b];
    ptm.r.row(b + 1) = inputs.colPivHouseholderQr().solve(y).transpose();
  }
  return project_cptp(ptm);
}

PauliTransferMatrix project_cptp(const PauliTransferMatrix& ptm) {
  PauliTransferMatrix out = ptm;
  for (int iter = 0; iter < 200; ++iter) {
    MatrixXcd choi = out.choi();
    choi = (choi + choi.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi);
    VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    double total = evals.sum();
    if (total <= 0.0) {
      throw std::runtime_error("project_cptp: degenerate Choi matrix");
    }
    evals /= total;
    MatrixXcd projected =
        es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
    double clip = (projected - choi).cwiseAbs().maxCoeff();
    out = PauliTransferMatrix::from_choi(projected);
    out.r.row(0) << 1, 0, 0, 0;
    if (clip < 1e-13) break;
  }
  return out;
}

const char* const kScanCsvHeader =
    "tau1,tau2,tau3,f,lambda_1q,lambda_2q,epsilon,shots,seed";

ScanResult tetrahedron_scan(const ScanConfig& config) {
  config.noise.validate();
  if (config.grid.step <= 0.0) {
    throw std::invalid_argument("tetrahedron_scan: step must be positive");
  }

  // Candidate lattice, slice by slice; indices are stable so per-point
  // seeds do not depend on how many points get skipped.
  struct Candidate {
    double t1, t2, t3;
    std::uint64_t index;
  };
  std::vector<Candidate> inside;
  int skipped = 0;
  std::uint64_t index = 0;
  int half = static_cast<int>(std::round(1.0 / config.grid.step));
  for (double t3 : config.grid.tau3_slices) {
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        double t1 = i * config.grid.step;
        double t2 = j * config.grid.step;
        VectorXd tau(4);
        tau << 1.0, t1, t2, t3;
        if (tetrahedron_contains(TauVector(tau))) {
          inside.push_back({t1, t2, t3, index});
        } else {
          ++skipped;
        }
        ++index;
      }
    }
  }

  auto run_point = [&](const Candidate& pt) {
    VectorXd tau(4);
    tau << 1.0, pt.t1, pt.t2, pt.t3;
    PauliProbVector k = tau_to_k(TauVector(tau));
    Circuit circuit = synthesize_channel_circuit(k, 1);
    TomographyConfig tomo;
    tomo.shots = config.shots;
    tomo.seed = config.seed ^ pt.index;
    PauliTransferMatrix implemented = reconstruct_channel(
        collect_tomography_data(circuit, config.noise, tomo));
    PauliChannel target(k);
    double f = diamond_fidelity(implemented.evaluator(), target.evaluator(),
                                config.distance);
    ScanRecord rec;
    rec.tau1 = pt.t1;
    rec.tau2 = pt.t2;
    rec.tau3 = pt.t3;
    rec.f = f;
    rec.lambda_1q = config.noise.lambda_1q;
    rec.lambda_2q = config.noise.lambda_2q;
    rec.epsilon = config.noise.epsilon;
    rec.shots = config.shots;
    rec.seed = tomo.seed;
    return rec;
  };

  ScanResult result;
  result.skipped = skipped;
  result.records.resize(inside.size());
  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < inside.size(); ++i) {
      result.records[i] = run_point(inside[i]);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < inside.size();
           i = next.fetch_add(1)) {
        result.records[i] = run_point(inside[i]);
      }
    };
    std::vector<std::future<void>> futures;
    for (int j = 0; j < jobs; ++j) {
      futures.push_back(std::async(std::launch::async, worker));
    }
    for (auto& f : futures) f.get();
  }
  return result;
}

std::string scan_csv(const ScanResult& result) {
  std::ostringstream os;
  os << kScanCsvHeader << "\n";
  char buf[320];
  for (const ScanRecord& r : result.records) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%llu\n",
                  r.tau1, r.tau2, r.tau3, r.f, r.lambda_1q, r.lambda_2q,
                  r.epsilon, static_cast<long long>(r.shots),
                  static_cast<unsigned long long>(r.seed));
    os << buf;
  }
  return os.str();
}

}  // namespace pauliforge
