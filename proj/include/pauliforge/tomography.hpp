#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pauliforge/channels.hpp"
#include "pauliforge/circuits.hpp"
#include "pauliforge/distance.hpp"

namespace pauliforge {

// One-qubit process tomography over the standard informationally complete
// grid: inputs {|0>, |1>, |+>, |+i>} measured in the X, Y, Z bases.

enum class MeasBasis { X, Y, Z };

const std::array<DensityMatrix, 4>& tomography_input_states();

struct TomographyConfig {
  std::int64_t shots = 8192;  // 0 = exact probabilities, no sampling
  std::uint64_t seed = 0;
};

// Outcome counts for one (input, basis) setting. With shots = 0 the entries
// are the exact outcome probabilities.
struct Counts {
  double n0 = 0.0;
  double n1 = 0.0;
  double frequency1() const { return n1 / (n0 + n1); }
};

// Noisy run of the channel circuit on `input`, rotated into `basis`,
// readout-flipped with probability nm.epsilon per bit, then binomially
// sampled with the seeded generator.
Counts simulate_counts(const Circuit& c, const NoiseModel& nm,
                       const DensityMatrix& input, MeasBasis basis,
                       std::int64_t shots, std::uint64_t seed);

// Expectation values <sigma_b> for each input state and basis.
struct TomographyData {
  std::array<std::array<double, 3>, 4> expectation{};
};

TomographyData collect_tomography_data(const Circuit& c, const NoiseModel& nm,
                                       const TomographyConfig& config);

// One-qubit channel in Pauli-transfer form: E(rho) = 1/2 sum_a (R r)_a
// sigma_a where r is the Pauli coefficient vector of rho.
struct PauliTransferMatrix {
  Eigen::Matrix4d r = Eigen::Matrix4d::Identity();

  static PauliTransferMatrix from_channel(const ChannelFn& ch);
  static PauliTransferMatrix from_choi(const MatrixXcd& choi);

  MatrixXcd apply_matrix(const MatrixXcd& m) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  MatrixXcd choi() const;  // trace-1 convention
  ChannelFn evaluator() const;
};

// Linear-inversion estimate from tomography data followed by a CPTP
// projection: clip negative Choi eigenvalues, renormalize the trace, and
// re-impose trace preservation by resetting the identity row; the clip and
// reset alternate until both hold.
PauliTransferMatrix reconstruct_channel(const TomographyData& data);
PauliTransferMatrix project_cptp(const PauliTransferMatrix& ptm);

// --- tetrahedron scan ----------------------------------------------------

struct ScanGrid {
  std::vector<double> tau3_slices{-0.9, -0.5, 0.0, 0.5, 0.9};
  double step = 0.1;  // lattice spacing in (tau1, tau2)
};

struct ScanConfig {
  ScanGrid grid;
  NoiseModel noise;
  std::int64_t shots = 8192;
  std::uint64_t seed = 0;
  int jobs = 1;
  BruteForceOptions distance{};
};

struct ScanRecord {
  double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
  double f = 0.0;
  double lambda_1q = 0.0, lambda_2q = 0.0, epsilon = 0.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

struct ScanResult {
  std::vector<ScanRecord> records;
  int skipped = 0;  // grid points outside the tetrahedron
};

// For every lattice point inside the tetrahedron: synthesize the channel
// circuit, simulate it under the noise model, reconstruct the implemented
// channel by tomography, and record its diamond fidelity against the
// target. Point seeds are base seed XOR candidate index, so results are
// deterministic and independent of the job count.
ScanResult tetrahedron_scan(const ScanConfig& config);

extern const char* const kScanCsvHeader;
std::string scan_csv(const ScanResult& result);

}  // namespace pauliforge
