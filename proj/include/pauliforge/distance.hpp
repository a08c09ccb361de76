#pragma once

#include <string>

#include "pauliforge/optimize.hpp"
#include "pauliforge/pauli_algebra.hpp"
#include "pauliforge/types.hpp"

namespace pauliforge {

// Sum of singular values; for Hermitian input the sum of |eigenvalues|.
double trace_norm(const MatrixXcd& m);

// Diamond distance between two Pauli channels: sum_g |k1_g - k2_g|.
// The maximally entangled input already attains this value (the Choi
// difference is Bell-diagonal with eigenvalues k1 - k2), and the triangle
// inequality over the unitary-conjugation terms caps the distance at the
// same sum, so the bound is tight.
double diamond_distance_pauli(const PauliProbVector& k1,
                              const PauliProbVector& k2);

struct BruteForceOptions {
  int restarts = 64;
  double agree_tol = 1e-5;  // best two restarts should agree this closely
  NelderMeadOptions nm{};
};

// Variational lower bound on the diamond distance of two one-qubit
// channels: maximize ||((e1 - e2) (x) I)(|psi><psi|)||_1 over pure states
// of the doubled system (pure inputs suffice by convexity). Multi-start
// Nelder-Mead over a 6-parameter chart of unit vectors.
double diamond_distance_bruteforce(const ChannelFn& e1, const ChannelFn& e2,
                                   const BruteForceOptions& opts = {});

// f = 1 - distance/2. The Pauli overload uses the closed form; the
// evaluator overload runs the one-qubit variational oracle.
double diamond_fidelity(const PauliProbVector& k1, const PauliProbVector& k2);
double diamond_fidelity(const ChannelFn& e1, const ChannelFn& e2,
                        const BruteForceOptions& opts = {});

struct FidelityRecord {
  double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
  double f = 0.0;
  double lambda_1q = 0.0, lambda_2q = 0.0;
};

extern const char* const kFidelityCsvHeader;  // tau1,tau2,tau3,f,lambda_1q,lambda_2q
std::string fidelity_csv_row(const FidelityRecord& r);

}  // namespace pauliforge
