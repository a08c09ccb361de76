#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pauliforge/channels.hpp"
#include "pauliforge/circuits.hpp"
#include "pauliforge/types.hpp"

namespace pauliforge {

// A 1PR (one-parameter-rotation) circuit is a parametrized circuit whose
// only parameter-dependent gate is a single-qubit rotation, possibly
// controlled. Starting from |0>, such a circuit can produce exactly the
// state curves |c> + e^{is(p)}|a> + e^{-is(p)}|b> with a, b, c mutually
// orthogonal and of total squared norm 1. This module carries that normal
// form: decompositions, curve fitting, circuit synthesis, and random
// generation of 1PR-reachable Pauli dynamical maps.

struct OneprDecomposition {
  VectorXcd a, b, c;
  // Samples (p, s(p)) with p strictly increasing and s monotone
  // non-decreasing; s is interpolated linearly between samples.
  std::vector<std::pair<double, double>> s_of_p;

  int n_qubits() const;
  double p_min() const { return s_of_p.front().first; }
  double p_max() const { return s_of_p.back().first; }
  double s_at(double p) const;
  void validate() const;
};

// Orthogonality within 1e-10 and squared norms summing to 1 within 1e-10.
bool check_conditions(const VectorXcd& a, const VectorXcd& b,
                      const VectorXcd& c);

// |c> + e^{is(p)}|a> + e^{-is(p)}|b>; unit norm whenever the conditions
// hold. Throws for p outside the sampled domain.
VectorXcd evaluate_decomposition(const OneprDecomposition& d, double p);

struct StateCurve {
  std::vector<double> p;         // strictly increasing
  std::vector<VectorXcd> beta;   // unit vectors

  std::int64_t dim() const { return beta.empty() ? 0 : beta.front().size(); }
  size_t size() const { return p.size(); }
  void validate() const;
};

// Real nonnegative amplitude lift beta(p) = sqrt(k(p)) of a Pauli
// dynamical map, sampled uniformly.
StateCurve lift_real(const DynamicalMap& map, int samples);

// Necessary conditions for a curve to admit a 1PR decomposition:
// (i)  the sampled states span a subspace of dimension <= 3
//      (singular values below 1e-8 discarded);
// (ii) all pairwise inner products lie on one ellipse
//      {C + A e^{id} + B e^{-id} : d real} with A,B,C >= 0, fit residual
//      <= 1e-6.
// A failed rank check certifies genuine infeasibility; the ellipse check
// is a numerical filter.
struct GramReport {
  bool rank_ok = false;
  bool ellipse_ok = false;
  int rank = 0;
  double ellipse_residual = 0.0;
};

GramReport gram_circle_report(const StateCurve& curve);
bool gram_circle_test(const StateCurve& curve);

struct FitOptions {
  int restarts = 32;
  int max_iters = 500;
  double residual_tol = 1e-6;   // max_i ||beta_i - model_i||
  double improve_tol = 1e-12;   // stop when an ALS sweep gains less
  std::uint64_t seed = 7;       // jitter for randomized restarts
};

// Alternating least squares over the decomposition model: given phases s,
// (a,b,c) solve linearly; given (a,b,c), each s_i is refit by 1-D phase
// regression. Multi-start; the best restart that meets the residual bound
// and the orthogonality conditions wins (ties by restart index). Returned
// decompositions are canonicalized: s unwrapped, flipped to non-decreasing
// (swapping a and b), and shifted so s(p_0) = 0. nullopt means the search
// failed, which proves infeasibility only when gram_circle_report's rank
// check also fails.
std::optional<OneprDecomposition> fit_onepr(const StateCurve& curve,
                                            const FitOptions& opts = {});

// Same, but additionally optimizes a constant phase per amplitude
// component (the lift gauge freedom) around the real lift of |beta|.
std::optional<OneprDecomposition> fit_onepr_phase_gauge(
    const StateCurve& curve, const FitOptions& opts = {});

// --- rotation normal form ----------------------------------------------

// exp(-i angle axis.sigma / 2).
Matrix2cd axis_rotation_matrix(const Eigen::Vector3d& axis, double angle);

struct AxisRotation {
  Eigen::Vector3d axis;  // unit vector
};

// Conjugation turning a rotation about `axis` into a Z rotation:
// R_axis(2s) = RZ(phi) RY(theta) RZ(2s) RY(-theta) RZ(-phi) with
// theta = arccos(n3), phi = atan2(n2, n1). `pre` and `post` are the fixed
// gates before and after the parametrized RZ(2s) in circuit order.
struct ZNormalForm {
  double theta = 0.0;
  double phi = 0.0;
  int target = 0;
  std::vector<Gate> pre, post;

  Gate rotation(double s) const { return Gate::rz(target, 2.0 * s); }
};

ZNormalForm axis_to_z_normal_form(const AxisRotation& rot, int target = 0);

// --- synthesis ----------------------------------------------------------

// The normal-form circuit A . R . B realizing a decomposition: B routes
// |0> onto the rotation branches, R is an RZ(2s) on the last qubit
// controlled by all others, and A maps the branches onto a, b, c. The
// matrices are the source of truth; the gate lists come from a two-level
// (Givens) compilation and reproduce the matrices up to one global phase.
struct OneprCircuit {
  int n_qubits = 0;
  MatrixXcd a_matrix, b_matrix;
  std::vector<Gate> a_gates, b_gates;
  int rotation_target = 0;
  std::vector<Control> rotation_controls;
  std::vector<std::pair<double, double>> s_of_p;

  double s_at(double p) const;
  VectorXcd state_at_s(double s) const;  // A R(2s) B |0>
  VectorXcd state_at(double p) const { return state_at_s(s_at(p)); }
  Circuit circuit_at_s(double s) const;
  Circuit circuit_at(double p) const { return circuit_at_s(s_at(p)); }
};

OneprCircuit synthesize_onepr_circuit(const OneprDecomposition& d,
                                      int n_qubits, std::uint64_t seed = 11);

// Gate compilation of an arbitrary unitary by two-level (Givens) reduction
// with Gray-code routing; exact up to a global phase. May emit
// multi-controlled gates (decompose_for_qasm lowers them).
std::vector<Gate> compile_unitary_gates(const MatrixXcd& u, int n_qubits);

// Random Pauli dynamical map guaranteed to be 1PR-implementable: draws
// branch norms |a| = sin(nu) cos(mu), |b| = sin(nu) sin(mu), |c| = cos(nu)
// with mu, nu uniform on [0, pi/2], then rotates them by a random unitary
// whose first row is e^{i theta}(|a|, |b|, |c|, 0), built row by row with
// Gram-Schmidt. The resulting map k(p) = |beta(p)|^2 with s(p) = p on
// [0, pi/2] starts at the identity channel.
std::pair<OneprDecomposition, DynamicalMap> random_onepr_map(std::uint64_t seed);

}  // namespace pauliforge
