#include <doctest.h>

#include <numbers>
#include <random>

#include "pauliforge/onepr.hpp"
#include "pauliforge/qasm.hpp"
#include "pauliforge/random.hpp"
#include "testutil.hpp"

using namespace pauliforge;

namespace {

constexpr double kPi = std::numbers::pi;

// The worked bit-flip decomposition: a = (|00> - i|01>)/2, b = conj partner,
// c = 0, sin s = sqrt(p). Evaluates to sqrt(1-p)|00> + sqrt(p)|01>.
OneprDecomposition bitflip_decomposition() {
  OneprDecomposition d;
  d.a = VectorXcd::Zero(4);
  d.b = VectorXcd::Zero(4);
  d.c = VectorXcd::Zero(4);
  d.a(0) = 0.5;
  d.a(1) = cxd(0, -0.5);
  d.b(0) = 0.5;
  d.b(1) = cxd(0, 0.5);
  for (int i = 0; i <= 20; ++i) {
    double p = i / 20.0;
    d.s_of_p.emplace_back(p, std::asin(std::sqrt(p)));
  }
  return d;
}

// Depolarizing: a = (1/2)|00> - (i/2sqrt3)(|01>+|10>+|11>), b = conj,
// c = 0, sin s = sqrt(3p/4).
OneprDecomposition depolarizing_decomposition() {
  OneprDecomposition d;
  double r = 1.0 / (2.0 * std::sqrt(3.0));
  d.a = VectorXcd::Zero(4);
  d.b = VectorXcd::Zero(4);
  d.c = VectorXcd::Zero(4);
  d.a(0) = 0.5;
  d.b(0) = 0.5;
  for (int g = 1; g < 4; ++g) {
    d.a(g) = cxd(0, -r);
    d.b(g) = cxd(0, r);
  }
  for (int i = 0; i <= 20; ++i) {
    double p = i / 20.0;
    d.s_of_p.emplace_back(p, std::asin(std::sqrt(3.0 * p / 4.0)));
  }
  return d;
}

// Parabolic: c = (|00>+|11>)/2, a = (i|00>+|01>+|10>-i|11>)/4, b = conj,
// sin s = p on p in [-1, 1].
OneprDecomposition parabolic_decomposition() {
  OneprDecomposition d;
  d.c = VectorXcd::Zero(4);
  d.a = VectorXcd::Zero(4);
  d.b = VectorXcd::Zero(4);
  d.c(0) = d.c(3) = 0.5;
  d.a << cxd(0, 0.25), 0.25, 0.25, cxd(0, -0.25);
  d.b << cxd(0, -0.25), 0.25, 0.25, cxd(0, 0.25);
  for (int i = 0; i <= 20; ++i) {
    double p = -1.0 + i / 10.0;
    d.s_of_p.emplace_back(p, std::asin(p));
  }
  return d;
}

StateCurve sample_curve(const OneprDecomposition& d, int n) {
  StateCurve curve;
  for (int i = 0; i < n; ++i) {
    double p = d.p_min() + (d.p_max() - d.p_min()) * i / (n - 1);
    curve.p.push_back(p);
    curve.beta.push_back(evaluate_decomposition(d, p));
  }
  curve.validate();
  return curve;
}

MatrixXcd controlled_rz_matrix(int m, const std::vector<Control>& controls,
                               double s) {
  std::int64_t dim = std::int64_t(1) << m;
  MatrixXcd r = MatrixXcd::Zero(dim, dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    bool active = true;
    for (const Control& c : controls) {
      if (((idx >> (m - 1 - c.qubit)) & 1) != c.value) active = false;
    }
    int tbit = idx & 1;  // target = last qubit
    r(idx, idx) = active ? std::polar(1.0, tbit ? s : -s) : 1.0;
  }
  return r;
}

}  // namespace

TEST_CASE("check_conditions") {
  VectorXcd a = VectorXcd::Zero(2), b = VectorXcd::Zero(2), c = VectorXcd::Zero(2);
  a(0) = 1.0 / std::numbers::sqrt2;
  b(1) = 1.0 / std::numbers::sqrt2;
  CHECK(check_conditions(a, b, c));

  VectorXcd a2 = VectorXcd::Zero(2);
  a2(0) = 1.0;
  CHECK_FALSE(check_conditions(a2, a2, c));

  OneprDecomposition parab = parabolic_decomposition();
  CHECK(check_conditions(parab.a, parab.b, parab.c));
  CHECK(parab.c.squaredNorm() == doctest::Approx(0.5));
}

TEST_CASE("evaluate_decomposition on the worked examples") {
  OneprDecomposition constant;
  constant.a = VectorXcd::Zero(2);
  constant.b = VectorXcd::Zero(2);
  constant.c = VectorXcd::Zero(2);
  constant.c(0) = 1.0;
  constant.s_of_p = {{0.0, 0.0}, {1.0, 0.0}};
  VectorXcd v = evaluate_decomposition(constant, 0.4);
  CHECK(std::abs(v(0) - cxd(1, 0)) < 1e-14);

  OneprDecomposition bf = bitflip_decomposition();
  for (double p : {0.0, 0.25, 0.7, 1.0}) {
    VectorXcd state = evaluate_decomposition(bf, p);
    CHECK(std::abs(state(0) - cxd(std::sqrt(1 - p), 0)) < 1e-12);
    CHECK(std::abs(state(1) - cxd(std::sqrt(p), 0)) < 1e-12);
    CHECK(std::abs(state(2)) < 1e-14);
    CHECK(state.norm() == doctest::Approx(1.0));
  }

  OneprDecomposition depol = depolarizing_decomposition();
  VectorXcd state = evaluate_decomposition(depol, 1.0);  // sin s = sqrt(3/4)
  for (int g = 0; g < 4; ++g) {
    CHECK(std::abs(state(g) - cxd(0.5, 0)) < 1e-12);
  }

  CHECK_THROWS_AS(evaluate_decomposition(bf, 1.5), std::domain_error);
}

TEST_CASE("s_at interpolates linearly") {
  OneprDecomposition d = bitflip_decomposition();
  double mid = 0.5 * (d.s_of_p[3].second + d.s_of_p[4].second);
  double p_mid = 0.5 * (d.s_of_p[3].first + d.s_of_p[4].first);
  CHECK(d.s_at(p_mid) == doctest::Approx(mid));
}

TEST_CASE("decomposition validation catches broken invariants") {
  OneprDecomposition d = bitflip_decomposition();
  CHECK_NOTHROW(d.validate());

  OneprDecomposition bad = d;
  bad.s_of_p[5].second = bad.s_of_p[4].second - 0.5;  // not monotone
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  OneprDecomposition overlap = d;
  overlap.b = overlap.a;  // not orthogonal
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);
}

TEST_CASE("axis normal form: z axis is trivial") {
  ZNormalForm nf = axis_to_z_normal_form({Eigen::Vector3d(0, 0, 1)});
  CHECK(nf.theta == doctest::Approx(0.0));
  CHECK(nf.phi == doctest::Approx(0.0));
}

TEST_CASE("axis normal form: x axis at s = pi/4 gives RX(pi/2)") {
  ZNormalForm nf = axis_to_z_normal_form({Eigen::Vector3d(1, 0, 0)});
  double s = kPi / 4;
  Matrix2cd product = gate_matrix(GateKind::RZ, nf.phi) *
                      gate_matrix(GateKind::RY, nf.theta) *
                      gate_matrix(GateKind::RZ, 2 * s) *
                      gate_matrix(GateKind::RY, -nf.theta) *
                      gate_matrix(GateKind::RZ, -nf.phi);
  CHECK((product - gate_matrix(GateKind::RX, kPi / 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("axis normal form matches the rotation exponential on random axes") {
  std::mt19937_64 rng(89);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d axis(normal(rng), normal(rng), normal(rng));
    if (axis.norm() < 1e-3) continue;
    axis.normalize();
    double s = angle(rng);
    ZNormalForm nf = axis_to_z_normal_form({axis});

    // Oracle: the exponential exp(-i s n.sigma), built independently.
    Matrix2cd expected = axis_rotation_matrix(axis, 2 * s);

    Circuit c;
    c.n_qubits = 1;
    for (const Gate& g : nf.pre) c.add(g);
    c.add(nf.rotation(s));
    for (const Gate& g : nf.post) c.add(g);
    CHECK((circuit_unitary(c) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gram circle test accepts generated curves") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    auto [d, map] = random_onepr_map(rng());
    StateCurve curve = sample_curve(d, 15);
    CHECK(gram_circle_test(curve));
  }
  CHECK(gram_circle_test(sample_curve(bitflip_decomposition(), 21)));
}

TEST_CASE("gram circle test rejects a rank-4 curve") {
  StateCurve curve;
  for (int i = 0; i < 8; ++i) {
    double p = i / 7.0;
    VectorXcd beta = VectorXcd::Zero(4);
    // Sweeps through all four basis directions: rank 4.
    beta(0) = std::cos(p);
    beta(1) = std::sin(p) * std::cos(2 * p);
    beta(2) = std::sin(p) * std::sin(2 * p) * std::cos(3 * p);
    beta(3) = std::sin(p) * std::sin(2 * p) * std::sin(3 * p);
    curve.p.push_back(p);
    curve.beta.push_back(beta);
  }
  GramReport report = gram_circle_report(curve);
  CHECK(report.rank == 4);
  CHECK_FALSE(report.rank_ok);
  CHECK_FALSE(gram_circle_test(curve));
}

TEST_CASE("gram circle test rejects the incompatible three-branch curve") {
  StateCurve curve;
  for (int i = 0; i <= 20; ++i) {
    double p = i / 20.0;
    VectorXcd beta = VectorXcd::Zero(4);
    beta(0) = std::sqrt(1.0 - p);
    beta(1) = std::sqrt(p / 2.0);
    beta(2) = std::sqrt(p / 2.0) * std::polar(1.0, p * p);
    curve.p.push_back(p);
    curve.beta.push_back(beta);
  }
  GramReport report = gram_circle_report(curve);
  CHECK(report.rank_ok);  // rank 3 subspace
  CHECK_FALSE(report.ellipse_ok);
  CHECK(report.ellipse_residual > 1e-4);
}

TEST_CASE("fit recovers the bit flip decomposition") {
  StateCurve curve = sample_curve(bitflip_decomposition(), 21);
  auto fit = fit_onepr(curve);
  REQUIRE(fit.has_value());

  double resid = 0.0;
  for (size_t i = 0; i < curve.size(); ++i) {
    resid = std::max(resid,
                     (curve.beta[i] - evaluate_decomposition(*fit, curve.p[i])).norm());
  }
  CHECK(resid < 1e-6);
  CHECK(check_conditions(fit->a, fit->b, fit->c));
  CHECK(fit->a.squaredNorm() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit->b.squaredNorm() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit->c.squaredNorm() == doctest::Approx(0.0).epsilon(1e-6));

  // Canonical gauge puts s(0) = 0, so sin s should recover sqrt(p).
  for (size_t i = 0; i < curve.size(); ++i) {
    CHECK(std::abs(std::sin(fit->s_at(curve.p[i])) - std::sqrt(curve.p[i])) <
          1e-6);
  }
}

TEST_CASE("fit handles the constant curve") {
  StateCurve curve;
  VectorXcd beta = VectorXcd::Zero(4);
  beta(0) = 1.0;
  for (int i = 0; i < 9; ++i) {
    curve.p.push_back(i / 8.0);
    curve.beta.push_back(beta);
  }
  auto fit = fit_onepr(curve);
  REQUIRE(fit.has_value());
  CHECK(fit->a.norm() < 1e-12);
  CHECK(fit->b.norm() < 1e-12);
  CHECK(std::abs(fit->c(0) - cxd(1, 0)) < 1e-12);
}

TEST_CASE("fit returns nothing for the incompatible curve") {
  StateCurve curve;
  for (int i = 0; i <= 20; ++i) {
    double p = i / 20.0;
    VectorXcd beta = VectorXcd::Zero(4);
    beta(0) = std::sqrt(1.0 - p);
    beta(1) = std::sqrt(p / 2.0);
    beta(2) = std::sqrt(p / 2.0) * std::polar(1.0, p * p);
    curve.p.push_back(p);
    curve.beta.push_back(beta);
  }
  FitOptions opts;
  opts.restarts = 8;  // keep the negative case quick
  CHECK_FALSE(fit_onepr(curve, opts).has_value());
}

TEST_CASE("fit requires at least 7 samples") {
  StateCurve curve = sample_curve(bitflip_decomposition(), 6);
  CHECK_THROWS_AS(fit_onepr(curve), std::invalid_argument);
}

TEST_CASE("fit is sound on randomly generated feasible curves") {
  std::mt19937_64 rng(101);
  int found = 0;
  for (int trial = 0; trial < 8; ++trial) {
    auto [d, map] = random_onepr_map(rng());
    StateCurve curve = sample_curve(d, 15);
    FitOptions opts;
    opts.restarts = 16;
    auto fit = fit_onepr(curve, opts);
    if (!fit) continue;  // NotFound is allowed, unsound results are not
    ++found;
    CHECK(check_conditions(fit->a, fit->b, fit->c));
    double resid = 0.0;
    for (size_t i = 0; i < curve.size(); ++i) {
      resid = std::max(resid, (curve.beta[i] -
                               evaluate_decomposition(*fit, curve.p[i])).norm());
    }
    CHECK(resid <= 1e-6);
  }
  CHECK(found >= 6);  // the fitter should succeed on most feasible curves
}

TEST_CASE("phase-gauge fit still solves the real bit flip curve") {
  StateCurve curve = sample_curve(bitflip_decomposition(), 15);
  FitOptions opts;
  opts.restarts = 8;
  auto fit = fit_onepr_phase_gauge(curve, opts);
  REQUIRE(fit.has_value());
  CHECK(fit->a.squaredNorm() == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("single-rotation circuits produce decomposable state curves") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> mdist(2, 4);
  for (int trial = 0; trial < 10; ++trial) {
    int m = mdist(rng);
    std::int64_t dim = std::int64_t(1) << m;
    MatrixXcd a = random_unitary(static_cast<int>(dim), rng);
    MatrixXcd b = random_unitary(static_cast<int>(dim), rng);

    std::vector<Control> controls;
    for (int q = 0; q < m - 1; ++q) {
      if (rng() & 1) controls.push_back({q, static_cast<int>(rng() & 1)});
    }
    std::int64_t j = static_cast<std::int64_t>(rng() % dim);

    double svals[5] = {0.3, 0.9, 1.7, 2.2, 2.9};
    VectorXcd states[5];
    for (int t = 0; t < 5; ++t) {
      states[t] = a * controlled_rz_matrix(m, controls, svals[t]) * b.col(j);
    }

    // Solve for (va, vb, vc) from the first three samples.
    Eigen::Matrix3cd g;
    for (int t = 0; t < 3; ++t) {
      g(t, 0) = std::polar(1.0, svals[t]);
      g(t, 1) = std::polar(1.0, -svals[t]);
      g(t, 2) = 1.0;
    }
    MatrixXcd rhs(3, dim);
    for (int t = 0; t < 3; ++t) rhs.row(t) = states[t].transpose();
    MatrixXcd sol = g.fullPivLu().solve(rhs);
    VectorXcd va = sol.row(0).transpose();
    VectorXcd vb = sol.row(1).transpose();
    VectorXcd vc = sol.row(2).transpose();

    // Held-out samples obey the same decomposition.
    for (int t = 3; t < 5; ++t) {
      VectorXcd predicted = vc + std::polar(1.0, svals[t]) * va +
                            std::polar(1.0, -svals[t]) * vb;
      CHECK((predicted - states[t]).norm() < 1e-10);
    }
    CHECK(check_conditions(va, vb, vc));
  }
}

TEST_CASE("compile_unitary_gates reproduces random unitaries up to phase") {
  std::mt19937_64 rng(107);
  for (int m = 1; m <= 3; ++m) {
    std::int64_t dim = std::int64_t(1) << m;
    MatrixXcd u = random_unitary(static_cast<int>(dim), rng);
    Circuit c;
    c.n_qubits = m;
    for (const Gate& g : compile_unitary_gates(u, m)) c.add(g);
    CHECK(testutil::max_abs_diff_up_to_phase(circuit_unitary(c), u) < 1e-10);
  }
}

TEST_CASE("synthesized circuit reproduces the bit flip curve") {
  OneprDecomposition d = bitflip_decomposition();
  OneprCircuit circuit = synthesize_onepr_circuit(d, 2);
  for (double p : {0.0, 0.3, 0.8}) {
    double s = std::asin(std::sqrt(p));
    VectorXcd state = circuit.state_at_s(s);
    VectorXcd expected = VectorXcd::Zero(4);
    expected(0) = std::sqrt(1 - p);
    expected(1) = std::sqrt(p);
    cxd phase = 1.0;
    if (std::abs(state(0)) > 1e-9) phase = expected(0) / state(0) / std::abs(expected(0) / state(0));
    CHECK((phase * state - expected).norm() < 1e-8);
  }
}

TEST_CASE("synthesis agrees with evaluation on random decompositions") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    auto [d, map] = random_onepr_map(rng());
    OneprCircuit circuit = synthesize_onepr_circuit(d, 2, rng());
    for (double p : {0.0, 0.4, 1.1, kPi / 2}) {
      VectorXcd expected = evaluate_decomposition(d, p);
      VectorXcd actual = circuit.state_at(p);
      // Align global phase on the largest component.
      Eigen::Index imax;
      expected.cwiseAbs().maxCoeff(&imax);
      cxd phase = expected(imax) / actual(imax);
      phase /= std::abs(phase);
      CHECK((phase * actual - expected).norm() < 1e-8);
    }
  }
}

TEST_CASE("gate path of the synthesized circuit matches the matrix path") {
  std::mt19937_64 rng(113);
  auto [d, map] = random_onepr_map(rng());
  OneprCircuit circuit = synthesize_onepr_circuit(d, 2, rng());
  double s = 0.77;
  Circuit gates = circuit.circuit_at_s(s);
  VectorXcd psi0 = VectorXcd::Zero(4);
  psi0(0) = 1.0;
  VectorXcd via_gates = simulate_unitary(gates, psi0);
  VectorXcd via_matrix = circuit.state_at_s(s);
  Eigen::Index imax;
  via_matrix.cwiseAbs().maxCoeff(&imax);
  cxd phase = via_matrix(imax) / via_gates(imax);
  phase /= std::abs(phase);
  CHECK((phase * via_gates - via_matrix).norm() < 1e-8);

  // And the lowered version exports to QASM.
  CHECK_NOTHROW(export_qasm(decompose_for_qasm(gates)));
}

TEST_CASE("two-dimensional registers reject a nonzero c branch") {
  OneprDecomposition d;
  d.a = VectorXcd::Zero(2);
  d.b = VectorXcd::Zero(2);
  d.c = VectorXcd::Zero(2);
  d.a(0) = cxd(0.5, 0);
  d.b(0) = cxd(0.5, 0);
  d.c(1) = 1.0 / std::numbers::sqrt2;
  d.s_of_p = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(synthesize_onepr_circuit(d, 1), std::invalid_argument);
}

TEST_CASE("random onepr maps satisfy the construction guarantees") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto [d, map] = random_onepr_map(seed);
    CHECK(check_conditions(d.a, d.b, d.c));

    VectorXcd start = evaluate_decomposition(d, 0.0);
    CHECK(std::abs(std::abs(start(0)) - 1.0) < 1e-10);

    VectorXd k0 = map.k_of_p(0.0).values();
    CHECK(k0(0) == doctest::Approx(1.0).epsilon(1e-10));

    for (int i = 0; i <= 100; ++i) {
      double p = map.p_min + (map.p_max - map.p_min) * i / 100.0;
      PauliProbVector k = map.k_of_p(p);
      CHECK(k.values().sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(tetrahedron_contains(k_to_tau(k)));
    }
  }
}
