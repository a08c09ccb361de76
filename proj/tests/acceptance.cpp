// Acceptance suite: end-to-end checks of the whole library, one line of
// output per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "pauliforge/channels.hpp"
#include "pauliforge/circuits.hpp"
#include "pauliforge/distance.hpp"
#include "pauliforge/onepr.hpp"
#include "pauliforge/qasm.hpp"
#include "pauliforge/random.hpp"
#include "pauliforge/tomography.hpp"

using namespace pauliforge;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(const char* name) : name_(name) {
    start_ = std::chrono::steady_clock::now();
  }

  void finish(bool pass, const std::string& detail) {
    auto elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    std::printf("[%s] %s: %s  (%.1f s)\n", pass ? "PASS" : "FAIL", name_,
                detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!pass) ++g_failures;
  }

 private:
  const char* name_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

PauliProbVector random_k(int n, std::mt19937_64& rng) {
  return PauliProbVector(random_prob_vector(1 << (2 * n), rng));
}

// 1. Synthesized circuits implement the analytic channel exactly.
void criterion_circuit_equals_channel() {
  Criterion crit("1 circuit-equals-channel");
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    PauliProbVector k = random_k(1, rng);
    MatrixXcd via_circuit =
        choi_matrix(circuit_channel(synthesize_channel_circuit(k, 1)), 1)
            .matrix();
    MatrixXcd exact = choi_matrix(PauliChannel(k).evaluator(), 1).matrix();
    worst = std::max(worst, (via_circuit - exact).cwiseAbs().maxCoeff());
  }
  for (int trial = 0; trial < 20; ++trial) {
    PauliProbVector k = random_k(2, rng);
    MatrixXcd via_circuit =
        choi_matrix(circuit_channel(synthesize_channel_circuit(k, 2)), 2)
            .matrix();
    MatrixXcd exact = choi_matrix(PauliChannel(k).evaluator(), 2).matrix();
    worst = std::max(worst, (via_circuit - exact).cwiseAbs().maxCoeff());
  }
  crit.finish(worst <= 1e-10,
              fmt("max Choi entry error %.2e over 200 N=1 + 20 N=2 channels",
                  worst));
}

// 2. Three-rotation preparation with the closed-form angles yields sqrt(k).
void criterion_angle_formulas() {
  Criterion crit("2 angle-formulas");
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  auto check = [&](const PauliProbVector& k) {
    Circuit c = three_rotation_prep(one_qubit_angles(k));
    VectorXcd psi0 = VectorXcd::Zero(4);
    psi0(0) = 1.0;
    VectorXcd psi = simulate_unitary(c, psi0);
    VectorXd target = k.values().cwiseSqrt();
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, std::abs(psi(i) - cxd(target(i), 0.0)));
    }
  };
  for (int trial = 0; trial < 100; ++trial) check(random_k(1, rng));
  VectorXd k0_zero(4), k23_zero(4);
  k0_zero << 0.0, 0.4, 0.35, 0.25;
  k23_zero << 0.6, 0.4, 0.0, 0.0;
  check(PauliProbVector(k0_zero));
  check(PauliProbVector(k23_zero));
  crit.finish(worst <= 1e-10,
              fmt("max amplitude error %.2e over 100 random + degenerate k",
                  worst));
}

// 3. Tetrahedron vertices and polytope rejection.
void criterion_tetrahedron_geometry() {
  Criterion crit("3 tetrahedron-geometry");
  bool ok = true;
  std::string detail;

  const double vertices[4][3] = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  for (int v = 0; v < 4; ++v) {
    VectorXd tau(4);
    tau << 1.0, vertices[v][0], vertices[v][1], vertices[v][2];
    VectorXd k = tau_to_k(TauVector(tau)).values();
    for (int g = 0; g < 4; ++g) {
      double expected = (g == v) ? 1.0 : 0.0;
      if (std::abs(k(g) - expected) > 1e-15) ok = false;
    }
  }
  if (!ok) detail = "vertex channels wrong; ";

  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int rejected = 0, tested = 0;
  while (tested < 100) {
    VectorXd tau(4);
    tau << 1.0, unif(rng), unif(rng), unif(rng);
    TauVector t(tau);
    if (tetrahedron_contains(t)) continue;
    ++tested;
    try {
      tau_to_k(t);
    } catch (const NotAChannelError&) {
      ++rejected;
    }
  }
  if (rejected != 100) {
    ok = false;
    detail += fmt("only %d/100 outside points rejected; ", rejected);
  }

  double roundtrip = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    PauliProbVector k = random_k(1, rng);
    roundtrip = std::max(
        roundtrip,
        (tau_to_k(k_to_tau(k)).values() - k.values()).cwiseAbs().maxCoeff());
  }
  if (roundtrip > 1e-12) ok = false;

  crit.finish(ok, detail + fmt("vertices exact, 100/100 rejections, "
                               "roundtrip error %.2e",
                               roundtrip));
}

// 4. Closed-form diamond distance vs the variational oracle.
void criterion_diamond_cross_validation() {
  Criterion crit("4 diamond-cross-validation");
  std::mt19937_64 rng(1004);
  bool ok = true;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    PauliChannel a(random_k(1, rng));
    PauliChannel b(random_k(1, rng));
    double closed = diamond_distance_pauli(a.k(), b.k());
    double brute = diamond_distance_bruteforce(a.evaluator(), b.evaluator());
    worst_gap = std::max(worst_gap, std::abs(closed - brute));
    if (std::abs(closed - brute) > 1e-4) ok = false;
  }

  PauliChannel id = PauliChannel::identity(1);
  PauliChannel depol(named_map("depolarizing", 1.0));
  double d_ref = diamond_distance_bruteforce(id.evaluator(), depol.evaluator());
  double f_ref = diamond_fidelity(id.k(), depol.k());
  if (std::abs(d_ref - 1.5) > 1e-4 || std::abs(f_ref - 0.25) > 1e-12) ok = false;
  for (double p : {0.2, 0.5, 0.9}) {
    PauliChannel flip(named_map("bitflip", p));
    double d = diamond_distance_bruteforce(id.evaluator(), flip.evaluator());
    if (std::abs(d - 2 * p) > 1e-4) ok = false;
  }
  crit.finish(ok, fmt("max |closed - oracle| = %.2e over 50 pairs; "
                      "identity-vs-depolarizing %.6f (f=%.4f)",
                      worst_gap, d_ref, f_ref));
}

// 5. The worked one-qubit map decompositions are recovered by the fitter.
void criterion_worked_decompositions() {
  Criterion crit("5 onepr-named-decompositions");
  bool ok = true;
  std::string detail;

  struct Case {
    const char* name;
    double norm_a, norm_b, norm_c;
    std::function<double(double)> sin_s;  // expected |sin s| vs p
  };
  const Case cases[] = {
      {"bitflip", 0.5, 0.5, 0.0, [](double p) { return std::sqrt(p); }},
      {"depolarizing", 0.5, 0.5, 0.0,
       [](double p) { return std::sqrt(3.0 * p / 4.0); }},
      {"parabolic", 0.25, 0.25, 0.5, [](double p) { return p; }},
  };
  for (const Case& c : cases) {
    DynamicalMap map = named_dynamical_map(c.name);
    StateCurve curve = lift_real(map, 21);
    auto fit = fit_onepr(curve);
    if (!fit) {
      ok = false;
      detail += fmt("%s: no fit; ", c.name);
      continue;
    }
    double resid = 0.0;
    for (size_t i = 0; i < curve.size(); ++i) {
      resid = std::max(
          resid,
          (curve.beta[i] - evaluate_decomposition(*fit, curve.p[i])).norm());
    }
    double na = fit->a.squaredNorm(), nb = fit->b.squaredNorm(),
           nc = fit->c.squaredNorm();
    bool norms_ok = std::abs(na - c.norm_a) < 1e-6 &&
                    std::abs(nb - c.norm_b) < 1e-6 &&
                    std::abs(nc - c.norm_c) < 1e-6;
    // The fitted s is gauged to s(p_min) = 0; compare |sin| against the
    // shifted reference schedule.
    double s_shift = 0.0;
    double sin_err = 0.0;
    bool first = true;
    for (size_t i = 0; i < curve.size(); ++i) {
      double s_expected = std::asin(std::clamp(c.sin_s(curve.p[i]), -1.0, 1.0));
      if (first) {
        s_shift = s_expected;
        first = false;
      }
      double got = fit->s_at(curve.p[i]);
      sin_err = std::max(sin_err, std::abs((s_expected - s_shift) - got));
    }
    if (resid > 1e-6 || !norms_ok) ok = false;
    detail += fmt("%s: resid %.1e |a|2 %.4f |b|2 %.4f |c|2 %.4f ds %.1e; ",
                  c.name, resid, na, nb, nc, sin_err);
    if (sin_err > 1e-5) ok = false;
  }
  crit.finish(ok, detail);
}

// 6. Sampled states of random single-rotation circuits decompose with
// p-independent orthogonal parts, verified on held-out samples.
void criterion_single_rotation_form() {
  Criterion crit("6 single-rotation-form");
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<int> mdist(2, 4);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    int m = mdist(rng);
    std::int64_t dim = std::int64_t(1) << m;
    MatrixXcd a = random_unitary(static_cast<int>(dim), rng);
    MatrixXcd b = random_unitary(static_cast<int>(dim), rng);
    std::vector<Control> controls;
    for (int q = 0; q < m - 1; ++q) {
      if (rng() & 1) controls.push_back({q, static_cast<int>(rng() & 1)});
    }
    std::int64_t j = static_cast<std::int64_t>(rng() % dim);

    auto rotation = [&](double s) {
      MatrixXcd r = MatrixXcd::Identity(dim, dim);
      for (std::int64_t idx = 0; idx < dim; ++idx) {
        bool active = true;
        for (const Control& ctl : controls) {
          if (((idx >> (m - 1 - ctl.qubit)) & 1) != ctl.value) active = false;
        }
        if (active) r(idx, idx) = std::polar(1.0, (idx & 1) ? s : -s);
      }
      return r;
    };

    const double svals[5] = {0.31, 0.92, 1.73, 2.24, 2.95};
    VectorXcd states[5];
    for (int t = 0; t < 5; ++t) states[t] = a * rotation(svals[t]) * b.col(j);

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

    for (int t = 3; t < 5; ++t) {
      VectorXcd predicted = vc + std::polar(1.0, svals[t]) * va +
                            std::polar(1.0, -svals[t]) * vb;
      worst = std::max(worst, (predicted - states[t]).norm());
    }
    worst = std::max({worst, std::abs(va.dot(vb)), std::abs(va.dot(vc)),
                      std::abs(vb.dot(vc)),
                      std::abs(va.squaredNorm() + vb.squaredNorm() +
                               vc.squaredNorm() - 1.0)});
  }
  ok = worst <= 1e-10;
  crit.finish(ok, fmt("max held-out/orthogonality defect %.2e over 50 "
                      "circuits, dims 4-16",
                      worst));
}

// 7. Randomly generated maps satisfy the construction guarantees.
void criterion_random_onepr_maps() {
  Criterion crit("7 random-onepr-maps");
  double worst_cond = 0.0, worst_start = 0.0;
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto [d, map] = random_onepr_map(seed);
    worst_cond = std::max(
        {worst_cond, std::abs(d.a.dot(d.b)), std::abs(d.a.dot(d.c)),
         std::abs(d.b.dot(d.c)),
         std::abs(d.a.squaredNorm() + d.b.squaredNorm() + d.c.squaredNorm() -
                  1.0)});
    VectorXd k0 = map.k_of_p(0.0).values();
    worst_start = std::max(worst_start, std::abs(k0(0) - 1.0));
    for (int i = 0; i <= 100; ++i) {
      double p = map.p_min + (map.p_max - map.p_min) * i / 100.0;
      if (!tetrahedron_contains(k_to_tau(map.k_of_p(p)))) ++outside;
    }
  }
  bool ok = worst_cond <= 1e-10 && worst_start <= 1e-10 && outside == 0;
  crit.finish(ok, fmt("1000 seeds: conditions %.2e, identity start %.2e, "
                      "%d trajectory points outside",
                      worst_cond, worst_start, outside));
}

// 8. Noisy tomography scan: fidelity is higher near the center of the
// tetrahedron than near its vertices.
void criterion_noisy_scan() {
  Criterion crit("8 noisy-scan-center-vs-vertices");
  ScanConfig config;
  config.noise.lambda_2q = 0.02;
  config.noise.lambda_1q = 0.002;
  config.noise.epsilon = 0.01;
  config.shots = 8192;
  config.seed = 20240807;
  config.jobs = 2;
  ScanResult result = tetrahedron_scan(config);

  const double vertices[4][3] = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  double center_sum = 0.0, vertex_sum = 0.0;
  int center_n = 0, vertex_n = 0;
  for (const ScanRecord& r : result.records) {
    double norm = std::sqrt(r.tau1 * r.tau1 + r.tau2 * r.tau2 + r.tau3 * r.tau3);
    if (norm <= 0.2) {
      center_sum += r.f;
      ++center_n;
    }
    for (int v = 0; v < 4; ++v) {
      double dx = r.tau1 - vertices[v][0];
      double dy = r.tau2 - vertices[v][1];
      double dz = r.tau3 - vertices[v][2];
      if (std::sqrt(dx * dx + dy * dy + dz * dz) <= 0.2) {
        vertex_sum += r.f;
        ++vertex_n;
        break;
      }
    }
  }
  bool ok = center_n > 0 && vertex_n > 0 &&
            center_sum / center_n > vertex_sum / vertex_n;
  crit.finish(ok, fmt("%zu points (%d skipped): mean f center %.4f (%d pts) "
                      "vs vertex %.4f (%d pts)",
                      result.records.size(), result.skipped,
                      center_n ? center_sum / center_n : 0.0, center_n,
                      vertex_n ? vertex_sum / vertex_n : 0.0, vertex_n));
}

// 9. Emitted OpenQASM re-parses to the same unitary.
void criterion_qasm_round_trip() {
  Criterion crit("9 qasm-round-trip");
  std::mt19937_64 rng(1009);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = (trial % 5 == 4) ? 2 : 1;
    PauliProbVector k = random_k(n, rng);
    Circuit c = synthesize_channel_circuit(k, n);
    Circuit parsed = parse_qasm(export_qasm(decompose_for_qasm(c)));
    worst = std::max(worst, (circuit_unitary(parsed) - circuit_unitary(c))
                                .cwiseAbs()
                                .maxCoeff());
  }
  crit.finish(worst <= 1e-10,
              fmt("max unitary entry error %.2e over 50 circuits", worst));
}

}  // namespace

int main() {
  criterion_circuit_equals_channel();
  criterion_angle_formulas();
  criterion_tetrahedron_geometry();
  criterion_diamond_cross_validation();
  criterion_worked_decompositions();
  criterion_single_rotation_form();
  criterion_random_onepr_maps();
  criterion_noisy_scan();
  criterion_qasm_round_trip();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
