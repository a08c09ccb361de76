#include "pauliforge/onepr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pauliforge/optimize.hpp"
#include "pauliforge/random.hpp"

namespace pauliforge {

namespace {

constexpr double kConditionTol = 1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int order_from_power_of_two(std::int64_t dim) {
  int n = 0;
  std::int64_t d = dim;
  while (d > 1 && d % 2 == 0) {
    d /= 2;
    ++n;
  }
  if (d != 1 || n < 1) {
    throw std::invalid_argument("onepr: dimension must be 2^M with M >= 1");
  }
  return n;
}

double interp_samples(const std::vector<std::pair<double, double>>& samples,
                      double p) {
  if (samples.empty()) throw std::invalid_argument("onepr: no s(p) samples");
  double lo = samples.front().first, hi = samples.back().first;
  if (p < lo - 1e-12 || p > hi + 1e-12) {
    throw std::domain_error("onepr: p outside the sampled domain");
  }
  p = std::clamp(p, lo, hi);
  auto it = std::lower_bound(
      samples.begin(), samples.end(), p,
      [](const auto& sample, double value) { return sample.first < value; });
  if (it == samples.begin()) return it->second;
  if (it == samples.end()) return samples.back().second;
  auto [p1, s1] = *it;
  auto [p0, s0] = *(it - 1);
  double t = (p1 > p0) ? (p - p0) / (p1 - p0) : 0.0;
  return s0 + t * (s1 - s0);
}

VectorXcd model_state(const VectorXcd& a, const VectorXcd& b,
                      const VectorXcd& c, double s) {
  return c + std::polar(1.0, s) * a + std::polar(1.0, -s) * b;
}

// Deviation of a point from the axis-aligned ellipse
// {(cx + u cos d, v sin d)}: match the horizontal coordinate, compare the
// vertical one. Exactly zero for points on the ellipse (degenerate cases
// included), smooth in the parameters, and an upper bound within a small
// factor of the true distance.
double point_ellipse_residual(cxd z, double cx, double u, double v) {
  double x = z.real() - cx, y = z.imag();
  if (u < 1e-14) return std::hypot(x, y);
  double c = std::clamp(x / u, -1.0, 1.0);
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double dx = std::max(0.0, std::abs(x) - u);
  double dy = std::abs(y) - std::abs(v) * s;
  return std::hypot(dx, dy);
}

}  // namespace

int OneprDecomposition::n_qubits() const {
  return order_from_power_of_two(a.size());
}

double OneprDecomposition::s_at(double p) const {
  return interp_samples(s_of_p, p);
}

void OneprDecomposition::validate() const {
  if (a.size() != b.size() || a.size() != c.size()) {
    throw std::invalid_argument("OneprDecomposition: dimension mismatch");
  }
  order_from_power_of_two(a.size());
  if (!check_conditions(a, b, c)) {
    throw std::invalid_argument(
        "OneprDecomposition: orthogonality/normalization conditions violated");
  }
  if (s_of_p.size() < 2) {
    throw std::invalid_argument("OneprDecomposition: need at least 2 samples");
  }
  for (size_t i = 1; i < s_of_p.size(); ++i) {
    if (s_of_p[i].first <= s_of_p[i - 1].first) {
      throw std::invalid_argument("OneprDecomposition: p must strictly increase");
    }
    if (s_of_p[i].second < s_of_p[i - 1].second - 1e-9) {
      throw std::invalid_argument("OneprDecomposition: s must be monotone");
    }
  }
}

bool check_conditions(const VectorXcd& a, const VectorXcd& b,
                      const VectorXcd& c) {
  if (a.size() != b.size() || a.size() != c.size()) return false;
  double norm_sum = a.squaredNorm() + b.squaredNorm() + c.squaredNorm();
  return std::abs(a.dot(b)) <= kConditionTol &&
         std::abs(a.dot(c)) <= kConditionTol &&
         std::abs(b.dot(c)) <= kConditionTol &&
         std::abs(norm_sum - 1.0) <= kConditionTol;
}

VectorXcd evaluate_decomposition(const OneprDecomposition& d, double p) {
  return model_state(d.a, d.b, d.c, d.s_at(p));
}

void StateCurve::validate() const {
  if (p.size() != beta.size() || p.empty()) {
    throw std::invalid_argument("StateCurve: mismatched or empty samples");
  }
  std::int64_t d = beta.front().size();
  for (size_t i = 0; i < p.size(); ++i) {
    if (beta[i].size() != d) {
      throw std::invalid_argument("StateCurve: inconsistent dimensions");
    }
    if (std::abs(beta[i].norm() - 1.0) > 1e-10) {
      throw std::invalid_argument("StateCurve: states must have unit norm");
    }
    if (i > 0 && p[i] <= p[i - 1]) {
      throw std::invalid_argument("StateCurve: p must strictly increase");
    }
  }
}

StateCurve lift_real(const DynamicalMap& map, int samples) {
  if (samples < 2) throw std::invalid_argument("lift_real: need >= 2 samples");
  StateCurve curve;
  for (int i = 0; i < samples; ++i) {
    double p = map.p_min + (map.p_max - map.p_min) * i / (samples - 1);
    VectorXd k = map.k_of_p(p).values();
    curve.p.push_back(p);
    curve.beta.push_back(k.cwiseSqrt().cast<cxd>());
  }
  curve.validate();
  return curve;
}

struct EllipseFit {
  double center = 0.0;  // C
  double u = 1.0;       // A + B
  double v = 0.0;       // A - B
  double max_residual = 0.0;
};

// Best common ellipse C + A e^{id} + B e^{-id} (A, B, C >= 0, C + A + B = 1)
// through a cloud of inner products.
EllipseFit fit_overlap_ellipse(const std::vector<cxd>& z) {
  auto objective = [&](const VectorXd& x) {
    double cx = std::clamp(x(0), 0.0, 1.0);
    double w = std::clamp(x(1), -1.0, 1.0);
    double u = 1.0 - cx, v = w * u;
    double sum = 0.0;
    for (cxd zi : z) {
      double d = point_ellipse_residual(zi, cx, u, v);
      sum += d * d;
    }
    return sum;
  };

  double best_obj = std::numeric_limits<double>::infinity();
  VectorXd best_x(2);
  for (double c0 : {0.0, 0.25, 0.5, 0.75}) {
    for (double w0 : {-0.9, 0.0, 0.9}) {
      VectorXd x0(2);
      x0 << c0, w0;
      NelderMeadOptions nm;
      nm.max_iters = 400;
      nm.step = 0.15;
      auto res = nelder_mead(objective, x0, nm);
      if (res.f < best_obj) {
        best_obj = res.f;
        best_x = res.x;
      }
    }
  }
  EllipseFit fit;
  fit.center = std::clamp(best_x(0), 0.0, 1.0);
  fit.u = 1.0 - fit.center;
  fit.v = std::clamp(best_x(1), -1.0, 1.0) * fit.u;
  for (cxd zi : z) {
    fit.max_residual = std::max(
        fit.max_residual, point_ellipse_residual(zi, fit.center, fit.u, fit.v));
  }
  return fit;
}

GramReport gram_circle_report(const StateCurve& curve) {
  curve.validate();
  if (curve.size() < 3) {
    throw std::invalid_argument("gram_circle_report: need >= 3 samples");
  }
  GramReport report;
  const size_t n = curve.size();

  MatrixXcd stacked(curve.dim(), n);
  for (size_t i = 0; i < n; ++i) stacked.col(i) = curve.beta[i];
  Eigen::JacobiSVD<MatrixXcd> svd(stacked);
  report.rank = static_cast<int>(
      (svd.singularValues().array() > 1e-8).count());
  report.rank_ok = report.rank <= 3;

  // Pairwise inner products must sit on one ellipse C + A e^{id} + B e^{-id}
  // with real A, B, C >= 0; the diagonal pins C + A + B = 1.
  std::vector<cxd> z;
  z.reserve(n * (n - 1) / 2 + 1);
  z.push_back(cxd(1.0, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      z.push_back(curve.beta[i].dot(curve.beta[j]));
    }
  }
  EllipseFit fit = fit_overlap_ellipse(z);
  report.ellipse_residual = fit.max_residual;
  report.ellipse_ok = fit.max_residual <= 1e-6;
  return report;
}

bool gram_circle_test(const StateCurve& curve) {
  GramReport r = gram_circle_report(curve);
  return r.rank_ok && r.ellipse_ok;
}

namespace {

struct AlsState {
  VectorXcd a, b, c;
  std::vector<double> s;
  double residual = std::numeric_limits<double>::infinity();
};

double max_residual(const StateCurve& curve, const VectorXcd& a,
                    const VectorXcd& b, const VectorXcd& c,
                    const std::vector<double>& s) {
  double worst = 0.0;
  for (size_t i = 0; i < curve.size(); ++i) {
    worst = std::max(worst,
                     (curve.beta[i] - model_state(a, b, c, s[i])).norm());
  }
  return worst;
}

void solve_vectors(const StateCurve& curve, const std::vector<double>& s,
                   VectorXcd& a, VectorXcd& b, VectorXcd& c) {
  const size_t n = curve.size();
  MatrixXcd g(n, 3);
  MatrixXcd rhs(n, curve.dim());
  for (size_t i = 0; i < n; ++i) {
    g(i, 0) = std::polar(1.0, s[i]);
    g(i, 1) = std::polar(1.0, -s[i]);
    g(i, 2) = 1.0;
    rhs.row(i) = curve.beta[i].transpose();
  }
  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(g);
  MatrixXcd sol = cod.solve(rhs);  // rows: a^T, b^T, c^T
  a = sol.row(0).transpose();
  b = sol.row(1).transpose();
  c = sol.row(2).transpose();
}

// Minimize ||beta - c - e^{is}a - e^{-is}b|| over s: a trig polynomial with
// first and second harmonics, swept densely then refined by golden section.
double refit_phase(const VectorXcd& beta, const VectorXcd& a,
                   const VectorXcd& b, const VectorXcd& c, double s_init) {
  VectorXcd d = beta - c;
  cxd wa = d.dot(a);   // conj(d) . a
  cxd wb = d.dot(b);
  cxd q = a.dot(b);
  auto h = [&](double s) {
    cxd e(std::cos(s), std::sin(s));
    return -2.0 * (e * wa).real() - 2.0 * (std::conj(e) * wb).real() +
           2.0 * (std::conj(e * e) * q).real();
  };
  double best_s = s_init, best = h(s_init);
  const int grid = 720;
  for (int i = 0; i < grid; ++i) {
    double s = -std::numbers::pi + kTwoPi * i / grid;
    double val = h(s);
    if (val < best) {
      best = val;
      best_s = s;
    }
  }
  double lo = best_s - kTwoPi / grid, hi = best_s + kTwoPi / grid;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = h(x2);
    }
  }
  double mid = (lo + hi) / 2.0;
  return (h(mid) < best) ? mid : best_s;
}

// Gauge moves that leave the curve invariant: unwrap s across 2pi jumps,
// flip s -> -s (swapping a and b) to make it non-decreasing, and shift
// s(p_0) to 0 by rephasing a and b.
bool canonicalize(AlsState& st) {
  for (size_t i = 1; i < st.s.size(); ++i) {
    while (st.s[i] - st.s[i - 1] > std::numbers::pi) st.s[i] -= kTwoPi;
    while (st.s[i] - st.s[i - 1] < -std::numbers::pi) st.s[i] += kTwoPi;
  }
  if (st.s.back() < st.s.front()) {
    for (double& v : st.s) v = -v;
    std::swap(st.a, st.b);
  }
  double shift = st.s.front();
  for (double& v : st.s) v -= shift;
  cxd phase = std::polar(1.0, shift);
  st.a *= phase;
  st.b *= std::conj(phase);
  for (size_t i = 1; i < st.s.size(); ++i) {
    if (st.s[i] < st.s[i - 1] - 1e-9) return false;
  }
  return true;
}

std::optional<OneprDecomposition> make_decomposition(const StateCurve& curve,
                                                     AlsState st) {
  if (!canonicalize(st)) return std::nullopt;
  if (!check_conditions(st.a, st.b, st.c)) return std::nullopt;
  OneprDecomposition d;
  d.a = std::move(st.a);
  d.b = std::move(st.b);
  d.c = std::move(st.c);
  for (size_t i = 0; i < curve.size(); ++i) {
    d.s_of_p.emplace_back(curve.p[i], st.s[i]);
  }
  double resid = 0.0;
  for (size_t i = 0; i < curve.size(); ++i) {
    resid = std::max(resid,
                     (curve.beta[i] - evaluate_decomposition(d, curve.p[i])).norm());
  }
  if (resid > 1e-6) return std::nullopt;
  return d;
}

}  // namespace

std::optional<OneprDecomposition> fit_onepr(const StateCurve& curve,
                                            const FitOptions& opts) {
  curve.validate();
  const size_t n = curve.size();
  if (n < 7) throw std::invalid_argument("fit_onepr: need >= 7 samples");
  const std::int64_t dim = curve.dim();

  // Constant curves need no rotation at all.
  bool constant = true;
  for (size_t i = 1; i < n && constant; ++i) {
    constant = (curve.beta[i] - curve.beta[0]).norm() <= 1e-9;
  }
  if (constant) {
    AlsState st;
    st.a = VectorXcd::Zero(dim);
    st.b = VectorXcd::Zero(dim);
    st.c = curve.beta[0];
    st.s.assign(n, 0.0);
    return make_decomposition(curve, std::move(st));
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Overlaps with the first sample carry most of the phase information:
  // <beta_0|beta_i> = C + A e^{i ds_i} + B e^{-i ds_i}, so a fitted ellipse
  // inverts to a near-exact initial phase schedule.
  std::vector<cxd> overlaps(n);
  for (size_t i = 0; i < n; ++i) overlaps[i] = curve.beta[0].dot(curve.beta[i]);
  EllipseFit ellipse = fit_overlap_ellipse(overlaps);

  auto ellipse_init = [&](size_t i) {
    double x = overlaps[i].real() - ellipse.center;
    double y = overlaps[i].imag();
    if (ellipse.u < 1e-9) return 0.0;
    double c = std::clamp(x / ellipse.u, -1.0, 1.0);
    if (std::abs(ellipse.v) > 1e-9) {
      return std::atan2(std::clamp(y / ellipse.v, -1.0, 1.0), c);
    }
    return std::acos(c);
  };

  std::optional<OneprDecomposition> best;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.restarts; ++restart) {
    AlsState st;
    st.s.resize(n);
    for (size_t i = 0; i < n; ++i) {
      double re = overlaps[i].real();
      switch (restart % 4) {
        case 0:
          st.s[i] = ellipse_init(i);
          break;
        case 1:
          st.s[i] = std::acos(std::clamp(re, -1.0, 1.0));
          break;
        case 2:
          st.s[i] = std::acos(std::clamp(2.0 * re - 1.0, -1.0, 1.0));
          break;
        default:
          st.s[i] = std::acos(std::clamp(std::abs(overlaps[i]), -1.0, 1.0));
          break;
      }
      if (restart >= 4) {
        st.s[i] += (unit(rng) - 0.5) * std::numbers::pi * (restart >= 16 ? 2.0 : 0.5);
      }
    }

    // Alternating sweeps with geometric extrapolation along the update
    // direction; plain ALS creeps through a flat valley here.
    solve_vectors(curve, st.s, st.a, st.b, st.c);
    st.residual = max_residual(curve, st.a, st.b, st.c, st.s);
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      std::vector<double> proposed(n);
      for (size_t i = 0; i < n; ++i) {
        proposed[i] = refit_phase(curve.beta[i], st.a, st.b, st.c, st.s[i]);
      }
      AlsState candidate = st;
      bool advanced = false;
      for (double omega : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        AlsState trial = st;
        for (size_t i = 0; i < n; ++i) {
          trial.s[i] = st.s[i] + omega * (proposed[i] - st.s[i]);
        }
        solve_vectors(curve, trial.s, trial.a, trial.b, trial.c);
        trial.residual = max_residual(curve, trial.a, trial.b, trial.c, trial.s);
        if (trial.residual < candidate.residual) {
          candidate = std::move(trial);
          advanced = true;
        }
      }
      if (!advanced || st.residual - candidate.residual < opts.improve_tol) {
        if (advanced) st = std::move(candidate);
        break;
      }
      st = std::move(candidate);
    }

    if (st.residual <= opts.residual_tol && st.residual < best_residual) {
      if (auto d = make_decomposition(curve, st)) {
        best_residual = st.residual;
        best = std::move(d);
      }
    }
  }
  return best;
}

std::optional<OneprDecomposition> fit_onepr_phase_gauge(
    const StateCurve& curve, const FitOptions& opts) {
  curve.validate();
  const std::int64_t dim = curve.dim();

  auto gauged = [&](const VectorXd& phases) {
    StateCurve out = curve;
    for (auto& beta : out.beta) {
      for (std::int64_t g = 1; g < dim; ++g) {
        beta(g) = std::abs(beta(g)) * std::polar(1.0, phases(g - 1));
      }
      beta(0) = std::abs(beta(0));
    }
    return out;
  };

  FitOptions inner = opts;
  inner.restarts = std::max(4, opts.restarts / 8);
  auto objective = [&](const VectorXd& phases) {
    auto fit = fit_onepr(gauged(phases), inner);
    if (!fit) return 10.0;
    double resid = 0.0;
    StateCurve g = gauged(phases);
    for (size_t i = 0; i < g.size(); ++i) {
      resid = std::max(resid,
                       (g.beta[i] - evaluate_decomposition(*fit, g.p[i])).norm());
    }
    return resid;
  };

  NelderMeadOptions nm;
  nm.max_iters = 120;
  nm.step = 0.8;
  VectorXd best_x = VectorXd::Zero(dim - 1);
  double best_f = objective(best_x);
  for (int start = 0; start < 4 && best_f > 1e-8; ++start) {
    VectorXd x0(dim - 1);
    for (std::int64_t i = 0; i < dim - 1; ++i) {
      x0(i) = halton(start * (dim - 1) + i + 1, 2) * kTwoPi;
    }
    auto res = nelder_mead(objective, x0, nm);
    if (res.f < best_f) {
      best_f = res.f;
      best_x = res.x;
    }
  }
  return fit_onepr(gauged(best_x), opts);
}

Matrix2cd axis_rotation_matrix(const Eigen::Vector3d& axis, double angle) {
  Eigen::Vector3d n = axis;
  if (std::abs(n.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("axis_rotation_matrix: axis must be unit");
  }
  Matrix2cd ns = n(0) * Matrix2cd{{0, 1}, {1, 0}} +
                 n(1) * Matrix2cd{{0, cxd(0, -1)}, {cxd(0, 1), 0}} +
                 n(2) * Matrix2cd{{1, 0}, {0, -1}};
  return std::cos(angle / 2.0) * Matrix2cd::Identity() -
         cxd(0, 1) * std::sin(angle / 2.0) * ns;
}

ZNormalForm axis_to_z_normal_form(const AxisRotation& rot, int target) {
  if (std::abs(rot.axis.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("axis_to_z_normal_form: axis must be unit");
  }
  ZNormalForm nf;
  nf.target = target;
  nf.theta = std::acos(std::clamp(rot.axis(2), -1.0, 1.0));
  nf.phi = std::atan2(rot.axis(1), rot.axis(0));
  nf.pre = {Gate::rz(target, -nf.phi), Gate::ry(target, -nf.theta)};
  nf.post = {Gate::ry(target, nf.theta), Gate::rz(target, nf.phi)};
  return nf;
}

double OneprCircuit::s_at(double p) const { return interp_samples(s_of_p, p); }

VectorXcd OneprCircuit::state_at_s(double s) const {
  std::int64_t dim = a_matrix.rows();
  VectorXcd psi = b_matrix.col(0);
  // Controlled RZ(2s): phase e^{+is} where the target bit is 1 and all
  // controls match, e^{-is} where the target bit is 0.
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    bool active = true;
    for (const Control& c : rotation_controls) {
      int bit = (idx >> (n_qubits - 1 - c.qubit)) & 1;
      if (bit != c.value) {
        active = false;
        break;
      }
    }
    if (!active) continue;
    int tbit = (idx >> (n_qubits - 1 - rotation_target)) & 1;
    psi(idx) *= std::polar(1.0, tbit ? s : -s);
  }
  return a_matrix * psi;
}

Circuit OneprCircuit::circuit_at_s(double s) const {
  Circuit c;
  c.n_qubits = n_qubits;
  for (const Gate& g : b_gates) c.add(g);
  c.add({GateKind::RZ, 2.0 * s, rotation_target, rotation_controls});
  for (const Gate& g : a_gates) c.add(g);
  return c;
}

namespace {

// Complete the partially specified columns of `u` to a unitary by
// Gram-Schmidt against random vectors.
void complete_unitary(MatrixXcd& u, const std::vector<bool>& fixed,
                      std::mt19937_64& rng) {
  std::int64_t dim = u.rows();
  std::vector<std::int64_t> done;
  for (std::int64_t i = 0; i < dim; ++i) {
    if (fixed[i]) done.push_back(i);
  }
  for (std::int64_t i = 0; i < dim; ++i) {
    if (fixed[i]) continue;
    VectorXcd v;
    double norm = 0.0;
    do {
      v = random_unit_vector(static_cast<int>(dim), rng);
      for (std::int64_t j : done) v -= u.col(j).dot(v) * u.col(j);
      norm = v.norm();
    } while (norm < 1e-6);
    u.col(i) = v / norm;
    done.push_back(i);
  }
}

struct ZyzAngles {
  double alpha, beta, gamma, delta;  // W = e^{i alpha} RZ(beta) RY(gamma) RZ(delta)
};

ZyzAngles zyz_decompose(const Matrix2cd& w) {
  cxd det = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
  double alpha = std::arg(det) / 2.0;
  Matrix2cd su = std::polar(1.0, -alpha) * w;
  double gamma = 2.0 * std::atan2(std::abs(su(1, 0)), std::abs(su(0, 0)));
  double sum, diff;  // beta + delta, beta - delta
  if (std::abs(su(0, 0)) > 1e-12) {
    sum = -2.0 * std::arg(su(0, 0));
  } else {
    sum = 0.0;
  }
  if (std::abs(su(1, 0)) > 1e-12) {
    diff = 2.0 * std::arg(su(1, 0));
  } else {
    diff = 0.0;
  }
  return {alpha, (sum + diff) / 2.0, gamma, (sum - diff) / 2.0};
}

// Phase e^{i angle} on the subspace where every listed qubit is 1:
// peel qubits with controlled RZ until a bare RZ remains (its global
// phase e^{i angle/2} is dropped).
void emit_phase_on_ones(std::vector<Gate>& gates, double angle,
                        std::vector<int> qubits) {
  int t = qubits.back();
  qubits.pop_back();
  std::vector<Control> controls;
  for (int q : qubits) controls.push_back({q, 1});
  gates.push_back({GateKind::RZ, angle, t, controls});
  if (!qubits.empty()) emit_phase_on_ones(gates, angle / 2.0, std::move(qubits));
}

// Phase on one basis state: wrap the 0-bits of the pattern in X.
void emit_phase_on_state(std::vector<Gate>& gates, double angle,
                         std::int64_t state, int n_qubits) {
  std::vector<int> zeros, all;
  for (int q = 0; q < n_qubits; ++q) {
    all.push_back(q);
    if (((state >> (n_qubits - 1 - q)) & 1) == 0) zeros.push_back(q);
  }
  for (int q : zeros) gates.push_back(Gate::x(q));
  emit_phase_on_ones(gates, angle, all);
  for (int q : zeros) gates.push_back(Gate::x(q));
}

// Controlled application of a 2x2 unitary body on `target`, fully
// conditioned on `controls`; exact up to a global phase.
void emit_controlled_2x2(std::vector<Gate>& gates, const Matrix2cd& w,
                         int target, const std::vector<Control>& controls) {
  ZyzAngles z = zyz_decompose(w);
  if (std::abs(z.delta) > 1e-14) {
    gates.push_back({GateKind::RZ, z.delta, target, controls});
  }
  if (std::abs(z.gamma) > 1e-14) {
    gates.push_back({GateKind::RY, z.gamma, target, controls});
  }
  if (std::abs(z.beta) > 1e-14) {
    gates.push_back({GateKind::RZ, z.beta, target, controls});
  }
  if (std::abs(z.alpha) > 1e-14) {
    if (controls.empty()) return;  // global phase
    std::vector<int> qubits;
    for (const Control& c : controls) {
      if (c.value == 0) gates.push_back(Gate::x(c.qubit));
      qubits.push_back(c.qubit);
    }
    emit_phase_on_ones(gates, z.alpha, std::move(qubits));
    for (const Control& c : controls) {
      if (c.value == 0) gates.push_back(Gate::x(c.qubit));
    }
  }
}

// Two-level unitary acting on basis states i < j with body W: route i to a
// Gray-code neighbour of j, apply the controlled body, route back.
void emit_two_level(std::vector<Gate>& gates, const Matrix2cd& w,
                    std::int64_t i, std::int64_t j, int n_qubits) {
  std::vector<std::int64_t> path{i};
  std::int64_t cur = i;
  for (int q = 0; q < n_qubits; ++q) {
    std::int64_t bit = std::int64_t(1) << (n_qubits - 1 - q);
    if ((cur & bit) != (j & bit)) {
      cur ^= bit;
      path.push_back(cur);
    }
  }
  // path.back() == j; the states path[end-2] and j differ in one bit.
  auto mcx_between = [&](std::int64_t from, std::int64_t to) {
    std::int64_t diff = from ^ to;
    int q = n_qubits - 1 - std::countr_zero(static_cast<std::uint64_t>(diff));
    std::vector<Control> controls;
    for (int other = 0; other < n_qubits; ++other) {
      if (other == q) continue;
      int bit = (from >> (n_qubits - 1 - other)) & 1;
      controls.push_back({other, bit});
    }
    gates.push_back({GateKind::X, 0.0, q, controls});
  };

  size_t hops = path.size() >= 2 ? path.size() - 2 : 0;
  for (size_t t = 0; t < hops; ++t) mcx_between(path[t], path[t + 1]);

  std::int64_t partner = path[path.size() - 2];
  std::int64_t diff = partner ^ j;
  int tq = n_qubits - 1 - std::countr_zero(static_cast<std::uint64_t>(diff));
  std::vector<Control> controls;
  for (int other = 0; other < n_qubits; ++other) {
    if (other == tq) continue;
    int bit = (j >> (n_qubits - 1 - other)) & 1;
    controls.push_back({other, bit});
  }
  // Orient W so its first row acts on the state whose target bit is 0.
  Matrix2cd body = w;
  if ((partner >> (n_qubits - 1 - tq)) & 1) {
    Matrix2cd x = gate_matrix(GateKind::X);
    body = x * w * x;
  }
  emit_controlled_2x2(gates, body, tq, controls);

  for (size_t t = hops; t-- > 0;) mcx_between(path[t], path[t + 1]);
}

}  // namespace

std::vector<Gate> compile_unitary_gates(const MatrixXcd& u, int n_qubits) {
  std::int64_t dim = std::int64_t(1) << n_qubits;
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument("compile_unitary_gates: dimension mismatch");
  }
  if ((u * u.adjoint() - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() >
      1e-10) {
    throw std::invalid_argument("compile_unitary_gates: input not unitary");
  }

  // Givens reduction V -> I. Each elimination step is a two-level unitary
  // T with T V zeroing one subdiagonal entry; the compiled circuit is the
  // product of the inverses in reverse order.
  MatrixXcd v = u;
  std::vector<Gate> reductions;  // gates of T_m ... T_1 in emission order
  for (std::int64_t col = 0; col < dim - 1; ++col) {
    for (std::int64_t row = dim - 1; row > col; --row) {
      cxd top = v(col, col), bot = v(row, col);
      if (std::abs(bot) < 1e-14) continue;
      double norm = std::sqrt(std::norm(top) + std::norm(bot));
      Matrix2cd t;
      t << std::conj(top) / norm, std::conj(bot) / norm, -bot / norm, top / norm;
      // t * (top, bot)^T = (norm, 0)^T
      std::vector<Gate> step;
      emit_two_level(step, t, col, row, n_qubits);
      // Apply T to v by simulating the emitted gates on v's columns.
      Circuit tmp;
      tmp.n_qubits = n_qubits;
      for (const Gate& g : step) tmp.add(g);
      MatrixXcd t_full = circuit_unitary(tmp);
      v = t_full * v;
      for (Gate& g : step) reductions.push_back(std::move(g));
    }
    // Remove the leftover diagonal phase so later eliminations see a
    // real positive pivot.
    double phase = std::arg(v(col, col));
    if (std::abs(phase) > 1e-14) {
      std::vector<Gate> step;
      emit_phase_on_state(step, -phase, col, n_qubits);
      Circuit tmp;
      tmp.n_qubits = n_qubits;
      for (const Gate& g : step) tmp.add(g);
      v = circuit_unitary(tmp) * v;
      for (Gate& g : step) reductions.push_back(std::move(g));
    }
  }
  // v is now diagonal with unit-modulus entries and ones in the first
  // dim-1 slots; fix the last relative phase too, leaving a global phase.
  double last_phase = std::arg(v(dim - 1, dim - 1));
  if (std::abs(last_phase) > 1e-14) {
    std::vector<Gate> step;
    emit_phase_on_state(step, -last_phase, dim - 1, n_qubits);
    for (Gate& g : step) reductions.push_back(std::move(g));
  }

  std::vector<Gate> gates;
  for (auto it = reductions.rbegin(); it != reductions.rend(); ++it) {
    Gate g = *it;
    if (is_rotation(g.kind)) g.angle = -g.angle;
    gates.push_back(std::move(g));
  }
  return gates;
}

OneprCircuit synthesize_onepr_circuit(const OneprDecomposition& d,
                                      int n_qubits, std::uint64_t seed) {
  d.validate();
  if (d.n_qubits() != n_qubits) {
    throw std::invalid_argument("synthesize_onepr_circuit: qubit count mismatch");
  }
  std::int64_t dim = d.a.size();
  double na = d.a.norm(), nb = d.b.norm(), nc = d.c.norm();
  if (dim < 4 && nc > 1e-10) {
    throw std::invalid_argument(
        "synthesize_onepr_circuit: a 2-dimensional register has no slot for c");
  }

  std::mt19937_64 rng(seed);
  OneprCircuit out;
  out.n_qubits = n_qubits;
  out.rotation_target = n_qubits - 1;
  for (int q = 0; q < n_qubits - 1; ++q) out.rotation_controls.push_back({q, 1});
  out.s_of_p = d.s_of_p;

  // B sends |0> to the branch loadings; A carries the branches onto the
  // target vectors. Branch slots: |1..11> -> a, |1..10> -> b, |1..01> -> c.
  MatrixXcd b = MatrixXcd::Zero(dim, dim);
  std::vector<bool> b_fixed(dim, false);
  VectorXcd loading = VectorXcd::Zero(dim);
  loading(dim - 1) = na;
  loading(dim - 2) = nb;
  if (dim >= 4) loading(dim - 3) = nc;
  b.col(0) = loading;
  b_fixed[0] = true;
  complete_unitary(b, b_fixed, rng);

  MatrixXcd a = MatrixXcd::Zero(dim, dim);
  std::vector<bool> a_fixed(dim, false);
  if (na > 1e-12) {
    a.col(dim - 1) = d.a / na;
    a_fixed[dim - 1] = true;
  }
  if (nb > 1e-12) {
    a.col(dim - 2) = d.b / nb;
    a_fixed[dim - 2] = true;
  }
  if (dim >= 4 && nc > 1e-12) {
    a.col(dim - 3) = d.c / nc;
    a_fixed[dim - 3] = true;
  }
  complete_unitary(a, a_fixed, rng);

  out.a_matrix = a;
  out.b_matrix = b;
  out.a_gates = compile_unitary_gates(a, n_qubits);
  out.b_gates = compile_unitary_gates(b, n_qubits);
  return out;
}

std::pair<OneprDecomposition, DynamicalMap> random_onepr_map(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double half_pi = std::numbers::pi / 2.0;

  double mu = unit(rng) * half_pi;
  double nu = unit(rng) * half_pi;
  double na = std::sin(nu) * std::cos(mu);
  double nb = std::sin(nu) * std::sin(mu);
  double nc = std::cos(nu);
  double theta = unit(rng) * kTwoPi;

  // Unitary V built row by row: first row pinned, later rows random
  // combinations of a Gram-Schmidt complement of the earlier ones.
  MatrixXcd v(4, 4);
  Eigen::RowVector4cd row0;
  row0 << na, nb, nc, 0.0;
  row0 *= std::polar(1.0, theta);
  v.row(0) = row0;

  auto complement = [&](int fixed_rows) {
    std::vector<VectorXcd> basis;
    int want = 4 - fixed_rows;
    for (int cand = 0; cand < 12 && static_cast<int>(basis.size()) < want;
         ++cand) {
      VectorXcd w;
      if (cand < 4) {
        w = VectorXcd::Zero(4);
        w(cand) = 1.0;
      } else {
        w = random_unit_vector(4, rng);
      }
      for (int r = 0; r < fixed_rows; ++r) {
        VectorXcd row = v.row(r).transpose().conjugate();
        w -= row.dot(w) * row;
      }
      for (const VectorXcd& prev : basis) w -= prev.dot(w) * prev;
      if (w.norm() > 1e-6) basis.push_back(w / w.norm());
    }
    if (static_cast<int>(basis.size()) < want) {
      throw std::runtime_error("random_onepr_map: orthogonal complement failed");
    }
    return basis;
  };

  auto basis1 = complement(1);
  VectorXcd r3 = random_unit_vector(3, rng);
  v.row(1) = (r3(0) * basis1[0] + r3(1) * basis1[1] + r3(2) * basis1[2])
                 .conjugate()
                 .transpose();

  auto basis2 = complement(2);
  VectorXcd q2 = random_unit_vector(2, rng);
  v.row(2) = (q2(0) * basis2[0] + q2(1) * basis2[1]).conjugate().transpose();

  auto basis3 = complement(3);
  v.row(3) = std::polar(1.0, unit(rng) * kTwoPi) *
             basis3[0].conjugate().transpose();

  OneprDecomposition d;
  d.a = na * v.col(0);
  d.b = nb * v.col(1);
  d.c = nc * v.col(2);
  d.s_of_p = {{0.0, 0.0}, {half_pi, half_pi}};
  d.validate();

  DynamicalMap map;
  map.n_qubits = 1;
  map.p_min = 0.0;
  map.p_max = half_pi;
  OneprDecomposition copy = d;
  map.k_of_p = [copy](double p) {
    VectorXcd beta = evaluate_decomposition(copy, p);
    return PauliProbVector(beta.cwiseAbs2());
  };
  return {std::move(d), std::move(map)};
}

}  // namespace pauliforge
