#include "pauliforge/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pauliforge {

NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f,
                             const VectorXd& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<VectorXd> x(n + 1, x0);
  std::vector<double> fx(n + 1);
  for (int i = 1; i <= n; ++i) x[i](i - 1) += opts.step;
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<int> order(n + 1);
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fx[a] < fx[b]; });
    int best = order[0], worst = order[n], second = order[n - 1];

    double spread = 0.0;
    for (int i = 0; i <= n; ++i) {
      spread = std::max(spread, (x[i] - x[best]).cwiseAbs().maxCoeff());
    }
    if (spread < opts.simplex_tol && std::abs(fx[worst] - fx[best]) < opts.f_tol) {
      break;
    }

    VectorXd centroid = VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= n;

    VectorXd xr = centroid + alpha * (centroid - x[worst]);
    double fr = f(xr);
    if (fr < fx[best]) {
      VectorXd xe = centroid + gamma * (xr - centroid);
      double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
    } else if (fr < fx[second]) {
      x[worst] = xr;
      fx[worst] = fr;
    } else {
      bool outside = fr < fx[worst];
      VectorXd xc = outside ? centroid + rho * (xr - centroid)
                            : centroid + rho * (x[worst] - centroid);
      double fc = f(xc);
      if (fc < (outside ? fr : fx[worst])) {
        x[worst] = xc;
        fx[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          x[i] = x[best] + sigma * (x[i] - x[best]);
          fx[i] = f(x[i]);
        }
      }
    }
  }

  int best = static_cast<int>(
      std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], iter};
}

double halton(std::int64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace pauliforge
