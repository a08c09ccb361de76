#pragma once

#include <functional>

#include "pauliforge/types.hpp"

namespace pauliforge {

struct NelderMeadOptions {
  int max_iters = 400;
  double simplex_tol = 1e-10;  // stop when vertex spread shrinks below this
  double f_tol = 1e-13;
  double step = 0.3;  // initial simplex edge
};

struct NelderMeadResult {
  VectorXd x;
  double f = 0.0;
  int iters = 0;
};

// Downhill simplex minimization with the standard reflection/expansion/
// contraction/shrink moves.
NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f,
                             const VectorXd& x0,
                             const NelderMeadOptions& opts = {});

// Element `index` (1-based) of the van der Corput sequence in the given
// prime base; coordinates of a Halton point.
double halton(std::int64_t index, int base);

}  // namespace pauliforge
