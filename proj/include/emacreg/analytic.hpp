#pragma once

#include "emacreg/types.hpp"

namespace emacreg {

// Closed-form reference solution attached to a benchmark. Validity flags say
// which fields are exact; unset functions are skipped by the error tracker.
struct AnalyticSolution {
  VectorFn w;       // filtered velocity
  VectorFn u;       // velocity
  TensorFn grad_w;  // (r, c) = d w_r / d x_c
  ScalarFn p;       // pressure, reference output only
  bool w_exact = false;
  bool u_exact = false;
  bool p_exact = false;
};

}  // namespace emacreg
