#pragma once

#include "emacreg/types.hpp"

#include <vector>

namespace emacreg {

// Quadrature rule on the reference triangle (0,0)-(1,0)-(0,1).
// Points are reference coordinates (xi, eta); weights sum to one and are
// scaled by the physical triangle area at use:
//   integral over K  =  area(K) * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<Scalar> weights;
  int exactness = 0;  // integrates polynomials up to this total degree exactly
};

// Returns a rule exact for polynomials of total degree <= order (order <= 8).
// Throws std::invalid_argument outside the supported table.
const QuadratureRule& quadrature(int order);

}  // namespace emacreg
