#include "emacreg/quadrature.hpp"

#include <array>

namespace emacreg {
namespace {

void add_point(QuadratureRule& r, Scalar xi, Scalar eta, Scalar w) {
  r.points.emplace_back(xi, eta);
  r.weights.push_back(w);
}

// Symmetric orbit (a, a), (1-2a, a), (a, 1-2a).
void add_group3(QuadratureRule& r, Scalar a, Scalar w) {
  add_point(r, a, a, w);
  add_point(r, 1 - 2 * a, a, w);
  add_point(r, a, 1 - 2 * a, w);
}

// Full orbit of the barycentric triple (a, b, 1-a-b).
void add_group6(QuadratureRule& r, Scalar a, Scalar b, Scalar w) {
  const Scalar c = 1 - a - b;
  add_point(r, a, b, w);
  add_point(r, b, a, w);
  add_point(r, a, c, w);
  add_point(r, c, a, w);
  add_point(r, b, c, w);
  add_point(r, c, b, w);
}

QuadratureRule make_rule(int exactness) {
  QuadratureRule r;
  r.exactness = exactness;
  switch (exactness) {
    case 1:
      add_point(r, 1.0 / 3, 1.0 / 3, 1.0);
      break;
    case 2:
      add_group3(r, 1.0 / 6, 1.0 / 3);
      break;
    case 3:
      add_point(r, 1.0 / 3, 1.0 / 3, -27.0 / 48);
      add_group3(r, 0.2, 25.0 / 48);
      break;
    case 4:
      add_group3(r, 0.445948490915965, 0.223381589678011);
      add_group3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      add_point(r, 1.0 / 3, 1.0 / 3, 0.225);
      add_group3(r, 0.470142064105115, 0.132394152788506);
      add_group3(r, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      add_group3(r, 0.063089014491502, 0.050844906370207);
      add_group3(r, 0.249286745170910, 0.116786275726379);
      add_group6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
    case 8:
      add_point(r, 1.0 / 3, 1.0 / 3, 0.1443156076777872);
      add_group3(r, 0.4592925882927231, 0.0950916342672846);
      add_group3(r, 0.1705693077517602, 0.1032173705347183);
      add_group3(r, 0.0505472283170310, 0.0324584976231980);
      add_group6(r, 0.2631128296346381, 0.0083947774099576, 0.0272303141744350);
      break;
    default:
      throw std::invalid_argument("quadrature: no rule with exactness " +
                                  std::to_string(exactness));
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature(int order) {
  if (order < 1 || order > 8)
    throw std::invalid_argument("quadrature: order must be in [1, 8], got " +
                                std::to_string(order));
  static const std::array<QuadratureRule, 7> table = {
      make_rule(1), make_rule(2), make_rule(3), make_rule(4),
      make_rule(5), make_rule(6), make_rule(8)};
  if (order <= 6) return table[order - 1];
  return table[6];  // degree-8 rule serves orders 7 and 8
}

}  // namespace emacreg
