#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emacreg/quadrature.hpp"

#include <cmath>

using namespace emacreg;

namespace {

// Exact integral of x^p y^q over the reference triangle: p! q! / (p+q+2)!.
double monomial_integral(int p, int q) {
  auto fact = [](int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return fact(p) * fact(q) / fact(p + q + 2);
}

double integrate_monomial(const QuadratureRule& r, int p, int q) {
  double s = 0;
  for (std::size_t i = 0; i < r.points.size(); ++i)
    s += r.weights[i] * std::pow(r.points[i].x(), p) * std::pow(r.points[i].y(), q);
  return 0.5 * s;  // reference triangle area
}

}  // namespace

TEST_CASE("order 1 is the single centroid point") {
  const auto& r = quadrature(1);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].x() == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r.points[0].y() == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("order 4 integrates x^2 y^2 to 1/180") {
  const auto& r = quadrature(4);
  CHECK(std::abs(integrate_monomial(r, 2, 2) - 1.0 / 180) < 1e-15);
}

TEST_CASE("each rule is exact for its full monomial basis") {
  for (int order : {1, 2, 3, 4, 5, 6, 7, 8}) {
    const auto& r = quadrature(order);
    REQUIRE(r.exactness >= order);
    for (int p = 0; p <= order; ++p)
      for (int q = 0; q + p <= order; ++q) {
        const double err = std::abs(integrate_monomial(r, p, q) - monomial_integral(p, q));
        INFO("order ", order, " monomial x^", p, " y^", q);
        CHECK(err < 1e-14);
      }
  }
}

TEST_CASE("weights sum to one") {
  for (int order : {1, 2, 3, 4, 5, 6, 8}) {
    const auto& r = quadrature(order);
    double s = 0;
    for (double w : r.weights) s += w;
    CHECK(std::abs(s - 1.0) < 1e-14);
  }
}

TEST_CASE("unsupported orders are rejected") {
  CHECK_THROWS_AS(quadrature(0), std::invalid_argument);
  CHECK_THROWS_AS(quadrature(9), std::invalid_argument);
  CHECK_THROWS_AS(quadrature(-3), std::invalid_argument);
}
