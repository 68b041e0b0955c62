#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emacreg/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace emacreg;

namespace {
constexpr double kPi = std::numbers::pi;

Field random_zero_trace_field(const FeSpace& sp, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1, 1);
  Field f = make_field(sp);
  for (Index i = 0; i < sp.ndofs(); ++i) f.coeffs[i] = unif(rng);
  std::set<Index> boundary;
  for (const auto& [marker, sdofs] : sp.boundary_sdofs)
    for (Index s : sdofs) boundary.insert(s);
  for (Index s : boundary)
    for (int c = 0; c < sp.components; ++c) f.coeffs[sp.gdof(s, c)] = 0.0;
  return f;
}

double h1_norm(const Field& f) {
  const double l2 = l2_norm(f), h1 = h1_seminorm(f);
  return std::sqrt(l2 * l2 + h1 * h1);
}

// C1 bump supported on [0.25, 0.75]^2, value 1 at the center.
double bump_1d(double s) {
  const double t = (s - 0.5) / 0.25;
  if (std::abs(t) >= 1) return 0.0;
  const double u = 1 - t * t;
  return u * u;
}

double bump_1d_deriv(double s) {
  const double t = (s - 0.5) / 0.25;
  if (std::abs(t) >= 1) return 0.0;
  return -16.0 * t * (1 - t * t);
}

double bump(const Vec2& x) { return bump_1d(x.x()) * bump_1d(x.y()); }

// Smoothstep extension: 1 on [0.25, 0.75]^2, 0 on the outer boundary.
double rolloff(const Vec2& x) {
  auto ramp = [](double s) {
    if (s >= 0.25 && s <= 0.75) return 1.0;
    const double d = s < 0.25 ? s / 0.25 : (1 - s) / 0.25;
    if (d <= 0) return 0.0;
    return d * d * (3 - 2 * d);
  };
  return ramp(x.x()) * ramp(x.y());
}

// ((div a) b) . c integrated with the order-8 rule; independent of the
// assembled form path.
double div_pairing(const Field& a, const Field& b, const Field& c) {
  const FeSpace& sp = *a.space;
  const auto& rule = quadrature(8);
  std::array<double, 6> val{};
  std::array<Vec2, 6> dref{}, grad{};
  double total = 0;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_basis(sp.degree, rule.points[q], val);
      eval_basis_grad(sp.degree, rule.points[q], dref);
      for (int i = 0; i < sp.nbasis; ++i) grad[i] = g.inv_jac_t * dref[i];
      double div_a = 0;
      Vec2 vb = Vec2::Zero(), vc = Vec2::Zero();
      for (int i = 0; i < sp.nbasis; ++i) {
        div_a += a.coeffs[2 * sd[i]] * grad[i][0] + a.coeffs[2 * sd[i] + 1] * grad[i][1];
        vb += Vec2(b.coeffs[2 * sd[i]], b.coeffs[2 * sd[i] + 1]) * val[i];
        vc += Vec2(c.coeffs[2 * sd[i]], c.coeffs[2 * sd[i] + 1]) * val[i];
      }
      total += rule.weights[q] * g.area * div_a * vb.dot(vc);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("mass matrix integrates constants exactly") {
  const Mesh m = build_rectangle_mesh(5, 4, Rect{0, 0, 1, 1});
  const FeSpace p1 = build_space(m, 1, 1);
  const Field one1 = interpolate(p1, ScalarFn([](const Vec2&, Scalar) { return 1.0; }));
  const SpMat m1 = assemble_mass(p1);
  CHECK(std::abs(one1.coeffs.dot(m1 * one1.coeffs) - 1.0) < 1e-13);

  const FeSpace p2v = build_space(m, 2, 2);
  const Field one2 =
      interpolate(p2v, VectorFn([](const Vec2&, Scalar) { return Vec2(1, 1); }));
  const SpMat m2 = assemble_mass(p2v);
  CHECK(std::abs(one2.coeffs.dot(m2 * one2.coeffs) - 2.0) < 1e-13);
  CHECK((Eigen::MatrixXd(m2) - Eigen::MatrixXd(m2).transpose()).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("mass pairing of x and y over the unit square is 1/4") {
  const Mesh m = build_rectangle_mesh(4, 4, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 1);
  const Field fx = interpolate(sp, ScalarFn([](const Vec2& x, Scalar) { return x.x(); }));
  const Field fy = interpolate(sp, ScalarFn([](const Vec2& x, Scalar) { return x.y(); }));
  const SpMat mm = assemble_mass(sp);
  CHECK(std::abs(fx.coeffs.dot(mm * fy.coeffs) - 0.25) < 1e-13);
}

TEST_CASE("stiffness: constants in the nullspace, Dirichlet energy of x is 1") {
  const Mesh m = build_rectangle_mesh(4, 3, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 1, 1);
  const SpMat a = assemble_stiffness(sp);
  const Field c = interpolate(sp, ScalarFn([](const Vec2&, Scalar) { return 3.0; }));
  CHECK((a * c.coeffs).cwiseAbs().maxCoeff() < 1e-13);
  const Field fx = interpolate(sp, ScalarFn([](const Vec2& x, Scalar) { return x.x(); }));
  CHECK(std::abs(fx.coeffs.dot(a * fx.coeffs) - 1.0) < 1e-13);
}

TEST_CASE("stiffness energy of the analytic vortex field is pi^2") {
  const VectorFn w = [](const Vec2& x, Scalar) {
    return Vec2(-std::cos(kPi * x.x()) * std::sin(kPi * x.y()),
                std::sin(kPi * x.x()) * std::cos(kPi * x.y()));
  };
  const Mesh m = build_rectangle_mesh(32, 32, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field f = interpolate(sp, w);
  const SpMat a = assemble_stiffness(sp);
  const double energy = f.coeffs.dot(a * f.coeffs);
  CHECK(energy == doctest::Approx(kPi * kPi).epsilon(0.02));
}

TEST_CASE("divergence operator on exact fields") {
  const Mesh m = build_rectangle_mesh(4, 4, Rect{0, 0, 1, 1});
  const FeSpace vel = build_space(m, 2, 2);
  const FeSpace pres = build_space(m, 1, 1);
  const SpMat b = assemble_divergence(vel, pres);

  const Field c = interpolate(vel, VectorFn([](const Vec2&, Scalar) { return Vec2(2, -1); }));
  CHECK((b * c.coeffs).cwiseAbs().maxCoeff() < 1e-13);

  const Field solenoidal =
      interpolate(vel, VectorFn([](const Vec2& x, Scalar) { return Vec2(x.x(), -x.y()); }));
  CHECK((b * solenoidal.coeffs).cwiseAbs().maxCoeff() < 1e-13);

  // Divergence theorem: sum of all pressure-row integrals of div (x, 0) is 1.
  const Field fx =
      interpolate(vel, VectorFn([](const Vec2& x, Scalar) { return Vec2(x.x(), 0); }));
  CHECK(std::abs((b * fx.coeffs).sum() - 1.0) < 1e-13);
}

TEST_CASE("divergence rejects mismatched spaces") {
  const Mesh m1 = build_rectangle_mesh(2, 2, Rect{0, 0, 1, 1});
  const Mesh m2 = build_rectangle_mesh(3, 3, Rect{0, 0, 1, 1});
  const FeSpace vel = build_space(m1, 2, 2);
  const FeSpace pres = build_space(m2, 1, 1);
  CHECK_THROWS_AS(assemble_divergence(vel, pres), std::invalid_argument);
}

TEST_CASE("emac form vanishes on constant fields") {
  const Mesh m = build_rectangle_mesh(3, 3, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field c = interpolate(sp, VectorFn([](const Vec2&, Scalar) { return Vec2(1, 0); }));
  CHECK(apply_nonlinear(NonlinearKind::Emac, c, c).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("emac self-annihilation: c(w,w,w) = 0 for zero-trace fields") {
  const Mesh m = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Field w = random_zero_trace_field(sp, 100 + seed);
    const double c_www = apply_nonlinear(NonlinearKind::Emac, w, w).dot(w.coeffs);
    const double scale = h1_norm(w);
    CHECK(std::abs(c_www) <= 1e-12 * (1 + scale * scale * scale));
  }
}

TEST_CASE("skew self-annihilation for zero-trace fields") {
  const Mesh m = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Field w = random_zero_trace_field(sp, 300 + seed);
    const double v = apply_nonlinear(NonlinearKind::Skew, w, w).dot(w.coeffs);
    const double scale = h1_norm(w);
    CHECK(std::abs(v) <= 1e-12 * (1 + scale * scale * scale));
  }
}

TEST_CASE("integration-by-parts identities for zero-trace fields") {
  const Mesh m = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Field a = random_zero_trace_field(sp, 500 + 3 * seed);
    const Field b = random_zero_trace_field(sp, 501 + 3 * seed);
    const Field c = random_zero_trace_field(sp, 502 + 3 * seed);
    const VecX conv_ab = apply_nonlinear(NonlinearKind::Conv, a, b);
    const VecX conv_ac = apply_nonlinear(NonlinearKind::Conv, a, c);
    const VecX skew_ab = apply_nonlinear(NonlinearKind::Skew, a, b);
    const double scale =
        1 + h1_norm(a) * h1_norm(b) * h1_norm(c) + h1_norm(a) * h1_norm(c) * h1_norm(c);

    // (a.grad b, c) + (a.grad c, b) + ((div a) b, c) = 0
    const double div_abc = 2 * (skew_ab - conv_ab).dot(c.coeffs);
    CHECK(std::abs(conv_ab.dot(c.coeffs) + conv_ac.dot(b.coeffs) + div_abc) <=
          1e-12 * scale);

    // (a.grad c, c) = -((div a) c, c) / 2
    const VecX skew_ac = apply_nonlinear(NonlinearKind::Skew, a, c);
    const double div_acc = 2 * (skew_ac - conv_ac).dot(c.coeffs);
    CHECK(std::abs(conv_ac.dot(c.coeffs) + 0.5 * div_acc) <= 1e-12 * scale);
  }
}

TEST_CASE("pointwise transpose identity needs no boundary condition") {
  // (a.grad b, c) = ((grad b)^T c, a): check against an order-8 oracle that
  // integrates the right-hand side directly.
  const Mesh m = build_rectangle_mesh(6, 6, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unif(-1, 1);
  Field a = make_field(sp), b = make_field(sp), c = make_field(sp);
  for (Index i = 0; i < sp.ndofs(); ++i) {
    a.coeffs[i] = unif(rng);
    b.coeffs[i] = unif(rng);
    c.coeffs[i] = unif(rng);
  }
  const double lhs = apply_nonlinear(NonlinearKind::Conv, a, b).dot(c.coeffs);

  const auto& rule = quadrature(8);
  std::array<double, 6> val{};
  std::array<Vec2, 6> dref{}, grad{};
  double rhs = 0;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_basis(sp.degree, rule.points[q], val);
      eval_basis_grad(sp.degree, rule.points[q], dref);
      for (int i = 0; i < sp.nbasis; ++i) grad[i] = g.inv_jac_t * dref[i];
      Vec2 va = Vec2::Zero(), vc = Vec2::Zero();
      Mat2 gb = Mat2::Zero();
      for (int i = 0; i < sp.nbasis; ++i) {
        va += Vec2(a.coeffs[2 * sd[i]], a.coeffs[2 * sd[i] + 1]) * val[i];
        vc += Vec2(c.coeffs[2 * sd[i]], c.coeffs[2 * sd[i] + 1]) * val[i];
        gb.row(0) += b.coeffs[2 * sd[i]] * grad[i].transpose();
        gb.row(1) += b.coeffs[2 * sd[i] + 1] * grad[i].transpose();
      }
      rhs += rule.weights[q] * g.area * (gb.transpose() * vc).dot(va);
    }
  }
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
}

TEST_CASE("emac form on compact fields ignores the interior-constant extension") {
  const Mesh m = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field w = interpolate(sp, VectorFn([](const Vec2& x, Scalar) {
                                return Vec2(bump(x) * x.x(), 0.0);
                              }));
  const Field chi = interpolate(sp, VectorFn([](const Vec2& x, Scalar) {
                                  return Vec2(rolloff(x), 0.0);
                                }));
  const double v = apply_nonlinear(NonlinearKind::Emac, w, w).dot(chi.coeffs);
  CHECK(std::abs(v) <= 1e-12 * (1 + std::pow(h1_norm(w), 3)));
}

TEST_CASE("leray form on compact fields matches the divergence pairing oracle") {
  const Mesh m = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  // Non-solenoidal compact pair; u is a plain multiple of w so the pairing
  // identity has no extra cross terms. The second component breaks the
  // symmetry that would otherwise integrate the pairing to zero.
  const Field w = interpolate(sp, VectorFn([](const Vec2& x, Scalar) {
                                return Vec2(bump(x), 0.5 * bump_1d(x.x()) * bump_1d_deriv(x.y()));
                              }));
  Field u = w;
  u.coeffs *= 1.25;
  const Field chi = interpolate(sp, VectorFn([](const Vec2& x, Scalar) {
                                  return Vec2(rolloff(x), 0.0);
                                }));
  const double probe = apply_nonlinear(NonlinearKind::Leray, w, u).dot(chi.coeffs);
  const double oracle = -div_pairing(w, u, chi);
  CHECK(probe == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(std::abs(probe) > 1e-3);
}

TEST_CASE("jacobian of the zero state is the zero matrix") {
  const Mesh m = build_rectangle_mesh(3, 3, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field z = make_field(sp);
  for (auto kind : {NonlinearKind::Emac, NonlinearKind::Skew, NonlinearKind::Conv,
                    NonlinearKind::Rot, NonlinearKind::Leray})
    CHECK(assemble_nonlinear_jacobian(kind, z, z).nonZeros() == 0);
}

TEST_CASE("jacobians match central finite differences") {
  const Mesh m = build_rectangle_mesh(4, 4, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unif(-1, 1);
  Field a = make_field(sp);
  for (Index i = 0; i < sp.ndofs(); ++i) a.coeffs[i] = unif(rng);

  const double eps = 1e-5;
  for (auto kind : {NonlinearKind::Emac, NonlinearKind::Skew, NonlinearKind::Conv,
                    NonlinearKind::Rot, NonlinearKind::Leray}) {
    const SpMat j = assemble_nonlinear_jacobian(kind, a, a, JacSlot::Both);
    for (unsigned trial = 0; trial < 4; ++trial) {
      Field delta = make_field(sp);
      std::mt19937 drng(900 + trial);
      for (Index i = 0; i < sp.ndofs(); ++i) delta.coeffs[i] = unif(drng);
      Field plus = a, minus = a;
      plus.coeffs += eps * delta.coeffs;
      minus.coeffs -= eps * delta.coeffs;
      const VecX fd = (apply_nonlinear(kind, plus, plus) -
                       apply_nonlinear(kind, minus, minus)) /
                      (2 * eps);
      const VecX jd = j * delta.coeffs;
      const double rel = (jd - fd).norm() / (fd.norm() + 1e-30);
      INFO("kind ", to_string(kind), " trial ", trial);
      CHECK(rel <= 1e-6);
    }
  }
}

TEST_CASE("slot jacobians sum to the self-coupled jacobian") {
  const Mesh m = build_rectangle_mesh(3, 3, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unif(-1, 1);
  Field a = make_field(sp), b = make_field(sp);
  for (Index i = 0; i < sp.ndofs(); ++i) {
    a.coeffs[i] = unif(rng);
    b.coeffs[i] = unif(rng);
  }
  for (auto kind : {NonlinearKind::Emac, NonlinearKind::Rot}) {
    const Eigen::MatrixXd first =
        Eigen::MatrixXd(assemble_nonlinear_jacobian(kind, a, b, JacSlot::First));
    const Eigen::MatrixXd second =
        Eigen::MatrixXd(assemble_nonlinear_jacobian(kind, a, b, JacSlot::Second));
    const Eigen::MatrixXd both =
        Eigen::MatrixXd(assemble_nonlinear_jacobian(kind, a, b, JacSlot::Both));
    CHECK((first + second - both).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("frozen-slot convection jacobian equals a directly assembled matrix") {
  // With a = (1, 0) the second-slot jacobian is (d phi_j / dx, phi_i) per
  // component; rebuild it with an order-5 rule as an independent path.
  const Mesh m = build_rectangle_mesh(2, 2, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field a = interpolate(sp, VectorFn([](const Vec2&, Scalar) { return Vec2(1, 0); }));
  const Field b = random_zero_trace_field(sp, 4);
  const Eigen::MatrixXd j =
      Eigen::MatrixXd(assemble_nonlinear_jacobian(NonlinearKind::Conv, a, b, JacSlot::Second));

  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(sp.ndofs(), sp.ndofs());
  const auto& rule = quadrature(5);
  std::array<double, 6> val{};
  std::array<Vec2, 6> dref{}, grad{};
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_basis(sp.degree, rule.points[q], val);
      eval_basis_grad(sp.degree, rule.points[q], dref);
      for (int i = 0; i < sp.nbasis; ++i) grad[i] = g.inv_jac_t * dref[i];
      for (int i = 0; i < sp.nbasis; ++i)
        for (int jj = 0; jj < sp.nbasis; ++jj)
          for (int c = 0; c < 2; ++c)
            ref(sp.gdof(sd[i], c), sp.gdof(sd[jj], c)) +=
                rule.weights[q] * g.area * val[i] * grad[jj][0];
    }
  }
  CHECK((j - ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kind mismatch is rejected") {
  const Mesh m = build_rectangle_mesh(2, 2, Rect{0, 0, 1, 1});
  const FeSpace v2 = build_space(m, 2, 2);
  const FeSpace s1 = build_space(m, 2, 1);
  Field a = make_field(v2), b = make_field(v2), s = make_field(s1);
  CHECK_THROWS_AS(apply_nonlinear(NonlinearKind::Emac, a, s), std::invalid_argument);
  CHECK_THROWS_AS(apply_nonlinear(NonlinearKind::Emac, s, s), std::invalid_argument);
  CHECK_NOTHROW(apply_nonlinear(NonlinearKind::Emac, a, b));
}

TEST_CASE("field integral utilities") {
  const Mesh m = build_rectangle_mesh(6, 6, Rect{0, 0, 1, 1});
  const FeSpace sp = build_space(m, 2, 2);
  const Field fx =
      interpolate(sp, VectorFn([](const Vec2& x, Scalar) { return Vec2(x.x(), 0); }));
  CHECK(h1_seminorm(fx) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(divergence_l2(fx) == doctest::Approx(1.0).epsilon(1e-13));
  const Field fy =
      interpolate(sp, VectorFn([](const Vec2& x, Scalar) { return Vec2(x.y(), 0); }));
  CHECK(enstrophy(fy) == doctest::Approx(0.5).epsilon(1e-13));
  const Field c = interpolate(sp, VectorFn([](const Vec2&, Scalar) { return Vec2(1, 0); }));
  CHECK(l2_norm(c) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l2_error(fx, [](const Vec2& x, Scalar) { return Vec2(x.x(), 0); }, 0.0) < 1e-13);
  CHECK(inner_product(fx, c) == doctest::Approx(0.5).epsilon(1e-13));
}
