#include "emacreg/diagnostics.hpp"

#include <cmath>

namespace emacreg {

const char* to_string(ProbeTest t) {
  switch (t) {
    case ProbeTest::E1: return "e1";
    case ProbeTest::E2: return "e2";
    case ProbeTest::Phi: return "phi";
  }
  return "?";
}

namespace {

// Integrates fn(x, w_val, grad_w, u_val) over the mesh of a shared space.
template <typename F>
Scalar integrate_pair(const Field& w, const Field& u, int order, F&& fn) {
  const FeSpace& sp = *w.space;
  const auto& rule = quadrature(order);
  std::array<Scalar, 6> val{};
  std::array<Vec2, 6> dref{}, grad{};
  Scalar total = 0;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_basis(sp.degree, rule.points[q], val);
      eval_basis_grad(sp.degree, rule.points[q], dref);
      for (int i = 0; i < sp.nbasis; ++i) grad[i] = g.inv_jac_t * dref[i];
      Vec2 wv = Vec2::Zero(), uv = Vec2::Zero();
      Mat2 gw = Mat2::Zero();
      for (int i = 0; i < sp.nbasis; ++i) {
        const Scalar wx = w.coeffs[2 * sd[i]], wy = w.coeffs[2 * sd[i] + 1];
        wv += Vec2(wx, wy) * val[i];
        uv += Vec2(u.coeffs[2 * sd[i]], u.coeffs[2 * sd[i] + 1]) * val[i];
        gw.row(0) += wx * grad[i].transpose();
        gw.row(1) += wy * grad[i].transpose();
      }
      total += rule.weights[q] * g.area * fn(g.map(rule.points[q]), wv, gw, uv);
    }
  }
  return total;
}

Vec2 probe_direction(ProbeTest test, const Vec2& x) {
  switch (test) {
    case ProbeTest::E1: return Vec2(1, 0);
    case ProbeTest::E2: return Vec2(0, 1);
    case ProbeTest::Phi: return Vec2(x.y(), -x.x());
  }
  return Vec2::Zero();
}

// Smoothstep extension: 1 on [0.25, 0.75], 0 at the unit-square boundary.
Scalar rolloff(Scalar s) {
  if (s >= 0.25 && s <= 0.75) return 1.0;
  const Scalar d = s < 0.25 ? s / 0.25 : (1 - s) / 0.25;
  if (d <= 0) return 0.0;
  return d * d * (3 - 2 * d);
}

void require_probe_support(const Field& f, const char* name) {
  const FeSpace& sp = *f.space;
  const Scalar scale = f.coeffs.cwiseAbs().maxCoeff();
  const Scalar tol = 1e-12 * (1 + scale);
  for (Index s = 0; s < sp.num_scalar; ++s) {
    const Vec2& x = sp.sdof_coords[s];
    const bool interior = x.x() > 0.25 + 1e-12 && x.x() < 0.75 - 1e-12 &&
                          x.y() > 0.25 + 1e-12 && x.y() < 0.75 - 1e-12;
    if (interior) continue;
    for (int c = 0; c < sp.components; ++c)
      if (std::abs(f.coeffs[sp.gdof(s, c)]) > tol)
        throw std::invalid_argument(std::string("momentum_probe: field ") + name +
                                    " has support in the boundary strip");
  }
}

}  // namespace

ConservedQuantities conserved_quantities(const State& s) {
  ConservedQuantities out;
  out.energy = 0.5 * inner_product(s.u, s.w);
  out.momentum.x() = integrate_pair(
      s.u, s.u, kFormQuadOrder,
      [](const Vec2&, const Vec2& v, const Mat2&, const Vec2&) { return v.x(); });
  out.momentum.y() = integrate_pair(
      s.u, s.u, kFormQuadOrder,
      [](const Vec2&, const Vec2& v, const Mat2&, const Vec2&) { return v.y(); });
  out.ang_momentum =
      integrate_pair(s.u, s.u, kFormQuadOrder,
                     [](const Vec2& x, const Vec2& v, const Mat2&, const Vec2&) {
                       return v.x() * x.y() - v.y() * x.x();
                     });
  return out;
}

DiagnosticsRecord make_record(const State& s, const AnalyticSolution* exact) {
  DiagnosticsRecord r;
  r.t = s.t;
  const ConservedQuantities cq = conserved_quantities(s);
  r.energy_model = cq.energy;
  const Scalar un = l2_norm(s.u);
  r.energy_kinetic = 0.5 * un * un;
  r.momentum = cq.momentum;
  r.ang_momentum = cq.ang_momentum;
  r.enstrophy = enstrophy(s.u);
  r.div_u_norm = divergence_l2(s.u);
  r.div_w_norm = divergence_l2(s.w);
  if (exact) {
    if (exact->u_exact && exact->u) r.err_l2_u = l2_error(s.u, exact->u, s.t);
    if (exact->w_exact && exact->w) {
      r.err_l2_w = l2_error(s.w, exact->w, s.t);
      if (exact->grad_w) {
        const Scalar semi = h1_semi_error(s.w, exact->grad_w, s.t);
        r.err_h1_w = std::sqrt(semi * semi + *r.err_l2_w * *r.err_l2_w);
      }
    }
  }
  return r;
}

Scalar momentum_probe(NonlinearKind kind, const Field& w, const Field& u,
                      ProbeTest test) {
  if (!w.space || w.space != u.space || w.space->components != 2)
    throw std::invalid_argument("momentum_probe: need two fields on one vector space");
  require_probe_support(w, "w");
  require_probe_support(u, "u");
  const Field chi = interpolate(*w.space, [&](const Vec2& x, Scalar) {
    return Vec2(rolloff(x.x()) * rolloff(x.y()) * probe_direction(test, x));
  });
  const Field& a = w;
  const Field& b = (kind == NonlinearKind::Emac) ? w : u;
  return apply_nonlinear(kind, a, b).dot(chi.coeffs);
}

Scalar momentum_probe_closed_form(NonlinearKind kind, const Field& w, const Field& u,
                                  ProbeTest test) {
  switch (kind) {
    case NonlinearKind::Emac:
      return 0.0;
    case NonlinearKind::Conv:
    case NonlinearKind::Leray:
      return -integrate_pair(w, u, kErrorQuadOrder,
                             [&](const Vec2& x, const Vec2&, const Mat2& gw,
                                 const Vec2& uv) {
                               return gw.trace() * uv.dot(probe_direction(test, x));
                             });
    case NonlinearKind::Skew:
      return -0.5 * integrate_pair(w, u, kErrorQuadOrder,
                                   [&](const Vec2& x, const Vec2&, const Mat2& gw,
                                       const Vec2& uv) {
                                     return gw.trace() *
                                            uv.dot(probe_direction(test, x));
                                   });
    case NonlinearKind::Rot:
      return integrate_pair(w, u, kErrorQuadOrder,
                            [&](const Vec2& x, const Vec2&, const Mat2& gw,
                                const Vec2& uv) {
                              const Vec2 g = probe_direction(test, x);
                              return -gw.trace() * g.dot(uv) + (gw * g).dot(uv);
                            });
  }
  return 0.0;
}

std::pair<Field, Field> designed_probe_pair(const FeSpace& space, Scalar gain,
                                            Scalar s) {
  auto p = [](Scalar v) {
    const Scalar t = (v - 0.5) / 0.25;
    if (std::abs(t) >= 1) return 0.0;
    const Scalar q = 1 - t * t;
    return q * q;
  };
  auto dp = [](Scalar v) {
    const Scalar t = (v - 0.5) / 0.25;
    if (std::abs(t) >= 1) return 0.0;
    return -16.0 * t * (1 - t * t);
  };
  Field w = interpolate(space, [&](const Vec2& x, Scalar) {
    return Vec2(p(x.x()) * p(x.y()), s * p(x.x()) * dp(x.y()));
  });
  Field u = w;
  u.coeffs *= gain;
  return {std::move(w), std::move(u)};
}

}  // namespace emacreg
