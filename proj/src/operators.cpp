#include "emacreg/operators.hpp"

#include <cmath>

namespace emacreg {

const char* to_string(NonlinearKind k) {
  switch (k) {
    case NonlinearKind::Emac: return "emac";
    case NonlinearKind::Skew: return "skew";
    case NonlinearKind::Conv: return "conv";
    case NonlinearKind::Rot: return "rot";
    case NonlinearKind::Leray: return "leray";
  }
  return "?";
}

namespace {

// Reference basis values and gradients tabulated at the quadrature points.
struct RefBasis {
  int nbasis = 0;
  std::vector<std::array<Scalar, 6>> val;
  std::vector<std::array<Vec2, 6>> dref;
};

RefBasis tabulate(int degree, const QuadratureRule& rule) {
  RefBasis rb;
  rb.nbasis = basis_count(degree);
  rb.val.resize(rule.points.size());
  rb.dref.resize(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    eval_basis(degree, rule.points[q], rb.val[q]);
    eval_basis_grad(degree, rule.points[q], rb.dref[q]);
  }
  return rb;
}

void physical_grads(const CellGeometry& g, const std::array<Vec2, 6>& dref, int nbasis,
                    std::array<Vec2, 6>& out) {
  for (int i = 0; i < nbasis; ++i) out[i] = g.inv_jac_t * dref[i];
}

// Value and gradient of a vector field at a quadrature point; gradient(r, c)
// is the derivative of component r in direction c.
void field_at_qp(const Field& f, const std::array<Index, 6>& sdofs, int nbasis,
                 const std::array<Scalar, 6>& val, const std::array<Vec2, 6>& grad,
                 Vec2& value, Mat2& gradient) {
  value.setZero();
  gradient.setZero();
  for (int i = 0; i < nbasis; ++i) {
    const Scalar cx = f.coeffs[2 * sdofs[i]];
    const Scalar cy = f.coeffs[2 * sdofs[i] + 1];
    value.x() += cx * val[i];
    value.y() += cy * val[i];
    gradient.row(0) += cx * grad[i].transpose();
    gradient.row(1) += cy * grad[i].transpose();
  }
}

Vec2 nonlinear_integrand(NonlinearKind kind, const Vec2& a, const Mat2& ga,
                         const Vec2& b, const Mat2& gb) {
  switch (kind) {
    case NonlinearKind::Conv:
    case NonlinearKind::Leray:
      return gb * a;
    case NonlinearKind::Skew:
      return gb * a + 0.5 * ga.trace() * b;
    case NonlinearKind::Emac:
      return (ga + ga.transpose()) * b + ga.trace() * b;
    case NonlinearKind::Rot: {
      const Scalar curl_b = gb(1, 0) - gb(0, 1);
      return curl_b * Vec2(-a.y(), a.x());
    }
  }
  return Vec2::Zero();
}

// Directional derivative in the first slot along phi e_c (value v, grad dphi).
Vec2 d_first(NonlinearKind kind, int c, Scalar v, const Vec2& dphi, const Vec2& b,
             const Mat2& gb) {
  switch (kind) {
    case NonlinearKind::Conv:
    case NonlinearKind::Leray:
      return v * gb.col(c);
    case NonlinearKind::Skew:
      return v * gb.col(c) + 0.5 * dphi[c] * b;
    case NonlinearKind::Emac: {
      // grad(delta) = e_c dphi^T; symmetrized action on b plus divergence term
      Vec2 r = dphi * b[c] + dphi[c] * b;
      r[c] += dphi.dot(b);
      return r;
    }
    case NonlinearKind::Rot: {
      const Scalar curl_b = gb(1, 0) - gb(0, 1);
      return curl_b * v * (c == 0 ? Vec2(0, 1) : Vec2(-1, 0));
    }
  }
  return Vec2::Zero();
}

// Directional derivative in the second slot.
Vec2 d_second(NonlinearKind kind, int c, Scalar v, const Vec2& dphi, const Vec2& a,
              const Mat2& ga) {
  switch (kind) {
    case NonlinearKind::Conv:
    case NonlinearKind::Leray: {
      Vec2 r = Vec2::Zero();
      r[c] = a.dot(dphi);
      return r;
    }
    case NonlinearKind::Skew: {
      Vec2 r = Vec2::Zero();
      r[c] = a.dot(dphi) + 0.5 * ga.trace() * v;
      return r;
    }
    case NonlinearKind::Emac: {
      Vec2 r = v * (ga.col(c) + ga.row(c).transpose());
      r[c] += ga.trace() * v;
      return r;
    }
    case NonlinearKind::Rot: {
      const Scalar curl_d = (c == 1 ? dphi[0] : -dphi[1]);
      return curl_d * Vec2(-a.y(), a.x());
    }
  }
  return Vec2::Zero();
}

void require_vector_pair(const Field& a, const Field& b, const char* where) {
  if (!a.space || a.space != b.space)
    throw std::invalid_argument(std::string(where) + ": fields must share one space");
  if (a.space->components != 2)
    throw std::invalid_argument(std::string(where) + ": vector velocity space required");
}

}  // namespace

SpMat assemble_mass(const FeSpace& sp) {
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  std::vector<Triplet> ts;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Scalar wj = rule.weights[q] * g.area;
      for (int i = 0; i < rb.nbasis; ++i)
        for (int j = 0; j < rb.nbasis; ++j) {
          const Scalar v = wj * rb.val[q][i] * rb.val[q][j];
          for (int c = 0; c < sp.components; ++c)
            ts.emplace_back(sp.gdof(sd[i], c), sp.gdof(sd[j], c), v);
        }
    }
  }
  return from_triplets(ts, sp.ndofs(), sp.ndofs());
}

SpMat assemble_stiffness(const FeSpace& sp) {
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  std::array<Vec2, 6> grad{};
  std::vector<Triplet> ts;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      physical_grads(g, rb.dref[q], rb.nbasis, grad);
      const Scalar wj = rule.weights[q] * g.area;
      for (int i = 0; i < rb.nbasis; ++i)
        for (int j = 0; j < rb.nbasis; ++j) {
          const Scalar v = wj * grad[i].dot(grad[j]);
          for (int c = 0; c < sp.components; ++c)
            ts.emplace_back(sp.gdof(sd[i], c), sp.gdof(sd[j], c), v);
        }
    }
  }
  return from_triplets(ts, sp.ndofs(), sp.ndofs());
}

SpMat assemble_divergence(const FeSpace& vel, const FeSpace& pres) {
  if (vel.mesh != pres.mesh)
    throw std::invalid_argument("assemble_divergence: spaces on different meshes");
  if (vel.components != 2 || pres.components != 1)
    throw std::invalid_argument(
        "assemble_divergence: need vector velocity, scalar pressure");
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rv = tabulate(vel.degree, rule);
  const RefBasis rp = tabulate(pres.degree, rule);
  std::array<Vec2, 6> grad{};
  std::vector<Triplet> ts;
  for (Index cell = 0; cell < vel.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*vel.mesh, cell);
    const auto& sv = vel.cell_sdofs[cell];
    const auto& sq = pres.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      physical_grads(g, rv.dref[q], rv.nbasis, grad);
      const Scalar wj = rule.weights[q] * g.area;
      for (int qi = 0; qi < rp.nbasis; ++qi)
        for (int j = 0; j < rv.nbasis; ++j)
          for (int c = 0; c < 2; ++c)
            ts.emplace_back(sq[qi], vel.gdof(sv[j], c),
                            wj * rp.val[q][qi] * grad[j][c]);
    }
  }
  return from_triplets(ts, pres.ndofs(), vel.ndofs());
}

VecX assemble_load(const FeSpace& sp, const VectorFn& f, Scalar t) {
  VecX out = VecX::Zero(sp.ndofs());
  if (!f) return out;
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 fv = f(g.map(rule.points[q]), t);
      const Scalar wj = rule.weights[q] * g.area;
      for (int i = 0; i < rb.nbasis; ++i)
        for (int c = 0; c < 2; ++c)
          out[sp.gdof(sd[i], c)] += wj * fv[c] * rb.val[q][i];
    }
  }
  return out;
}

VecX integral_vector(const FeSpace& sp) {
  if (sp.components != 1)
    throw std::invalid_argument("integral_vector: scalar space required");
  VecX out = VecX::Zero(sp.ndofs());
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      for (int i = 0; i < rb.nbasis; ++i)
        out[sd[i]] += rule.weights[q] * g.area * rb.val[q][i];
  }
  return out;
}

VecX apply_nonlinear(NonlinearKind kind, const Field& a, const Field& b) {
  require_vector_pair(a, b, "apply_nonlinear");
  const FeSpace& sp = *a.space;
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  std::array<Vec2, 6> grad{};
  VecX out = VecX::Zero(sp.ndofs());
  Vec2 va, vb;
  Mat2 ga, gb;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      physical_grads(g, rb.dref[q], rb.nbasis, grad);
      field_at_qp(a, sd, rb.nbasis, rb.val[q], grad, va, ga);
      field_at_qp(b, sd, rb.nbasis, rb.val[q], grad, vb, gb);
      const Vec2 gv = nonlinear_integrand(kind, va, ga, vb, gb);
      const Scalar wj = rule.weights[q] * g.area;
      for (int i = 0; i < rb.nbasis; ++i)
        for (int c = 0; c < 2; ++c)
          out[sp.gdof(sd[i], c)] += wj * gv[c] * rb.val[q][i];
    }
  }
  return out;
}

SpMat assemble_nonlinear_jacobian(NonlinearKind kind, const Field& a, const Field& b,
                                  JacSlot slot) {
  require_vector_pair(a, b, "assemble_nonlinear_jacobian");
  const FeSpace& sp = *a.space;
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  std::array<Vec2, 6> grad{};
  std::vector<Triplet> ts;
  Vec2 va, vb;
  Mat2 ga, gb;
  Eigen::Matrix<Scalar, 12, 12> local;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    local.setZero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      physical_grads(g, rb.dref[q], rb.nbasis, grad);
      field_at_qp(a, sd, rb.nbasis, rb.val[q], grad, va, ga);
      field_at_qp(b, sd, rb.nbasis, rb.val[q], grad, vb, gb);
      const Scalar wj = rule.weights[q] * g.area;
      for (int j = 0; j < rb.nbasis; ++j)
        for (int cj = 0; cj < 2; ++cj) {
          Vec2 dg = Vec2::Zero();
          if (slot != JacSlot::Second)
            dg += d_first(kind, cj, rb.val[q][j], grad[j], vb, gb);
          if (slot != JacSlot::First)
            dg += d_second(kind, cj, rb.val[q][j], grad[j], va, ga);
          for (int i = 0; i < rb.nbasis; ++i) {
            const Scalar w_i = wj * rb.val[q][i];
            local(2 * i, 2 * j + cj) += w_i * dg[0];
            local(2 * i + 1, 2 * j + cj) += w_i * dg[1];
          }
        }
    }
    for (int i = 0; i < rb.nbasis; ++i)
      for (int ci = 0; ci < 2; ++ci)
        for (int j = 0; j < rb.nbasis; ++j)
          for (int cj = 0; cj < 2; ++cj) {
            const Scalar v = local(2 * i + ci, 2 * j + cj);
            if (v != 0.0)
              ts.emplace_back(sp.gdof(sd[i], ci), sp.gdof(sd[j], cj), v);
          }
  }
  return from_triplets(ts, sp.ndofs(), sp.ndofs());
}

namespace {

// Shared element-loop reduction: sums w * contribution(x, value, gradient).
template <typename F>
Scalar integrate_field(const Field& f, int quad_order, F&& contribution) {
  const FeSpace& sp = *f.space;
  const auto& rule = quadrature(quad_order);
  const RefBasis rb = tabulate(sp.degree, rule);
  std::array<Vec2, 6> grad{};
  Scalar total = 0;
  Vec2 value;
  Mat2 gradient;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      physical_grads(g, rb.dref[q], rb.nbasis, grad);
      if (sp.components == 2) {
        field_at_qp(f, sd, rb.nbasis, rb.val[q], grad, value, gradient);
      } else {
        value.setZero();
        gradient.setZero();
        for (int i = 0; i < rb.nbasis; ++i) {
          value.x() += f.coeffs[sd[i]] * rb.val[q][i];
          gradient.row(0) += f.coeffs[sd[i]] * grad[i].transpose();
        }
      }
      total += rule.weights[q] * g.area *
               contribution(g.map(rule.points[q]), value, gradient);
    }
  }
  return total;
}

}  // namespace

Scalar l2_norm(const Field& f) {
  return std::sqrt(integrate_field(
      f, kFormQuadOrder,
      [](const Vec2&, const Vec2& v, const Mat2&) { return v.squaredNorm(); }));
}

Scalar h1_seminorm(const Field& f) {
  return std::sqrt(integrate_field(
      f, kFormQuadOrder,
      [](const Vec2&, const Vec2&, const Mat2& g) { return g.squaredNorm(); }));
}

Scalar divergence_l2(const Field& f) {
  return std::sqrt(integrate_field(f, kFormQuadOrder,
                                   [](const Vec2&, const Vec2&, const Mat2& g) {
                                     const Scalar d = g.trace();
                                     return d * d;
                                   }));
}

Scalar enstrophy(const Field& f) {
  return 0.5 * integrate_field(f, kFormQuadOrder,
                               [](const Vec2&, const Vec2&, const Mat2& g) {
                                 const Scalar w = g(1, 0) - g(0, 1);
                                 return w * w;
                               });
}

Scalar l2_error(const Field& f, const VectorFn& exact, Scalar t, int quad_order) {
  return std::sqrt(integrate_field(f, quad_order,
                                   [&](const Vec2& x, const Vec2& v, const Mat2&) {
                                     return (v - exact(x, t)).squaredNorm();
                                   }));
}

Scalar h1_semi_error(const Field& f, const TensorFn& exact_grad, Scalar t,
                     int quad_order) {
  return std::sqrt(integrate_field(f, quad_order,
                                   [&](const Vec2& x, const Vec2&, const Mat2& g) {
                                     return (g - exact_grad(x, t)).squaredNorm();
                                   }));
}

Scalar inner_product(const Field& a, const Field& b) {
  require_vector_pair(a, b, "inner_product");
  const FeSpace& sp = *a.space;
  const auto& rule = quadrature(kFormQuadOrder);
  const RefBasis rb = tabulate(sp.degree, rule);
  Scalar total = 0;
  for (Index cell = 0; cell < sp.mesh->num_triangles(); ++cell) {
    const CellGeometry g = cell_geometry(*sp.mesh, cell);
    const auto& sd = sp.cell_sdofs[cell];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 va = Vec2::Zero(), vb = Vec2::Zero();
      for (int i = 0; i < rb.nbasis; ++i) {
        va.x() += a.coeffs[2 * sd[i]] * rb.val[q][i];
        va.y() += a.coeffs[2 * sd[i] + 1] * rb.val[q][i];
        vb.x() += b.coeffs[2 * sd[i]] * rb.val[q][i];
        vb.y() += b.coeffs[2 * sd[i] + 1] * rb.val[q][i];
      }
      total += rule.weights[q] * g.area * va.dot(vb);
    }
  }
  return total;
}

}  // namespace emacreg
