#include "emacreg/filter.hpp"

namespace emacreg {

FilterSystem::FilterSystem(const FeSpace& vel, const FeSpace& pres, Scalar alpha,
                           std::vector<DirichletBc> w_bcs)
    : vel_(&vel), pres_(&pres), alpha_(alpha) {
  if (alpha < 0) throw std::invalid_argument("build_filter: alpha must be >= 0");
  if (vel.mesh != pres.mesh)
    throw std::invalid_argument("build_filter: spaces on different meshes");
  if (vel.components != 2 || pres.components != 1 || vel.degree <= pres.degree)
    throw std::invalid_argument("build_filter: Taylor-Hood pairing required");

  dirichlet_ = DirichletSet(vel, std::move(w_bcs));
  mass_ = assemble_mass(vel);
  const SpMat stiffness = assemble_stiffness(vel);
  const SpMat div = assemble_divergence(vel, pres);
  const VecX g = integral_vector(pres);

  const Index nu = vel.ndofs(), np = pres.ndofs();
  const Index n = nu + np + 1;

  std::vector<char> skip(n, 0);
  for (Index i = 0; i < nu; ++i) skip[i] = dirichlet_.constrained(i);

  std::vector<Triplet> ts;
  append_block(ts, mass_, 0, 0, 1.0, &skip);
  if (alpha_ > 0) append_block(ts, stiffness, 0, 0, alpha_ * alpha_, &skip);
  append_block(ts, div, 0, nu, 1.0, &skip, /*transpose=*/true);
  append_block(ts, div, nu, 0);
  for (Index q = 0; q < np; ++q) {
    ts.emplace_back(nu + q, nu + np, g[q]);  // bordered multiplier column
    ts.emplace_back(nu + np, nu + q, g[q]);  // zero-mean row for lambda
  }
  for (Index i = 0; i < nu; ++i)
    if (skip[i]) ts.emplace_back(i, i, 1.0);

  matrix_ = from_triplets(ts, n, n);
  fact_ = std::make_unique<Factorization>(matrix_);
}

std::pair<Field, Field> FilterSystem::apply(const Field& u, Scalar t) const {
  if (u.space != vel_)
    throw std::invalid_argument("apply_filter: field not on the filter's space");
  const Index nu = vel_->ndofs(), np = pres_->ndofs();
  VecX rhs = VecX::Zero(nu + np + 1);
  VecX mu = mass_ * u.coeffs;
  dirichlet_.apply(mu, t);  // constrained rows carry the boundary data
  rhs.head(nu) = mu;
  const VecX x = fact_->solve(rhs);
  Field w = make_field(*vel_);
  Field lambda = make_field(*pres_);
  w.coeffs = x.head(nu);
  lambda.coeffs = x.segment(nu, np);
  return {std::move(w), std::move(lambda)};
}

FilterSystem build_filter(const FeSpace& vel, const FeSpace& pres, Scalar alpha,
                          std::vector<DirichletBc> w_bcs) {
  return FilterSystem(vel, pres, alpha, std::move(w_bcs));
}

std::pair<Field, Field> apply_filter(const FilterSystem& fs, const Field& u, Scalar t) {
  return fs.apply(u, t);
}

}  // namespace emacreg
