#pragma once

#include "emacreg/operators.hpp"

#include <memory>

namespace emacreg {

// Discrete Helmholtz filter with divergence constraint: given u, find (w, l)
// with
//   (l, div chi) + alpha^2 (grad w, grad chi) + (w, chi) = (u, chi)
//   (div w, r) = 0
// on a Taylor-Hood pair. The saddle matrix is
//   [ alpha^2 A + M   B^T   0 ]
//   [ B               0     g ]
//   [ 0               g^T   0 ]
// with Dirichlet rows for w replaced by identity rows and the scalar
// bordered row pinning the multiplier mean to zero. alpha = 0 degenerates to
// the constrained L2 projection onto discretely divergence-free fields.
// Immutable after construction; concurrent apply() calls are safe.
class FilterSystem {
 public:
  FilterSystem(const FeSpace& vel, const FeSpace& pres, Scalar alpha,
               std::vector<DirichletBc> w_bcs = {});

  // Solves for (w, lambda); boundary data evaluated at time t.
  std::pair<Field, Field> apply(const Field& u, Scalar t = 0) const;

  Scalar alpha() const { return alpha_; }
  Index size() const { return matrix_.rows(); }
  const SpMat& matrix() const { return matrix_; }
  const FeSpace& velocity_space() const { return *vel_; }
  const FeSpace& pressure_space() const { return *pres_; }

 private:
  const FeSpace* vel_ = nullptr;
  const FeSpace* pres_ = nullptr;
  Scalar alpha_ = 0;
  DirichletSet dirichlet_;
  SpMat mass_;  // velocity mass, forms the right-hand side (u, chi)
  SpMat matrix_;
  std::unique_ptr<Factorization> fact_;
};

FilterSystem build_filter(const FeSpace& vel, const FeSpace& pres, Scalar alpha,
                          std::vector<DirichletBc> w_bcs = {});

std::pair<Field, Field> apply_filter(const FilterSystem& fs, const Field& u,
                                     Scalar t = 0);

}  // namespace emacreg
