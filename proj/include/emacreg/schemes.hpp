#pragma once

#include "emacreg/filter.hpp"

namespace emacreg {

// Four formulations over the same Taylor-Hood pair:
//   EmacReg : 4-field (u, P, w, lambda), EMAC form of the filtered velocity
//   Emac    : 2-field, EMAC form of u
//   Skew    : 2-field, skew-symmetrized convection
//   NsAlpha : 4-field, rotational form (curl u) x w
enum class SchemeKind { EmacReg, Emac, Skew, NsAlpha };
enum class Integrator { CrankNicolson, Bdf2 };

const char* to_string(SchemeKind k);
const char* to_string(Integrator i);
bool is_filtered(SchemeKind k);

struct StepperConfig {
  SchemeKind scheme = SchemeKind::EmacReg;
  Integrator integrator = Integrator::CrankNicolson;
  Scalar dt = 0.01;
  Scalar nu = 0.0;
  Scalar alpha = 0.0;
  Scalar newton_tol = 1e-10;  // absolute, on the residual max-norm
  int newton_max = 30;
  VectorFn forcing;  // empty = zero
  std::vector<DirichletBc> velocity_bcs;
  std::vector<DirichletBc> filter_bcs;  // w data; filtered schemes only
};

// Unknowns at one time level. P is the scheme's pressure variable (for
// EmacReg the redefined pressure p - |w|^2 / 2). For unfiltered schemes w
// holds a copy of u and lambda is identically zero.
struct State {
  Scalar t = 0;
  Field u, P, w, lambda;
};

// Monolithic Newton stepper. All fields are solved simultaneously each step;
// zero-mean pressure constraints enter through scalar bordered multipliers,
// Dirichlet rows are replaced by identity rows. One Stepper drives one run;
// distinct Steppers may run on distinct threads.
class Stepper {
 public:
  Stepper(const FeSpace& vel, const FeSpace& pres, StepperConfig config);

  const StepperConfig& config() const { return cfg_; }
  const FeSpace& velocity_space() const { return *vel_; }
  const FeSpace& pressure_space() const { return *pres_; }
  Index system_size() const { return n_; }
  const SpMat& divergence_matrix() const { return div_; }

  // u interpolated (Dirichlet data applied); unfiltered schemes additionally
  // project u onto the discretely divergence-free subspace, filtered schemes
  // obtain (w, lambda) by filtering u.
  State initial_state(const VectorFn& u0) const;

  // Residual of the step equations for the transition old -> next, rows
  // ordered (momentum, u-divergence, filter, w-divergence, mean constraints).
  // `older` supplies the second history level for BDF2.
  VecX residual(const State& next, const State& old, const State* older = nullptr) const;

  // One monolithic Newton update; returns the updated state and the residual
  // max-norm evaluated at the *updated* state.
  std::pair<State, Scalar> newton_step(const State& guess, const State& old,
                                       const State* older = nullptr) const;

  // One time step: Newton loop to newton_tol or newton_max (StateError on
  // stall). BDF2 start-up (previous == nullptr) takes a Crank-Nicolson step.
  // The Jacobian factorization is reused across iterations and steps and
  // refreshed whenever the residual contraction falls below 4x; the converged
  // residual bound is unaffected.
  State advance(const State& current, const State* previous = nullptr) const;

  // Residual norms of the Newton iterates in the last advance() call.
  const std::vector<Scalar>& last_newton_residuals() const { return newton_log_; }

 private:
  VecX pack(const State& s) const;
  State unpack(const VecX& x, Scalar t) const;
  VecX assemble_residual(const VecX& x, const State& old, const State* older,
                         Integrator mode) const;
  SpMat assemble_jacobian(const VecX& x, const State& old, const State* older,
                          Integrator mode) const;

  const FeSpace* vel_ = nullptr;
  const FeSpace* pres_ = nullptr;
  StepperConfig cfg_;
  SpMat mass_, stiffness_, div_;
  VecX g_;  // pressure-space integral vector (zero-mean constraints)
  DirichletSet u_bc_, w_bc_;
  std::unique_ptr<FilterSystem> filter_;     // filtered schemes
  std::unique_ptr<FilterSystem> projector_;  // unfiltered: initial projection
  Index nu_ = 0, np_ = 0, n_ = 0;
  Index off_p_ = 0, off_w_ = 0, off_lam_ = 0, off_mu_p_ = 0, off_mu_lam_ = 0;
  std::vector<char> skip_;  // Dirichlet rows over the full system
  mutable std::vector<Scalar> newton_log_;
  mutable std::unique_ptr<Factorization> jac_cache_;
  mutable Integrator jac_cache_mode_ = Integrator::CrankNicolson;
};

}  // namespace emacreg
