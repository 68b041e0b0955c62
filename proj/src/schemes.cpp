#include "emacreg/schemes.hpp"

#include <cmath>

namespace emacreg {

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::EmacReg: return "emacreg";
    case SchemeKind::Emac: return "emac";
    case SchemeKind::Skew: return "skew";
    case SchemeKind::NsAlpha: return "nsalpha";
  }
  return "?";
}

const char* to_string(Integrator i) {
  return i == Integrator::CrankNicolson ? "cn" : "bdf2";
}

bool is_filtered(SchemeKind k) {
  return k == SchemeKind::EmacReg || k == SchemeKind::NsAlpha;
}

Stepper::Stepper(const FeSpace& vel, const FeSpace& pres, StepperConfig config)
    : vel_(&vel), pres_(&pres), cfg_(std::move(config)) {
  if (cfg_.dt <= 0) throw std::invalid_argument("Stepper: dt must be positive");
  if (cfg_.nu < 0) throw std::invalid_argument("Stepper: nu must be >= 0");
  if (cfg_.alpha < 0) throw std::invalid_argument("Stepper: alpha must be >= 0");
  if (vel.mesh != pres.mesh)
    throw std::invalid_argument("Stepper: spaces on different meshes");

  mass_ = assemble_mass(vel);
  stiffness_ = assemble_stiffness(vel);
  div_ = assemble_divergence(vel, pres);
  g_ = integral_vector(pres);
  u_bc_ = DirichletSet(vel, cfg_.velocity_bcs);

  nu_ = vel.ndofs();
  np_ = pres.ndofs();
  off_p_ = nu_;
  if (is_filtered(cfg_.scheme)) {
    off_w_ = nu_ + np_;
    off_lam_ = off_w_ + nu_;
    off_mu_p_ = off_lam_ + np_;
    off_mu_lam_ = off_mu_p_ + 1;
    n_ = off_mu_lam_ + 1;
    w_bc_ = DirichletSet(vel, cfg_.filter_bcs);
    filter_ = std::make_unique<FilterSystem>(vel, pres, cfg_.alpha, cfg_.filter_bcs);
  } else {
    off_mu_p_ = nu_ + np_;
    n_ = off_mu_p_ + 1;
    projector_ = std::make_unique<FilterSystem>(vel, pres, 0.0, cfg_.velocity_bcs);
  }

  skip_.assign(n_, 0);
  for (Index i = 0; i < nu_; ++i)
    if (u_bc_.constrained(i)) skip_[i] = 1;
  if (is_filtered(cfg_.scheme))
    for (Index i = 0; i < nu_; ++i)
      if (w_bc_.constrained(i)) skip_[off_w_ + i] = 1;
}

State Stepper::initial_state(const VectorFn& u0) const {
  State s;
  s.t = 0;
  Field ui = interpolate(*vel_, u0, 0.0);
  u_bc_.apply(ui.coeffs, 0.0);
  if (is_filtered(cfg_.scheme)) {
    s.u = std::move(ui);
    auto [w, lambda] = filter_->apply(s.u, 0.0);
    s.w = std::move(w);
    s.lambda = std::move(lambda);
  } else {
    // Discretely divergence-free initial data keeps the inviscid invariants
    // of the time discretization exact from the first step on.
    auto [pu, plam] = projector_->apply(ui, 0.0);
    s.u = std::move(pu);
    s.w = s.u;
    s.lambda = make_field(*pres_);
  }
  s.P = make_field(*pres_);
  return s;
}

VecX Stepper::pack(const State& s) const {
  VecX x = VecX::Zero(n_);
  x.head(nu_) = s.u.coeffs;
  x.segment(off_p_, np_) = s.P.coeffs;
  if (is_filtered(cfg_.scheme)) {
    x.segment(off_w_, nu_) = s.w.coeffs;
    x.segment(off_lam_, np_) = s.lambda.coeffs;
  }
  return x;
}

State Stepper::unpack(const VecX& x, Scalar t) const {
  State s;
  s.t = t;
  s.u = make_field(*vel_);
  s.P = make_field(*pres_);
  s.u.coeffs = x.head(nu_);
  s.P.coeffs = x.segment(off_p_, np_);
  if (is_filtered(cfg_.scheme)) {
    s.w = make_field(*vel_);
    s.lambda = make_field(*pres_);
    s.w.coeffs = x.segment(off_w_, nu_);
    s.lambda.coeffs = x.segment(off_lam_, np_);
  } else {
    s.w = s.u;
    s.lambda = make_field(*pres_);
  }
  return s;
}

VecX Stepper::assemble_residual(const VecX& x, const State& old, const State* older,
                                Integrator mode) const {
  const bool filtered = is_filtered(cfg_.scheme);
  const Scalar dt = cfg_.dt;
  const Scalar t_new = old.t + dt;
  VecX r = VecX::Zero(n_);

  Field u_new = make_field(*vel_);
  u_new.coeffs = x.head(nu_);
  const VecX p = x.segment(off_p_, np_);
  Field w_new = make_field(*vel_);
  w_new.coeffs = filtered ? VecX(x.segment(off_w_, nu_)) : u_new.coeffs;

  VecX r_mom;
  if (mode == Integrator::CrankNicolson) {
    const Scalar tm = old.t + 0.5 * dt;
    Field um = make_field(*vel_), wm = make_field(*vel_);
    um.coeffs = 0.5 * (u_new.coeffs + old.u.coeffs);
    wm.coeffs = 0.5 * (w_new.coeffs + old.w.coeffs);
    r_mom = mass_ * ((u_new.coeffs - old.u.coeffs) / dt);
    switch (cfg_.scheme) {
      case SchemeKind::EmacReg:
        r_mom += apply_nonlinear(NonlinearKind::Emac, wm, wm);
        break;
      case SchemeKind::Emac:
        r_mom += apply_nonlinear(NonlinearKind::Emac, um, um);
        break;
      case SchemeKind::Skew:
        r_mom += apply_nonlinear(NonlinearKind::Skew, um, um);
        break;
      case SchemeKind::NsAlpha:
        r_mom += apply_nonlinear(NonlinearKind::Rot, wm, um);
        break;
    }
    if (cfg_.nu > 0) r_mom += cfg_.nu * (stiffness_ * um.coeffs);
    r_mom -= div_.transpose() * p;
    if (cfg_.forcing) r_mom -= assemble_load(*vel_, cfg_.forcing, tm);
  } else {
    if (!older)
      throw StateError("residual: BDF2 requires the second history level");
    r_mom = mass_ * ((3 * u_new.coeffs - 4 * old.u.coeffs + older->u.coeffs) /
                     (2 * dt));
    switch (cfg_.scheme) {
      case SchemeKind::EmacReg:
        r_mom += apply_nonlinear(NonlinearKind::Emac, w_new, w_new);
        break;
      case SchemeKind::Emac:
        r_mom += apply_nonlinear(NonlinearKind::Emac, u_new, u_new);
        break;
      case SchemeKind::Skew:
        r_mom += apply_nonlinear(NonlinearKind::Skew, u_new, u_new);
        break;
      case SchemeKind::NsAlpha:
        r_mom += apply_nonlinear(NonlinearKind::Rot, w_new, u_new);
        break;
    }
    if (cfg_.nu > 0) r_mom += cfg_.nu * (stiffness_ * u_new.coeffs);
    r_mom -= div_.transpose() * p;
    if (cfg_.forcing) r_mom -= assemble_load(*vel_, cfg_.forcing, t_new);
  }
  u_bc_.constraint_residual(u_new.coeffs, t_new, r_mom);
  r.head(nu_) = r_mom;

  r.segment(off_p_, np_) = div_ * u_new.coeffs + g_ * x[off_mu_p_];
  r[off_mu_p_] = g_.dot(p);

  if (filtered) {
    const VecX lambda = x.segment(off_lam_, np_);
    VecX r_filt = mass_ * w_new.coeffs - mass_ * u_new.coeffs +
                  div_.transpose() * lambda;
    if (cfg_.alpha > 0)
      r_filt += (cfg_.alpha * cfg_.alpha) * (stiffness_ * w_new.coeffs);
    w_bc_.constraint_residual(w_new.coeffs, t_new, r_filt);
    r.segment(off_w_, nu_) = r_filt;
    r.segment(off_lam_, np_) = div_ * w_new.coeffs + g_ * x[off_mu_lam_];
    r[off_mu_lam_] = g_.dot(lambda);
  }
  return r;
}

SpMat Stepper::assemble_jacobian(const VecX& x, const State& old, const State* older,
                                 Integrator mode) const {
  const bool filtered = is_filtered(cfg_.scheme);
  const bool cn = (mode == Integrator::CrankNicolson);
  if (!cn && !older)
    throw StateError("jacobian: BDF2 requires the second history level");
  const Scalar dt = cfg_.dt;
  const Scalar mass_coef = cn ? 1.0 / dt : 1.5 / dt;
  const Scalar visc_coef = cn ? 0.5 * cfg_.nu : cfg_.nu;
  const Scalar chain = cn ? 0.5 : 1.0;  // d(midpoint)/d(new level)

  Field u_eval = make_field(*vel_), w_eval = make_field(*vel_);
  if (cn) {
    u_eval.coeffs = 0.5 * (x.head(nu_) + old.u.coeffs);
    w_eval.coeffs = filtered
                        ? VecX(0.5 * (x.segment(off_w_, nu_) + old.w.coeffs))
                        : u_eval.coeffs;
  } else {
    u_eval.coeffs = x.head(nu_);
    w_eval.coeffs = filtered ? VecX(x.segment(off_w_, nu_)) : u_eval.coeffs;
  }

  std::vector<Triplet> ts;
  append_block(ts, mass_, 0, 0, mass_coef, &skip_);
  if (visc_coef > 0) append_block(ts, stiffness_, 0, 0, visc_coef, &skip_);
  append_block(ts, div_, 0, off_p_, -1.0, &skip_, /*transpose=*/true);
  switch (cfg_.scheme) {
    case SchemeKind::EmacReg: {
      const SpMat j = assemble_nonlinear_jacobian(NonlinearKind::Emac, w_eval, w_eval);
      append_block(ts, j, 0, off_w_, chain, &skip_);
      break;
    }
    case SchemeKind::Emac: {
      const SpMat j = assemble_nonlinear_jacobian(NonlinearKind::Emac, u_eval, u_eval);
      append_block(ts, j, 0, 0, chain, &skip_);
      break;
    }
    case SchemeKind::Skew: {
      const SpMat j = assemble_nonlinear_jacobian(NonlinearKind::Skew, u_eval, u_eval);
      append_block(ts, j, 0, 0, chain, &skip_);
      break;
    }
    case SchemeKind::NsAlpha: {
      const SpMat jw = assemble_nonlinear_jacobian(NonlinearKind::Rot, w_eval, u_eval,
                                                   JacSlot::First);
      const SpMat ju = assemble_nonlinear_jacobian(NonlinearKind::Rot, w_eval, u_eval,
                                                   JacSlot::Second);
      append_block(ts, jw, 0, off_w_, chain, &skip_);
      append_block(ts, ju, 0, 0, chain, &skip_);
      break;
    }
  }

  append_block(ts, div_, off_p_, 0);
  for (Index q = 0; q < np_; ++q) {
    ts.emplace_back(off_p_ + q, off_mu_p_, g_[q]);
    ts.emplace_back(off_mu_p_, off_p_ + q, g_[q]);
  }

  if (filtered) {
    append_block(ts, mass_, off_w_, 0, -1.0, &skip_);
    append_block(ts, mass_, off_w_, off_w_, 1.0, &skip_);
    if (cfg_.alpha > 0)
      append_block(ts, stiffness_, off_w_, off_w_, cfg_.alpha * cfg_.alpha, &skip_);
    append_block(ts, div_, off_w_, off_lam_, 1.0, &skip_, /*transpose=*/true);
    append_block(ts, div_, off_lam_, off_w_);
    for (Index q = 0; q < np_; ++q) {
      ts.emplace_back(off_lam_ + q, off_mu_lam_, g_[q]);
      ts.emplace_back(off_mu_lam_, off_lam_ + q, g_[q]);
    }
  }

  for (Index i = 0; i < n_; ++i)
    if (skip_[i]) ts.emplace_back(i, i, 1.0);
  return from_triplets(ts, n_, n_);
}

VecX Stepper::residual(const State& next, const State& old, const State* older) const {
  return assemble_residual(pack(next), old, older, cfg_.integrator);
}

std::pair<State, Scalar> Stepper::newton_step(const State& guess, const State& old,
                                              const State* older) const {
  const Integrator mode = cfg_.integrator;
  VecX x = pack(guess);
  const VecX r = assemble_residual(x, old, older, mode);
  const SpMat j = assemble_jacobian(x, old, older, mode);
  x += Factorization(j).solve(VecX(-r));
  const Scalar rn =
      assemble_residual(x, old, older, mode).cwiseAbs().maxCoeff();
  return {unpack(x, old.t + cfg_.dt), rn};
}

State Stepper::advance(const State& current, const State* previous) const {
  Integrator mode = cfg_.integrator;
  const State* older = nullptr;
  if (mode == Integrator::Bdf2) {
    if (previous)
      older = previous;
    else
      mode = Integrator::CrankNicolson;  // start-up step
  }

  VecX x = pack(current);
  newton_log_.clear();
  if (jac_cache_ && jac_cache_mode_ != mode) jac_cache_.reset();
  for (int it = 0;; ++it) {
    const VecX r = assemble_residual(x, current, older, mode);
    const Scalar rn = r.cwiseAbs().maxCoeff();
    newton_log_.push_back(rn);
    if (rn <= cfg_.newton_tol) break;
    if (it >= cfg_.newton_max)
      throw StateError("advance: Newton stalled at t = " +
                       std::to_string(current.t + cfg_.dt) +
                       ", residual = " + std::to_string(rn));
    const std::size_t k = newton_log_.size();
    const bool stalled = k >= 2 && rn > 0.25 * newton_log_[k - 2];
    if (!jac_cache_ || stalled) {
      jac_cache_ = std::make_unique<Factorization>(
          assemble_jacobian(x, current, older, mode));
      jac_cache_mode_ = mode;
    }
    x += jac_cache_->solve(VecX(-r));
  }
  return unpack(x, current.t + cfg_.dt);
}

}  // namespace emacreg
