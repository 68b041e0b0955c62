#pragma once

#include "emacreg/runner.hpp"

#include <memory>
#include <optional>
#include <string>

namespace emacreg {

struct MeshRecipe {
  enum class Kind { Rectangle, StepChannel };
  Kind kind = Kind::Rectangle;
  int nx = 8, ny = 8;
  Rect bounds{0, 0, 1, 1};
  bool periodic_x = false;
  Scalar h_target = 1.0;  // step channel only
};

// Reusable experiment definition: mesh recipe, parameters, data functions,
// and (optionally) the closed-form solution. Field data that depends on the
// resolved mesh size or filter radius is re-derived through bind_parameters.
struct BenchmarkSpec {
  std::string name;
  MeshRecipe mesh;
  Scalar nu = 0;
  Scalar dt = 0.01;
  Scalar end_time = 1.0;
  Integrator integrator = Integrator::CrankNicolson;
  Scalar newton_tol = 1e-10;

  // alpha = alpha_coef * h when it scales with the mesh, else a fixed value.
  bool alpha_scales_with_h = false;
  Scalar alpha_coef = 0;
  Scalar alpha_value = 0;

  VectorFn initial;
  VectorFn forcing;  // empty = zero
  std::vector<DirichletBc> velocity_bcs;
  std::vector<DirichletBc> filter_bcs;  // empty = same data as velocity
  std::optional<AnalyticSolution> exact;

  // Rebuilds alpha-dependent data (boundary values, exact solution) once the
  // mesh size and filter radius are known.
  std::function<void(BenchmarkSpec&, Scalar h, Scalar alpha)> bind_parameters;

  Scalar alpha_for(Scalar h) const {
    return alpha_scales_with_h ? alpha_coef * h : alpha_value;
  }
};

// The decaying-vortex problem with a closed-form solution of the filtered
// system on the unit square: nu = 0.2, alpha = h/2, Crank-Nicolson.
BenchmarkSpec chorin_like();

// Standing vortex on (-0.5, 0.5)^2: 48x48 mesh, nu = 0, dt = 0.01, T = 4,
// alpha = 1/50, no-slip walls.
BenchmarkSpec gresho();

// Flow past a forward-backward facing step: 40x10 channel, parabolic inflow
// and outflow with peak velocity 1, nu = 1/600, dt = 0.025, T = 40,
// alpha = 1/10.
BenchmarkSpec step_channel();

// Shear-layer roll-up on the x-periodic unit square: vorticity thickness
// 1/28, perturbation scale 1e-3, Re = 1/(28 nu) = 1000, BDF2, dt = 1e-3,
// alpha = h/3. Defaults to h = 1/16, T = 2; reference_scale selects the
// fine h = 1/48, T = 10 configuration.
BenchmarkSpec kelvin_helmholtz(bool reference_scale = false);

BenchmarkSpec benchmark_by_name(const std::string& name);
std::vector<std::string> benchmark_names();

struct Overrides {
  std::optional<Scalar> h, dt, end_time, nu, alpha, newton_tol;
  std::optional<Integrator> integrator;
};

// Assembled, ready-to-run problem (owning the mesh and spaces the stepper
// references).
struct Problem {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<FeSpace> velocity;
  std::unique_ptr<FeSpace> pressure;
  std::unique_ptr<Stepper> stepper;
  BenchmarkSpec spec;   // with bound parameters
  Scalar h = 0;
  Scalar alpha = 0;
};

Problem make_problem(const BenchmarkSpec& spec, SchemeKind scheme,
                     const Overrides& overrides = {});

// ---- convergence studies -------------------------------------------------

enum class StudyAxis { Spatial, Temporal, Hybrid };

const char* to_string(StudyAxis a);

struct StudyRow {
  Scalar h = 0, dt = 0;
  Scalar err_l2_w = 0, err_h1_w = 0, err_l2_u = 0;
  // log2 ratios against the previous row; 0 for the first row.
  Scalar rate_l2_w = 0, rate_h1_w = 0, rate_l2_u = 0;
};

struct StudyResult {
  StudyAxis axis = StudyAxis::Spatial;
  std::vector<StudyRow> rows;
};

// Runs the analytic-solution benchmark over a refinement ladder and returns
// end-time errors with observed rates. Spatial: dt = 0.005, h = 2^-i for
// i = 1..levels. Temporal: h = 1/32, dt = 2^-i for i = 0..levels. Hybrid:
// (h, dt) = (2^-i, 2^(1-i)). Points fan out across a small worker pool.
StudyResult convergence_study(StudyAxis axis, int levels = 5,
                              SchemeKind scheme = SchemeKind::EmacReg);

}  // namespace emacreg
