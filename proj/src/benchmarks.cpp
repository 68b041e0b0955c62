#include "emacreg/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

namespace emacreg {

namespace {

constexpr Scalar kPi = std::numbers::pi;

std::vector<DirichletBc> all_sides(const VectorFn& data) {
  std::vector<DirichletBc> bcs;
  for (auto m : {BoundaryMarker::Bottom, BoundaryMarker::Top, BoundaryMarker::Left,
                 BoundaryMarker::Right})
    bcs.push_back({m, {{true, true}}, data});
  return bcs;
}

AnalyticSolution decaying_vortex_solution(Scalar nu, Scalar alpha) {
  AnalyticSolution sol;
  const Scalar gain = 1 + 2 * kPi * kPi * alpha * alpha;
  sol.w = [nu](const Vec2& x, Scalar t) {
    const Scalar d = std::exp(-2 * kPi * kPi * nu * t);
    return Vec2(-std::cos(kPi * x.x()) * std::sin(kPi * x.y()) * d,
                std::sin(kPi * x.x()) * std::cos(kPi * x.y()) * d);
  };
  sol.u = [gain, w = sol.w](const Vec2& x, Scalar t) { return Vec2(gain * w(x, t)); };
  sol.grad_w = [nu](const Vec2& x, Scalar t) {
    const Scalar d = std::exp(-2 * kPi * kPi * nu * t);
    const Scalar sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
    const Scalar sy = std::sin(kPi * x.y()), cy = std::cos(kPi * x.y());
    Mat2 g;
    g(0, 0) = kPi * sx * sy * d;
    g(0, 1) = -kPi * cx * cy * d;
    g(1, 0) = kPi * cx * cy * d;
    g(1, 1) = -kPi * sx * sy * d;
    return g;
  };
  sol.p = [nu](const Vec2& x, Scalar t) {
    const Scalar d = std::exp(-4 * kPi * kPi * nu * t);
    return -0.25 * (std::cos(2 * kPi * x.x()) + std::cos(2 * kPi * x.y())) * d;
  };
  sol.w_exact = sol.u_exact = sol.p_exact = true;
  return sol;
}

Vec2 gresho_velocity(const Vec2& x) {
  const Scalar r = x.norm();
  if (r < 1e-14) return Vec2(0, 0);
  Scalar speed = 0;
  if (r <= 0.2)
    speed = 5 * r;
  else if (r <= 0.4)
    speed = 2 - 5 * r;
  return (speed / r) * Vec2(-x.y(), x.x());
}

Scalar gresho_pressure(const Vec2& x) {
  const Scalar r = x.norm();
  // Constants as printed in the reference statement of the problem.
  const Scalar c2 = -12.5 * 0.16 + 20 * 0.16 - 4 * std::log(0.4);
  const Scalar c1 = c2 - 20 * 0.2 + 4 * std::log(0.2);
  if (r <= 0.2) return 12.5 * r * r + c1;
  if (r <= 0.4) return 12.5 * r * r - 20 * r + 4 * std::log(r) + c2;
  return 0.0;
}

}  // namespace

BenchmarkSpec chorin_like() {
  BenchmarkSpec spec;
  spec.name = "chorin";
  spec.mesh.kind = MeshRecipe::Kind::Rectangle;
  spec.mesh.nx = spec.mesh.ny = 8;
  spec.mesh.bounds = Rect{0, 0, 1, 1};
  spec.nu = 0.2;
  spec.dt = 0.005;
  spec.end_time = 1.0;
  spec.integrator = Integrator::CrankNicolson;
  spec.alpha_scales_with_h = true;
  spec.alpha_coef = 0.5;
  spec.bind_parameters = [](BenchmarkSpec& s, Scalar, Scalar alpha) {
    s.exact = decaying_vortex_solution(s.nu, alpha);
    s.initial = [u = s.exact->u](const Vec2& x, Scalar) { return u(x, 0.0); };
    s.velocity_bcs = all_sides(s.exact->u);
    s.filter_bcs = all_sides(s.exact->w);
  };
  return spec;
}

BenchmarkSpec gresho() {
  BenchmarkSpec spec;
  spec.name = "gresho";
  spec.mesh.kind = MeshRecipe::Kind::Rectangle;
  spec.mesh.nx = spec.mesh.ny = 48;
  spec.mesh.bounds = Rect{-0.5, -0.5, 0.5, 0.5};
  spec.nu = 0.0;
  spec.dt = 0.01;
  spec.end_time = 4.0;
  spec.integrator = Integrator::CrankNicolson;
  spec.alpha_scales_with_h = false;
  spec.alpha_value = 1.0 / 50;
  spec.initial = [](const Vec2& x, Scalar) { return gresho_velocity(x); };
  spec.velocity_bcs = all_sides({});  // no-slip
  spec.filter_bcs = all_sides({});
  AnalyticSolution sol;
  sol.u = [](const Vec2& x, Scalar) { return gresho_velocity(x); };
  sol.u_exact = true;  // steady solution of the inviscid problem
  sol.p = [](const Vec2& x, Scalar) { return gresho_pressure(x); };
  sol.p_exact = false;  // printed constants leave jumps between the rings
  spec.exact = sol;
  return spec;
}

BenchmarkSpec step_channel() {
  BenchmarkSpec spec;
  spec.name = "step";
  spec.mesh.kind = MeshRecipe::Kind::StepChannel;
  spec.mesh.h_target = 1.0;
  spec.nu = 1.0 / 600;
  spec.dt = 0.025;
  spec.end_time = 40.0;
  spec.integrator = Integrator::CrankNicolson;
  spec.alpha_scales_with_h = false;
  spec.alpha_value = 1.0 / 10;
  const VectorFn profile = [](const Vec2& x, Scalar) {
    return Vec2(4 * x.y() * (10 - x.y()) / 100, 0);
  };
  spec.initial = [](const Vec2&, Scalar) { return Vec2(0, 0); };
  spec.velocity_bcs = {{BoundaryMarker::Inflow, {{true, true}}, profile},
                       {BoundaryMarker::Outflow, {{true, true}}, profile},
                       {BoundaryMarker::Wall, {{true, true}}, {}}};
  spec.filter_bcs = spec.velocity_bcs;  // w carries the same data as u
  return spec;
}

BenchmarkSpec kelvin_helmholtz(bool reference_scale) {
  BenchmarkSpec spec;
  spec.name = "kh";
  spec.mesh.kind = MeshRecipe::Kind::Rectangle;
  const int n = reference_scale ? 48 : 16;
  spec.mesh.nx = spec.mesh.ny = n;
  spec.mesh.bounds = Rect{0, 0, 1, 1};
  spec.mesh.periodic_x = true;
  const Scalar delta0 = 1.0 / 28;  // initial vorticity thickness
  spec.nu = delta0 / 1000.0;       // Re = delta0 u_inf / nu = 1000
  spec.dt = 0.001;
  spec.end_time = reference_scale ? 10.0 : 2.0;
  spec.integrator = Integrator::Bdf2;
  spec.alpha_scales_with_h = true;
  spec.alpha_coef = 1.0 / 3;
  const Scalar cn = 1e-3;
  spec.initial = [delta0, cn](const Vec2& x, Scalar) {
    const Scalar u_inf = 1.0;
    const Scalar base = u_inf * std::tanh((2 * x.y() - 1) / delta0);
    const Scalar gauss = std::exp(-std::pow((x.y() - 0.5) / delta0, 2));
    const Scalar cosx = std::cos(8 * kPi * x.x()) + std::cos(20 * kPi * x.x());
    const Scalar dphi_dy =
        u_inf * gauss * (-2 * (x.y() - 0.5) / (delta0 * delta0)) * cosx;
    const Scalar dphi_dx = u_inf * gauss *
                           (-8 * kPi * std::sin(8 * kPi * x.x()) -
                            20 * kPi * std::sin(20 * kPi * x.x()));
    return Vec2(base + cn * dphi_dy, -cn * dphi_dx);
  };
  // Strong no-penetration at the walls; tangential slip is left natural.
  spec.velocity_bcs = {{BoundaryMarker::Bottom, {{false, true}}, {}},
                       {BoundaryMarker::Top, {{false, true}}, {}}};
  spec.filter_bcs = spec.velocity_bcs;
  return spec;
}

BenchmarkSpec benchmark_by_name(const std::string& name) {
  if (name == "chorin") return chorin_like();
  if (name == "gresho") return gresho();
  if (name == "step") return step_channel();
  if (name == "kh") return kelvin_helmholtz();
  if (name == "kh-ref") return kelvin_helmholtz(true);
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

std::vector<std::string> benchmark_names() { return {"chorin", "gresho", "step", "kh"}; }

Problem make_problem(const BenchmarkSpec& base, SchemeKind scheme,
                     const Overrides& overrides) {
  Problem prob;
  prob.spec = base;
  BenchmarkSpec& spec = prob.spec;
  if (overrides.dt) spec.dt = *overrides.dt;
  if (overrides.end_time) spec.end_time = *overrides.end_time;
  if (overrides.nu) spec.nu = *overrides.nu;
  if (overrides.newton_tol) spec.newton_tol = *overrides.newton_tol;
  if (overrides.integrator) spec.integrator = *overrides.integrator;

  // Mesh and resolved size.
  if (spec.mesh.kind == MeshRecipe::Kind::Rectangle) {
    if (overrides.h) {
      const Scalar h = *overrides.h;
      spec.mesh.nx = std::max(1, static_cast<int>(std::lround(spec.mesh.bounds.width() / h)));
      spec.mesh.ny = std::max(1, static_cast<int>(std::lround(spec.mesh.bounds.height() / h)));
    }
    prob.mesh = std::make_unique<Mesh>(
        build_rectangle_mesh(spec.mesh.nx, spec.mesh.ny, spec.mesh.bounds));
    if (spec.mesh.periodic_x)
      *prob.mesh = identify_periodic(std::move(*prob.mesh), Axis::X);
    prob.h = spec.mesh.bounds.width() / spec.mesh.nx;
  } else {
    if (overrides.h) spec.mesh.h_target = *overrides.h;
    prob.mesh = std::make_unique<Mesh>(build_step_channel_mesh(spec.mesh.h_target));
    prob.h = spec.mesh.h_target;
  }

  prob.alpha = overrides.alpha ? *overrides.alpha : spec.alpha_for(prob.h);
  if (spec.bind_parameters) spec.bind_parameters(spec, prob.h, prob.alpha);

  prob.velocity = std::make_unique<FeSpace>(build_space(*prob.mesh, 2, 2));
  prob.pressure = std::make_unique<FeSpace>(build_space(*prob.mesh, 1, 1));

  StepperConfig cfg;
  cfg.scheme = scheme;
  cfg.integrator = spec.integrator;
  cfg.dt = spec.dt;
  cfg.nu = spec.nu;
  cfg.alpha = is_filtered(scheme) ? prob.alpha : 0.0;
  cfg.newton_tol = spec.newton_tol;
  cfg.forcing = spec.forcing;
  cfg.velocity_bcs = spec.velocity_bcs;
  if (is_filtered(scheme))
    cfg.filter_bcs = spec.filter_bcs.empty() ? spec.velocity_bcs : spec.filter_bcs;
  prob.stepper = std::make_unique<Stepper>(*prob.velocity, *prob.pressure, cfg);
  return prob;
}

const char* to_string(StudyAxis a) {
  switch (a) {
    case StudyAxis::Spatial: return "spatial";
    case StudyAxis::Temporal: return "temporal";
    case StudyAxis::Hybrid: return "hybrid";
  }
  return "?";
}

StudyResult convergence_study(StudyAxis axis, int levels, SchemeKind scheme) {
  struct Point {
    Scalar h, dt;
  };
  std::vector<Point> points;
  switch (axis) {
    case StudyAxis::Spatial:
      for (int i = 1; i <= levels; ++i) points.push_back({std::pow(2.0, -i), 0.005});
      break;
    case StudyAxis::Temporal:
      for (int i = 0; i <= levels; ++i) points.push_back({1.0 / 32, std::pow(2.0, -i)});
      break;
    case StudyAxis::Hybrid:
      for (int i = 1; i <= levels; ++i)
        points.push_back({std::pow(2.0, -i), std::pow(2.0, 1 - i)});
      break;
  }

  auto run_point = [&](const Point& pt) {
    Overrides ov;
    ov.h = pt.h;
    ov.dt = pt.dt;
    const Problem prob = make_problem(chorin_like(), scheme, ov);
    const auto records =
        run(*prob.stepper, prob.spec.initial, prob.spec.end_time,
            prob.spec.exact ? &*prob.spec.exact : nullptr);
    StudyRow row;
    row.h = pt.h;
    row.dt = pt.dt;
    // Errors at the end time. The solution decays by almost two orders over
    // [0, T], so the running maximum would be dominated by the interpolation
    // transient of the initial data; the end-time error is the comparable
    // figure of merit across refinements.
    const auto& last = records.back();
    row.err_l2_w = last.err_l2_w.value_or(0);
    row.err_h1_w = last.err_h1_w.value_or(0);
    row.err_l2_u = last.err_l2_u.value_or(0);
    return row;
  };

  std::vector<std::future<StudyRow>> futures;
  futures.reserve(points.size());
  for (const auto& pt : points)
    futures.push_back(std::async(std::launch::async, run_point, pt));

  StudyResult result;
  result.axis = axis;
  for (auto& f : futures) result.rows.push_back(f.get());
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    auto rate = [](Scalar coarse, Scalar fine) {
      return (coarse > 0 && fine > 0) ? std::log2(coarse / fine) : 0.0;
    };
    result.rows[i].rate_l2_w = rate(result.rows[i - 1].err_l2_w, result.rows[i].err_l2_w);
    result.rows[i].rate_h1_w = rate(result.rows[i - 1].err_h1_w, result.rows[i].err_h1_w);
    result.rows[i].rate_l2_u = rate(result.rows[i - 1].err_l2_u, result.rows[i].err_l2_u);
  }
  return result;
}

}  // namespace emacreg
