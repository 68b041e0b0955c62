#include "emacreg/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>

namespace emacreg {

namespace {

constexpr const char* kVersion = "emacreg 0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_study(const StudyResult& res, std::ostream& out) {
  out << std::left << std::setw(12) << "h" << std::setw(12) << "dt" << std::setw(14)
      << "L2(w)" << std::setw(9) << "rate" << std::setw(14) << "H1(w)" << std::setw(9)
      << "rate" << std::setw(14) << "L2(u)" << std::setw(9) << "rate" << "\n";
  out << std::string(93, '-') << "\n";
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    auto rate = [&](Scalar v) {
      std::ostringstream ss;
      if (i == 0)
        ss << "-";
      else
        ss << std::fixed << std::setprecision(3) << v;
      return ss.str();
    };
    out << std::left << std::scientific << std::setprecision(4) << std::setw(12)
        << r.h << std::setw(12) << r.dt << std::setw(14) << r.err_l2_w << std::setw(9)
        << rate(r.rate_l2_w) << std::setw(14) << r.err_h1_w << std::setw(9)
        << rate(r.rate_h1_w) << std::setw(14) << r.err_l2_u << std::setw(9)
        << rate(r.rate_l2_u) << "\n";
  }
}

int run_probe_table(std::ostream& out) {
  const Mesh mesh = build_rectangle_mesh(8, 8, Rect{0, 0, 1, 1});
  const FeSpace vel = build_space(mesh, 2, 2);
  const auto [w, u] = designed_probe_pair(vel);
  out << std::left << std::setw(9) << "form" << std::setw(6) << "test" << std::setw(16)
      << "probe" << std::setw(16) << "closed form" << std::setw(12) << "|diff|"
      << "\n";
  out << std::string(58, '-') << "\n";
  for (auto kind : {NonlinearKind::Emac, NonlinearKind::Rot, NonlinearKind::Leray}) {
    for (auto test : {ProbeTest::E1, ProbeTest::E2, ProbeTest::Phi}) {
      const Scalar probe = momentum_probe(kind, w, u, test);
      const Scalar closed = momentum_probe_closed_form(kind, w, u, test);
      out << std::left << std::setw(9) << to_string(kind) << std::setw(6)
          << to_string(test) << std::scientific << std::setprecision(6)
          << std::setw(16) << probe << std::setw(16) << closed << std::setw(12)
          << std::setprecision(2) << std::abs(probe - closed) << "\n";
    }
  }
  return 0;
}

}  // namespace

int run_experiment(const RunConfig& cfg, std::ostream& out) {
  const BenchmarkSpec spec = benchmark_by_name(cfg.benchmark);
  Problem prob = make_problem(spec, cfg.scheme, cfg.overrides);
  for (const auto& wmsg : cfg.warnings) out << "warning: " << wmsg << "\n";

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  std::vector<StepObserver> observers;
  if (cfg.write_vtu && cfg.every > 0) {
    observers.push_back([&](int step, const State& s, const DiagnosticsRecord&) {
      if (step % cfg.every != 0) return;
      std::ostringstream name;
      name << cfg.out_dir << "/state_" << std::setw(6) << std::setfill('0') << step
           << ".vtu";
      write_vtu(s, name.str());
    });
  }

  out << "running " << cfg.benchmark << " with scheme " << to_string(cfg.scheme)
      << " (h=" << prob.h << ", dt=" << prob.stepper->config().dt
      << ", T=" << prob.spec.end_time << ", nu=" << prob.stepper->config().nu
      << ", alpha=" << prob.stepper->config().alpha << ")\n";

  const auto records = run(*prob.stepper, prob.spec.initial, prob.spec.end_time,
                           prob.spec.exact ? &*prob.spec.exact : nullptr, observers);

  if (cfg.write_csv)
    write_diagnostics_csv(records, cfg.out_dir + "/diagnostics.csv");

  std::ofstream manifest(cfg.out_dir + "/manifest.txt");
  manifest << "# " << kVersion << "\n" << format_config(cfg);
  manifest << "resolved_h = " << prob.h << "\n";
  manifest << "resolved_alpha = " << prob.stepper->config().alpha << "\n";

  const auto& last = records.back();
  out << std::scientific << std::setprecision(6);
  out << "final t = " << last.t << ", model energy = " << last.energy_model
      << ", momentum = (" << last.momentum.x() << ", " << last.momentum.y()
      << "), angular momentum = " << last.ang_momentum << "\n";
  if (last.err_l2_u) out << "final L2(u) error = " << *last.err_l2_u << "\n";
  out << "wrote " << cfg.out_dir << "/diagnostics.csv (" << records.size()
      << " records)\n";
  return 0;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-element solver for EMAC-regularized incompressible flow"};
  app.set_help_flag("--help", "print help");  // keep --h free for the mesh size
  app.require_subcommand(1);

  // run ------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "run one benchmark configuration");
  run_cmd->set_help_flag("--help", "print help");
  std::string config_path, benchmark = "gresho", scheme_str = "emacreg";
  std::string integrator_str, out_dir;
  double h = 0, dt = 0, t_end = 0, nu_val = 0, alpha_val = 0, tol = 0;
  int every = 0;
  bool vtu = false;
  run_cmd->add_option("--config", config_path, "key = value configuration file");
  auto* ob = run_cmd->add_option("--benchmark", benchmark, "chorin|gresho|step|kh|kh-ref");
  auto* os = run_cmd->add_option("--scheme", scheme_str, "emacreg|emac|skew|nsalpha");
  auto* oh = run_cmd->add_option("--h", h, "target mesh size");
  auto* od = run_cmd->add_option("--dt", dt, "time step");
  auto* ot = run_cmd->add_option("--T", t_end, "end time");
  auto* on = run_cmd->add_option("--nu", nu_val, "kinematic viscosity");
  auto* oa = run_cmd->add_option("--alpha", alpha_val, "filter radius");
  auto* ol = run_cmd->add_option("--tol", tol, "Newton tolerance");
  auto* oi = run_cmd->add_option("--integrator", integrator_str, "cn|bdf2");
  auto* oo = run_cmd->add_option("--out", out_dir, "output directory");
  auto* oe = run_cmd->add_option("--every", every, "VTU snapshot cadence (steps)");
  auto* ov = run_cmd->add_flag("--vtu", vtu, "write VTU snapshots");

  // converge ---------------------------------------------------------------
  auto* conv_cmd = app.add_subcommand("converge", "refinement study on the analytic problem");
  std::string axis_str = "spatial", conv_scheme = "emacreg";
  int levels = 5;
  conv_cmd->add_option("--axis", axis_str, "spatial|temporal|hybrid");
  conv_cmd->add_option("--levels", levels, "number of refinement levels");
  conv_cmd->add_option("--scheme", conv_scheme, "emacreg|emac|skew|nsalpha");

  // probe -----------------------------------------------------------------
  auto* probe_cmd = app.add_subcommand("probe", "momentum-balance probe table");

  // list ------------------------------------------------------------------
  auto* list_cmd = app.add_subcommand("list", "list available benchmarks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : benchmark_names()) {
        const BenchmarkSpec spec = benchmark_by_name(name);
        out << std::left << std::setw(8) << name << " dt=" << spec.dt
            << " T=" << spec.end_time << " nu=" << spec.nu
            << " integrator=" << to_string(spec.integrator) << "\n";
      }
      return 0;
    }
    if (probe_cmd->parsed()) return run_probe_table(out);
    if (conv_cmd->parsed()) {
      StudyAxis axis;
      if (axis_str == "spatial") axis = StudyAxis::Spatial;
      else if (axis_str == "temporal") axis = StudyAxis::Temporal;
      else if (axis_str == "hybrid") axis = StudyAxis::Hybrid;
      else {
        err << "usage error: unknown axis '" << axis_str << "'\n";
        return 1;
      }
      const StudyResult res =
          convergence_study(axis, levels, scheme_from_string(conv_scheme));
      print_study(res, out);
      return 0;
    }

    // run
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_config(read_file(config_path));
    if (*ob) cfg.benchmark = benchmark;
    if (*os) cfg.scheme = scheme_from_string(scheme_str);
    if (*oh) cfg.overrides.h = h;
    if (*od) cfg.overrides.dt = dt;
    if (*ot) cfg.overrides.end_time = t_end;
    if (*on) cfg.overrides.nu = nu_val;
    if (*oa) cfg.overrides.alpha = alpha_val;
    if (*ol) cfg.overrides.newton_tol = tol;
    if (*oi) cfg.overrides.integrator = integrator_from_string(integrator_str);
    if (*oo) cfg.out_dir = out_dir;
    if (*oe) cfg.every = every;
    if (*ov) cfg.write_vtu = true;
    if (cfg.overrides.alpha && !is_filtered(cfg.scheme)) {
      cfg.warnings.push_back("alpha is ignored by scheme '" +
                             std::string(to_string(cfg.scheme)) + "'");
      cfg.overrides.alpha.reset();
    }
    return run_experiment(cfg, out);
  } catch (const IoError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace emacreg
