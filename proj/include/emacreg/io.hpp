#pragma once

#include "emacreg/benchmarks.hpp"

namespace emacreg {

// One experiment invocation: benchmark + scheme + parameter overrides +
// output options. Warnings collect non-fatal admissibility notes (for
// example a filter radius supplied to an unfiltered scheme).
struct RunConfig {
  std::string benchmark = "gresho";
  SchemeKind scheme = SchemeKind::EmacReg;
  Overrides overrides;
  std::string out_dir = "out";
  int every = 0;  // write a field snapshot every k steps (0 = off)
  bool write_csv = true;
  bool write_vtu = false;
  std::vector<std::string> warnings;
};

// Flat key = value document mirroring the CLI flags; '#' starts a comment.
// Unknown keys and malformed values raise IoError naming the key.
RunConfig parse_config(const std::string& text);

SchemeKind scheme_from_string(const std::string& s);
Integrator integrator_from_string(const std::string& s);

// Resolved key = value echo used for manifests.
std::string format_config(const RunConfig& cfg);

// Header `t,energy_model,energy_kinetic,momentum_x,momentum_y,ang_momentum,
// enstrophy,div_u,div_w,err_l2_u,err_l2_w,err_h1_w`, one row per record at
// full precision (17 significant digits); unavailable errors are empty cells.
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                           const std::string& path);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

// VTK XML unstructured-grid snapshot (ASCII). P2 fields are emitted on the
// once-refined P1 visualization mesh whose points are the velocity entities;
// point data u, w, speed, vorticity (nodal-averaged curl), cell data
// pressure.
void write_vtu(const State& state, const std::string& path);

// Geometry-only export of a mesh for visual inspection.
void write_mesh_vtu(const Mesh& mesh, const std::string& path);

}  // namespace emacreg
