#include "emacreg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace emacreg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Scalar parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  Scalar v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw IoError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  if (used != value.size())
    throw IoError("config key '" + key + "': expected a number, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw IoError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SchemeKind scheme_from_string(const std::string& s) {
  if (s == "emacreg") return SchemeKind::EmacReg;
  if (s == "emac") return SchemeKind::Emac;
  if (s == "skew") return SchemeKind::Skew;
  if (s == "nsalpha") return SchemeKind::NsAlpha;
  throw IoError("unknown scheme '" + s + "' (emacreg|emac|skew|nsalpha)");
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "cn") return Integrator::CrankNicolson;
  if (s == "bdf2") return Integrator::Bdf2;
  throw IoError("unknown integrator '" + s + "' (cn|bdf2)");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  bool alpha_set = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "benchmark") cfg.benchmark = value;
    else if (key == "scheme") cfg.scheme = scheme_from_string(value);
    else if (key == "h") cfg.overrides.h = parse_number(key, value);
    else if (key == "dt") cfg.overrides.dt = parse_number(key, value);
    else if (key == "T") cfg.overrides.end_time = parse_number(key, value);
    else if (key == "nu") cfg.overrides.nu = parse_number(key, value);
    else if (key == "alpha") { cfg.overrides.alpha = parse_number(key, value); alpha_set = true; }
    else if (key == "newton_tol") cfg.overrides.newton_tol = parse_number(key, value);
    else if (key == "integrator") cfg.overrides.integrator = integrator_from_string(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "every") cfg.every = static_cast<int>(parse_number(key, value));
    else if (key == "csv") cfg.write_csv = parse_bool(key, value);
    else if (key == "vtu") cfg.write_vtu = parse_bool(key, value);
    else throw IoError("unknown config key '" + key + "'");
  }
  if (alpha_set && !is_filtered(cfg.scheme)) {
    cfg.warnings.push_back("alpha is ignored by scheme '" +
                           std::string(to_string(cfg.scheme)) + "'");
    cfg.overrides.alpha.reset();
  }
  return cfg;
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "benchmark = " << cfg.benchmark << "\n";
  out << "scheme = " << to_string(cfg.scheme) << "\n";
  if (cfg.overrides.h) out << "h = " << fmt(*cfg.overrides.h) << "\n";
  if (cfg.overrides.dt) out << "dt = " << fmt(*cfg.overrides.dt) << "\n";
  if (cfg.overrides.end_time) out << "T = " << fmt(*cfg.overrides.end_time) << "\n";
  if (cfg.overrides.nu) out << "nu = " << fmt(*cfg.overrides.nu) << "\n";
  if (cfg.overrides.alpha) out << "alpha = " << fmt(*cfg.overrides.alpha) << "\n";
  if (cfg.overrides.newton_tol)
    out << "newton_tol = " << fmt(*cfg.overrides.newton_tol) << "\n";
  if (cfg.overrides.integrator)
    out << "integrator = " << to_string(*cfg.overrides.integrator) << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "every = " << cfg.every << "\n";
  out << "csv = " << (cfg.write_csv ? "true" : "false") << "\n";
  out << "vtu = " << (cfg.write_vtu ? "true" : "false") << "\n";
  return out.str();
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                           const std::string& path) {
  if (records.empty())
    throw std::invalid_argument("write_diagnostics_csv: no records");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "t,energy_model,energy_kinetic,momentum_x,momentum_y,ang_momentum,"
         "enstrophy,div_u,div_w,err_l2_u,err_l2_w,err_h1_w\n";
  auto opt = [&](const std::optional<Scalar>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : records) {
    out << fmt(r.t) << ',' << fmt(r.energy_model) << ',' << fmt(r.energy_kinetic)
        << ',' << fmt(r.momentum.x()) << ',' << fmt(r.momentum.y()) << ','
        << fmt(r.ang_momentum) << ',' << fmt(r.enstrophy) << ',' << fmt(r.div_u_norm)
        << ',' << fmt(r.div_w_norm) << ',' << opt(r.err_l2_u) << ','
        << opt(r.err_l2_w) << ',' << opt(r.err_h1_w) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty diagnostics file '" + path + "'");
  std::vector<DiagnosticsRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(12);
    DiagnosticsRecord r;
    r.t = std::stod(cells[0]);
    r.energy_model = std::stod(cells[1]);
    r.energy_kinetic = std::stod(cells[2]);
    r.momentum.x() = std::stod(cells[3]);
    r.momentum.y() = std::stod(cells[4]);
    r.ang_momentum = std::stod(cells[5]);
    r.enstrophy = std::stod(cells[6]);
    r.div_u_norm = std::stod(cells[7]);
    r.div_w_norm = std::stod(cells[8]);
    auto opt = [](const std::string& s) -> std::optional<Scalar> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    r.err_l2_u = opt(cells[9]);
    r.err_l2_w = opt(cells[10]);
    r.err_h1_w = opt(cells[11]);
    records.push_back(r);
  }
  return records;
}

namespace {

void write_vtu_document(std::ostream& out, const std::vector<Vec2>& points,
                        const std::vector<std::array<Index, 3>>& cells,
                        const std::map<std::string, std::vector<Scalar>>& point_scalars,
                        const std::map<std::string, std::vector<Vec2>>& point_vectors,
                        const std::map<std::string, std::vector<Scalar>>& cell_scalars) {
  out << "<?xml version=\"1.0\"?>\n";
  out << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" "
         "byte_order=\"LittleEndian\">\n";
  out << "  <UnstructuredGrid>\n";
  out << "    <Piece NumberOfPoints=\"" << points.size() << "\" NumberOfCells=\""
      << cells.size() << "\">\n";
  out << "      <Points>\n        <DataArray type=\"Float64\" "
         "NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (const auto& p : points) out << "          " << p.x() << ' ' << p.y() << " 0\n";
  out << "        </DataArray>\n      </Points>\n";
  out << "      <Cells>\n";
  out << "        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
  for (const auto& c : cells)
    out << "          " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "        </DataArray>\n";
  out << "        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n       "
         "   ";
  for (std::size_t i = 1; i <= cells.size(); ++i) out << 3 * i << ' ';
  out << "\n        </DataArray>\n";
  out << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n          ";
  for (std::size_t i = 0; i < cells.size(); ++i) out << "5 ";
  out << "\n        </DataArray>\n      </Cells>\n";

  out << "      <PointData>\n";
  for (const auto& [name, values] : point_vectors) {
    out << "        <DataArray type=\"Float64\" Name=\"" << name
        << "\" NumberOfComponents=\"3\" format=\"ascii\">\n";
    for (const auto& v : values) out << "          " << v.x() << ' ' << v.y() << " 0\n";
    out << "        </DataArray>\n";
  }
  for (const auto& [name, values] : point_scalars) {
    out << "        <DataArray type=\"Float64\" Name=\"" << name
        << "\" format=\"ascii\">\n          ";
    for (Scalar v : values) out << v << ' ';
    out << "\n        </DataArray>\n";
  }
  out << "      </PointData>\n";
  out << "      <CellData>\n";
  for (const auto& [name, values] : cell_scalars) {
    out << "        <DataArray type=\"Float64\" Name=\"" << name
        << "\" format=\"ascii\">\n          ";
    for (Scalar v : values) out << v << ' ';
    out << "\n        </DataArray>\n";
  }
  out << "      </CellData>\n";
  out << "    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
}

}  // namespace

void write_vtu(const State& state, const std::string& path) {
  const FeSpace& vel = *state.u.space;
  const FeSpace& pres = *state.P.space;
  const Mesh& mesh = *vel.mesh;
  if (vel.degree != 2 || vel.components != 2)
    throw std::invalid_argument("write_vtu: velocity must be a P2 vector field");

  const Index nv = mesh.num_vertices();
  const Index npts = vel.num_raw;  // vertices + edge midpoints

  // Visualization points carry raw coordinates so periodic seams stay open.
  std::vector<Vec2> points(npts);
  for (Index v = 0; v < nv; ++v) points[v] = mesh.vertices[v];
  std::map<std::pair<Index, Index>, Index> edge_ids;
  for (Index e = 0; e < static_cast<Index>(vel.edge_vertices.size()); ++e) {
    const auto [a, b] = vel.edge_vertices[e];
    points[nv + e] = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    edge_ids[{a, b}] = e;
  }
  auto edge_point = [&](Index a, Index b) {
    return nv + edge_ids.at({std::min(a, b), std::max(a, b)});
  };

  // Once-refined triangulation through the edge midpoints.
  std::vector<std::array<Index, 3>> cells;
  cells.reserve(4 * mesh.num_triangles());
  for (const auto& t : mesh.triangles) {
    const Index m01 = edge_point(t[0], t[1]);
    const Index m12 = edge_point(t[1], t[2]);
    const Index m20 = edge_point(t[2], t[0]);
    cells.push_back({t[0], m01, m20});
    cells.push_back({t[1], m12, m01});
    cells.push_back({t[2], m20, m12});
    cells.push_back({m01, m12, m20});
  }

  std::map<std::string, std::vector<Vec2>> vectors;
  std::map<std::string, std::vector<Scalar>> scalars, cell_scalars;
  auto& uvals = vectors["u"];
  auto& wvals = vectors["w"];
  auto& speed = scalars["speed"];
  uvals.resize(npts);
  wvals.resize(npts);
  speed.resize(npts);
  for (Index raw = 0; raw < npts; ++raw) {
    const Index s = vel.raw_to_sdof[raw];
    uvals[raw] = Vec2(state.u.coeffs[vel.gdof(s, 0)], state.u.coeffs[vel.gdof(s, 1)]);
    wvals[raw] = Vec2(state.w.coeffs[vel.gdof(s, 0)], state.w.coeffs[vel.gdof(s, 1)]);
    speed[raw] = uvals[raw].norm();
  }

  // Nodal-averaged vorticity: per-element curl evaluated at the six entity
  // points, averaged over incident elements.
  auto& vorticity = scalars["vorticity"];
  vorticity.assign(npts, 0.0);
  std::vector<int> touch(npts, 0);
  static const Vec2 ref_pts[6] = {Vec2(0, 0),     Vec2(1, 0),   Vec2(0, 1),
                                  Vec2(0.5, 0),   Vec2(0.5, 0.5), Vec2(0, 0.5)};
  std::array<Vec2, 6> dref{}, grad{};
  for (Index c = 0; c < mesh.num_triangles(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto& t = mesh.triangles[c];
    const Index entity[6] = {t[0],
                             t[1],
                             t[2],
                             edge_point(t[0], t[1]),
                             edge_point(t[1], t[2]),
                             edge_point(t[2], t[0])};
    const auto& sd = vel.cell_sdofs[c];
    for (int k = 0; k < 6; ++k) {
      eval_basis_grad(2, ref_pts[k], dref);
      for (int i = 0; i < 6; ++i) grad[i] = g.inv_jac_t * dref[i];
      Scalar curl = 0;
      for (int i = 0; i < 6; ++i)
        curl += state.u.coeffs[vel.gdof(sd[i], 1)] * grad[i][0] -
                state.u.coeffs[vel.gdof(sd[i], 0)] * grad[i][1];
      vorticity[entity[k]] += curl;
      touch[entity[k]]++;
    }
  }
  for (Index i = 0; i < npts; ++i)
    if (touch[i]) vorticity[i] /= touch[i];

  // Pressure as cell data on the refined mesh (P1 value at the centroid).
  auto p_at = [&](Index raw_pt) {
    if (raw_pt < nv) return state.P.coeffs[pres.raw_to_sdof[raw_pt]];
    const auto [a, b] = vel.edge_vertices[raw_pt - nv];
    return 0.5 * (state.P.coeffs[pres.raw_to_sdof[a]] + state.P.coeffs[pres.raw_to_sdof[b]]);
  };
  auto& pressure = cell_scalars["pressure"];
  pressure.reserve(cells.size());
  for (const auto& c : cells)
    pressure.push_back((p_at(c[0]) + p_at(c[1]) + p_at(c[2])) / 3.0);

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  write_vtu_document(out, points, cells, scalars, vectors, cell_scalars);
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_mesh_vtu(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  std::vector<std::array<Index, 3>> cells(mesh.triangles.begin(), mesh.triangles.end());
  write_vtu_document(out, mesh.vertices, cells, {}, {}, {});
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace emacreg
