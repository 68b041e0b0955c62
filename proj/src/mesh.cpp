#include "emacreg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace emacreg {

namespace {
constexpr Scalar kMatchTol = 1e-12;
}

const char* to_string(BoundaryMarker m) {
  switch (m) {
    case BoundaryMarker::Wall: return "Wall";
    case BoundaryMarker::Inflow: return "Inflow";
    case BoundaryMarker::Outflow: return "Outflow";
    case BoundaryMarker::Bottom: return "Bottom";
    case BoundaryMarker::Top: return "Top";
    case BoundaryMarker::Left: return "Left";
    case BoundaryMarker::Right: return "Right";
  }
  return "?";
}

Scalar Mesh::signed_area(Index tri) const {
  const auto& t = triangles[tri];
  const Vec2 e1 = vertices[t[1]] - vertices[t[0]];
  const Vec2 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Scalar Mesh::total_area() const {
  Scalar a = 0;
  for (Index t = 0; t < num_triangles(); ++t) a += signed_area(t);
  return a;
}

namespace {

// Structured grid with an optional cell mask; shared by the rectangle and
// step-channel generators. Masked cells are deleted and unused vertices
// compacted away.
Mesh build_masked_grid(int nx, int ny, const Rect& bounds,
                       const std::function<bool(int, int)>& keep_cell,
                       const std::function<BoundaryMarker(const Vec2&, const Vec2&)>& mark) {
  const Scalar hx = bounds.width() / nx;
  const Scalar hy = bounds.height() / ny;

  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };

  std::vector<Vec2> verts((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts[vid(i, j)] = Vec2(bounds.x0 + i * hx, bounds.y0 + j * hy);

  Mesh mesh;
  std::vector<std::array<Index, 3>> tris;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!keep_cell(i, j)) continue;
      const Index v00 = vid(i, j), v10 = vid(i + 1, j);
      const Index v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      tris.push_back({v00, v10, v11});  // diagonal v00-v11
      tris.push_back({v00, v11, v01});
    }

  // Compact vertices used by surviving triangles.
  std::vector<Index> remap(verts.size(), -1);
  for (const auto& t : tris)
    for (Index v : t) remap[v] = 0;
  Index next = 0;
  for (std::size_t v = 0; v < verts.size(); ++v)
    if (remap[v] == 0) {
      remap[v] = next++;
      mesh.vertices.push_back(verts[v]);
    }
  for (auto& t : tris)
    for (auto& v : t) v = remap[v];
  mesh.triangles = std::move(tris);

  // Boundary edges: edges adjacent to exactly one triangle.
  std::map<std::pair<Index, Index>, int> edge_count;
  auto key = [](Index a, Index b) {
    return std::pair<Index, Index>(std::min(a, b), std::max(a, b));
  };
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) edge_count[key(t[e], t[(e + 1) % 3])]++;
  for (const auto& [edge, count] : edge_count)
    if (count == 1) {
      const Vec2& pa = mesh.vertices[edge.first];
      const Vec2& pb = mesh.vertices[edge.second];
      mesh.boundary_edges.push_back({edge.first, edge.second, mark(pa, pb)});
    }
  return mesh;
}

}  // namespace

Mesh build_rectangle_mesh(int nx, int ny, const Rect& bounds) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rectangle_mesh: cell counts must be >= 1");
  if (bounds.width() <= 0 || bounds.height() <= 0)
    throw std::invalid_argument("build_rectangle_mesh: degenerate bounds");

  const Scalar tol = kMatchTol * std::max(bounds.width(), bounds.height());
  auto mark = [&](const Vec2& a, const Vec2& b) {
    const Vec2 m = 0.5 * (a + b);
    if (std::abs(m.y() - bounds.y0) < tol) return BoundaryMarker::Bottom;
    if (std::abs(m.y() - bounds.y1) < tol) return BoundaryMarker::Top;
    if (std::abs(m.x() - bounds.x0) < tol) return BoundaryMarker::Left;
    return BoundaryMarker::Right;
  };
  return build_masked_grid(nx, ny, bounds, [](int, int) { return true; }, mark);
}

Mesh build_step_channel_mesh(Scalar h_target) {
  if (h_target <= 0)
    throw std::invalid_argument("build_step_channel_mesh: h_target must be positive");
  if (h_target > 1)
    throw std::invalid_argument(
        "build_step_channel_mesh: h_target exceeds the unit step size");

  const int n = std::max(1, static_cast<int>(std::lround(1.0 / h_target)));
  const int nx = 40 * n, ny = 10 * n;
  const Rect bounds{0, 0, 40, 10};
  const Scalar h = 1.0 / n;

  // Cell (i, j) covers [i h, (i+1) h] x [j h, (j+1) h]; the step occupies
  // x in [5, 6], y in [0, 1].
  auto keep = [&](int i, int j) {
    const Scalar xm = (i + 0.5) * h, ym = (j + 0.5) * h;
    return !(xm > 5.0 && xm < 6.0 && ym < 1.0);
  };
  auto mark = [&](const Vec2& a, const Vec2& b) {
    const Vec2 m = 0.5 * (a + b);
    if (std::abs(m.x() - 0.0) < kMatchTol * 40) return BoundaryMarker::Inflow;
    if (std::abs(m.x() - 40.0) < kMatchTol * 40) return BoundaryMarker::Outflow;
    return BoundaryMarker::Wall;  // bottom, top, and step faces
  };
  return build_masked_grid(nx, ny, bounds, keep, mark);
}

Mesh identify_periodic(Mesh mesh, Axis axis) {
  const int c = (axis == Axis::X) ? 0 : 1;  // periodic coordinate
  const int o = 1 - c;                      // matching coordinate

  Scalar lo = mesh.vertices.front()[c], hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = std::min(lo, v[c]);
    hi = std::max(hi, v[c]);
  }

  // Boundary vertices on each extreme side, keyed by the other coordinate.
  std::vector<Index> on_lo, on_hi;
  std::vector<char> seen(mesh.vertices.size(), 0);
  for (const auto& e : mesh.boundary_edges)
    for (Index v : {e.a, e.b}) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (std::abs(mesh.vertices[v][c] - lo) < kMatchTol) on_lo.push_back(v);
      if (std::abs(mesh.vertices[v][c] - hi) < kMatchTol) on_hi.push_back(v);
    }
  auto by_other = [&](Index a, Index b) {
    return mesh.vertices[a][o] < mesh.vertices[b][o];
  };
  std::sort(on_lo.begin(), on_lo.end(), by_other);
  std::sort(on_hi.begin(), on_hi.end(), by_other);

  if (on_lo.size() != on_hi.size())
    throw TopologyError("identify_periodic: side vertex counts differ (" +
                        std::to_string(on_lo.size()) + " vs " +
                        std::to_string(on_hi.size()) + ")");
  for (std::size_t k = 0; k < on_lo.size(); ++k) {
    const Scalar da =
        std::abs(mesh.vertices[on_lo[k]][o] - mesh.vertices[on_hi[k]][o]);
    if (da > kMatchTol)
      throw TopologyError("identify_periodic: unmatched vertex at offset " +
                          std::to_string(mesh.vertices[on_lo[k]][o]));
    mesh.periodic_pairs.emplace_back(on_lo[k], on_hi[k]);
  }
  return mesh;
}

}  // namespace emacreg
