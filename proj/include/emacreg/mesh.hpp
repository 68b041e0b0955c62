#pragma once

#include "emacreg/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace emacreg {

enum class BoundaryMarker { Wall, Inflow, Outflow, Bottom, Top, Left, Right };

const char* to_string(BoundaryMarker m);

struct BoundaryEdge {
  Index a = 0, b = 0;  // vertex indices
  BoundaryMarker marker = BoundaryMarker::Wall;
};

struct Rect {
  Scalar x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  Scalar width() const { return x1 - x0; }
  Scalar height() const { return y1 - y0; }
};

enum class Axis { X, Y };

// Conforming triangulation with boundary markers and optional periodic
// vertex identification. Immutable after construction; safe to share
// read-only across threads.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<std::pair<Index, Index>> periodic_pairs;  // (master, slave)

  Index num_vertices() const { return static_cast<Index>(vertices.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles.size()); }

  Scalar signed_area(Index tri) const;
  Scalar total_area() const;
};

// Uniform nx-by-ny grid of cells on `bounds`, each cell split along the
// bottom-left to top-right diagonal. Sides are marked Bottom/Top/Left/Right.
Mesh build_rectangle_mesh(int nx, int ny, const Rect& bounds);

// Channel [0,40]x[0,10] with the unit square [5,6]x[0,1] removed. Structured
// grid at 1/h_target cells per unit; cells covering the step are deleted.
// x=0 is Inflow, x=40 Outflow, everything else (bottom, top, step) Wall.
// h_target must divide the unit step: requires h_target <= 1.
Mesh build_step_channel_mesh(Scalar h_target);

// Pairs boundary vertices on the two sides orthogonal to `axis`, matching
// by the other coordinate within 1e-12. The max-side vertices become slaves
// of the min-side masters. May be applied once per axis.
Mesh identify_periodic(Mesh mesh, Axis axis);

}  // namespace emacreg
