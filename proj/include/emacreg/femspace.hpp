#pragma once

#include "emacreg/mesh.hpp"
#include "emacreg/quadrature.hpp"

#include <map>
#include <span>

namespace emacreg {

// Lagrange finite-element space (P1 or P2, scalar or 2-vector) over a Mesh.
// Scalar DOFs are vertex values first, then edge midpoints (P2), compressed
// so that periodic slave entities share their master's index. Vector spaces
// interleave components: global dof = scalar_dof * components + component.
// Immutable after build.
struct FeSpace {
  const Mesh* mesh = nullptr;
  int degree = 1;
  int components = 1;
  int nbasis = 3;        // scalar basis functions per cell
  Index num_scalar = 0;  // independent scalar DOFs
  Index num_raw = 0;     // vertex+edge entities before periodic identification

  std::vector<std::array<Index, 6>> cell_sdofs;  // first nbasis entries used
  std::vector<Vec2> sdof_coords;
  std::map<BoundaryMarker, std::vector<Index>> boundary_sdofs;
  std::vector<std::pair<Index, Index>> periodic_map;  // raw slave -> scalar master
  std::vector<Index> raw_to_sdof;                     // raw entity -> scalar DOF
  std::vector<std::pair<Index, Index>> edge_vertices;  // P2 only, raw edge endpoints

  Index ndofs() const { return components * num_scalar; }
  Index gdof(Index sdof, int comp) const { return sdof * components + comp; }
};

// Coefficient vector over a space, one entry per global DOF.
struct Field {
  const FeSpace* space = nullptr;
  VecX coeffs;
};

FeSpace build_space(const Mesh& mesh, int degree, int components);

Field make_field(const FeSpace& space);

Field interpolate(const FeSpace& space, const VectorFn& f, Scalar t = 0);
Field interpolate(const FeSpace& space, const ScalarFn& f, Scalar t = 0);

// Basis expansion at the triangle containing `point` (brute-force scan,
// barycentric tolerance 1e-12). Throws std::domain_error outside the mesh.
// Result has one entry per component.
VecX evaluate(const Field& field, const Vec2& point);

// ---- reference element helpers ----------------------------------------

int basis_count(int degree);
void eval_basis(int degree, const Vec2& ref, std::span<Scalar> values);
void eval_basis_grad(int degree, const Vec2& ref, std::span<Vec2> ref_gradients);

struct CellGeometry {
  Mat2 jacobian;   // columns (p1-p0), (p2-p0)
  Mat2 inv_jac_t;  // maps reference gradients to physical ones
  Scalar area = 0;
  Vec2 origin;

  Vec2 map(const Vec2& ref) const { return origin + jacobian * ref; }
};

CellGeometry cell_geometry(const Mesh& mesh, Index tri);

// ---- Dirichlet constraints ---------------------------------------------

struct DirichletBc {
  BoundaryMarker marker = BoundaryMarker::Wall;
  std::array<bool, 2> component_mask{{true, true}};
  VectorFn value;  // empty means homogeneous
};

// Resolved set of constrained global DOFs for a velocity space, deduplicated
// and sorted; the first matching condition wins at shared corners.
class DirichletSet {
 public:
  DirichletSet() = default;
  DirichletSet(const FeSpace& space, std::vector<DirichletBc> bcs);

  bool empty() const { return entries_.empty(); }
  bool constrained(Index gdof) const {
    return gdof < static_cast<Index>(mask_.size()) && mask_[gdof] != 0;
  }
  const std::vector<char>& mask() const { return mask_; }
  std::size_t size() const { return entries_.size(); }

  // Overwrites constrained entries of `coeffs` with boundary data at time t.
  void apply(VecX& coeffs, Scalar t) const;

  // residual[gdof] = coeffs[gdof] - data(t) for every constrained DOF.
  void constraint_residual(const VecX& coeffs, Scalar t, VecX& residual) const;

 private:
  struct Entry {
    Index gdof = 0;
    int component = 0;
    Vec2 coord;
    int bc = 0;
  };
  std::vector<DirichletBc> bcs_;
  std::vector<Entry> entries_;
  std::vector<char> mask_;
};

}  // namespace emacreg
