#include "emacreg/femspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emacreg {

int basis_count(int degree) { return degree == 1 ? 3 : 6; }

void eval_basis(int degree, const Vec2& ref, std::span<Scalar> values) {
  const Scalar xi = ref.x(), eta = ref.y();
  const Scalar l0 = 1 - xi - eta, l1 = xi, l2 = eta;
  if (degree == 1) {
    values[0] = l0;
    values[1] = l1;
    values[2] = l2;
    return;
  }
  values[0] = l0 * (2 * l0 - 1);
  values[1] = l1 * (2 * l1 - 1);
  values[2] = l2 * (2 * l2 - 1);
  values[3] = 4 * l0 * l1;
  values[4] = 4 * l1 * l2;
  values[5] = 4 * l2 * l0;
}

void eval_basis_grad(int degree, const Vec2& ref, std::span<Vec2> grads) {
  static const Vec2 dl[3] = {Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1)};
  if (degree == 1) {
    grads[0] = dl[0];
    grads[1] = dl[1];
    grads[2] = dl[2];
    return;
  }
  const Scalar xi = ref.x(), eta = ref.y();
  const Scalar l[3] = {1 - xi - eta, xi, eta};
  for (int i = 0; i < 3; ++i) grads[i] = (4 * l[i] - 1) * dl[i];
  grads[3] = 4 * (l[0] * dl[1] + l[1] * dl[0]);
  grads[4] = 4 * (l[1] * dl[2] + l[2] * dl[1]);
  grads[5] = 4 * (l[2] * dl[0] + l[0] * dl[2]);
}

CellGeometry cell_geometry(const Mesh& mesh, Index tri) {
  const auto& t = mesh.triangles[tri];
  CellGeometry g;
  g.origin = mesh.vertices[t[0]];
  g.jacobian.col(0) = mesh.vertices[t[1]] - g.origin;
  g.jacobian.col(1) = mesh.vertices[t[2]] - g.origin;
  const Scalar det = g.jacobian.determinant();
  g.area = 0.5 * det;
  g.inv_jac_t = g.jacobian.inverse().transpose();
  return g;
}

namespace {

// Union-find with path compression over raw vertex indices.
struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Index find(Index v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(Index master, Index slave) { parent[find(slave)] = find(master); }
};

}  // namespace

FeSpace build_space(const Mesh& mesh, int degree, int components) {
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("build_space: degree must be 1 or 2");
  if (components != 1 && components != 2)
    throw std::invalid_argument("build_space: components must be 1 or 2");

  FeSpace sp;
  sp.mesh = &mesh;
  sp.degree = degree;
  sp.components = components;
  sp.nbasis = basis_count(degree);

  const Index nv = mesh.num_vertices();

  // Vertex identification across periodic pairs (handles corner chains).
  UnionFind uf(nv);
  std::multimap<Index, Index> vertex_images;  // slave -> master, per pair
  for (const auto& [master, slave] : mesh.periodic_pairs) {
    uf.unite(master, slave);
    vertex_images.insert({slave, master});
  }

  // Edge table keyed by sorted raw vertex pairs (P2 only).
  std::map<std::pair<Index, Index>, Index> edge_ids;
  std::vector<std::pair<Index, Index>> edges;
  auto edge_key = [](Index a, Index b) {
    return std::pair<Index, Index>(std::min(a, b), std::max(a, b));
  };
  if (degree == 2) {
    for (const auto& t : mesh.triangles)
      for (int e = 0; e < 3; ++e) {
        auto key = edge_key(t[e], t[(e + 1) % 3]);
        if (edge_ids.emplace(key, static_cast<Index>(edges.size())).second)
          edges.push_back(key);
      }
  }
  const Index ne = static_cast<Index>(edges.size());
  sp.num_raw = nv + ne;
  sp.edge_vertices = edges;

  // Edge identification: an edge maps onto another when both endpoints have
  // periodic images whose pair is itself a mesh edge. Iterate to a fixpoint
  // so edges touching doubly-periodic corners resolve fully.
  std::vector<Index> edge_master(ne);
  std::iota(edge_master.begin(), edge_master.end(), 0);
  if (degree == 2 && !mesh.periodic_pairs.empty()) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (Index e = 0; e < ne; ++e) {
        const auto [a, b] = edges[edge_master[e]];
        auto range_a = vertex_images.equal_range(a);
        auto range_b = vertex_images.equal_range(b);
        std::vector<Index> imgs_a{a}, imgs_b{b};
        for (auto it = range_a.first; it != range_a.second; ++it)
          imgs_a.push_back(it->second);
        for (auto it = range_b.first; it != range_b.second; ++it)
          imgs_b.push_back(it->second);
        for (Index ma : imgs_a) {
          for (Index mb : imgs_b) {
            if (ma == a && mb == b) continue;
            auto it = edge_ids.find(edge_key(ma, mb));
            if (it != edge_ids.end() && it->second != edge_master[e]) {
              edge_master[e] = it->second;
              changed = true;
            }
          }
        }
      }
    }
  }

  // Compress raw entities (vertices then edges) to scalar DOF ids.
  sp.raw_to_sdof.assign(sp.num_raw, -1);
  auto raw_master = [&](Index raw) -> Index {
    if (raw < nv) return uf.find(raw);
    return nv + edge_master[raw - nv];
  };
  Index next = 0;
  for (Index raw = 0; raw < sp.num_raw; ++raw) {
    if (raw_master(raw) != raw) continue;
    sp.raw_to_sdof[raw] = next++;
    if (raw < nv) {
      sp.sdof_coords.push_back(mesh.vertices[raw]);
    } else {
      const auto [a, b] = edges[raw - nv];
      sp.sdof_coords.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    }
  }
  sp.num_scalar = next;
  for (Index raw = 0; raw < sp.num_raw; ++raw) {
    const Index m = raw_master(raw);
    if (m != raw) {
      sp.raw_to_sdof[raw] = sp.raw_to_sdof[m];
      sp.periodic_map.emplace_back(raw, sp.raw_to_sdof[m]);
    }
  }

  // Per-cell scalar DOFs: vertices then edge midpoints.
  sp.cell_sdofs.resize(mesh.num_triangles());
  for (Index c = 0; c < mesh.num_triangles(); ++c) {
    const auto& t = mesh.triangles[c];
    auto& dofs = sp.cell_sdofs[c];
    dofs.fill(-1);
    for (int k = 0; k < 3; ++k) dofs[k] = sp.raw_to_sdof[t[k]];
    if (degree == 2)
      for (int e = 0; e < 3; ++e) {
        const Index eid = edge_ids.at(edge_key(t[e], t[(e + 1) % 3]));
        dofs[3 + e] = sp.raw_to_sdof[nv + eid];
      }
  }

  // Boundary DOFs per marker.
  for (const auto& be : mesh.boundary_edges) {
    auto& list = sp.boundary_sdofs[be.marker];
    list.push_back(sp.raw_to_sdof[be.a]);
    list.push_back(sp.raw_to_sdof[be.b]);
    if (degree == 2) list.push_back(sp.raw_to_sdof[nv + edge_ids.at(edge_key(be.a, be.b))]);
  }
  for (auto& [marker, list] : sp.boundary_sdofs) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return sp;
}

Field make_field(const FeSpace& space) {
  Field f;
  f.space = &space;
  f.coeffs = VecX::Zero(space.ndofs());
  return f;
}

Field interpolate(const FeSpace& space, const VectorFn& f, Scalar t) {
  if (space.components != 2)
    throw std::invalid_argument("interpolate: vector function on a scalar space");
  Field out = make_field(space);
  for (Index s = 0; s < space.num_scalar; ++s) {
    const Vec2 v = f(space.sdof_coords[s], t);
    out.coeffs[space.gdof(s, 0)] = v.x();
    out.coeffs[space.gdof(s, 1)] = v.y();
  }
  return out;
}

Field interpolate(const FeSpace& space, const ScalarFn& f, Scalar t) {
  if (space.components != 1)
    throw std::invalid_argument("interpolate: scalar function on a vector space");
  Field out = make_field(space);
  for (Index s = 0; s < space.num_scalar; ++s)
    out.coeffs[s] = f(space.sdof_coords[s], t);
  return out;
}

VecX evaluate(const Field& field, const Vec2& point) {
  const FeSpace& sp = *field.space;
  const Mesh& mesh = *sp.mesh;
  constexpr Scalar tol = 1e-12;
  std::array<Scalar, 6> vals{};
  for (Index c = 0; c < mesh.num_triangles(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const Vec2 ref = g.jacobian.inverse() * (point - g.origin);
    const Scalar l0 = 1 - ref.x() - ref.y();
    if (ref.x() < -tol || ref.y() < -tol || l0 < -tol) continue;
    eval_basis(sp.degree, ref, vals);
    VecX out = VecX::Zero(sp.components);
    for (int i = 0; i < sp.nbasis; ++i)
      for (int comp = 0; comp < sp.components; ++comp)
        out[comp] += field.coeffs[sp.gdof(sp.cell_sdofs[c][i], comp)] * vals[i];
    return out;
  }
  throw std::domain_error("evaluate: point (" + std::to_string(point.x()) + ", " +
                          std::to_string(point.y()) + ") outside the mesh");
}

DirichletSet::DirichletSet(const FeSpace& space, std::vector<DirichletBc> bcs)
    : bcs_(std::move(bcs)) {
  mask_.assign(space.ndofs(), 0);
  for (int b = 0; b < static_cast<int>(bcs_.size()); ++b) {
    const auto it = space.boundary_sdofs.find(bcs_[b].marker);
    if (it == space.boundary_sdofs.end()) continue;
    for (Index s : it->second)
      for (int comp = 0; comp < space.components; ++comp) {
        if (!bcs_[b].component_mask[comp]) continue;
        const Index g = space.gdof(s, comp);
        if (mask_[g]) continue;  // first condition wins
        mask_[g] = 1;
        entries_.push_back({g, comp, space.sdof_coords[s], b});
      }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.gdof < b.gdof; });
}

void DirichletSet::apply(VecX& coeffs, Scalar t) const {
  for (const Entry& e : entries_) {
    const auto& fn = bcs_[e.bc].value;
    coeffs[e.gdof] = fn ? fn(e.coord, t)[e.component] : 0.0;
  }
}

void DirichletSet::constraint_residual(const VecX& coeffs, Scalar t, VecX& residual) const {
  for (const Entry& e : entries_) {
    const auto& fn = bcs_[e.bc].value;
    const Scalar data = fn ? fn(e.coord, t)[e.component] : 0.0;
    residual[e.gdof] = coeffs[e.gdof] - data;
  }
}

}  // namespace emacreg
