#pragma once

#include <functional>
#include <vector>

#include "stfem/mesh.hpp"

namespace stfem {

/// Node-to-dof map separating free unknowns from Dirichlet-constrained
/// nodes carrying prescribed values. Free indices follow node order and
/// are contiguous in [0, n_free).
struct DofMap {
  std::vector<int> free_index;     // per node; -1 when constrained
  std::vector<double> prescribed;  // per node; 0.0 on free nodes
  int n_free = 0;

  bool is_free(int node) const { return free_index[node] >= 0; }
  int n_nodes() const { return static_cast<int>(free_index.size()); }
};

/// Constrains every node on the lateral closure and the initial slice,
/// with values taken from `boundary_value` (the Dirichlet lift data).
template <int M>
DofMap build_dofmap(const SpaceTimeMesh<M>& mesh,
                    const std::function<double(const Point<M>&)>& boundary_value) {
  DofMap dofmap;
  const int n = mesh.n_vertices();
  dofmap.free_index.assign(n, -1);
  dofmap.prescribed.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    if (classify_node(mesh, v) == NodeClass::Free)
      dofmap.free_index[v] = dofmap.n_free++;
    else if (boundary_value)
      dofmap.prescribed[v] = boundary_value(mesh.vertices[v]);
  }
  return dofmap;
}

/// Homogeneous variant: all constrained values zero (the space U_h).
template <int M>
DofMap build_dofmap(const SpaceTimeMesh<M>& mesh) {
  return build_dofmap<M>(mesh, nullptr);
}

}  // namespace stfem
