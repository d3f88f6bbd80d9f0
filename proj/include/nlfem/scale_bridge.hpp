#pragma once

#include "nlfem/core.hpp"
#include "nlfem/geometry_mesh.hpp"

#include <vector>

namespace nlfem {

/// Uniform background grid over the parent-mesh bounding box. Each cell lists,
/// in ascending order, the elements whose bounding box overlaps it.
class SpatialIndex {
 public:
  explicit SpatialIndex(const ParentMesh& mesh);

  const ParentMesh& mesh() const { return *mesh_; }
  /// Candidate elements for a point; empty outside the grid.
  const std::vector<int>& candidates(const Vec2& x) const;
  double cell_size() const { return h_; }

 private:
  int cell_of(const Vec2& x, bool& inside) const;

  const ParentMesh* mesh_;
  Vec2 lo_;
  double h_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
  std::vector<int> none_;
};

struct BridgedPoint {
  int parent_element = -1;
  Vec2 local_coords = Vec2::Zero();
  Vec2 global_coords = Vec2::Zero();
};

/// Inverse of the element's geometry map. Triangles solve one affine system,
/// quadrilaterals run Newton on the bilinear map.
Vec2 inverse_map(const ParentMesh& mesh, int elem, const Vec2& x);

/// Lowest-id element whose closure (inflated by 1e-9) contains x.
int locate_parent_element(const SpatialIndex& index, const ParentMesh& mesh, const Vec2& x);

/// Reference-space containment test of x in element `elem`; on success `xi` holds the local coordinates.
bool element_contains(const ParentMesh& mesh, int elem, const Vec2& x, Vec2& xi);

BridgedPoint bridge(const SpatialIndex& index, const ParentMesh& mesh, const Vec2& x);

}  // namespace nlfem
