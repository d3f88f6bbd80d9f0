#pragma once

#include "nlfem/core.hpp"
#include "nlfem/kernels.hpp"
#include "nlfem/shape.hpp"

#include <array>
#include <optional>
#include <vector>

namespace nlfem {

struct ChildElement {
  ElementShape shape = ElementShape::Quad4;  // Quad4 or Tri3
  std::array<int, 4> nodes{};
};

struct ChildSegment {
  int n0 = 0;
  int n1 = 0;
  int axis = 0;  // 0: leg along x, 1: leg along y
};

/// Discretisation of one truncated horizon, owned by one parent Gauss point.
struct ChildMesh {
  int owner_element = -1;
  int owner_gauss = -1;
  std::vector<Vec2> nodes;
  std::vector<ChildElement> elements;
  std::vector<ChildSegment> segments;
  /// Point whose coordinate lines the element edges are aligned with.
  std::optional<Vec2> singular_point;
  double avg_element_size = 0.0;

  bool empty() const { return elements.empty() && segments.empty(); }
  /// Sum of element areas (2D) or segment lengths (1D).
  double measure() const;
};

struct ChildMeshOptions {
  int facets_per_quarter = 16;
  /// Ring spacing exponent for star meshes; values > 1 pack rings near the centre.
  double radial_grading = 1.0;
  /// Rectangular grids follow a fixed lattice k * size through `lattice_origin`
  /// (clipped to the horizon) instead of being spread evenly over the horizon.
  /// Assembly replaces the origin by the corner of a box domain.
  bool lattice_grid = true;
  Vec2 lattice_origin = Vec2::Zero();
};

/// Mesh a truncated horizon with target element size `target_size`.
/// Rectangular regions become structured grids, split into quadrants at
/// `singular_point` when given. Polygonal regions with arcs become star meshes
/// centred on `center` (required for them). Segment regions become 1D meshes
/// split at their anchor.
ChildMesh mesh_child(const TruncatedRegion& region, const std::optional<Vec2>& singular_point, double target_size,
                     const ChildMeshOptions& opts = {}, const std::optional<Vec2>& center = std::nullopt);

struct ChildPoint {
  Vec2 x;
  double w;
};

struct ChildRuleOptions {
  int legendre_n = 2;    // Gauss-Legendre points per direction
  int jacobi_n = 3;      // Gauss-Jacobi points per singular direction
  /// Gauss-Legendre points on singular-direction cells that do not touch the
  /// singular point; the explicit |x - x'|^(-alpha) factor is not polynomial there.
  int far_singular_n = 3;
  int triangle_order = 3;
};

/// Quadrature points of a child mesh. For singular kernels the |x - x'|^(-alpha)
/// factors are folded into the weights, the smooth factor is not.
std::vector<ChildPoint> child_quadrature_points(const ChildMesh& cm, const KernelSpec& spec,
                                                const ChildRuleOptions& rule = {});

double child_element_area(const ChildMesh& cm, const ChildElement& el);

}  // namespace nlfem
