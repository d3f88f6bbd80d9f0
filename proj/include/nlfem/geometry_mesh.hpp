#pragma once

#include "nlfem/core.hpp"
#include "nlfem/shape.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nlfem {

using Polygon = std::vector<Vec2>;

struct Element {
  int id = 0;
  ElementShape shape = ElementShape::Quad4;
  std::vector<int> nodes;
  int region = 0;
};

enum class BoundaryKind { Dirichlet, Traction };

struct BoundarySegment {
  std::vector<int> nodes;  // two end nodes, optionally followed by the midside node
  BoundaryKind kind = BoundaryKind::Dirichlet;
  Vec2 normal = Vec2::Zero();
};

/// Geometric predicate for point-in-domain tests.
///
/// Box domains answer analytically. Polygonal domains (faceted discs and
/// annuli) use an even-odd test over their boundary loops. Imported meshes
/// fall back to walking the elements.
struct DomainDescriptor {
  enum class Kind { Box, Polygonal, ElementWalk };
  Kind kind = Kind::ElementWalk;
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();
  std::vector<Polygon> loops;
};

struct ParentMesh {
  std::vector<Vec2> nodes;
  std::vector<Element> elements;
  std::vector<BoundarySegment> boundary;
  DomainDescriptor domain;
  /// Outline polygon (counter-clockwise) of each tagged material region.
  std::map<int, Polygon> region_outlines;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
};

ParentMesh build_structured_quad_mesh(double lx, double ly, int mx, int my, int order);

/// Faceted annulus centred at the origin; inner ring Dirichlet, outer ring traction.
ParentMesh build_annulus_mesh(double r_in, double r_out, int n_radial, int n_angular, int order = 1);

/// Square [0, side]^2 with a faceted disc (region 1) centred at `center`.
/// Polar subdivision with `n_angular` a multiple of 8 so the square corners are
/// nodes; `n_disc` rings inside the disc and `n_matrix` rings outside, the
/// latter graded by `grading` (> 1 concentrates rings near the interface).
ParentMesh build_inclusion_mesh(double side, const Vec2& center, double radius, int n_angular, int n_disc,
                                int n_matrix, double grading = 1.0);

ParentMesh import_mesh(const std::string& text);
std::string export_mesh(const ParentMesh& mesh);

/// Run every structural check; throws InvalidArgument describing the first failure.
void validate_mesh(const ParentMesh& mesh);

bool point_in_domain(const ParentMesh& mesh, const Vec2& x);

/// Corner coordinates of element `e`.
std::array<Vec2, 4> element_corners(const ParentMesh& mesh, int e);
Vec2 forward_map(const ParentMesh& mesh, int e, const Vec2& xi);
Mat2 geometry_jacobian(const ParentMesh& mesh, int e, const Vec2& xi);
double element_area(const ParentMesh& mesh, int e);
double mesh_area(const ParentMesh& mesh);
/// Bounding-box diagonal of element `e`.
double element_diameter(const ParentMesh& mesh, int e);
/// Representative parent element size: mean of sqrt(area) for quads and
/// sqrt(2 area) for triangles.
double mean_element_size(const ParentMesh& mesh);

/// Straight boundary edges of the domain, used for ray clipping.
std::vector<std::pair<Vec2, Vec2>> domain_boundary_edges(const ParentMesh& mesh);

double polygon_area(const Polygon& poly);
bool point_in_polygon(const Polygon& poly, const Vec2& x, double tol = 0.0);

}  // namespace nlfem
