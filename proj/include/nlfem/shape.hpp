#pragma once

#include "nlfem/core.hpp"

#include <array>

namespace nlfem {

enum class ElementShape { Quad4, Quad9, Tri3, Tri6 };

int node_count(ElementShape shape);
/// Number of corner (geometry) nodes: 4 for quads, 3 for triangles.
int corner_count(ElementShape shape);
bool is_quad(ElementShape shape);
/// Interpolation order of the displacement field (1 or 2).
int shape_order(ElementShape shape);
ElementShape shape_from(bool quad, int order);

/// Values and reference gradients of every nodal function at one point.
struct ShapeEval {
  int n = 0;
  std::array<double, 9> N{};
  std::array<Vec2, 9> dN{};
};

/// Displacement interpolation functions of `shape` at reference point `xi`.
/// Quads use [-1, 1]^2, triangles use the unit triangle in (r, s).
ShapeEval shape_functions(ElementShape shape, const Vec2& xi);

/// Geometry functions: always the linear/bilinear corner interpolation.
ShapeEval geometry_functions(ElementShape shape, const Vec2& xi);

/// Reference coordinates of the nodes of `shape`, in connectivity order.
std::array<Vec2, 9> reference_nodes(ElementShape shape);

/// True when `xi` lies in the reference cell inflated by `tol`.
bool in_reference_cell(ElementShape shape, const Vec2& xi, double tol);

}  // namespace nlfem
