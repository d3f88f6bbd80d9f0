#include "nlfem/shape.hpp"

namespace nlfem {

namespace {

// 1D quadratic Lagrange basis on nodes -1, 0, 1, indexed 0, 1, 2.
inline void lagrange2(double t, double v[3], double d[3]) {
  v[0] = 0.5 * t * (t - 1.0);
  v[1] = 1.0 - t * t;
  v[2] = 0.5 * t * (t + 1.0);
  d[0] = t - 0.5;
  d[1] = -2.0 * t;
  d[2] = t + 0.5;
}

ShapeEval quad4(const Vec2& xi) {
  static constexpr double sx[4] = {-1.0, 1.0, 1.0, -1.0};
  static constexpr double sy[4] = {-1.0, -1.0, 1.0, 1.0};
  ShapeEval e;
  e.n = 4;
  for (int i = 0; i < 4; ++i) {
    const double a = 1.0 + sx[i] * xi.x();
    const double b = 1.0 + sy[i] * xi.y();
    e.N[i] = 0.25 * a * b;
    e.dN[i] = Vec2(0.25 * sx[i] * b, 0.25 * sy[i] * a);
  }
  return e;
}

ShapeEval quad9(const Vec2& xi) {
  // Position of each node in the 3x3 tensor grid (0 = -1, 1 = 0, 2 = +1).
  static constexpr int ix[9] = {0, 2, 2, 0, 1, 2, 1, 0, 1};
  static constexpr int iy[9] = {0, 0, 2, 2, 0, 1, 2, 1, 1};
  double vx[3], dx[3], vy[3], dy[3];
  lagrange2(xi.x(), vx, dx);
  lagrange2(xi.y(), vy, dy);
  ShapeEval e;
  e.n = 9;
  for (int i = 0; i < 9; ++i) {
    e.N[i] = vx[ix[i]] * vy[iy[i]];
    e.dN[i] = Vec2(dx[ix[i]] * vy[iy[i]], vx[ix[i]] * dy[iy[i]]);
  }
  return e;
}

ShapeEval tri3(const Vec2& xi) {
  ShapeEval e;
  e.n = 3;
  e.N[0] = 1.0 - xi.x() - xi.y();
  e.N[1] = xi.x();
  e.N[2] = xi.y();
  e.dN[0] = Vec2(-1.0, -1.0);
  e.dN[1] = Vec2(1.0, 0.0);
  e.dN[2] = Vec2(0.0, 1.0);
  return e;
}

ShapeEval tri6(const Vec2& xi) {
  const double l0 = 1.0 - xi.x() - xi.y(), l1 = xi.x(), l2 = xi.y();
  const Vec2 g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
  ShapeEval e;
  e.n = 6;
  e.N[0] = l0 * (2.0 * l0 - 1.0);
  e.N[1] = l1 * (2.0 * l1 - 1.0);
  e.N[2] = l2 * (2.0 * l2 - 1.0);
  e.N[3] = 4.0 * l0 * l1;
  e.N[4] = 4.0 * l1 * l2;
  e.N[5] = 4.0 * l2 * l0;
  e.dN[0] = (4.0 * l0 - 1.0) * g0;
  e.dN[1] = (4.0 * l1 - 1.0) * g1;
  e.dN[2] = (4.0 * l2 - 1.0) * g2;
  e.dN[3] = 4.0 * (l0 * g1 + l1 * g0);
  e.dN[4] = 4.0 * (l1 * g2 + l2 * g1);
  e.dN[5] = 4.0 * (l2 * g0 + l0 * g2);
  return e;
}

}  // namespace

int node_count(ElementShape shape) {
  switch (shape) {
    case ElementShape::Quad4: return 4;
    case ElementShape::Quad9: return 9;
    case ElementShape::Tri3: return 3;
    case ElementShape::Tri6: return 6;
  }
  return 0;
}

int corner_count(ElementShape shape) { return is_quad(shape) ? 4 : 3; }

bool is_quad(ElementShape shape) { return shape == ElementShape::Quad4 || shape == ElementShape::Quad9; }

int shape_order(ElementShape shape) {
  return (shape == ElementShape::Quad9 || shape == ElementShape::Tri6) ? 2 : 1;
}

ElementShape shape_from(bool quad, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("element order must be 1 or 2");
  if (quad) return order == 1 ? ElementShape::Quad4 : ElementShape::Quad9;
  return order == 1 ? ElementShape::Tri3 : ElementShape::Tri6;
}

ShapeEval shape_functions(ElementShape shape, const Vec2& xi) {
  switch (shape) {
    case ElementShape::Quad4: return quad4(xi);
    case ElementShape::Quad9: return quad9(xi);
    case ElementShape::Tri3: return tri3(xi);
    case ElementShape::Tri6: return tri6(xi);
  }
  throw InvalidArgument("unsupported element shape");
}

ShapeEval geometry_functions(ElementShape shape, const Vec2& xi) {
  return is_quad(shape) ? quad4(xi) : tri3(xi);
}

std::array<Vec2, 9> reference_nodes(ElementShape shape) {
  std::array<Vec2, 9> r;
  r.fill(Vec2::Zero());
  if (is_quad(shape)) {
    r[0] = Vec2(-1, -1);
    r[1] = Vec2(1, -1);
    r[2] = Vec2(1, 1);
    r[3] = Vec2(-1, 1);
    r[4] = Vec2(0, -1);
    r[5] = Vec2(1, 0);
    r[6] = Vec2(0, 1);
    r[7] = Vec2(-1, 0);
    r[8] = Vec2(0, 0);
  } else {
    r[0] = Vec2(0, 0);
    r[1] = Vec2(1, 0);
    r[2] = Vec2(0, 1);
    r[3] = Vec2(0.5, 0);
    r[4] = Vec2(0.5, 0.5);
    r[5] = Vec2(0, 0.5);
  }
  return r;
}

bool in_reference_cell(ElementShape shape, const Vec2& xi, double tol) {
  if (is_quad(shape)) return std::abs(xi.x()) <= 1.0 + tol && std::abs(xi.y()) <= 1.0 + tol;
  return xi.x() >= -tol && xi.y() >= -tol && xi.x() + xi.y() <= 1.0 + tol;
}

}  // namespace nlfem
