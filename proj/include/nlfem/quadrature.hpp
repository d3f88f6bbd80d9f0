#pragma once

#include "nlfem/core.hpp"

#include <vector>

namespace nlfem {

enum class RuleKind { Legendre, Jacobi, TriangleSym };

/// Quadrature rule on a reference cell.
///
/// 1D rules live on [-1, 1] and store their abscissae in `nodes`.
/// 2D rules store `points` on [-1, 1]^2 (tensor) or on the unit triangle
/// {(r, s) : r, s >= 0, r + s <= 1}. Jacobi rules integrate f(t) (1 - t)^(-alpha).
struct QuadratureRule {
  RuleKind kind = RuleKind::Legendre;
  int dim = 1;
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double weight_sum() const;
};

QuadratureRule gauss_legendre(int n);

/// Gauss rule for the weight (1 - t)^(-alpha) on [-1, 1], 0 < alpha < 1.
QuadratureRule gauss_jacobi(int n, double alpha);

/// n x n product of a 1D Legendre rule.
QuadratureRule tensor_rule(const QuadratureRule& rule1d);

/// Symmetric rule on the unit triangle exact to degree `order` (1, 2 or 3).
QuadratureRule triangle_rule(int order);

/// Memoised rules for hot loops; references stay valid for the thread's lifetime.
const QuadratureRule& cached_gauss_legendre(int n);
const QuadratureRule& cached_gauss_jacobi(int n, double alpha);
const QuadratureRule& cached_triangle_rule(int order);

/// Jacobi polynomial P_n^(a,b)(x) and its derivative.
struct JacobiValue {
  double p;
  double dp;
  double p_prev;
};
JacobiValue jacobi_polynomial(int n, double a, double b, double x);

}  // namespace nlfem
