#include "nlfem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <cmath>
#include <numeric>

namespace nlfem {

namespace {

constexpr int kMaxPoints = 20;

// Nodes and weights of the Gauss rule for (1 - x)^a (1 + x)^b.
// Golub-Welsch eigenvalues seed a Newton polish on P_n^(a,b).
void gauss_jacobi_rule(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    jac(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double kk = k + 1.0;
      const double t = 2.0 * kk + a + b;
      const double beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double log_c = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) - std::lgamma(n + a + b + 1.0) -
                       std::lgamma(n + 1.0) + (a + b + 1.0) * std::log(2.0);
  for (int i = 0; i < n; ++i) {
    double t = eig.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      const auto v = jacobi_polynomial(n, a, b, t);
      const double dt = v.p / v.dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    const auto v = jacobi_polynomial(n, a, b, t);
    if (std::abs(v.p) > 1e-14 * std::max(1.0, std::abs(v.dp))) {
      throw NumericError("Gauss-Jacobi node refinement did not converge");
    }
    x[i] = t;
    w[i] = std::exp(log_c) / ((1.0 - t * t) * v.dp * v.dp);
  }
  // The closed-form weights lose digits next to a strong endpoint singularity;
  // rescale them to the exact zeroth moment.
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& wi : w) wi *= mu0 / sum;
}

}  // namespace

double QuadratureRule::weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

JacobiValue jacobi_polynomial(int n, double a, double b, double x) {
  double p0 = 1.0;
  if (n == 0) return {1.0, 0.0, 0.0};
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  // (2n+a+b)(1-x^2) P_n' = n[(a-b) - (2n+a+b)x] P_n + 2(n+a)(n+b) P_{n-1}
  const double s = 2.0 * n + a + b;
  const double dp = (n * ((a - b) - s * x) * p1 + 2.0 * (n + a) * (n + b) * p0) / (s * (1.0 - x * x));
  return {p1, dp, p0};
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxPoints) throw InvalidArgument("gauss_legendre: n must be in [1, 20]");
  QuadratureRule rule;
  rule.kind = RuleKind::Legendre;
  rule.dim = 1;
  gauss_jacobi_rule(n, 0.0, 0.0, rule.nodes, rule.weights);
  // Enforce exact symmetry of the computed rule.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double xm = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double wm = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -xm;
    rule.nodes[j] = xm;
    rule.weights[i] = rule.weights[j] = wm;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_jacobi(int n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("gauss_jacobi: alpha must lie in (0, 1)");
  if (n < 1 || n > kMaxPoints) throw InvalidArgument("gauss_jacobi: n must be in [1, 20]");
  QuadratureRule rule;
  rule.kind = RuleKind::Jacobi;
  rule.dim = 1;
  rule.alpha = alpha;
  gauss_jacobi_rule(n, -alpha, 0.0, rule.nodes, rule.weights);
  return rule;
}

QuadratureRule tensor_rule(const QuadratureRule& rule1d) {
  if (rule1d.kind != RuleKind::Legendre || rule1d.dim != 1) {
    throw InvalidArgument("tensor_rule: expects a 1D Gauss-Legendre rule");
  }
  QuadratureRule rule;
  rule.kind = RuleKind::Legendre;
  rule.dim = 2;
  const std::size_t n = rule1d.size();
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      rule.points.emplace_back(rule1d.nodes[i], rule1d.nodes[j]);
      rule.weights.push_back(rule1d.weights[i] * rule1d.weights[j]);
    }
  }
  return rule;
}

QuadratureRule triangle_rule(int order) {
  QuadratureRule rule;
  rule.kind = RuleKind::TriangleSym;
  rule.dim = 2;
  switch (order) {
    case 1:
      rule.points = {Vec2(1.0 / 3.0, 1.0 / 3.0)};
      rule.weights = {0.5};
      break;
    case 2:
      rule.points = {Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
      rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      break;
    case 3: {
      // Six-point symmetric rule (exact to degree 4), all weights positive.
      const double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1;
      const double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2;
      const double w1 = 0.223381589678011 / 2.0, w2 = 0.109951743655322 / 2.0;
      rule.points = {Vec2(a1, a1), Vec2(b1, a1), Vec2(a1, b1), Vec2(a2, a2), Vec2(b2, a2), Vec2(a2, b2)};
      rule.weights = {w1, w1, w1, w2, w2, w2};
      break;
    }
    default:
      throw InvalidArgument("triangle_rule: order must be 1, 2 or 3");
  }
  return rule;
}

const QuadratureRule& cached_gauss_legendre(int n) {
  thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

const QuadratureRule& cached_gauss_jacobi(int n, double alpha) {
  thread_local std::map<std::pair<int, double>, QuadratureRule> cache;
  const auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, alpha)).first;
  return it->second;
}

const QuadratureRule& cached_triangle_rule(int order) {
  thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, triangle_rule(order)).first;
  return it->second;
}

}  // namespace nlfem
