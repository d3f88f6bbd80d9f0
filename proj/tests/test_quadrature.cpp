#include "nlfem/quadrature.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace nlfem;

namespace {

double integrate_1d(const QuadratureRule& q, int k) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials up to degree 2n-1 exactly" * doctest::test_suite("properties")) {
  for (int n = 1; n <= 12; ++n) {
    const QuadratureRule q = gauss_legendre(n);
    REQUIRE(q.size() == static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      CHECK(integrate_1d(q, k) == doctest::Approx(oracle::legendre_moment(k)).epsilon(1e-13));
    }
    // one degree higher is no longer exact for even 2n
    CHECK(std::abs(integrate_1d(q, 2 * n) - oracle::legendre_moment(2 * n)) > 1e-8);
  }
}

TEST_CASE("Gauss-Jacobi rules are exact against the (1 - t)^(-alpha) weight" * doctest::test_suite("properties")) {
  for (double alpha : {0.1, 0.3, 0.5, 0.6, 0.8, 0.95}) {
    for (int n = 1; n <= 8; ++n) {
      const QuadratureRule q = gauss_jacobi(n, alpha);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        CHECK(integrate_1d(q, k) == doctest::Approx(oracle::jacobi_moment(k, alpha)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("Gauss-Jacobi weights sum to the zeroth moment 2^(1-alpha)/(1-alpha)" * doctest::test_suite("properties")) {
  for (double alpha : {0.05, 0.25, 0.5, 0.75, 0.99}) {
    for (int n : {1, 2, 3, 5, 10, 20}) {
      const double m0 = std::pow(2.0, 1.0 - alpha) / (1.0 - alpha);
      CHECK(gauss_jacobi(n, alpha).weight_sum() == doctest::Approx(m0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Jacobi nodes lie strictly inside (-1, 1) and ascend") {
  const QuadratureRule q = gauss_jacobi(9, 0.7);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q.nodes[i] > -1.0);
    CHECK(q.nodes[i] < 1.0);
    CHECK(q.weights[i] > 0.0);
    if (i) CHECK(q.nodes[i] > q.nodes[i - 1]);
  }
}

TEST_CASE("invalid rule parameters are rejected") {
  CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
  CHECK_THROWS_AS(gauss_jacobi(3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(gauss_jacobi(3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(triangle_rule(7), InvalidArgument);
}

TEST_CASE("tensor rules integrate x^a y^b exactly up to degree 2n-1 per direction" * doctest::test_suite("properties")) {
  for (int n = 1; n <= 5; ++n) {
    const QuadratureRule q = tensor_rule(gauss_legendre(n));
    REQUIRE(q.size() == static_cast<std::size_t>(n * n));
    for (int a = 0; a <= 2 * n - 1; ++a) {
      for (int b = 0; b <= 2 * n - 1; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
        }
        CHECK(s == doctest::Approx(oracle::legendre_moment(a) * oracle::legendre_moment(b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("triangle rules are exact to their stated degree" * doctest::test_suite("properties")) {
  for (int order = 1; order <= 3; ++order) {
    const QuadratureRule q = triangle_rule(order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
        }
        CHECK(s == doctest::Approx(oracle::triangle_moment(a, b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("cached rules match freshly built ones") {
  const QuadratureRule& a = cached_gauss_jacobi(4, 0.4);
  const QuadratureRule b = gauss_jacobi(4, 0.4);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(a.nodes[i] == b.nodes[i]);
    CHECK(a.weights[i] == b.weights[i]);
  }
  CHECK(&cached_gauss_legendre(3) == &cached_gauss_legendre(3));
}

TEST_CASE("Jacobi polynomial recurrence matches low-order closed forms") {
  const double a = 0.0, b = -0.4;
  for (double x : {-0.9, -0.2, 0.3, 0.8}) {
    CHECK(jacobi_polynomial(0, a, b, x).p == doctest::Approx(1.0));
    CHECK(jacobi_polynomial(1, a, b, x).p == doctest::Approx(0.5 * (a - b) + 0.5 * (a + b + 2.0) * x));
    CHECK(jacobi_polynomial(1, a, b, x).dp == doctest::Approx(0.5 * (a + b + 2.0)));
  }
}
