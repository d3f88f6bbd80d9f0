#include "nlfem/horizon_mesher.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace nlfem;

namespace {

TruncatedRegion rect(double x0, double y0, double x1, double y1) {
  TruncatedRegion r;
  r.kind = TruncatedRegion::Kind::Rect;
  r.lo = Vec2(x0, y0);
  r.hi = Vec2(x1, y1);
  return r;
}

double weight_sum(const std::vector<ChildPoint>& pts) {
  double s = 0.0;
  for (const ChildPoint& p : pts) s += p.w;
  return s;
}

bool interior_crosses(const ChildMesh& cm, const ChildElement& el, int axis, double line) {
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < (el.shape == ElementShape::Quad4 ? 4 : 3); ++k) {
    lo = std::min(lo, cm.nodes[el.nodes[k]][axis]);
    hi = std::max(hi, cm.nodes[el.nodes[k]][axis]);
  }
  return line > lo + 1e-14 && line < hi - 1e-14;
}

}  // namespace

TEST_CASE("a square split at its singular point gives four 2x2 quadrant grids") {
  const ChildMesh cm = mesh_child(rect(0.3, 0.3, 0.7, 0.7), Vec2(0.5, 0.5), 0.1);
  CHECK(cm.elements.size() == 16u);
  for (const ChildElement& el : cm.elements) {
    CHECK_FALSE(interior_crosses(cm, el, 0, 0.5));
    CHECK_FALSE(interior_crosses(cm, el, 1, 0.5));
  }
  CHECK(cm.measure() == doctest::Approx(0.16).epsilon(1e-14));
}

TEST_CASE("a plain rectangle becomes a structured grid") {
  const ChildMesh cm = mesh_child(rect(0.0, 0.3, 0.3, 0.7), std::nullopt, 0.1);
  CHECK(cm.elements.size() == 12u);
  CHECK(cm.measure() == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(cm.avg_element_size == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("average child element size stays within a factor two of the target") {
  for (double h : {0.013, 0.04, 0.07, 0.11}) {
    for (bool lattice : {true, false}) {
      ChildMeshOptions o;
      o.lattice_grid = lattice;
      const ChildMesh cm = mesh_child(rect(0.11, 0.2, 0.53, 0.61), Vec2(0.3, 0.37), h, o);
      CHECK(cm.avg_element_size <= 2.0 * h);
      CHECK(cm.avg_element_size >= 0.5 * h);
    }
  }
}

TEST_CASE("faceted circles tile their facet polygon exactly") {
  const double r = 0.2;
  const Vec2 c(0.5, 0.5);
  for (int facets : {1, 2, 5, 16}) {
    ChildMeshOptions o;
    o.facets_per_quarter = facets;
    const TruncatedRegion reg = clip_circle_to_box(c, r, Vec2(0, 0), Vec2(1, 1));
    const ChildMesh cm = mesh_child(reg, std::nullopt, 0.05, o, c);
    const int n = 4 * facets;
    const double polygon = 0.5 * n * r * r * std::sin(2.0 * M_PI / n);
    CHECK(cm.measure() == doctest::Approx(polygon).epsilon(1e-10));
  }
  // default faceting stays within 0.5% of the true disc
  const ChildMesh cm = mesh_child(clip_circle_to_box(c, r, Vec2(0, 0), Vec2(1, 1)), std::nullopt, 0.05, {}, c);
  CHECK(std::abs(cm.measure() / (M_PI * r * r) - 1.0) < 5e-3);
}

TEST_CASE("clipped circles keep their straight cuts exact") {
  const Vec2 c(0.05, 0.5);
  const TruncatedRegion reg = clip_circle_to_box(c, 0.2, Vec2(0, 0), Vec2(1, 1));
  const ChildMesh cm = mesh_child(reg, std::nullopt, 0.03, {}, c);
  CHECK(std::abs(cm.measure() / reg.measure() - 1.0) < 5e-3);
  for (const Vec2& p : cm.nodes) CHECK(p.x() >= -1e-14);
}

TEST_CASE("non-singular weight sums equal the region measure" * doctest::test_suite("properties")) {
  const KernelSpec k = KernelSpec::bi_exponential(0.01);
  for (double h : {0.03, 0.05, 0.1}) {
    const ChildMesh cm = mesh_child(rect(0.0, 0.25, 0.37, 0.7), Vec2(0.2, 0.4), h);
    CHECK(weight_sum(child_quadrature_points(cm, k)) == doctest::Approx(0.37 * 0.45).epsilon(1e-12));
  }
  const Vec2 c(0.5, 0.5);
  const ChildMesh disc = mesh_child(clip_circle_to_box(c, 0.2, Vec2(0, 0), Vec2(1, 1)), std::nullopt, 0.04, {}, c);
  CHECK(weight_sum(child_quadrature_points(disc, k)) == doctest::Approx(disc.measure()).epsilon(1e-12));
}

TEST_CASE("singular quadrature reproduces the closed-form integral of a bilinear field" *
          doctest::test_suite("properties")) {
  // One cell per quadrant: every cell touches the singular point, so the Jacobi rule is exact.
  const double l = 0.2;
  for (double alpha : {0.3, 0.5, 0.6}) {
    const KernelSpec k = KernelSpec::power_law(alpha);
    for (const Vec2& x : {Vec2(0.5, 0.5), Vec2(0.1, 0.9), Vec2(0.0, 0.33)}) {
      const Vec2 lo = (x - Vec2(l, l)).cwiseMax(Vec2(0, 0)), hi = (x + Vec2(l, l)).cwiseMin(Vec2(1, 1));
      ChildMeshOptions o;
      o.lattice_grid = false;
      const ChildMesh cm = mesh_child(rect(lo.x(), lo.y(), hi.x(), hi.y()), x, 2.0 * l, o);
      CHECK(cm.elements.size() <= 4u);
      double num = 0.0;
      for (const ChildPoint& p : child_quadrature_points(cm, k)) {
        num += p.w * (0.7 - 1.3 * p.x.x() + 0.4 * p.x.y() + 2.1 * p.x.x() * p.x.y());
      }
      const double ref = oracle::singular_bilinear(alpha, x.x(), x.x() - lo.x(), hi.x() - x.x(), x.y(),
                                                   x.y() - lo.y(), hi.y() - x.y(), 0.7, -1.3, 0.4, 2.1);
      CHECK(num == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("finer singular grids converge to the closed form") {
  // Cells away from the singular lines fold |dx|^-alpha into a Legendre rule; the
  // result is approximate there and tightens with resolution.
  const double alpha = 0.6;
  const KernelSpec k = KernelSpec::power_law(alpha);
  const Vec2 x(0.5, 0.5);
  const double ref = oracle::singular_bilinear(alpha, 0.5, 0.25, 0.25, 0.5, 0.25, 0.25, 1, 0, 0, 0);
  double prev = 1e300;
  for (double h : {0.125, 0.0625, 0.03125}) {
    const ChildMesh cm = mesh_child(rect(0.25, 0.25, 0.75, 0.75), x, h);
    const double err = std::abs(weight_sum(child_quadrature_points(cm, k)) / ref - 1.0);
    CHECK(err < 5e-3);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("no singular quadrature point sits on a singular line" * doctest::test_suite("properties")) {
  const Vec2 s(0.41, 0.37);
  const ChildMesh cm = mesh_child(rect(0.2, 0.1, 0.7, 0.6), s, 0.045);
  for (const ChildPoint& p : child_quadrature_points(cm, KernelSpec::power_law(0.5))) {
    CHECK(std::abs(p.x.x() - s.x()) > 1e-12);
    CHECK(std::abs(p.x.y() - s.y()) > 1e-12);
  }
}

TEST_CASE("a misaligned child mesh is refused for singular kernels") {
  ChildMesh cm = mesh_child(rect(0.2, 0.2, 0.6, 0.6), std::nullopt, 0.1);
  cm.singular_point = Vec2(0.45, 0.45);  // inside a cell, not on a grid line
  CHECK_THROWS_AS(child_quadrature_points(cm, KernelSpec::power_law(0.5)), AlignmentViolation);
}

TEST_CASE("one-point Jacobi rule on a segment reproduces h^(1-alpha)/(1-alpha)") {
  for (double alpha : {0.2, 0.6, 0.9}) {
    const double h = 0.37;
    ChildMesh cm;
    cm.nodes = {Vec2(0.1, 0.2), Vec2(0.1 + h, 0.2)};
    cm.segments = {{0, 1, 0}};
    cm.singular_point = Vec2(0.1, 0.2);
    ChildRuleOptions rule;
    rule.jacobi_n = 1;
    const auto pts = child_quadrature_points(cm, KernelSpec::bidirectional(alpha), rule);
    REQUIRE(pts.size() == 1u);
    CHECK(pts[0].w == doctest::Approx(oracle::singular_moment(alpha, h)).epsilon(1e-13));
  }
}

TEST_CASE("bidirectional segment meshes split at the anchor") {
  TruncatedRegion reg;
  reg.kind = TruncatedRegion::Kind::Segments;
  reg.anchor = Vec2(0.4, 0.1);
  reg.x0 = 0.3;
  reg.x1 = 0.55;
  reg.y0 = -0.1;
  reg.y1 = 0.3;
  const ChildMesh cm = mesh_child(reg, reg.anchor, 0.05);
  CHECK(cm.measure() == doctest::Approx(0.25 + 0.4).epsilon(1e-14));
  for (const ChildSegment& s : cm.segments) {
    const double a = cm.nodes[s.n0][s.axis], b = cm.nodes[s.n1][s.axis];
    const double anchor = reg.anchor[s.axis];
    CHECK_FALSE((anchor > std::min(a, b) + 1e-14 && anchor < std::max(a, b) - 1e-14));
  }
  // exact singular mass along both legs
  const double alpha = 0.4;
  const double expect = oracle::singular_moment(alpha, 0.1) + oracle::singular_moment(alpha, 0.15) +
                        oracle::singular_moment(alpha, 0.2) + oracle::singular_moment(alpha, 0.2);
  const double got = weight_sum(child_quadrature_points(cm, KernelSpec::bidirectional(alpha)));
  CHECK(got == doctest::Approx(expect).epsilon(5e-3));
}

TEST_CASE("degenerate and empty regions produce no quadrature points") {
  CHECK(mesh_child(rect(0.2, 0.2, 0.2, 0.5), std::nullopt, 0.1).empty());
  TruncatedRegion none;
  CHECK(mesh_child(none, std::nullopt, 0.1).empty());
  CHECK(child_quadrature_points(ChildMesh{}, KernelSpec::bi_exponential(0.1)).empty());
  CHECK_THROWS_AS(mesh_child(rect(0, 0, 1, 1), std::nullopt, 0.0), InvalidArgument);
}

TEST_CASE("child meshes are deterministic") {
  const Vec2 c(0.12, 0.93);
  const TruncatedRegion reg = clip_circle_to_box(c, 0.2, Vec2(0, 0), Vec2(1, 1));
  const ChildMesh a = mesh_child(reg, std::nullopt, 0.021, {}, c);
  const ChildMesh b = mesh_child(reg, std::nullopt, 0.021, {}, c);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK((a.nodes[i] - b.nodes[i]).norm() == 0.0);
  REQUIRE(a.elements.size() == b.elements.size());
  for (std::size_t i = 0; i < a.elements.size(); ++i) CHECK(a.elements[i].nodes == b.elements[i].nodes);
}
