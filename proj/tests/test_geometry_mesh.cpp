#include "nlfem/geometry_mesh.hpp"
#include "nlfem/scale_bridge.hpp"
#include "nlfem/shape.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nlfem;

TEST_CASE("structured meshes have the expected counts, area and boundary") {
  for (int order : {1, 2}) {
    const ParentMesh m = build_structured_quad_mesh(2.0, 1.0, 4, 3, order);
    const int per_x = order * 4 + 1, per_y = order * 3 + 1;
    CHECK(m.num_nodes() == per_x * per_y);
    CHECK(m.num_elements() == 12);
    CHECK(mesh_area(m) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.boundary.size() == 2u * (4 + 3));
    for (const BoundarySegment& s : m.boundary) CHECK(s.kind == BoundaryKind::Dirichlet);
    CHECK(m.domain.kind == DomainDescriptor::Kind::Box);
    CHECK_NOTHROW(validate_mesh(m));
  }
  CHECK_THROWS_AS(build_structured_quad_mesh(1.0, 1.0, 0, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(build_structured_quad_mesh(1.0, 1.0, 2, 2, 3), InvalidArgument);
}

TEST_CASE("annulus mesh covers the faceted ring with inner Dirichlet and outer traction edges") {
  const int na = 48;
  const ParentMesh m = build_annulus_mesh(0.3, 0.5, 6, na);
  const double facet = 0.5 * na * std::sin(2.0 * M_PI / na);  // polygon area per unit r^2
  CHECK(mesh_area(m) == doctest::Approx(facet * (0.25 - 0.09)).epsilon(1e-12));
  int inner = 0, outer = 0;
  for (const BoundarySegment& s : m.boundary) {
    const double r = m.nodes[s.nodes[0]].norm();
    if (s.kind == BoundaryKind::Dirichlet) {
      ++inner;
      CHECK(r == doctest::Approx(0.3));
    } else {
      ++outer;
      CHECK(r == doctest::Approx(0.5));
      const Vec2 mid = 0.5 * (m.nodes[s.nodes[0]] + m.nodes[s.nodes[1]]);
      CHECK(s.normal.dot(mid) > 0.0);
      CHECK(s.normal.norm() == doctest::Approx(1.0));
    }
  }
  CHECK(inner == na);
  CHECK(outer == na);
  CHECK(point_in_domain(m, Vec2(0.4, 0.0)));
  CHECK_FALSE(point_in_domain(m, Vec2(0.0, 0.0)));
  CHECK_FALSE(point_in_domain(m, Vec2(0.6, 0.0)));
}

TEST_CASE("inclusion mesh tags the disc as region 1 and keeps the square corners") {
  const ParentMesh m = build_inclusion_mesh(1.0, Vec2(0.5, 0.5), 0.15, 48, 6, 10, 1.5);
  CHECK_NOTHROW(validate_mesh(m));
  CHECK(mesh_area(m) == doctest::Approx(1.0).epsilon(1e-12));
  double disc = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    if (m.elements[e].region == 1) disc += element_area(m, e);
  }
  const double facet = 0.5 * 48 * std::sin(2.0 * M_PI / 48);
  CHECK(disc == doctest::Approx(facet * 0.15 * 0.15).epsilon(1e-10));
  for (const Vec2& c : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}) {
    bool found = false;
    for (const Vec2& x : m.nodes) found = found || (x - c).norm() < 1e-12;
    CHECK(found);
  }
  REQUIRE(m.region_outlines.count(1));
  CHECK(polygon_area(m.region_outlines.at(1)) == doctest::Approx(disc).epsilon(1e-10));
}

TEST_CASE("mesh text export and import round-trip") {
  for (const ParentMesh& a : {build_annulus_mesh(0.3, 0.5, 2, 16, 1), build_structured_quad_mesh(1.0, 0.5, 3, 2, 2)}) {
    const ParentMesh b = import_mesh(export_mesh(a));
    REQUIRE(b.num_nodes() == a.num_nodes());
    REQUIRE(b.num_elements() == a.num_elements());
    for (int i = 0; i < a.num_nodes(); ++i) CHECK((a.nodes[i] - b.nodes[i]).norm() == 0.0);
    for (int e = 0; e < a.num_elements(); ++e) {
      CHECK(a.elements[e].nodes == b.elements[e].nodes);
      CHECK(a.elements[e].shape == b.elements[e].shape);
    }
    CHECK(b.boundary.size() == a.boundary.size());
  }
}

TEST_CASE("import rejects malformed meshes with the offending line") {
  CHECK_THROWS_AS(import_mesh("garbage"), ParseError);
  // clockwise quadrilateral
  const std::string cw = "nodes 4\n0 0 0\n1 0 1\n2 1 1\n3 1 0\nelements 1\n0 q4 0 1 2 3\nboundary 0\n";
  CHECK_THROWS_AS(import_mesh(cw), ParseError);
}

TEST_CASE("shape functions form a partition of unity with zero gradient sum" * doctest::test_suite("properties")) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.0, 1.0);
  for (ElementShape s : {ElementShape::Quad4, ElementShape::Quad9, ElementShape::Tri3, ElementShape::Tri6}) {
    for (int k = 0; k < 500; ++k) {
      Vec2 xi(u(rng), u(rng));
      if (!is_quad(s)) {
        xi = Vec2(t(rng), t(rng));
        if (xi.sum() > 1.0) xi = Vec2(1.0 - xi.x(), 1.0 - xi.y());
      }
      const ShapeEval e = shape_functions(s, xi);
      double sum = 0.0;
      Vec2 gsum = Vec2::Zero();
      Vec2 xsum = Vec2::Zero();  // linear completeness: sum N_a xi_a = xi
      const auto ref = reference_nodes(s);
      for (int a = 0; a < e.n; ++a) {
        sum += e.N[a];
        gsum += e.dN[a];
        xsum += e.N[a] * ref[a];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(gsum.norm() < 1e-12);
      CHECK((xsum - xi).norm() < 1e-12);
    }
  }
}

TEST_CASE("shape functions are nodal: N_a(xi_b) = delta_ab") {
  for (ElementShape s : {ElementShape::Quad4, ElementShape::Quad9, ElementShape::Tri3, ElementShape::Tri6}) {
    const auto ref = reference_nodes(s);
    for (int b = 0; b < node_count(s); ++b) {
      const ShapeEval e = shape_functions(s, ref[b]);
      for (int a = 0; a < e.n; ++a) CHECK(e.N[a] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("isoparametric map round-trips over 10^4 points" * doctest::test_suite("properties")) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.0, 1.0), jitter(-0.08, 0.08);
  // distorted quads: perturb interior nodes of a structured mesh
  ParentMesh q = build_structured_quad_mesh(1.0, 1.0, 5, 5, 1);
  const ParentMesh& qc = q;
  for (Vec2& x : q.nodes) {
    if (x.x() > 1e-9 && x.x() < 1 - 1e-9 && x.y() > 1e-9 && x.y() < 1 - 1e-9) x += Vec2(jitter(rng), jitter(rng));
  }
  const ParentMesh tri = build_inclusion_mesh(1.0, Vec2(0.5, 0.5), 0.2, 16, 3, 4, 1.3);
  double worst = 0.0;
  int count = 0;
  for (const ParentMesh* m : {&qc, &tri}) {
    for (int k = 0; k < 5000; ++k) {
      const int e = static_cast<int>(t(rng) * m->num_elements()) % m->num_elements();
      Vec2 xi(u(rng), u(rng));
      if (!is_quad(m->elements[e].shape)) {
        xi = Vec2(t(rng), t(rng));
        if (xi.sum() > 1.0) xi = Vec2(1.0 - xi.x(), 1.0 - xi.y());
      }
      const Vec2 back = inverse_map(*m, e, forward_map(*m, e, xi));
      worst = std::max(worst, (back - xi).norm());
      ++count;
    }
  }
  CHECK(count == 10000);
  CHECK(worst < 1e-10);
}

TEST_CASE("spatial index agrees with a brute-force containment search" * doctest::test_suite("properties")) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.05, 1.05);
  const ParentMesh m = build_inclusion_mesh(1.0, Vec2(0.4, 0.55), 0.2, 24, 3, 5, 1.2);
  const SpatialIndex index(m);
  for (int k = 0; k < 3000; ++k) {
    const Vec2 x(u(rng), u(rng));
    int brute = -1;
    Vec2 xi;
    for (int e = 0; e < m.num_elements() && brute < 0; ++e) {
      if (element_contains(m, e, x, xi)) brute = e;
    }
    if (brute < 0) {
      CHECK_THROWS_AS(locate_parent_element(index, m, x), BridgingFailure);
    } else {
      CHECK(locate_parent_element(index, m, x) == brute);
    }
  }
}

TEST_CASE("bridging returns local coordinates that map back to the point") {
  const ParentMesh m = build_structured_quad_mesh(1.0, 1.0, 4, 4, 2);
  const SpatialIndex index(m);
  for (const Vec2& x : {Vec2(0.1, 0.2), Vec2(0.5, 0.5), Vec2(1.0, 1.0), Vec2(0.0, 0.73)}) {
    const BridgedPoint b = bridge(index, m, x);
    CHECK((forward_map(m, b.parent_element, b.local_coords) - x).norm() < 1e-12);
    CHECK((b.global_coords - x).norm() == 0.0);
  }
  try {
    bridge(index, m, Vec2(1.5, 0.5));
    FAIL("expected a bridging failure");
  } catch (const BridgingFailure& e) {
    CHECK(e.nearest_element() >= 0);
    CHECK(e.point().x() == 1.5);
  }
}

TEST_CASE("element diameter and mean size on a uniform grid") {
  const ParentMesh m = build_structured_quad_mesh(1.0, 1.0, 8, 8, 1);
  CHECK(mean_element_size(m) == doctest::Approx(0.125));
  CHECK(element_diameter(m, 0) == doctest::Approx(0.125 * std::sqrt(2.0)));
}
