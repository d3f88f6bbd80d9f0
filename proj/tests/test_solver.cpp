#include "nlfem/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlfem;

namespace {

GlobalSystem tiny_system(const std::vector<std::vector<double>>& K, const std::vector<double>& F) {
  GlobalSystem sys;
  const int n = static_cast<int>(F.size());
  sys.num_nodes = n / 2;
  Eigen::MatrixXd dense(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dense(i, j) = K[i][j];
  }
  sys.K = dense.sparseView();
  sys.M = SparseMatrix(n, n);
  sys.F = Eigen::Map<const Eigen::VectorXd>(F.data(), n);
  return sys;
}

Loads affine_loads(double a, double b, double c, double d, double e, double f) {
  Loads loads;
  loads.prescribed = [=](const Vec2& x) { return Vec2(a + b * x.x() + c * x.y(), d + e * x.x() + f * x.y()); };
  return loads;
}

}  // namespace

TEST_CASE("single free unknown and fully constrained systems") {
  SUBCASE("k u = f") {
    GlobalSystem sys = tiny_system({{4.0, 0.0}, {0.0, 1.0}}, {2.0, 0.0});
    sys.dirichlet = {{1, 0.0}};
    const SolveResult r = solve_static(sys);
    CHECK(r.displacements[0].x() == doctest::Approx(0.5));
    CHECK(r.displacements[0].y() == 0.0);
    CHECK(r.stats.free_dofs == 1);
  }
  SUBCASE("every DOF prescribed") {
    GlobalSystem sys = tiny_system({{4.0, 1.0}, {1.0, 3.0}}, {2.0, 5.0});
    sys.dirichlet = {{0, 0.25}, {1, -1.5}};
    const SolveResult r = solve_static(sys);
    CHECK(r.displacements[0].x() == 0.25);
    CHECK(r.displacements[0].y() == -1.5);
    CHECK(r.stats.free_dofs == 0);
  }
  SUBCASE("prescribed values are lifted into the load") {
    GlobalSystem sys = tiny_system({{4.0, 1.0}, {1.0, 3.0}}, {2.0, 0.0});
    sys.dirichlet = {{1, 2.0}};
    const SolveResult r = solve_static(sys);
    CHECK(r.displacements[0].x() == doctest::Approx((2.0 - 1.0 * 2.0) / 4.0));
    CHECK(r.displacements[0].y() == 2.0);
  }
}

TEST_CASE("singular reduced systems are reported as numeric errors") {
  GlobalSystem sys = tiny_system({{1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0});
  CHECK_THROWS_AS(solve_static(sys), NumericError);
  const ParentMesh mesh = build_structured_quad_mesh(1.0, 1.0, 2, 2, 1);
  NonlocalModel model;
  model.local = true;
  GlobalSystem free_body = assemble_operator(mesh, model, MaterialModel{}, {});
  free_body.F = Eigen::VectorXd::Ones(2 * mesh.num_nodes());
  CHECK_THROWS_AS(solve_static(free_body), NumericError);
  SolverOptions strict;
  strict.condition_limit = 2.0;
  GlobalSystem ok = tiny_system({{4.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0});
  CHECK_THROWS_AS(solve_static(ok, strict), NumericError);
}

TEST_CASE("local patch test reproduces affine fields exactly" * doctest::test_suite("properties")) {
  const Loads loads = affine_loads(0.01, 0.2, -0.1, -0.02, 0.05, 0.3);
  for (int order : {1, 2}) {
    ParentMesh mesh = build_structured_quad_mesh(1.0, 1.0, 5, 4, order);
    // Perturb interior nodes so the elements are no longer rectangles.
    for (int n = 0; n < mesh.num_nodes(); ++n) {
      Vec2& x = mesh.nodes[n];
      const bool interior = x.x() > 1e-9 && x.x() < 1 - 1e-9 && x.y() > 1e-9 && x.y() < 1 - 1e-9;
      if (interior && order == 1) x += Vec2(0.03 * std::sin(7.0 * n), 0.03 * std::cos(5.0 * n));
    }
    const SolveResult r = solve_local_reference(mesh, MaterialModel{}, loads);
    double err = 0.0;
    for (int n = 0; n < mesh.num_nodes(); ++n) err = std::max(err, (r.displacements[n] - loads.prescribed(mesh.nodes[n])).norm());
    CHECK(err < 1e-10);
  }
  const ParentMesh inc = build_inclusion_mesh(1.0, Vec2(0.5, 0.5), 0.15, 16, 2, 3, 1.5);
  const Loads ux = affine_loads(0, 1, 0, 0, 0, 0);
  const SolveResult r = solve_local_reference(inc, MaterialModel{}, ux);
  double err = 0.0;
  for (int n = 0; n < inc.num_nodes(); ++n) err = std::max(err, (r.displacements[n] - ux.prescribed(inc.nodes[n])).norm());
  CHECK(err < 1e-10);
}

TEST_CASE("solution is linear in the load and meets the residual contract") {
  const ParentMesh mesh = build_structured_quad_mesh(1.0, 1.0, 6, 6, 1);
  NonlocalModel model;
  model.kernel = KernelSpec::bi_exponential(0.01);
  model.horizon = HorizonSpec::rect(0.2);
  Loads loads;
  loads.body = [](const Vec2& x) { return Vec2(1.0 + x.y(), x.x()); };
  GlobalSystem sys = assemble(mesh, model, MaterialModel{}, loads, {});
  const SolveResult a = solve_static(sys);
  CHECK(a.residual_norm < 1e-8);
  sys.F *= 3.5;
  const SolveResult b = solve_static(sys);
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    CHECK((b.displacements[n] - 3.5 * a.displacements[n]).norm() <= 1e-10 * b.displacements[n].norm() + 1e-300);
  }
  SUBCASE("iterative path agrees with the direct one") {
    SolverOptions it;
    it.kind = SolverKind::BiCGSTAB;
    const SolveResult c = solve_static(sys, it);
    CHECK(c.stats.iterations > 0);
    CHECK(field_metrics(c, b, mesh.nodes).delta_percent < 1e-6);
  }
}

TEST_CASE("field metrics") {
  const std::vector<Vec2> nodes = {{0, 0}, {1, 0}, {0.5, 0.5}};
  SolveResult a;
  a.displacements = {{0.1, 0.0}, {-0.3, 0.2}, {0.2, 0.4}};
  CHECK(field_metrics(a, a, nodes).delta_percent == 0.0);
  SolveResult b = a;
  for (Vec2& u : b.displacements) u *= 2.0;
  const FieldMetrics m = field_metrics(a, b, nodes);
  CHECK(m.delta_percent == doctest::Approx(50.0));
  CHECK(m.max_ux == doctest::Approx(0.2));
  CHECK(m.max_ux_at == Vec2(0.5, 0.5));
  CHECK(m.max_abs_u == doctest::Approx(std::hypot(0.2, 0.4)));
  SolveResult c;
  c.displacements = {{0, 0}};
  CHECK_THROWS_AS(field_metrics(a, c, nodes), InvalidArgument);
}

TEST_CASE("restricting a quadratic field to the vertices of a linear mesh") {
  const ParentMesh q = build_structured_quad_mesh(1.0, 1.0, 3, 3, 2);
  const ParentMesh l = build_structured_quad_mesh(1.0, 1.0, 3, 3, 1);
  SolveResult f;
  for (const Vec2& x : q.nodes) f.displacements.emplace_back(x.x() * x.y(), -x.x());
  const SolveResult r = restrict_to_nodes(f, q.nodes, l.nodes);
  REQUIRE(r.displacements.size() == l.nodes.size());
  for (int n = 0; n < l.num_nodes(); ++n) {
    CHECK(r.displacements[n] == Vec2(l.nodes[n].x() * l.nodes[n].y(), -l.nodes[n].x()));
  }
  const ParentMesh other = build_structured_quad_mesh(1.0, 1.0, 5, 5, 1);
  CHECK_THROWS_AS(restrict_to_nodes(f, q.nodes, other.nodes), InvalidArgument);
}
