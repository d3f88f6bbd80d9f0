#include "nlfem/showcase.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace nlfem;

TEST_CASE("annulus at unit order is the classical local problem") {
  AnnulusConfig cfg;
  cfg.alpha = 1.0;
  const ShowcaseResult r = run_annulus(cfg);
  const ProblemSetup s = annulus_setup(cfg);
  const SolveResult loc = solve_local_reference(s.mesh, s.material, s.loads, s.assembly);
  double err = 0.0, peak = 0.0;
  for (int n = 0; n < r.mesh.num_nodes(); ++n) {
    err = std::max(err, (r.result.displacements[n] - loc.displacements[n]).norm());
    peak = std::max(peak, loc.displacements[n].norm());
  }
  CHECK(err <= 1e-8 * peak);
  // The inner ring is clamped.
  for (int n = 0; n < r.mesh.num_nodes(); ++n) {
    if (std::abs(r.mesh.nodes[n].norm() - cfg.r_in) < 1e-9) CHECK(r.result.displacements[n].norm() == 0.0);
  }
  CHECK_THROWS_AS(run_annulus(AnnulusConfig{.alpha = 1.5}), InvalidArgument);
}

TEST_CASE("annulus peak displacement falls as the fractional order rises") {
  double prev = 1e300;
  for (double alpha : {0.4, 0.6, 0.8, 1.0}) {
    AnnulusConfig cfg;
    cfg.alpha = alpha;
    const ShowcaseResult r = run_annulus(cfg);
    MESSAGE("alpha " << alpha << " max|u| " << r.peaks.max_abs_u);
    CHECK(r.peaks.max_abs_u < prev);
    prev = r.peaks.max_abs_u;
    for (int n = 0; n < r.mesh.num_nodes(); ++n) {
      if (std::abs(r.mesh.nodes[n].norm() - cfg.r_in) < 1e-9) CHECK(r.result.displacements[n].norm() == 0.0);
    }
  }
}

TEST_CASE("bidirectional stress is the mean of its two single-leg operators") {
  AnnulusConfig cfg;
  cfg.alpha = 0.6;
  const ProblemSetup s = annulus_setup(cfg);
  const SpatialIndex index(s.mesh);
  const AssemblyOptions opts = resolved_options(s.mesh, s.model, s.assembly);
  const double h = child_size_for(s.mesh, opts);
  Eigen::VectorXd u(2 * s.mesh.num_nodes());
  for (int i = 0; i < u.size(); ++i) u(i) = std::sin(1.7 * i);
  auto stress = [&](const Vec2& x, const std::vector<ChildPoint>& pts) {
    const StressOperator op = nonlocal_stress_operator(s.mesh, index, x, pts, s.model.kernel, s.material);
    Eigen::VectorXd loc(op.E.cols());
    for (std::size_t k = 0; k < op.nodes.size(); ++k) loc.segment(2 * k, 2) = u.segment(2 * op.nodes[k], 2);
    return Eigen::Vector3d(op.E * loc);
  };
  for (int e : {0, 17, 100}) {
    const Vec2 x = forward_map(s.mesh, e, Vec2(0.3, -0.2));
    const auto pts = horizon_points(s.mesh, s.model, x, h, opts);
    std::vector<ChildPoint> xs, ys;
    for (const ChildPoint& p : pts) (p.x.y() == x.y() ? xs : ys).push_back(p);
    REQUIRE(!xs.empty());
    REQUIRE(!ys.empty());
    // A single-leg operator carries the full leg weight, twice the halved share.
    const Eigen::Vector3d full = stress(x, pts);
    const Eigen::Vector3d mean = 0.5 * (2.0 * stress(x, xs) + 2.0 * stress(x, ys));
    CHECK((full - mean).norm() <= 1e-12 * full.norm());
  }
}

TEST_CASE("radial exponential kernel mass by child quadrature") {
  const double tau1 = 1.0 / 1000, tau2 = 1.0 / 100, l = 0.2;
  CHECK(radial_exponential_mass(tau1, tau2, l) == doctest::Approx(oracle::radial_exponential_disc_mass(tau1, tau2, l)).epsilon(1e-14));
  const double polar = oracle::simpson([&](double r) { return 2.0 * M_PI * r * std::exp(-r / tau2) / tau1; }, 0.0, l, 20000);
  CHECK(radial_exponential_mass(tau1, tau2, l) == doctest::Approx(polar).epsilon(1e-9));
  // The kernel decays over tau2 = 0.01, so the child grid must resolve that
  // scale; the showcase default (size 1/16, two points) is only good to a few percent.
  const PlaneStrainConfig cfg;
  AssemblyOptions fine;
  fine.child_size = l / 10;
  fine.child_rule.legendre_n = 4;
  const ProblemSetup s = plane_strain_setup(cfg, fine);
  const AssemblyOptions opts = resolved_options(s.mesh, s.model, s.assembly);
  for (const Vec2& x : {Vec2(0.5, 0.5), Vec2(0.4, 0.63)}) {
    const auto pts = horizon_points(s.mesh, s.model, x, child_size_for(s.mesh, opts), opts);
    double mass = 0.0;
    for (const ChildPoint& p : pts) mass += child_kernel_weight(s.model.kernel, x, p);
    MESSAGE("child kernel mass relative error " << std::abs(mass / radial_exponential_mass(tau1, tau2, l) - 1.0));
    CHECK(mass == doctest::Approx(radial_exponential_mass(tau1, tau2, l)).epsilon(1e-6));
  }
}

TEST_CASE("plane strain softens or stiffens with the kernel scale") {
  ShowcaseRunOptions coarse, fine;
  fine.assembly.child_rule.legendre_n = 4;
  for (const ShowcaseRunOptions& opts : {coarse, fine}) {
    PlaneStrainConfig soft;
    const ShowcaseResult a = run_plane_strain(soft, opts);
    REQUIRE(a.local_peaks);
    MESSAGE("soft " << a.peaks.max_ux << " local " << a.local_peaks->max_ux);
    CHECK(a.peaks.max_ux > a.local_peaks->max_ux);
    PlaneStrainConfig stiff;
    stiff.tau1 = 1.0 / 3000;
    const ShowcaseResult b = run_plane_strain(stiff, opts);
    MESSAGE("stiff " << b.peaks.max_ux << " local " << b.local_peaks->max_ux);
    CHECK(b.peaks.max_ux < b.local_peaks->max_ux);
  }
}

TEST_CASE("inclusion without a nonlocal region is an affine patch") {
  InclusionConfig cfg;
  cfg.nonlocal = false;
  const ShowcaseResult r = run_inclusion(cfg);
  for (int n = 0; n < r.mesh.num_nodes(); ++n) {
    CHECK(std::abs(r.result.displacements[n].x() - r.mesh.nodes[n].x()) < 1e-10);
    CHECK(std::abs(r.result.displacements[n].y()) < 1e-10);
  }
  const WeakDiscontinuityReport d = detect_weak_discontinuity(r.mesh, r.result, cfg.center, 3.0 * cfg.radius);
  CHECK(!d.fires_at_interface);
}

TEST_CASE("nonlocal inclusion shows a weak discontinuity at its rim") {
  const InclusionConfig cfg;
  const ShowcaseResult r = run_inclusion(cfg);
  const WeakDiscontinuityReport d = detect_weak_discontinuity(r.mesh, r.result, cfg.center, 3.0 * cfg.radius);
  MESSAGE("interface " << d.interface_jump << " background " << d.background_jump << " far max "
                       << d.far_field_max_jump << " far deviation " << d.far_field_max_deviation);
  CHECK(d.fires_at_interface);
  CHECK(!d.fires_in_far_field);
  CHECK(d.interface_jump > 5.0 * d.background_jump);
}

TEST_CASE("inclusion far field is within one percent of the applied field" * doctest::may_fail()) {
  const InclusionConfig cfg;
  const ShowcaseResult r = run_inclusion(cfg);
  const WeakDiscontinuityReport d = detect_weak_discontinuity(r.mesh, r.result, cfg.center, 3.0 * cfg.radius);
  // Relative to the largest applied displacement, u_x = 1.
  CHECK(d.far_field_max_deviation < 0.01);
}

TEST_CASE("complexity bookkeeping") {
  CHECK(predicted_evaluations(4, 4, 1.0, 0.2, 10) == doctest::Approx(6400.0));
  CHECK(predicted_evaluations(4, 4, 2.0, 0.2, 10) == doctest::Approx(4 * 6400.0));
  CHECK(predicted_evaluations(4, 4, 1.0, 0.2, 20) == doctest::Approx(16 * 6400.0));
  const std::vector<double> x = {2, 3, 5, 7};
  std::vector<double> y;
  for (double v : x) y.push_back(1.5 * std::pow(v, 3.2));
  CHECK(loglog_slope(x, y) == doctest::Approx(3.2));

  ComplexityConfig cfg;
  cfg.parent_elements = {4, 6};
  cfg.resolutions = {1.0, 2.0};
  cfg.fixed_parent_elements = 4;
  cfg.repeats = 1;
  cfg.extra_runs = {{6, 2.0}};
  const ComplexityReport rep = run_complexity(cfg);
  REQUIRE(rep.find(4, 2.0));
  REQUIRE(rep.find(6, 2.0));
  CHECK(rep.find(4, 1.0) != nullptr);
  CHECK(rep.find(9, 1.0) == nullptr);
  for (const ComplexityRow& row : rep.rows) {
    CHECK(row.seconds > 0.0);
    CHECK(row.child_points > 0);
    CHECK(row.predicted_sum ==
          doctest::Approx(predicted_evaluations(4, 4, row.relative_resolution, cfg.horizon, row.parent_elements)));
  }
  CHECK(rep.find(6, 2.0)->child_points > rep.find(4, 2.0)->child_points);
}
