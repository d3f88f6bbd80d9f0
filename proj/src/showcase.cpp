#include "nlfem/showcase.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nlfem {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ShowcaseResult solve_setup(const ProblemSetup& setup, const SolverOptions& solver) {
  ShowcaseResult out;
  const GlobalSystem sys = assemble(setup.mesh, setup.model, setup.material, setup.loads, setup.assembly);
  out.stats = sys.stats;
  out.result = solve_static(sys, solver);
  out.peaks = field_peaks(out.result, setup.mesh.nodes);
  if (setup.with_local) {
    out.local = solve_local_reference(setup.mesh, setup.material, setup.loads, setup.assembly, solver);
    out.local_peaks = field_peaks(*out.local, setup.mesh.nodes);
  }
  out.mesh = setup.mesh;
  return out;
}

void AnnulusConfig::validate() const {
  material.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("annulus alpha must lie in (0, 1]");
  if (!(horizon > 0.0)) throw InvalidArgument("annulus horizon must be positive");
  if (!(r_in > 0.0 && r_out > r_in)) throw InvalidArgument("annulus radii must satisfy 0 < r_in < r_out");
  if (n_radial < 1 || n_angular < 8) throw InvalidArgument("annulus mesh needs n_radial >= 1 and n_angular >= 8");
  if (!(relative_resolution > 0.0)) throw InvalidArgument("relative resolution must be positive");
}

ProblemSetup annulus_setup(const AnnulusConfig& cfg, const AssemblyOptions& assembly) {
  cfg.validate();
  ProblemSetup s;
  if (cfg.alpha >= 1.0) {
    s.model.local = true;
  } else {
    s.model.kernel = KernelSpec::bidirectional(cfg.alpha);
    s.model.horizon = HorizonSpec::segments(cfg.horizon);
  }
  const double t = cfg.traction;
  s.loads.traction = [t](const Vec2&, const Vec2& n) { return Vec2(t * n); };
  s.assembly = assembly;
  if (s.assembly.child_size <= 0.0) s.assembly.relative_resolution = cfg.relative_resolution;
  s.mesh = build_annulus_mesh(cfg.r_in, cfg.r_out, cfg.n_radial, cfg.n_angular);
  s.with_local = !s.model.local;
  s.material = cfg.material;
  return s;
}

ShowcaseResult run_annulus(const AnnulusConfig& cfg, const ShowcaseRunOptions& opts) {
  return solve_setup(annulus_setup(cfg, opts.assembly), opts.solver);
}

void PlaneStrainConfig::validate() const {
  material.validate();
  KernelSpec::radial_exponential(tau1, tau2).validate();
  if (!(horizon > 0.0)) throw InvalidArgument("plane-strain horizon must be positive");
  if (parent_elements < 1) throw InvalidArgument("plane-strain mesh needs at least one element per side");
  if (!(relative_resolution > 0.0)) throw InvalidArgument("relative resolution must be positive");
  if (!(radial_grading >= 1.0)) throw InvalidArgument("radial grading must be >= 1");
}

ProblemSetup plane_strain_setup(const PlaneStrainConfig& cfg, const AssemblyOptions& assembly) {
  cfg.validate();
  ProblemSetup s;
  s.model.kernel = KernelSpec::radial_exponential(cfg.tau1, cfg.tau2);
  s.model.horizon = HorizonSpec::circle(cfg.horizon);
  const Vec2 f = cfg.body_force;
  s.loads.body = [f](const Vec2&) { return f; };
  s.assembly = assembly;
  if (s.assembly.child_size <= 0.0) s.assembly.relative_resolution = cfg.relative_resolution;
  s.assembly.child_mesh.radial_grading = cfg.radial_grading;
  s.mesh = build_structured_quad_mesh(1.0, 1.0, cfg.parent_elements, cfg.parent_elements, 1);
  s.with_local = true;
  s.material = cfg.material;
  return s;
}

ShowcaseResult run_plane_strain(const PlaneStrainConfig& cfg, const ShowcaseRunOptions& opts) {
  return solve_setup(plane_strain_setup(cfg, opts.assembly), opts.solver);
}

double radial_exponential_mass(double tau1, double tau2, double l) {
  // 2 pi / tau1 * int_0^l r exp(-r / tau2) dr
  const double s = l / tau2;
  return 2.0 * M_PI * tau2 * tau2 / tau1 * (1.0 - std::exp(-s) * (1.0 + s));
}

void InclusionConfig::validate() const {
  material.validate();
  KernelSpec::rational(tau1, tau2).validate();
  if (!(radius > 0.0)) throw InvalidArgument("inclusion radius must be positive");
  if (center.x() - radius <= 0.0 || center.x() + radius >= 1.0 || center.y() - radius <= 0.0 ||
      center.y() + radius >= 1.0) {
    throw InvalidArgument("inclusion must lie strictly inside the unit square");
  }
  if (n_angular < 8 || n_angular % 8 != 0) throw InvalidArgument("inclusion n_angular must be a multiple of 8");
  if (n_disc < 1 || n_matrix < 1) throw InvalidArgument("inclusion mesh needs at least one ring per region");
  if (!(grading >= 1.0)) throw InvalidArgument("inclusion grading must be >= 1");
}

ProblemSetup inclusion_setup(const InclusionConfig& cfg, const AssemblyOptions& assembly) {
  cfg.validate();
  ProblemSetup s;
  if (cfg.nonlocal) {
    s.model.kernel = KernelSpec::rational(cfg.tau1, cfg.tau2);
    s.model.horizon = HorizonSpec::full_region(1);
    s.model.nonlocal_region = 1;
  } else {
    s.model.local = true;
  }
  s.loads.prescribed = [](const Vec2& x) { return Vec2(x.x(), 0.0); };
  s.assembly = assembly;
  s.mesh = build_inclusion_mesh(1.0, cfg.center, cfg.radius, cfg.n_angular, cfg.n_disc, cfg.n_matrix, cfg.grading);
  s.with_local = cfg.nonlocal;
  s.material = cfg.material;
  return s;
}

ShowcaseResult run_inclusion(const InclusionConfig& cfg, const ShowcaseRunOptions& opts) {
  return solve_setup(inclusion_setup(cfg, opts.assembly), opts.solver);
}

std::vector<EdgeJump> gradient_jumps(const ParentMesh& mesh, const SolveResult& field) {
  const int ne = mesh.num_elements();
  std::vector<Vec2> grad(ne);
  for (int e = 0; e < ne; ++e) {
    const Element& el = mesh.elements[e];
    const Vec2 xi = is_quad(el.shape) ? Vec2(0.0, 0.0) : Vec2(1.0 / 3.0, 1.0 / 3.0);
    const ParentPointEval pe = eval_parent_point(mesh, e, xi);
    Vec2 g = Vec2::Zero();
    for (int a = 0; a < pe.shape.n; ++a) g += field.displacements[el.nodes[a]].x() * pe.grad[a];
    grad[e] = g;
  }
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (int e = 0; e < ne; ++e) {
    const Element& el = mesh.elements[e];
    const int nc = corner_count(el.shape);
    for (int k = 0; k < nc; ++k) {
      int a = el.nodes[k], b = el.nodes[(k + 1) % nc];
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back(e);
    }
  }
  std::vector<EdgeJump> out;
  for (const auto& [key, els] : edges) {
    if (els.size() != 2) continue;
    EdgeJump j;
    j.midpoint = 0.5 * (mesh.nodes[key.first] + mesh.nodes[key.second]);
    j.jump = (grad[els[0]] - grad[els[1]]).norm();
    j.interface = mesh.elements[els[0]].region != mesh.elements[els[1]].region;
    out.push_back(j);
  }
  return out;
}

WeakDiscontinuityReport detect_weak_discontinuity(const ParentMesh& mesh, const SolveResult& field,
                                                  const Vec2& center, double far_radius, double factor) {
  const std::vector<EdgeJump> jumps = gradient_jumps(mesh, field);
  std::vector<double> iface, background;
  WeakDiscontinuityReport rep;
  for (const EdgeJump& j : jumps) {
    (j.interface ? iface : background).push_back(j.jump);
  }
  if (iface.empty()) throw InvalidArgument("mesh has no interface between regions");
  if (background.empty()) throw InvalidArgument("mesh has no interior edges away from the interface");
  rep.interface_jump = median(iface);
  rep.background_jump = median(background);
  const double threshold = factor * rep.background_jump;
  for (const EdgeJump& j : jumps) {
    if ((j.midpoint - center).norm() > far_radius) rep.far_field_max_jump = std::max(rep.far_field_max_jump, j.jump);
  }
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2& x = mesh.nodes[n];
    if ((x - center).norm() > far_radius) {
      rep.far_field_max_deviation =
          std::max(rep.far_field_max_deviation, std::abs(field.displacements[n].x() - x.x()));
    }
  }
  rep.fires_at_interface = rep.interface_jump > threshold;
  rep.fires_in_far_field = rep.far_field_max_jump > threshold;
  return rep;
}

double predicted_evaluations(int gp, int gc, double r, double l_over_L, int m) {
  const double md = m;
  return static_cast<double>(gp) * gc * r * r * l_over_L * l_over_L * md * md * md * md;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("log-log fit needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) throw InvalidArgument("log-log fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

const ComplexityRow* ComplexityReport::find(int m, double r) const {
  for (const ComplexityRow& row : rows) {
    if (row.parent_elements == m && std::abs(row.relative_resolution - r) < 1e-12) return &row;
  }
  return nullptr;
}

ComplexityReport run_complexity(const ComplexityConfig& cfg) {
  if (cfg.repeats < 1) throw InvalidArgument("complexity study needs at least one repeat");
  ComplexityReport rep;
  rep.workers = std::max(1, cfg.workers);
  auto timed = [&](int m, double r) {
    if (rep.find(m, r)) return;
    const CaseStudy cs = CaseStudy::bi_exponential(cfg.tau, cfg.horizon, m, r);
    CaseRunOptions o;
    o.assembly.workers = rep.workers;
    std::vector<double> t, ts;
    CaseRun run;
    for (int k = 0; k < cfg.repeats; ++k) {
      run = run_case(cs, o);
      t.push_back(run.report.assembly_seconds);
      ts.push_back(run.report.solve_seconds);
    }
    ComplexityRow row;
    row.parent_elements = m;
    row.relative_resolution = r;
    row.seconds = median(t);
    row.solve_seconds = median(ts);
    row.error_percent = run.report.error_percent;
    row.child_points = run.report.child_points;
    const NonlocalModel model{cs.kernel(), cs.horizon_spec()};
    const AssemblyOptions ro = resolved_options(run.mesh, model, o.assembly);
    const int gp = ro.parent_quad_n * ro.parent_quad_n;
    const int gc = ro.child_rule.legendre_n * ro.child_rule.legendre_n;
    row.predicted_sum = predicted_evaluations(gp, gc, r, cfg.horizon / cs.L, m);
    rep.rows.push_back(row);
  };
  std::vector<double> xm, ym, xr, yr;
  for (int m : cfg.parent_elements) {
    timed(m, cfg.fixed_resolution);
    xm.push_back(m);
    ym.push_back(rep.find(m, cfg.fixed_resolution)->seconds);
  }
  for (double r : cfg.resolutions) {
    timed(cfg.fixed_parent_elements, r);
    xr.push_back(r);
    yr.push_back(rep.find(cfg.fixed_parent_elements, r)->seconds);
  }
  for (const auto& [m, r] : cfg.extra_runs) timed(m, r);
  if (xm.size() >= 2) rep.exponent_m = loglog_slope(xm, ym);
  if (xr.size() >= 2) rep.exponent_r = loglog_slope(xr, yr);
  return rep;
}

}  // namespace nlfem
