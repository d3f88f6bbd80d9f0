#include "nlfem/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlfem {

namespace {

double field_a(double t, double L) { return t * (L - t); }
double field_da(double t, double L) { return L - 2.0 * t; }

}  // namespace

Vec2 reference_displacement(double x, double y, double L) { return {field_a(x, L) * field_a(y, L), 0.0}; }

Mat2 reference_gradient(double x, double y, double L) {
  Mat2 g = Mat2::Zero();
  g(0, 0) = field_da(x, L) * field_a(y, L);
  g(0, 1) = field_a(x, L) * field_da(y, L);
  return g;
}

CaseStudy CaseStudy::bi_exponential(double tau, double horizon, int m, double r, int order) {
  CaseStudy cs;
  cs.id = CaseKind::BiExponential;
  cs.parameter = tau;
  cs.horizon = horizon;
  cs.parent_elements = m;
  cs.relative_resolution = r;
  cs.order = order;
  return cs;
}

CaseStudy CaseStudy::power_law(double alpha, double horizon, int m, double r, int order) {
  CaseStudy cs = bi_exponential(alpha, horizon, m, r, order);
  cs.id = CaseKind::PowerLaw;
  return cs;
}

KernelSpec CaseStudy::kernel() const {
  return id == CaseKind::BiExponential ? KernelSpec::bi_exponential(parameter) : KernelSpec::power_law(parameter);
}

void CaseStudy::validate() const {
  kernel().validate();
  if (!(horizon > 0.0)) throw InvalidArgument("case horizon must be > 0");
  if (!(L > 0.0)) throw InvalidArgument("case side length must be > 0");
  if (parent_elements < 1) throw InvalidArgument("case needs at least one parent element per side");
  if (!(relative_resolution > 0.0)) throw InvalidArgument("relative resolution must be > 0");
  if (order != 1 && order != 2) throw InvalidArgument("element order must be 1 or 2");
  material.validate();
}

std::string CaseStudy::describe() const {
  std::ostringstream s;
  s << kernel().describe() << " l=" << horizon << " M=" << parent_elements << " r=" << relative_resolution
    << " order=" << order;
  return s.str();
}

BodyLoadOracle::BodyLoadOracle(const CaseStudy& cs, double step, AdaptiveOptions opts)
    : cs_(cs), step_(step > 0.0 ? step : 1e-5 * cs.L), opts_(opts) {
  cs_.validate();
}

// 1D factor of the separable kernel integrated against a or a' over the
// clamped window [t - l, t + l] intersected with [0, L].
double BodyLoadOracle::convolve(double t, int which) const {
  const double L = cs_.L;
  const double lo = std::max(0.0, t - cs_.horizon), hi = std::min(L, t + cs_.horizon);
  auto g = [&](double s) { return which == 0 ? field_a(s, L) : which == 1 ? field_da(s, L) : 1.0; };
  const double p = cs_.parameter;
  if (cs_.id == CaseKind::BiExponential) {
    const double norm = 1.0 / std::sqrt(std::numbers::pi * p);
    auto f = [&](double s) { return norm * std::exp(-(s - t) * (s - t) / p) * g(s); };
    // Split at the peak so both pieces see it at an endpoint.
    return integrate_adaptive(f, lo, std::max(lo, std::min(hi, t)), opts_) +
           integrate_adaptive(f, std::min(hi, std::max(lo, t)), hi, opts_);
  }
  const double c = 1.0 / std::tgamma(1.0 - p);
  double sum = 0.0;
  if (hi > t) sum += integrate_endpoint_singular(g, t, hi, p, opts_);
  if (lo < t) sum -= integrate_endpoint_singular(g, t, lo, p, opts_);
  return c * sum;
}

double BodyLoadOracle::convolved_a(double t) const { return convolve(t, 0); }
double BodyLoadOracle::convolved_da(double t) const { return convolve(t, 1); }

double BodyLoadOracle::derivative(double t, int which) const {
  auto central = [&](double h) { return (convolve(t + h, which) - convolve(t - h, which)) / (2.0 * h); };
  const double h = step_;
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

Eigen::Vector3d BodyLoadOracle::stress(const Vec2& x) const {
  // Convolved strain: exx = A1(x) A0(y), exy = 1/2 A0(x) A1(y), eyy = 0.
  const double sxx = convolve(x.x(), 1) * convolve(x.y(), 0);
  const double sxy = 0.5 * convolve(x.x(), 0) * convolve(x.y(), 1);
  const Mat3 C = cs_.material.voigt();
  return C * Eigen::Vector3d(sxx, 0.0, sxy);
}

double BodyLoadOracle::kernel_mass(const Vec2& x) const { return convolve(x.x(), 2) * convolve(x.y(), 2); }

Vec2 BodyLoadOracle::operator()(const Vec2& x) const {
  const double mu = cs_.material.mu, lambda = cs_.material.lambda, rho = cs_.material.rho;
  const double a0x = convolve(x.x(), 0), a0y = convolve(x.y(), 0);
  const double a1x = convolve(x.x(), 1), a1y = convolve(x.y(), 1);
  const double d0x = derivative(x.x(), 0), d0y = derivative(x.y(), 0);
  const double d1x = derivative(x.x(), 1), d1y = derivative(x.y(), 1);
  // f = -div(sigma) / rho with sigma = C (A1(x)A0(y), 0, 1/2 A0(x)A1(y)).
  const double fx = -((2.0 * mu + lambda) * d1x * a0y + mu * a0x * d1y);
  const double fy = -(mu * d0x * a1y + lambda * a1x * d0y);
  return Vec2(fx, fy) / rho;
}

CaseRun run_case(const CaseStudy& cs, const CaseRunOptions& opts) {
  cs.validate();
  CaseRun run;
  run.mesh = build_structured_quad_mesh(cs.L, cs.L, cs.parent_elements, cs.parent_elements, cs.order);
  NonlocalModel model;
  model.kernel = cs.kernel();
  model.horizon = cs.horizon_spec();
  AssemblyOptions aopt = opts.assembly;
  if (aopt.child_size <= 0.0) aopt.relative_resolution = cs.relative_resolution;
  const BodyLoadOracle oracle(cs);
  Loads loads;
  loads.body = [&oracle](const Vec2& x) { return oracle(x); };
  const GlobalSystem sys = assemble(run.mesh, model, cs.material, loads, aopt);
  run.result = solve_static(sys, opts.solver);
  const FieldMetrics peaks = field_peaks(run.result, run.mesh.nodes);
  ErrorReport& rep = run.report;
  rep.parent_elements = cs.parent_elements;
  rep.relative_resolution = aopt.relative_resolution;
  rep.order = cs.order;
  rep.child_size = sys.stats.child_size;
  rep.peak_ux = peaks.max_ux;
  rep.error_percent = 100.0 * std::abs(peaks.max_ux - reference_peak(cs.L)) / reference_peak(cs.L);
  rep.dofs = 2 * run.mesh.num_nodes();
  rep.child_points = sys.stats.child_points;
  rep.assembly_seconds = sys.stats.seconds;
  rep.solve_seconds = run.result.stats.seconds;
  return run;
}

std::vector<RefinementRow> refinement_sweep(const CaseStudy& cs, RefinementKind kind, const std::vector<int>& levels,
                                            const CaseRunOptions& opts, double threshold_percent) {
  if (levels.empty()) throw InvalidArgument("refinement sweep needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw InvalidArgument("refinement levels must increase");
  }
  std::vector<RefinementRow> rows;
  CaseRun prev;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CaseStudy c = cs;
    CaseRunOptions o = opts;
    if (kind == RefinementKind::ChildH) {
      o.assembly.child_size = cs.horizon / levels[i];
    } else {
      c.order = levels[i];
    }
    CaseRun run = run_case(c, o);
    RefinementRow row;
    row.level = levels[i];
    row.report = run.report;
    if (i > 0) {
      // Compare on the coarser layout; for ParentP that is the previous run's vertex set.
      const SolveResult cur = kind == RefinementKind::ParentP
                                  ? restrict_to_nodes(run.result, run.mesh.nodes, prev.mesh.nodes)
                                  : run.result;
      const double d = field_metrics(prev.result, cur, prev.mesh.nodes).delta_percent;
      row.report.delta_percent = d;
      row.converged = d < threshold_percent;
    }
    rows.push_back(row);
    prev = std::move(run);
  }
  return rows;
}

}  // namespace nlfem
