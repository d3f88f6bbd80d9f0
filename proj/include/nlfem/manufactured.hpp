#pragma once

#include "nlfem/adaptive.hpp"
#include "nlfem/assembly.hpp"
#include "nlfem/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlfem {

/// Assumed field u = (a(x) a(y), 0) with a(t) = t (L - t), vanishing on the boundary of [0, L]^2.
Vec2 reference_displacement(double x, double y, double L = 1.0);
/// Rows are components, columns are d/dx and d/dy.
Mat2 reference_gradient(double x, double y, double L = 1.0);
/// Peak of the reference u_x, reached at the square centre.
inline double reference_peak(double L = 1.0) { return L * L * L * L / 16.0; }

enum class CaseKind { BiExponential, PowerLaw };

struct CaseStudy {
  CaseKind id = CaseKind::BiExponential;
  double parameter = 0.002;  // tau for the bi-exponential kernel, alpha for the power law
  double horizon = 0.2;      // half-width of the square horizon
  double L = 1.0;
  int parent_elements = 16;  // per side
  double relative_resolution = 1.0;
  int order = 1;
  MaterialModel material;

  static CaseStudy bi_exponential(double tau, double horizon, int m, double r = 1.0, int order = 1);
  static CaseStudy power_law(double alpha, double horizon, int m, double r = 1.0, int order = 1);

  KernelSpec kernel() const;
  HorizonSpec horizon_spec() const { return HorizonSpec::rect(horizon); }
  void validate() const;
  std::string describe() const;
};

/// Body load that makes the reference field an equilibrium state of the
/// nonlocal model. The convolved strain is integrated adaptively over the
/// truncated horizon and differentiated by Richardson-extrapolated central
/// differences.
class BodyLoadOracle {
 public:
  explicit BodyLoadOracle(const CaseStudy& cs, double step = -1.0, AdaptiveOptions opts = {});

  Vec2 operator()(const Vec2& x) const;

  /// Convolved factors over the clamped 1D horizon: first the field a, then a'.
  double convolved_a(double t) const;
  double convolved_da(double t) const;
  /// Nonlocal stress (sxx, syy, sxy) of the reference field.
  Eigen::Vector3d stress(const Vec2& x) const;
  /// Kernel mass over the truncated horizon of x.
  double kernel_mass(const Vec2& x) const;
  double step() const { return step_; }

 private:
  double convolve(double t, int which) const;
  double derivative(double t, int which) const;

  CaseStudy cs_;
  double step_;
  AdaptiveOptions opts_;
};

struct ErrorReport {
  int parent_elements = 0;
  double relative_resolution = 1.0;
  int order = 1;
  double child_size = 0.0;
  double peak_ux = 0.0;        // max nodal u_x
  double error_percent = 0.0;  // |peak - reference| / reference
  std::optional<double> delta_percent;
  int dofs = 0;
  long long child_points = 0;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct CaseRun {
  ParentMesh mesh;
  SolveResult result;
  ErrorReport report;
};

struct CaseRunOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
};

/// Solve the manufactured problem for one case.
CaseRun run_case(const CaseStudy& cs, const CaseRunOptions& opts = {});

enum class RefinementKind { ChildH, ParentP };

/// A refinement sequence: child resolutions N (child size = horizon / N) for
/// ChildH, or element orders for ParentP. Each row after the first carries
/// the change from its predecessor, measured at the nodes of the coarser
/// order for ParentP.
struct RefinementRow {
  int level = 0;
  ErrorReport report;
  bool converged = false;  // delta below the threshold
};
std::vector<RefinementRow> refinement_sweep(const CaseStudy& cs, RefinementKind kind, const std::vector<int>& levels,
                                            const CaseRunOptions& opts = {}, double threshold_percent = 2.0);

}  // namespace nlfem
