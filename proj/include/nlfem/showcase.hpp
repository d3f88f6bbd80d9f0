#pragma once

#include "nlfem/assembly.hpp"
#include "nlfem/manufactured.hpp"
#include "nlfem/solver.hpp"

#include <string>
#include <vector>

namespace nlfem {

/// Solved showcase: the mesh, the field, and (where meaningful) the local reference.
struct ShowcaseResult {
  ParentMesh mesh;
  SolveResult result;
  std::optional<SolveResult> local;
  FieldMetrics peaks;
  std::optional<FieldMetrics> local_peaks;
  AssemblyStats stats;
};

struct ShowcaseRunOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
};

/// Everything needed to assemble one showcase, before any compute.
struct ProblemSetup {
  ParentMesh mesh;
  NonlocalModel model;
  Loads loads;
  AssemblyOptions assembly;
  bool with_local = false;  // also solve the classical local problem for comparison
  MaterialModel material;
};
ShowcaseResult solve_setup(const ProblemSetup& setup, const SolverOptions& solver = {});

/// Annulus under outward normal traction on the outer ring, inner ring clamped.
/// The horizon is a pair of axis-parallel legs clipped at the first boundary crossing.
struct AnnulusConfig {
  double alpha = 0.6;  // 1 selects classical local elasticity
  double horizon = 0.2;
  double r_in = 0.3;
  double r_out = 0.5;
  double traction = 0.1;
  int n_radial = 6;
  int n_angular = 48;
  double relative_resolution = 1.0;
  MaterialModel material;

  void validate() const;
};
ProblemSetup annulus_setup(const AnnulusConfig& cfg, const AssemblyOptions& assembly = {});
ShowcaseResult run_annulus(const AnnulusConfig& cfg, const ShowcaseRunOptions& opts = {});

/// Clamped unit square under a uniform body force with a circular horizon and
/// the radially decaying exponential kernel.
struct PlaneStrainConfig {
  double tau1 = 1.0 / 1000.0;
  double tau2 = 1.0 / 100.0;
  double horizon = 0.2;
  int parent_elements = 16;
  double relative_resolution = 1.0;
  double radial_grading = 3.0;  // rings packed toward the horizon centre where the kernel peaks
  Vec2 body_force = Vec2(1.0, 0.0);
  MaterialModel material;

  void validate() const;
};
ProblemSetup plane_strain_setup(const PlaneStrainConfig& cfg, const AssemblyOptions& assembly = {});
ShowcaseResult run_plane_strain(const PlaneStrainConfig& cfg, const ShowcaseRunOptions& opts = {});

/// Closed-form kernel mass of the radial exponential kernel over a full disc of radius l.
double radial_exponential_mass(double tau1, double tau2, double l);

/// Local unit-square matrix with a nonlocal disc inclusion and affine Dirichlet data u = (x, 0).
struct InclusionConfig {
  double tau1 = 100.0;
  double tau2 = 5000.0;
  double radius = 0.15;
  Vec2 center = Vec2(0.5, 0.5);
  int n_angular = 48;
  int n_disc = 6;
  int n_matrix = 10;
  double grading = 1.5;
  bool nonlocal = true;  // false runs the whole square locally
  MaterialModel material;

  void validate() const;
};
ProblemSetup inclusion_setup(const InclusionConfig& cfg, const AssemblyOptions& assembly = {});
ShowcaseResult run_inclusion(const InclusionConfig& cfg, const ShowcaseRunOptions& opts = {});

/// Jump of grad(u_x) across interior element edges, from element-centroid gradients.
struct EdgeJump {
  Vec2 midpoint;
  double jump = 0.0;
  bool interface = false;  // the two elements belong to different regions
};
std::vector<EdgeJump> gradient_jumps(const ParentMesh& mesh, const SolveResult& field);

struct WeakDiscontinuityReport {
  double interface_jump = 0.0;    // median jump over interface edges
  double background_jump = 0.0;   // median jump over all other interior edges
  double far_field_max_jump = 0.0;
  double far_field_max_deviation = 0.0;  // max |u_x - x| over far-field nodes
  bool fires_at_interface = false;
  bool fires_in_far_field = false;
};
/// Detector: an edge fires when its jump exceeds `factor` times the background
/// median. Far field means farther than `far_radius` from `center`.
WeakDiscontinuityReport detect_weak_discontinuity(const ParentMesh& mesh, const SolveResult& field,
                                                  const Vec2& center, double far_radius, double factor = 5.0);

/// Timing study over parent mesh number and relative resolution.
struct ComplexityConfig {
  std::vector<int> parent_elements = {8, 12, 16, 20};
  double fixed_resolution = 2.0;
  std::vector<double> resolutions = {1.0, 2.0, 3.0};
  int fixed_parent_elements = 20;
  int repeats = 3;
  int workers = 1;
  double tau = 0.002;
  double horizon = 0.2;
  /// (M, r) pairs timed in addition to the two sweeps.
  std::vector<std::pair<int, double>> extra_runs = {{10, 2.0}, {15, 1.0}, {10, 3.0}, {25, 1.0}};
};

struct ComplexityRow {
  int parent_elements = 0;
  double relative_resolution = 1.0;
  double seconds = 0.0;  // median operator-assembly wall time
  double solve_seconds = 0.0;
  double error_percent = 0.0;
  long long child_points = 0;
  double predicted_sum = 0.0;
};

struct ComplexityReport {
  std::vector<ComplexityRow> rows;
  double exponent_m = 0.0;  // fitted d log t / d log M at fixed r
  double exponent_r = 0.0;  // fitted d log t / d log r at fixed M
  int workers = 1;
  const ComplexityRow* find(int m, double r) const;
};

/// Predicted number of nested evaluations g^p g^c r^2 (l/L)^2 M^4.
double predicted_evaluations(int gp, int gc, double r, double l_over_L, int m);
/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

ComplexityReport run_complexity(const ComplexityConfig& cfg);

}  // namespace nlfem
