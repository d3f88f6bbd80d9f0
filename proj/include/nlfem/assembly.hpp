#pragma once

#include "nlfem/core.hpp"
#include "nlfem/geometry_mesh.hpp"
#include "nlfem/horizon_mesher.hpp"
#include "nlfem/kernels.hpp"
#include "nlfem/quadrature.hpp"
#include "nlfem/scale_bridge.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <utility>
#include <vector>

namespace nlfem {

struct MaterialModel {
  double mu = 1.0;
  double lambda = 1.0;
  double rho = 1.0;

  void validate() const;
  /// Plane-strain Voigt stiffness acting on (exx, eyy, exy) with tensor shear exy.
  Mat3 voigt() const;
};

using VectorField = std::function<Vec2(const Vec2&)>;

struct Loads {
  VectorField body;                                      // body force density; none when empty
  std::function<Vec2(const Vec2&, const Vec2&)> traction;  // t(x, outward normal) on traction edges
  VectorField prescribed;                                // Dirichlet data; zero when empty
};

/// Constitutive model: which kernel acts where.
struct NonlocalModel {
  KernelSpec kernel;
  HorizonSpec horizon;
  bool local = false;        // classical local elasticity everywhere
  int nonlocal_region = -1;  // -1: every element is nonlocal; otherwise only this region
};

struct AssemblyOptions {
  int parent_quad_n = 0;  // Gauss points per direction on quads; 0 picks automatically
  int parent_tri_order = 3;
  ChildRuleOptions child_rule;
  ChildMeshOptions child_mesh;
  double relative_resolution = 1.0;  // parent size / child size
  double child_size = 0.0;           // explicit child size, overrides the ratio when > 0
  bool anchor_grids = true;          // split smooth-kernel child grids at the parent Gauss point
  int workers = 1;
  /// Optional observer for one child mesh, selected by (element, Gauss index).
  int dump_element = -1;
  int dump_gauss = -1;
  std::function<void(const ChildMesh&)> on_child_mesh;
};

struct AssemblyStats {
  long long parent_points = 0;
  long long child_points = 0;
  double child_size = 0.0;
  double seconds = 0.0;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Global system with interleaved DOF: node n owns (2n, 2n + 1).
struct GlobalSystem {
  SparseMatrix K;
  SparseMatrix M;
  Eigen::VectorXd F;
  std::vector<std::pair<int, double>> dirichlet;  // ascending DOF ids
  int num_nodes = 0;
  AssemblyStats stats;
};

/// Parent quadrature rule used for an element shape under the given options.
const QuadratureRule& parent_rule(ElementShape shape, const AssemblyOptions& opts);

/// Physical gradients of the displacement shape functions and |J| at xi.
struct ParentPointEval {
  ShapeEval shape;
  std::array<Vec2, 9> grad{};
  double detj = 0.0;
};
ParentPointEval eval_parent_point(const ParentMesh& mesh, int elem, const Vec2& xi);

/// Voigt strain operator (3 x 2m) with tensor shear row 1/2 (d/dy, d/dx).
Eigen::MatrixXd strain_operator(const ParentMesh& mesh, int elem, const Vec2& xi);
/// Test-gradient operator (3 x 2m) pairing with the stress as sigma : grad(v).
Eigen::MatrixXd test_gradient_operator(const ParentMesh& mesh, int elem, const Vec2& xi);

/// Kernel weight of one child point: K(x, x') w for smooth kernels, the
/// bounded factor times w for singular ones (1/2 of it on bidirectional legs).
double child_kernel_weight(const KernelSpec& kernel, const Vec2& x, const ChildPoint& cp);

/// Sparse nonlocal stress operator at one parent point: stress = E u over the listed nodes.
struct StressOperator {
  std::vector<int> nodes;  // ascending
  Eigen::MatrixXd E;       // 3 x 2 nodes.size(); columns (2k, 2k+1) belong to nodes[k]
};
StressOperator nonlocal_stress_operator(const ParentMesh& mesh, const SpatialIndex& index, const Vec2& x,
                                        const std::vector<ChildPoint>& child, const KernelSpec& kernel,
                                        const MaterialModel& material);

/// Child quadrature points of the horizon of parent point x.
std::vector<ChildPoint> horizon_points(const ParentMesh& mesh, const NonlocalModel& model, const Vec2& x,
                                       double child_size, const AssemblyOptions& opts, ChildMesh* mesh_out = nullptr);

double child_size_for(const ParentMesh& mesh, const AssemblyOptions& opts);

/// Options with every automatic choice made explicit: the parent Gauss order
/// (order + 1, raised to 4 per direction for singular kernels) and the child size.
AssemblyOptions resolved_options(const ParentMesh& mesh, const NonlocalModel& model, AssemblyOptions opts);

/// Stiffness and mass. F is left empty and Dirichlet data unset.
GlobalSystem assemble_operator(const ParentMesh& mesh, const NonlocalModel& model, const MaterialModel& material,
                               const AssemblyOptions& opts);
/// Consistent force vector from body loads at parent Gauss points and edge tractions.
Eigen::VectorXd assemble_force(const ParentMesh& mesh, const Loads& loads, const AssemblyOptions& opts);
std::vector<std::pair<int, double>> dirichlet_dofs(const ParentMesh& mesh, const Loads& loads);

GlobalSystem assemble(const ParentMesh& mesh, const NonlocalModel& model, const MaterialModel& material,
                      const Loads& loads, const AssemblyOptions& opts);

/// Run f(i) for i in [0, n) on `workers` threads. The exception of the lowest
/// failing index is rethrown.
void parallel_for(int n, int workers, const std::function<void(int)>& f);
/// As parallel_for, also passing the worker slot in [0, workers).
void parallel_for_workers(int n, int workers, const std::function<void(int, int)>& f);

}  // namespace nlfem
