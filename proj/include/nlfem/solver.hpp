#pragma once

#include "nlfem/assembly.hpp"

#include <string>
#include <vector>

namespace nlfem {

enum class SolverKind { SparseLU, BiCGSTAB };

struct SolverOptions {
  SolverKind kind = SolverKind::SparseLU;
  double iterative_tolerance = 1e-10;
  int max_iterations = 20000;
  double condition_limit = 1e14;
  double residual_limit = 1e-8;
};

struct SolveStats {
  int free_dofs = 0;
  int iterations = 0;  // 0 for the direct path
  bool factorized = false;
  double condition_estimate = 0.0;
  double seconds = 0.0;
};

struct SolveResult {
  std::vector<Vec2> displacements;  // one per parent node
  double residual_norm = 0.0;       // ||K u - F|| / ||F|| over the free DOF
  SolveStats stats;
};

/// Solve K u = F after eliminating Dirichlet DOF with load lifting.
SolveResult solve_static(const GlobalSystem& sys, const SolverOptions& opts = {});

/// Classical local plane-strain FEM on the same mesh, used as a reference.
SolveResult solve_local_reference(const ParentMesh& mesh, const MaterialModel& material, const Loads& loads,
                                  const AssemblyOptions& assembly = {}, const SolverOptions& opts = {});

struct FieldMetrics {
  double delta_percent = 0.0;  // ||u_a - u_b|| / ||u_b|| in percent
  double max_ux = 0.0;         // largest u_x of field a (signed maximum)
  Vec2 max_ux_at = Vec2::Zero();
  double max_abs_u = 0.0;      // largest |u| of field a
  Vec2 max_abs_u_at = Vec2::Zero();
};

/// Compare two fields on the same node layout. Node coordinates come from `nodes`.
FieldMetrics field_metrics(const SolveResult& a, const SolveResult& b, const std::vector<Vec2>& nodes);

/// Peak values of a single field.
FieldMetrics field_peaks(const SolveResult& a, const std::vector<Vec2>& nodes);

/// Restrict a field on `from_nodes` to the nodes of `to_nodes` by coordinate
/// match (tolerance `tol`). Used to compare quadratic and linear meshes at
/// their shared vertices. Throws InvalidArgument when a node has no match.
SolveResult restrict_to_nodes(const SolveResult& field, const std::vector<Vec2>& from_nodes,
                              const std::vector<Vec2>& to_nodes, double tol = 1e-10);

}  // namespace nlfem
