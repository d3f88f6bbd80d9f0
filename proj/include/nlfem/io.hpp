#pragma once

#include "nlfem/geometry_mesh.hpp"
#include "nlfem/horizon_mesher.hpp"
#include "nlfem/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlfem {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Per-node CSV with header `x,y,ux,uy`. Throws InvalidArgument when the file cannot be written.
void write_field_csv(const std::string& path, const std::vector<Vec2>& nodes, const SolveResult& field);

struct FieldTable {
  std::vector<Vec2> nodes;
  std::vector<Vec2> displacements;
};
FieldTable read_field_csv(const std::string& path);

/// Named per-node scalar written next to the displacement vectors.
struct PointScalar {
  std::string name;
  std::vector<double> values;
};

/// Legacy ASCII unstructured grid: nodes, cells (linear or quadratic), the
/// displacement vectors, |u|, and any extra scalars.
void write_vtk(const std::string& path, const ParentMesh& mesh, const SolveResult& field,
               const std::vector<PointScalar>& extra = {});

/// One horizon discretisation as a legacy grid: cells, legs as lines, and the
/// child quadrature points as vertex cells with their weights.
void write_child_mesh_vtk(const std::string& path, const ChildMesh& cm, const std::vector<ChildPoint>& points);

/// Plain CSV table; cells are written verbatim.
void write_csv_table(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Text file writer shared by the exporters; throws InvalidArgument on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nlfem
