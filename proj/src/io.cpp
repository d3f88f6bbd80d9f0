#include "nlfem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlfem {

namespace {

int vtk_cell_type(ElementShape shape) {
  switch (shape) {
    case ElementShape::Quad4: return 9;
    case ElementShape::Quad9: return 28;
    case ElementShape::Tri3: return 5;
    case ElementShape::Tri6: return 22;
  }
  return 0;
}

double parse_number(const std::string& cell, const std::string& path, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) throw ParseError(path + ": bad number '" + cell + "'", line);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

void write_field_csv(const std::string& path, const std::vector<Vec2>& nodes, const SolveResult& field) {
  if (nodes.size() != field.displacements.size()) throw InvalidArgument("field and node counts differ");
  std::string text = "x,y,ux,uy\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    text += format_double(nodes[i].x()) + ',' + format_double(nodes[i].y()) + ',' +
            format_double(field.displacements[i].x()) + ',' + format_double(field.displacements[i].y()) + '\n';
  }
  write_text_file(path, text);
}

FieldTable read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,y,ux,uy") throw ParseError(path + ": expected header x,y,ux,uy", 1);
  FieldTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw ParseError(path + ": expected 4 columns", lineno);
    double v[4];
    for (int k = 0; k < 4; ++k) v[k] = parse_number(cells[k], path, lineno);
    t.nodes.emplace_back(v[0], v[1]);
    t.displacements.emplace_back(v[2], v[3]);
  }
  return t;
}

void write_vtk(const std::string& path, const ParentMesh& mesh, const SolveResult& field,
               const std::vector<PointScalar>& extra) {
  const int nn = mesh.num_nodes();
  if (static_cast<int>(field.displacements.size()) != nn) throw InvalidArgument("field and node counts differ");
  for (const PointScalar& s : extra) {
    if (static_cast<int>(s.values.size()) != nn) throw InvalidArgument("scalar '" + s.name + "' has wrong length");
  }
  std::string t = "# vtk DataFile Version 3.0\nnlfem field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  t += "POINTS " + std::to_string(nn) + " double\n";
  for (const Vec2& x : mesh.nodes) t += format_double(x.x()) + ' ' + format_double(x.y()) + " 0\n";
  std::size_t size = 0;
  for (const Element& el : mesh.elements) size += el.nodes.size() + 1;
  t += "CELLS " + std::to_string(mesh.num_elements()) + ' ' + std::to_string(size) + '\n';
  for (const Element& el : mesh.elements) {
    t += std::to_string(el.nodes.size());
    for (int n : el.nodes) t += ' ' + std::to_string(n);
    t += '\n';
  }
  t += "CELL_TYPES " + std::to_string(mesh.num_elements()) + '\n';
  for (const Element& el : mesh.elements) t += std::to_string(vtk_cell_type(el.shape)) + '\n';
  t += "CELL_DATA " + std::to_string(mesh.num_elements()) + "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (const Element& el : mesh.elements) t += std::to_string(el.region) + '\n';
  t += "POINT_DATA " + std::to_string(nn) + "\nVECTORS displacement double\n";
  for (const Vec2& u : field.displacements) t += format_double(u.x()) + ' ' + format_double(u.y()) + " 0\n";
  t += "SCALARS magnitude double 1\nLOOKUP_TABLE default\n";
  for (const Vec2& u : field.displacements) t += format_double(u.norm()) + '\n';
  for (const PointScalar& s : extra) {
    t += "SCALARS " + s.name + " double 1\nLOOKUP_TABLE default\n";
    for (double v : s.values) t += format_double(v) + '\n';
  }
  write_text_file(path, t);
}

void write_child_mesh_vtk(const std::string& path, const ChildMesh& cm, const std::vector<ChildPoint>& points) {
  const std::size_t nn = cm.nodes.size();
  const std::size_t ncell = cm.elements.size() + cm.segments.size() + points.size();
  std::string t = "# vtk DataFile Version 3.0\nnlfem child mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  t += "POINTS " + std::to_string(nn + points.size()) + " double\n";
  for (const Vec2& x : cm.nodes) t += format_double(x.x()) + ' ' + format_double(x.y()) + " 0\n";
  for (const ChildPoint& p : points) t += format_double(p.x.x()) + ' ' + format_double(p.x.y()) + " 0\n";
  std::size_t size = 0;
  for (const ChildElement& el : cm.elements) size += corner_count(el.shape) + 1;
  size += 3 * cm.segments.size() + 2 * points.size();
  t += "CELLS " + std::to_string(ncell) + ' ' + std::to_string(size) + '\n';
  for (const ChildElement& el : cm.elements) {
    const int nc = corner_count(el.shape);
    t += std::to_string(nc);
    for (int k = 0; k < nc; ++k) t += ' ' + std::to_string(el.nodes[k]);
    t += '\n';
  }
  for (const ChildSegment& s : cm.segments) t += "2 " + std::to_string(s.n0) + ' ' + std::to_string(s.n1) + '\n';
  for (std::size_t i = 0; i < points.size(); ++i) t += "1 " + std::to_string(nn + i) + '\n';
  t += "CELL_TYPES " + std::to_string(ncell) + '\n';
  for (const ChildElement& el : cm.elements) t += is_quad(el.shape) ? "9\n" : "5\n";
  for (std::size_t i = 0; i < cm.segments.size(); ++i) t += "3\n";
  for (std::size_t i = 0; i < points.size(); ++i) t += "1\n";
  t += "POINT_DATA " + std::to_string(nn + points.size()) + "\nSCALARS weight double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < nn; ++i) t += "0\n";
  for (const ChildPoint& p : points) t += format_double(p.w) + '\n';
  write_text_file(path, t);
}

void write_csv_table(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto join = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    return s + '\n';
  };
  std::string text = join(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw InvalidArgument("CSV row width does not match the header");
    text += join(r);
  }
  write_text_file(path, text);
}

}  // namespace nlfem
