#include "nlfem/geometry_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace nlfem {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 right_normal(const Vec2& a, const Vec2& b) {
  const Vec2 t = (b - a).normalized();
  return Vec2(t.y(), -t.x());
}

BoundarySegment make_segment(const ParentMesh& m, std::vector<int> nodes, BoundaryKind kind) {
  BoundarySegment s;
  s.normal = right_normal(m.nodes[nodes[0]], m.nodes[nodes[1]]);
  s.nodes = std::move(nodes);
  s.kind = kind;
  return s;
}

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Corner-to-corner edges of an element in counter-clockwise order.
std::vector<std::pair<int, int>> corner_edges(const Element& el) {
  const int nc = corner_count(el.shape);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < nc; ++i) edges.emplace_back(el.nodes[i], el.nodes[(i + 1) % nc]);
  return edges;
}

double min_corner_jacobian(const ParentMesh& m, const Element& el) {
  const auto ref = reference_nodes(el.shape);
  const int nc = corner_count(el.shape);
  double jmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nc; ++i) {
    Mat2 J = Mat2::Zero();
    const ShapeEval g = geometry_functions(el.shape, ref[i]);
    for (int a = 0; a < nc; ++a) J += m.nodes[el.nodes[a]] * g.dN[a].transpose();
    jmin = std::min(jmin, J.determinant());
  }
  return jmin;
}

bool point_in_element(const ParentMesh& m, const Element& el, const Vec2& x, double tol) {
  const int nc = corner_count(el.shape);
  for (int i = 0; i < nc; ++i) {
    const Vec2& a = m.nodes[el.nodes[i]];
    const Vec2& b = m.nodes[el.nodes[(i + 1) % nc]];
    const Vec2 t = b - a;
    if (cross2(t, x - a) < -tol * t.norm()) return false;
  }
  return true;
}

double distance_to_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 t = b - a;
  const double len2 = t.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((x - a).dot(t) / len2, 0.0, 1.0) : 0.0;
  return (a + s * t - x).norm();
}

// Distance along the ray from `c` in direction `d` to the boundary of [0, side]^2.
double ray_to_square(const Vec2& c, const Vec2& d, double side) {
  double t = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (d[k] > 1e-15) t = std::min(t, (side - c[k]) / d[k]);
    if (d[k] < -1e-15) t = std::min(t, -c[k] / d[k]);
  }
  return t;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ParentMesh build_structured_quad_mesh(double lx, double ly, int mx, int my, int order) {
  if (mx < 1 || my < 1) throw InvalidArgument("structured mesh needs at least one element per direction");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("structured mesh needs positive extents");
  if (order != 1 && order != 2) throw InvalidArgument("element order must be 1 or 2");
  ParentMesh m;
  const int sx = mx * order, sy = my * order;
  const int nx = sx + 1, ny = sy + 1;
  m.nodes.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) m.nodes.emplace_back(lx * i / sx, ly * j / sy);
  }
  auto id = [nx](int i, int j) { return j * nx + i; };
  const ElementShape shape = order == 1 ? ElementShape::Quad4 : ElementShape::Quad9;
  for (int ey = 0; ey < my; ++ey) {
    for (int ex = 0; ex < mx; ++ex) {
      const int i0 = ex * order, j0 = ey * order, o = order;
      Element el;
      el.id = static_cast<int>(m.elements.size());
      el.shape = shape;
      el.nodes = {id(i0, j0), id(i0 + o, j0), id(i0 + o, j0 + o), id(i0, j0 + o)};
      if (order == 2) {
        el.nodes.insert(el.nodes.end(), {id(i0 + 1, j0), id(i0 + 2, j0 + 1), id(i0 + 1, j0 + 2), id(i0, j0 + 1),
                                         id(i0 + 1, j0 + 1)});
      }
      m.elements.push_back(std::move(el));
    }
  }
  auto seg = [&](int i0, int j0, int di, int dj) {
    std::vector<int> nodes = {id(i0, j0), id(i0 + order * di, j0 + order * dj)};
    if (order == 2) nodes.push_back(id(i0 + di, j0 + dj));
    m.boundary.push_back(make_segment(m, nodes, BoundaryKind::Dirichlet));
  };
  for (int ex = 0; ex < mx; ++ex) seg(ex * order, 0, 1, 0);
  for (int ey = 0; ey < my; ++ey) seg(sx, ey * order, 0, 1);
  for (int ex = mx; ex > 0; --ex) seg(ex * order, sy, -1, 0);
  for (int ey = my; ey > 0; --ey) seg(0, ey * order, 0, -1);
  m.domain.kind = DomainDescriptor::Kind::Box;
  m.domain.lo = Vec2(0.0, 0.0);
  m.domain.hi = Vec2(lx, ly);
  m.domain.loops = {{Vec2(0, 0), Vec2(lx, 0), Vec2(lx, ly), Vec2(0, ly)}};
  m.region_outlines[0] = m.domain.loops[0];
  return m;
}

ParentMesh build_annulus_mesh(double r_in, double r_out, int n_radial, int n_angular, int order) {
  if (!(r_in > 0.0) || !(r_in < r_out)) throw InvalidArgument("annulus needs 0 < r_in < r_out");
  if (n_radial < 1 || n_angular < 3) throw InvalidArgument("annulus needs n_radial >= 1 and n_angular >= 3");
  if (order != 1) throw InvalidArgument("annulus meshes are generated with linear triangles only");
  ParentMesh m;
  for (int k = 0; k <= n_radial; ++k) {
    const double r = r_in + (r_out - r_in) * k / n_radial;
    for (int j = 0; j < n_angular; ++j) {
      const double th = 2.0 * kPi * j / n_angular;
      m.nodes.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  }
  auto id = [n_angular](int k, int j) { return k * n_angular + (j % n_angular); };
  for (int k = 0; k < n_radial; ++k) {
    for (int j = 0; j < n_angular; ++j) {
      const int a = id(k, j), b = id(k, j + 1), c = id(k + 1, j + 1), d = id(k + 1, j);
      for (auto tri : {std::array<int, 3>{a, d, c}, std::array<int, 3>{a, c, b}}) {
        Element el;
        el.id = static_cast<int>(m.elements.size());
        el.shape = ElementShape::Tri3;
        el.nodes.assign(tri.begin(), tri.end());
        m.elements.push_back(std::move(el));
      }
    }
  }
  Polygon outer, inner;
  for (int j = 0; j < n_angular; ++j) {
    m.boundary.push_back(make_segment(m, {id(n_radial, j), id(n_radial, j + 1)}, BoundaryKind::Traction));
    outer.push_back(m.nodes[id(n_radial, j)]);
  }
  for (int j = n_angular; j > 0; --j) {
    m.boundary.push_back(make_segment(m, {id(0, j), id(0, j - 1)}, BoundaryKind::Dirichlet));
    inner.push_back(m.nodes[id(0, j % n_angular)]);
  }
  m.domain.kind = DomainDescriptor::Kind::Polygonal;
  m.domain.loops = {outer, inner};
  m.domain.lo = Vec2(-r_out, -r_out);
  m.domain.hi = Vec2(r_out, r_out);
  return m;
}

ParentMesh build_inclusion_mesh(double side, const Vec2& center, double radius, int n_angular, int n_disc,
                                int n_matrix, double grading) {
  if (!(side > 0.0) || !(radius > 0.0)) throw InvalidArgument("inclusion mesh needs positive sizes");
  if (n_angular < 8 || n_angular % 8 != 0) throw InvalidArgument("n_angular must be a positive multiple of 8");
  if (n_disc < 1 || n_matrix < 1) throw InvalidArgument("inclusion mesh needs at least one ring per region");
  if (!(grading >= 1.0)) throw InvalidArgument("grading must be >= 1");
  const double clearance = std::min({center.x(), center.y(), side - center.x(), side - center.y()});
  if (!(radius < clearance)) throw InvalidArgument("inclusion must lie strictly inside the square");
  ParentMesh m;
  m.nodes.push_back(center);
  const int n_rings = n_disc + n_matrix;
  for (int k = 1; k <= n_rings; ++k) {
    for (int j = 0; j < n_angular; ++j) {
      const double th = 2.0 * kPi * j / n_angular;
      const Vec2 d(std::cos(th), std::sin(th));
      if (k <= n_disc) {
        m.nodes.push_back(center + radius * k / n_disc * d);
        continue;
      }
      const double s = std::pow(static_cast<double>(k - n_disc) / n_matrix, grading);
      const double reach = ray_to_square(center, d, side);
      Vec2 p = center + (radius + (reach - radius) * s) * d;
      if (k == n_rings) {
        // Snap the last ring onto the square so the boundary is exact.
        for (int c = 0; c < 2; ++c) {
          if (std::abs(p[c]) < 1e-12) p[c] = 0.0;
          if (std::abs(p[c] - side) < 1e-12) p[c] = side;
        }
      }
      m.nodes.push_back(p);
    }
  }
  auto id = [n_angular](int k, int j) { return 1 + (k - 1) * n_angular + (j % n_angular); };
  auto add = [&m](int a, int b, int c, int region) {
    Element el;
    el.id = static_cast<int>(m.elements.size());
    el.shape = ElementShape::Tri3;
    el.nodes = {a, b, c};
    el.region = region;
    m.elements.push_back(std::move(el));
  };
  for (int j = 0; j < n_angular; ++j) add(0, id(1, j), id(1, j + 1), 1);
  for (int k = 1; k < n_rings; ++k) {
    const int region = k < n_disc ? 1 : 0;
    for (int j = 0; j < n_angular; ++j) {
      const int a = id(k, j), b = id(k, j + 1), c = id(k + 1, j + 1), d = id(k + 1, j);
      add(a, d, c, region);
      add(a, c, b, region);
    }
  }
  Polygon outline;
  for (int j = 0; j < n_angular; ++j) {
    m.boundary.push_back(make_segment(m, {id(n_rings, j), id(n_rings, j + 1)}, BoundaryKind::Dirichlet));
    outline.push_back(m.nodes[id(n_disc, j)]);
  }
  m.domain.kind = DomainDescriptor::Kind::Box;
  m.domain.lo = Vec2(0.0, 0.0);
  m.domain.hi = Vec2(side, side);
  m.domain.loops = {{Vec2(0, 0), Vec2(side, 0), Vec2(side, side), Vec2(0, side)}};
  m.region_outlines[1] = outline;
  return m;
}

ParentMesh import_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::vector<std::string>& tok) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      tok.clear();
      for (std::string t; ls >> t;) tok.push_back(t);
      if (!tok.empty()) return true;
    }
    return false;
  };
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + s + "'", lineno);
    }
    if (pos != s.size()) throw ParseError("expected an integer, got '" + s + "'", lineno);
    return v;
  };
  auto to_double = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("expected a number, got '" + s + "'", lineno);
    }
    if (pos != s.size() || !std::isfinite(v)) throw ParseError("expected a finite number, got '" + s + "'", lineno);
    return v;
  };

  std::vector<std::string> tok;
  if (!next_line(tok)) throw ParseError("empty mesh file", lineno);
  if (tok.size() != 6 || tok[0] != "nodes" || tok[2] != "elements" || tok[4] != "boundaries") {
    throw ParseError("header must read 'nodes N elements M boundaries B'", lineno);
  }
  const int nn = to_int(tok[1]), ne = to_int(tok[3]), nb = to_int(tok[5]);
  if (nn < 1 || ne < 1 || nb < 0) throw ParseError("header counts out of range", lineno);

  ParentMesh m;
  m.nodes.assign(nn, Vec2::Zero());
  std::vector<bool> seen_node(nn, false);
  for (int i = 0; i < nn; ++i) {
    if (!next_line(tok)) throw ParseError("unexpected end of file in node block", lineno);
    if (tok.size() != 3) throw ParseError("node line must read 'id x y'", lineno);
    const int id = to_int(tok[0]);
    if (id < 0 || id >= nn || seen_node[id]) throw ParseError("node id out of range or repeated", lineno);
    seen_node[id] = true;
    m.nodes[id] = Vec2(to_double(tok[1]), to_double(tok[2]));
  }
  m.elements.resize(ne);
  std::vector<bool> seen_el(ne, false);
  for (int i = 0; i < ne; ++i) {
    if (!next_line(tok)) throw ParseError("unexpected end of file in element block", lineno);
    if (tok.size() < 2) throw ParseError("element line must read 'id shape n0 n1 ...'", lineno);
    const int id = to_int(tok[0]);
    if (id < 0 || id >= ne || seen_el[id]) throw ParseError("element id out of range or repeated", lineno);
    seen_el[id] = true;
    Element el;
    el.id = id;
    if (tok[1] == "q4") el.shape = ElementShape::Quad4;
    else if (tok[1] == "q9") el.shape = ElementShape::Quad9;
    else if (tok[1] == "t3") el.shape = ElementShape::Tri3;
    else if (tok[1] == "t6") el.shape = ElementShape::Tri6;
    else throw ParseError("unknown element shape '" + tok[1] + "'", lineno);
    if (static_cast<int>(tok.size()) != 2 + node_count(el.shape)) {
      throw ParseError("element node count does not match its shape", lineno);
    }
    for (std::size_t k = 2; k < tok.size(); ++k) {
      const int n = to_int(tok[k]);
      if (n < 0 || n >= nn) throw ParseError("element references unknown node " + tok[k], lineno);
      el.nodes.push_back(n);
    }
    if (!(min_corner_jacobian(m, el) > 0.0)) {
      throw ParseError("inverted element " + std::to_string(id) + " (clockwise or degenerate)", lineno);
    }
    m.elements[id] = std::move(el);
  }
  for (int i = 0; i < nb; ++i) {
    if (!next_line(tok)) throw ParseError("unexpected end of file in boundary block", lineno);
    if (tok.size() != 5 && tok.size() != 6) throw ParseError("boundary line must read 'kind n0 n1 [n2] nx ny'", lineno);
    BoundarySegment s;
    if (tok[0] == "dir") s.kind = BoundaryKind::Dirichlet;
    else if (tok[0] == "trac") s.kind = BoundaryKind::Traction;
    else throw ParseError("unknown boundary kind '" + tok[0] + "'", lineno);
    const std::size_t nids = tok.size() - 3;
    for (std::size_t k = 1; k <= nids; ++k) {
      const int n = to_int(tok[k]);
      if (n < 0 || n >= nn) throw ParseError("boundary references unknown node " + tok[k], lineno);
      s.nodes.push_back(n);
    }
    s.normal = Vec2(to_double(tok[tok.size() - 2]), to_double(tok[tok.size() - 1]));
    const double len = s.normal.norm();
    if (std::abs(len - 1.0) > 1e-6) throw ParseError("boundary normal is not of unit length", lineno);
    s.normal /= len;
    m.boundary.push_back(std::move(s));
  }
  if (next_line(tok)) throw ParseError("trailing content after the boundary block", lineno);
  m.domain.kind = DomainDescriptor::Kind::ElementWalk;
  m.domain.lo = m.domain.hi = m.nodes[0];
  for (const auto& p : m.nodes) {
    m.domain.lo = m.domain.lo.cwiseMin(p);
    m.domain.hi = m.domain.hi.cwiseMax(p);
  }
  try {
    validate_mesh(m);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), lineno);
  }
  return m;
}

std::string export_mesh(const ParentMesh& m) {
  std::ostringstream out;
  out << "nodes " << m.nodes.size() << " elements " << m.elements.size() << " boundaries " << m.boundary.size()
      << "\n";
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    out << i << ' ' << fmt_double(m.nodes[i].x()) << ' ' << fmt_double(m.nodes[i].y()) << "\n";
  }
  static const char* names[] = {"q4", "q9", "t3", "t6"};
  for (const auto& el : m.elements) {
    out << el.id << ' ' << names[static_cast<int>(el.shape)];
    for (int n : el.nodes) out << ' ' << n;
    out << "\n";
  }
  for (const auto& s : m.boundary) {
    out << (s.kind == BoundaryKind::Dirichlet ? "dir" : "trac");
    for (int n : s.nodes) out << ' ' << n;
    out << ' ' << fmt_double(s.normal.x()) << ' ' << fmt_double(s.normal.y()) << "\n";
  }
  return out.str();
}

void validate_mesh(const ParentMesh& m) {
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (!m.nodes[i].allFinite()) throw InvalidArgument("node " + std::to_string(i) + " has non-finite coordinates");
  }
  std::map<std::pair<int, int>, int> edge_use;
  for (std::size_t e = 0; e < m.elements.size(); ++e) {
    const Element& el = m.elements[e];
    if (el.id != static_cast<int>(e)) throw InvalidArgument("element ids must be dense and ordered");
    if (static_cast<int>(el.nodes.size()) != node_count(el.shape)) {
      throw InvalidArgument("element " + std::to_string(e) + " has the wrong node count");
    }
    for (int n : el.nodes) {
      if (n < 0 || n >= m.num_nodes()) throw InvalidArgument("element " + std::to_string(e) + " has a dangling node");
    }
    if (!(min_corner_jacobian(m, el) > 0.0)) throw InvalidArgument("element " + std::to_string(e) + " is inverted");
    for (auto [a, b] : corner_edges(el)) ++edge_use[edge_key(a, b)];
  }
  for (const auto& [edge, count] : edge_use) {
    if (count > 2) throw InvalidArgument("an edge is shared by more than two elements");
  }
  for (const auto& s : m.boundary) {
    if (s.nodes.size() != 2 && s.nodes.size() != 3) throw InvalidArgument("boundary segment needs 2 or 3 nodes");
    if (std::abs(s.normal.norm() - 1.0) > 1e-12) throw InvalidArgument("boundary normal is not unit length");
    const auto it = edge_use.find(edge_key(s.nodes[0], s.nodes[1]));
    if (it == edge_use.end() || it->second != 1) {
      throw InvalidArgument("boundary segment is not an edge of exactly one element");
    }
  }
  const double area = mesh_area(m);
  double expected = 0.0;
  if (m.domain.kind == DomainDescriptor::Kind::Box) {
    expected = (m.domain.hi - m.domain.lo).prod();
  } else if (m.domain.kind == DomainDescriptor::Kind::Polygonal) {
    for (const auto& loop : m.domain.loops) expected += polygon_area(loop);
  } else {
    return;
  }
  if (std::abs(area - expected) > 1e-10 * expected) throw InvalidArgument("element areas do not tile the domain");
}

bool point_in_polygon(const Polygon& poly, const Vec2& x, double tol) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if (tol > 0.0 && distance_to_segment(a, b, x) <= tol) return true;
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

bool point_in_domain(const ParentMesh& m, const Vec2& x) {
  const auto& d = m.domain;
  switch (d.kind) {
    case DomainDescriptor::Kind::Box:
      return x.x() >= d.lo.x() && x.x() <= d.hi.x() && x.y() >= d.lo.y() && x.y() <= d.hi.y();
    case DomainDescriptor::Kind::Polygonal: {
      bool inside = false;
      for (const auto& loop : d.loops) {
        for (std::size_t i = 0; i < loop.size(); ++i) {
          if (distance_to_segment(loop[i], loop[(i + 1) % loop.size()], x) <= 1e-12) return true;
        }
        if (point_in_polygon(loop, x)) inside = !inside;
      }
      return inside;
    }
    case DomainDescriptor::Kind::ElementWalk:
      for (const auto& el : m.elements) {
        if (point_in_element(m, el, x, 1e-12)) return true;
      }
      return false;
  }
  return false;
}

std::array<Vec2, 4> element_corners(const ParentMesh& m, int e) {
  const Element& el = m.elements[e];
  std::array<Vec2, 4> c;
  const int nc = corner_count(el.shape);
  for (int i = 0; i < nc; ++i) c[i] = m.nodes[el.nodes[i]];
  if (nc == 3) c[3] = c[2];
  return c;
}

Vec2 forward_map(const ParentMesh& m, int e, const Vec2& xi) {
  const Element& el = m.elements[e];
  const ShapeEval g = geometry_functions(el.shape, xi);
  Vec2 x = Vec2::Zero();
  for (int a = 0; a < g.n; ++a) x += g.N[a] * m.nodes[el.nodes[a]];
  return x;
}

Mat2 geometry_jacobian(const ParentMesh& m, int e, const Vec2& xi) {
  const Element& el = m.elements[e];
  const ShapeEval g = geometry_functions(el.shape, xi);
  Mat2 J = Mat2::Zero();
  for (int a = 0; a < g.n; ++a) J += m.nodes[el.nodes[a]] * g.dN[a].transpose();
  return J;
}

double element_area(const ParentMesh& m, int e) {
  const Element& el = m.elements[e];
  if (!is_quad(el.shape)) return 0.5 * geometry_jacobian(m, e, Vec2(1.0 / 3.0, 1.0 / 3.0)).determinant();
  const double g = 1.0 / std::sqrt(3.0);
  double a = 0.0;
  for (double s : {-g, g}) {
    for (double t : {-g, g}) a += geometry_jacobian(m, e, Vec2(s, t)).determinant();
  }
  return a;
}

double mesh_area(const ParentMesh& m) {
  double a = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) a += element_area(m, e);
  return a;
}

double element_diameter(const ParentMesh& m, int e) {
  const auto c = element_corners(m, e);
  Vec2 lo = c[0], hi = c[0];
  for (const auto& p : c) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

double mean_element_size(const ParentMesh& m) {
  double s = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    const double a = element_area(m, e);
    s += is_quad(m.elements[e].shape) ? std::sqrt(a) : std::sqrt(2.0 * a);
  }
  return s / m.num_elements();
}

std::vector<std::pair<Vec2, Vec2>> domain_boundary_edges(const ParentMesh& m) {
  std::vector<std::pair<Vec2, Vec2>> edges;
  if (m.domain.kind != DomainDescriptor::Kind::ElementWalk) {
    for (const auto& loop : m.domain.loops) {
      for (std::size_t i = 0; i < loop.size(); ++i) edges.emplace_back(loop[i], loop[(i + 1) % loop.size()]);
    }
    return edges;
  }
  std::map<std::pair<int, int>, std::pair<int, int>> use;
  for (const auto& el : m.elements) {
    for (auto [a, b] : corner_edges(el)) {
      auto [it, fresh] = use.try_emplace(edge_key(a, b), std::make_pair(a, b));
      if (!fresh) it->second = {-1, -1};
    }
  }
  for (const auto& [key, dir] : use) {
    if (dir.first >= 0) edges.emplace_back(m.nodes[dir.first], m.nodes[dir.second]);
  }
  return edges;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

}  // namespace nlfem
