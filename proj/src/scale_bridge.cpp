#include "nlfem/scale_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlfem {

namespace {

constexpr double kInflation = 1e-9;

// Newton iteration on the geometry map; returns false if it fails to converge.
bool newton_inverse(const ParentMesh& mesh, int elem, const Vec2& x, Vec2& xi) {
  const Element& el = mesh.elements[elem];
  const auto c = element_corners(mesh, elem);
  if (!is_quad(el.shape)) {
    Mat2 A;
    A.col(0) = c[1] - c[0];
    A.col(1) = c[2] - c[0];
    xi = A.inverse() * (x - c[0]);
    return true;
  }
  xi = Vec2::Zero();
  for (int it = 0; it < 20; ++it) {
    const ShapeEval g = geometry_functions(el.shape, xi);
    Vec2 r = -x;
    Mat2 J = Mat2::Zero();
    for (int a = 0; a < 4; ++a) {
      r += g.N[a] * c[a];
      J += c[a] * g.dN[a].transpose();
    }
    if (r.norm() < 1e-12) return true;
    const double det = J.determinant();
    if (!(std::abs(det) > 1e-300)) return false;
    xi -= J.inverse() * r;
    if (!xi.allFinite() || xi.norm() > 1e6) return false;
  }
  return (forward_map(mesh, elem, xi) - x).norm() < 1e-12;
}

}  // namespace

SpatialIndex::SpatialIndex(const ParentMesh& mesh) : mesh_(&mesh) {
  if (mesh.elements.empty()) throw InvalidArgument("spatial index needs a non-empty mesh");
  Vec2 lo = mesh.nodes[0], hi = mesh.nodes[0];
  for (const auto& p : mesh.nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double diam = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) diam += element_diameter(mesh, e);
  h_ = diam / mesh.num_elements();
  const Vec2 ext = hi - lo;
  lo_ = lo;
  nx_ = std::max(1, static_cast<int>(std::ceil(ext.x() / h_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(ext.y() / h_)));
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  const double pad = kInflation * std::max(1.0, ext.norm());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = element_corners(mesh, e);
    Vec2 elo = c[0], ehi = c[0];
    for (const auto& p : c) {
      elo = elo.cwiseMin(p);
      ehi = ehi.cwiseMax(p);
    }
    const int i0 = std::clamp(static_cast<int>(std::floor((elo.x() - pad - lo_.x()) / h_)), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor((ehi.x() + pad - lo_.x()) / h_)), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((elo.y() - pad - lo_.y()) / h_)), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor((ehi.y() + pad - lo_.y()) / h_)), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) cells_[static_cast<std::size_t>(j) * nx_ + i].push_back(e);
    }
  }
}

int SpatialIndex::cell_of(const Vec2& x, bool& inside) const {
  const double fx = (x.x() - lo_.x()) / h_;
  const double fy = (x.y() - lo_.y()) / h_;
  const double slack = kInflation / h_;
  inside = fx >= -slack && fy >= -slack && fx <= nx_ + slack && fy <= ny_ + slack;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny_ - 1);
  return j * nx_ + i;
}

const std::vector<int>& SpatialIndex::candidates(const Vec2& x) const {
  bool inside = false;
  const int c = cell_of(x, inside);
  return inside ? cells_[c] : none_;
}

Vec2 inverse_map(const ParentMesh& mesh, int elem, const Vec2& x) {
  Vec2 xi;
  if (!newton_inverse(mesh, elem, x, xi)) {
    throw NumericError("inverse isoparametric map did not converge in element " + std::to_string(elem));
  }
  return xi;
}

bool element_contains(const ParentMesh& mesh, int elem, const Vec2& x, Vec2& xi) {
  const auto c = element_corners(mesh, elem);
  Vec2 lo = c[0], hi = c[0];
  for (const auto& p : c) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double pad = kInflation * std::max(1.0, (hi - lo).norm());
  if (x.x() < lo.x() - pad || x.x() > hi.x() + pad || x.y() < lo.y() - pad || x.y() > hi.y() + pad) return false;
  if (!newton_inverse(mesh, elem, x, xi)) return false;
  return in_reference_cell(mesh.elements[elem].shape, xi, kInflation);
}

int locate_parent_element(const SpatialIndex& index, const ParentMesh& mesh, const Vec2& x) {
  Vec2 xi;
  for (int e : index.candidates(x)) {
    if (element_contains(mesh, e, x, xi)) return e;
  }
  int nearest = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = element_corners(mesh, e);
    const int nc = corner_count(mesh.elements[e].shape);
    Vec2 centroid = Vec2::Zero();
    for (int k = 0; k < nc; ++k) centroid += c[k];
    const double d = (centroid / nc - x).norm();
    if (d < best) {
      best = d;
      nearest = e;
    }
  }
  throw BridgingFailure("point lies outside every parent element", x, nearest);
}

BridgedPoint bridge(const SpatialIndex& index, const ParentMesh& mesh, const Vec2& x) {
  Vec2 xi;
  for (int e : index.candidates(x)) {
    if (element_contains(mesh, e, x, xi)) return {e, xi, x};
  }
  // Reuse the locator for the error path so the failure carries the nearest element.
  const int e = locate_parent_element(index, mesh, x);
  return {e, inverse_map(mesh, e, x), x};
}

}  // namespace nlfem
