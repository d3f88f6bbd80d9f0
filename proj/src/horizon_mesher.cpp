#include "nlfem/horizon_mesher.hpp"

#include "nlfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlfem {

namespace {

constexpr double kPi = std::numbers::pi;

// Breakpoints of [a, b] with spacing close to h, split at `split` when it lies strictly inside.
std::vector<double> axis_breaks(double a, double b, double h, std::optional<double> split) {
  auto fill = [h](double lo, double hi, std::vector<double>& out) {
    const int n = std::max(1, static_cast<int>(std::lround((hi - lo) / h)));
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / n);
  };
  std::vector<double> out;
  const double tol = 1e-12 * std::max(1.0, b - a);
  if (split && *split > a + tol && *split < b - tol) {
    fill(a, *split, out);
    fill(*split, b, out);
  } else {
    fill(a, b, out);
  }
  out.push_back(b);
  return out;
}

// Breakpoints of [a, b] on the lattice origin + k h, plus the ends and an optional split.
std::vector<double> lattice_breaks(double a, double b, double h, double origin, std::optional<double> split) {
  std::vector<double> out{a, b};
  if (split && *split > a && *split < b) out.push_back(*split);
  const long long k0 = static_cast<long long>(std::ceil((a - origin) / h));
  for (long long k = k0; origin + k * h < b; ++k) out.push_back(origin + k * h);
  std::sort(out.begin(), out.end());
  // Merge breaks closer than a rounding tolerance so no zero-width cells appear.
  const double tol = 1e-9 * h;
  std::vector<double> merged;
  for (double v : out) {
    if (merged.empty() || v - merged.back() > tol) merged.push_back(v);
  }
  merged.back() = b;
  return merged;
}

void mesh_rect(const TruncatedRegion& reg, const std::optional<Vec2>& anchor, double h, const ChildMeshOptions& opts,
               ChildMesh& cm) {
  auto breaks = [&](int axis) {
    const double a = reg.lo[axis], b = reg.hi[axis];
    const std::optional<double> split = anchor ? std::optional<double>((*anchor)[axis]) : std::nullopt;
    return opts.lattice_grid ? lattice_breaks(a, b, h, opts.lattice_origin[axis], split) : axis_breaks(a, b, h, split);
  };
  const auto xs = breaks(0);
  const auto ys = breaks(1);
  const int nx = static_cast<int>(xs.size());
  cm.nodes.reserve(xs.size() * ys.size());
  cm.elements.reserve((xs.size() - 1) * (ys.size() - 1));
  for (double y : ys) {
    for (double x : xs) cm.nodes.emplace_back(x, y);
  }
  for (int j = 0; j + 1 < static_cast<int>(ys.size()); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = j * nx + i;
      cm.elements.push_back({ElementShape::Quad4, {a, a + 1, a + 1 + nx, a + nx}});
    }
  }
}

void mesh_segments(const TruncatedRegion& reg, double h, ChildMesh& cm) {
  const Vec2 p = reg.anchor;
  cm.nodes.push_back(p);
  auto leg = [&](int axis, double lo, double hi) {
    for (const auto& [from, to] : {std::make_pair(p[axis], lo), std::make_pair(p[axis], hi)}) {
      const double len = std::abs(to - from);
      if (len < 1e-14) continue;
      const int n = std::max(1, static_cast<int>(std::lround(len / h)));
      int prev = 0;
      for (int k = 1; k <= n; ++k) {
        Vec2 q = p;
        q[axis] = k == n ? to : from + (to - from) * k / n;
        cm.nodes.push_back(q);
        const int cur = static_cast<int>(cm.nodes.size()) - 1;
        cm.segments.push_back({prev, cur, axis});
        prev = cur;
      }
    }
  };
  leg(0, reg.x0, reg.x1);
  leg(1, reg.y0, reg.y1);
}

struct ChainVertex {
  Vec2 p;
  bool mandatory;  // region corners and straight-edge subdivisions
};

// Star mesh centred on `c`: graded rings between scaled copies of a coarse
// boundary chain, plus a fan band resolving arc facets between the coarse
// chain and the faceted arcs.
void mesh_star(const TruncatedRegion& reg, const Vec2& c, double h, const ChildMeshOptions& opts, ChildMesh& cm) {
  const std::size_t nv = reg.vertices.size();
  std::vector<ChainVertex> fine;
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec2& a = reg.vertices[i];
    const Vec2& b = reg.vertices[(i + 1) % nv];
    fine.push_back({a, true});
    const RegionEdge& e = reg.edges[i];
    if (e.arc) {
      const double ta = std::atan2(a.y() - e.center.y(), a.x() - e.center.x());
      double span = std::atan2(b.y() - e.center.y(), b.x() - e.center.x()) - ta;
      while (span <= 1e-14) span += 2.0 * kPi;
      const int k = std::max(1, static_cast<int>(std::ceil(opts.facets_per_quarter * span / (0.5 * kPi) - 1e-9)));
      for (int j = 1; j < k; ++j) {
        const double t = ta + span * j / k;
        fine.push_back({e.center + e.radius * Vec2(std::cos(t), std::sin(t)), false});
      }
    } else {
      const int k = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h - 1e-9)));
      for (int j = 1; j < k; ++j) fine.push_back({a + (b - a) * (static_cast<double>(j) / k), true});
    }
  }
  const std::size_t nf = fine.size();

  // Coarse chain: mandatory vertices plus arc points spaced about h apart.
  std::vector<std::size_t> coarse;
  std::size_t first = 0;
  while (first < nf && !fine[first].mandatory) ++first;
  if (first == nf) throw NumericError("star mesh needs at least one region corner");
  for (std::size_t s = 0; s < nf;) {
    const std::size_t i = (first + s) % nf;
    coarse.push_back(i);
    // Walk the run of arc points up to the next mandatory vertex.
    std::size_t run_end = s + 1;
    while (run_end < nf && !fine[(first + run_end) % nf].mandatory) ++run_end;
    const Vec2 stop = fine[(first + run_end) % nf].p;
    double acc = 0.0;
    for (std::size_t t = s + 1; t < run_end; ++t) {
      const std::size_t j = (first + t) % nf;
      acc += (fine[j].p - fine[(first + t - 1) % nf].p).norm();
      if (acc >= h && (stop - fine[j].p).norm() >= 0.5 * h) {
        coarse.push_back(j);
        acc = 0.0;
      }
    }
    s = run_end;
  }
  const std::size_t nc = coarse.size();
  if (nc < 3) throw NumericError("star mesh coarse chain is degenerate");

  double rmean = 0.0;
  for (std::size_t i : coarse) rmean += (fine[i].p - c).norm();
  rmean /= static_cast<double>(nc);
  const int nr = std::max(1, static_cast<int>(std::lround(rmean / h)));

  cm.nodes.push_back(c);
  // ring_id(k, i): node of coarse vertex i scaled to ring k (k = 1..nr).
  auto ring_id = [nc](int k, std::size_t i) { return 1 + static_cast<int>((k - 1) * nc + (i % nc)); };
  for (int k = 1; k <= nr; ++k) {
    const double s = std::pow(static_cast<double>(k) / nr, opts.radial_grading);
    for (std::size_t i : coarse) cm.nodes.push_back(k == nr ? fine[i].p : Vec2(c + s * (fine[i].p - c)));
  }
  for (std::size_t i = 0; i < nc; ++i) {
    cm.elements.push_back({ElementShape::Tri3, {0, ring_id(1, i), ring_id(1, i + 1), 0}});
  }
  for (int k = 2; k <= nr; ++k) {
    for (std::size_t i = 0; i < nc; ++i) {
      cm.elements.push_back(
          {ElementShape::Quad4, {ring_id(k - 1, i), ring_id(k, i), ring_id(k, i + 1), ring_id(k - 1, i + 1)}});
    }
  }
  // Fan band between each coarse chord and the arc facets it cuts off.
  for (std::size_t ci = 0; ci < nc; ++ci) {
    const std::size_t a = coarse[ci];
    const std::size_t b = coarse[(ci + 1) % nc];
    std::vector<int> mids;
    for (std::size_t j = (a + 1) % nf; j != b; j = (j + 1) % nf) {
      cm.nodes.push_back(fine[j].p);
      mids.push_back(static_cast<int>(cm.nodes.size()) - 1);
    }
    if (mids.empty()) continue;
    const int ca = ring_id(nr, ci), cb = ring_id(nr, ci + 1);
    for (std::size_t j = 0; j + 1 < mids.size(); ++j) {
      cm.elements.push_back({ElementShape::Tri3, {ca, mids[j], mids[j + 1], 0}});
    }
    cm.elements.push_back({ElementShape::Tri3, {ca, mids.back(), cb, 0}});
  }

  Polygon faceted;
  for (const auto& f : fine) faceted.push_back(f.p);
  const double target = polygon_area(faceted);
  double sum = 0.0;
  for (const auto& el : cm.elements) {
    const double a = child_element_area(cm, el);
    if (!(a > 0.0)) throw NumericError("star mesh produced an inverted child element");
    sum += a;
  }
  if (std::abs(sum - target) > 1e-10 * std::max(target, 1e-300)) {
    throw NumericError("star mesh does not tile its region");
  }
}

// 1D rule on [a, b] for f(t) |t - s|^(-alpha). The singular point s is either
// an endpoint (Jacobi) or outside the interval (Legendre with explicit factor).
// A far interval whose near end sits close to s is cut geometrically so that
// no piece is wider than its distance from s; a sliver cell next to the
// singular line would otherwise leave the factor nearly singular on one piece.
void singular_axis_rule(double a, double b, double s, double alpha, const ChildRuleOptions& rule,
                        std::vector<double>& pts, std::vector<double>& wts) {
  pts.clear();
  wts.clear();
  const double h = b - a;
  const double tol = 1e-12 * std::max(1.0, std::abs(h));
  if (std::abs(a - s) <= tol || std::abs(b - s) <= tol) {
    const QuadratureRule& q = cached_gauss_jacobi(rule.jacobi_n, alpha);
    const double scale = std::pow(0.5 * h, 1.0 - alpha);
    const bool left = std::abs(a - s) <= tol;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double off = 0.5 * h * (1.0 - q.nodes[i]);
      pts.push_back(left ? a + off : b - off);
      wts.push_back(scale * q.weights[i]);
    }
    return;
  }
  if (s > a && s < b) throw AlignmentViolation("a child element interior crosses a singular line of the kernel");
  const QuadratureRule& q = cached_gauss_legendre(rule.far_singular_n);
  const double sign = a > s ? 1.0 : -1.0;
  const double d_end = std::max(std::abs(a - s), std::abs(b - s));
  for (double d0 = std::min(std::abs(a - s), std::abs(b - s)); d0 < d_end;) {
    const double d1 = std::min(d_end, 2.0 * d0);
    const double w = d1 - d0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double d = d0 + 0.5 * w * (1.0 + q.nodes[i]);
      pts.push_back(s + sign * d);
      wts.push_back(0.5 * w * q.weights[i] * std::pow(d, -alpha));
    }
    d0 = d1;
  }
}

}  // namespace

double child_element_area(const ChildMesh& cm, const ChildElement& el) {
  const int n = el.shape == ElementShape::Quad4 ? 4 : 3;
  double a = 0.0;
  for (int i = 0; i < n; ++i) a += cross2(cm.nodes[el.nodes[i]], cm.nodes[el.nodes[(i + 1) % n]]);
  return 0.5 * a;
}

double ChildMesh::measure() const {
  double m = 0.0;
  for (const auto& el : elements) m += child_element_area(*this, el);
  for (const auto& s : segments) m += (nodes[s.n1] - nodes[s.n0]).norm();
  return m;
}

ChildMesh mesh_child(const TruncatedRegion& region, const std::optional<Vec2>& singular_point, double target_size,
                     const ChildMeshOptions& opts, const std::optional<Vec2>& center) {
  if (!(target_size > 0.0)) throw InvalidArgument("child target size must be positive");
  ChildMesh cm;
  cm.singular_point = singular_point;
  if (region.kind == TruncatedRegion::Kind::Empty || region.measure() < 1e-14) return cm;
  switch (region.kind) {
    case TruncatedRegion::Kind::Rect:
      mesh_rect(region, singular_point, target_size, opts, cm);
      break;
    case TruncatedRegion::Kind::Segments:
      cm.singular_point = region.anchor;
      mesh_segments(region, target_size, cm);
      break;
    case TruncatedRegion::Kind::Polygon: {
      Vec2 c = Vec2::Zero();
      if (center) {
        c = *center;
      } else if (singular_point) {
        c = *singular_point;
      } else {
        for (const auto& v : region.vertices) c += v;
        c /= static_cast<double>(region.vertices.size());
      }
      mesh_star(region, c, target_size, opts, cm);
      break;
    }
    case TruncatedRegion::Kind::Empty:
      break;
  }
  if (!cm.elements.empty()) {
    cm.avg_element_size = std::sqrt(cm.measure() / static_cast<double>(cm.elements.size()));
  } else if (!cm.segments.empty()) {
    cm.avg_element_size = cm.measure() / static_cast<double>(cm.segments.size());
  }
  return cm;
}

std::vector<ChildPoint> child_quadrature_points(const ChildMesh& cm, const KernelSpec& spec,
                                                const ChildRuleOptions& rule) {
  std::vector<ChildPoint> out;
  if (cm.empty()) return out;
  const bool singular = spec.singular();
  if (singular && !cm.singular_point) throw AlignmentViolation("singular kernel used on a child mesh without a singular point");
  const double alpha = singular ? spec.alpha() : 0.0;
  {
    const std::size_t per_cell = static_cast<std::size_t>(std::max({rule.legendre_n, rule.jacobi_n, rule.far_singular_n}));
    out.reserve(cm.elements.size() * per_cell * per_cell + cm.segments.size() * per_cell);
  }

  std::vector<double> px, wx, py, wy;
  for (const auto& seg : cm.segments) {
    if (!singular) throw InvalidArgument("segment horizons need a singular bidirectional kernel");
    const int ax = seg.axis;
    const Vec2& a = cm.nodes[seg.n0];
    const Vec2& b = cm.nodes[seg.n1];
    const double lo = std::min(a[ax], b[ax]), hi = std::max(a[ax], b[ax]);
    singular_axis_rule(lo, hi, (*cm.singular_point)[ax], alpha, rule, px, wx);
    for (std::size_t i = 0; i < px.size(); ++i) {
      Vec2 p = a;
      p[ax] = px[i];
      out.push_back({p, wx[i]});
    }
  }

  for (const auto& el : cm.elements) {
    if (el.shape == ElementShape::Quad4) {
      const Vec2& p0 = cm.nodes[el.nodes[0]];
      const Vec2& p2 = cm.nodes[el.nodes[2]];
      if (singular) {
        const bool aligned = cm.nodes[el.nodes[1]].y() == p0.y() && cm.nodes[el.nodes[3]].x() == p0.x() &&
                             cm.nodes[el.nodes[1]].x() == p2.x() && cm.nodes[el.nodes[3]].y() == p2.y();
        if (!aligned) throw AlignmentViolation("singular kernels need axis-aligned child quadrilaterals");
        const Vec2& s = *cm.singular_point;
        singular_axis_rule(p0.x(), p2.x(), s.x(), alpha, rule, px, wx);
        singular_axis_rule(p0.y(), p2.y(), s.y(), alpha, rule, py, wy);
        for (std::size_t j = 0; j < py.size(); ++j) {
          for (std::size_t i = 0; i < px.size(); ++i) out.push_back({Vec2(px[i], py[j]), wx[i] * wy[j]});
        }
        continue;
      }
      const QuadratureRule& q = cached_gauss_legendre(rule.legendre_n);
      std::array<Vec2, 4> c;
      for (int k = 0; k < 4; ++k) c[k] = cm.nodes[el.nodes[k]];
      for (std::size_t j = 0; j < q.size(); ++j) {
        for (std::size_t i = 0; i < q.size(); ++i) {
          const ShapeEval g = geometry_functions(ElementShape::Quad4, Vec2(q.nodes[i], q.nodes[j]));
          Vec2 x = Vec2::Zero();
          Mat2 J = Mat2::Zero();
          for (int k = 0; k < 4; ++k) {
            x += g.N[k] * c[k];
            J += c[k] * g.dN[k].transpose();
          }
          out.push_back({x, q.weights[i] * q.weights[j] * J.determinant()});
        }
      }
    } else {
      const Vec2& a = cm.nodes[el.nodes[0]];
      const Vec2& b = cm.nodes[el.nodes[1]];
      const Vec2& c = cm.nodes[el.nodes[2]];
      const double det = cross2(b - a, c - a);
      if (singular) {
        const Vec2& s = *cm.singular_point;
        for (int ax = 0; ax < 2; ++ax) {
          const double lo = std::min({a[ax], b[ax], c[ax]}), hi = std::max({a[ax], b[ax], c[ax]});
          if (s[ax] > lo && s[ax] < hi) throw AlignmentViolation("a child triangle interior crosses a singular line");
        }
      }
      const QuadratureRule& q = cached_triangle_rule(rule.triangle_order);
      for (std::size_t i = 0; i < q.size(); ++i) {
        const Vec2 x = a + q.points[i].x() * (b - a) + q.points[i].y() * (c - a);
        double w = q.weights[i] * det;
        if (singular) {
          const Vec2& s = *cm.singular_point;
          w *= std::pow(std::abs(x.x() - s.x()), -alpha) * std::pow(std::abs(x.y() - s.y()), -alpha);
        }
        out.push_back({x, w});
      }
    }
  }
  return out;
}

}  // namespace nlfem
