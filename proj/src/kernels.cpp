#include "nlfem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlfem {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

double wrap_angle(double t) {
  while (t < 0.0) t += 2.0 * kPi;
  while (t >= 2.0 * kPi) t -= 2.0 * kPi;
  return t;
}

bool in_box(const Vec2& p, const Vec2& lo, const Vec2& hi, double tol) {
  return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol && p.y() <= hi.y() + tol;
}

}  // namespace

KernelSpec KernelSpec::bi_exponential(double tau) { return {KernelKind::BiExponential, tau, 0.0}; }
KernelSpec KernelSpec::power_law(double alpha) { return {KernelKind::PowerLaw, alpha, 0.0}; }
KernelSpec KernelSpec::radial_exponential(double tau1, double tau2) {
  return {KernelKind::RadialExponential, tau1, tau2};
}
KernelSpec KernelSpec::rational(double tau1, double tau2) { return {KernelKind::Rational, tau1, tau2}; }
KernelSpec KernelSpec::bidirectional(double alpha) { return {KernelKind::BidirectionalPowerLaw, alpha, 0.0}; }

double KernelSpec::alpha() const {
  require(singular(), "alpha is defined for power-law kernels only");
  return a;
}

void KernelSpec::validate() const {
  switch (kind) {
    case KernelKind::BiExponential:
      require(a > 0.0 && std::isfinite(a), "bi-exponential kernel needs tau > 0");
      break;
    case KernelKind::PowerLaw:
    case KernelKind::BidirectionalPowerLaw:
      require(a > 0.0 && a < 1.0, "power-law kernel needs alpha in (0, 1)");
      break;
    case KernelKind::RadialExponential:
    case KernelKind::Rational:
      require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b), "kernel needs tau1 > 0 and tau2 > 0");
      break;
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind) {
    case KernelKind::BiExponential: s << "biexp(tau=" << a << ")"; break;
    case KernelKind::PowerLaw: s << "powerlaw(alpha=" << a << ")"; break;
    case KernelKind::RadialExponential: s << "radialexp(tau1=" << a << ",tau2=" << b << ")"; break;
    case KernelKind::Rational: s << "rational(tau1=" << a << ",tau2=" << b << ")"; break;
    case KernelKind::BidirectionalPowerLaw: s << "bidirectional(alpha=" << a << ")"; break;
  }
  return s.str();
}

double kernel_eval(const KernelSpec& spec, const Vec2& x, const Vec2& xp) {
  const double dx = std::abs(x.x() - xp.x());
  const double dy = std::abs(x.y() - xp.y());
  switch (spec.kind) {
    case KernelKind::BiExponential:
      return std::exp(-(dx * dx + dy * dy) / spec.a) / (kPi * spec.a);
    case KernelKind::PowerLaw: {
      if (dx == 0.0 || dy == 0.0) throw DomainError("power-law kernel evaluated on its singular lines");
      const double g = std::tgamma(1.0 - spec.a);
      return std::pow(dx, -spec.a) * std::pow(dy, -spec.a) / (g * g);
    }
    case KernelKind::RadialExponential:
      return std::exp(-std::hypot(dx, dy) / spec.b) / spec.a;
    case KernelKind::Rational:
      return 1.0 / (spec.a * (dx * dx + dy * dy) + spec.b);
    case KernelKind::BidirectionalPowerLaw: {
      if (dx == 0.0 && dy == 0.0) throw DomainError("bidirectional kernel evaluated at its singular point");
      const double leg = 1.0 / (2.0 * std::tgamma(1.0 - spec.a));
      if (dy == 0.0) return 0.5 * leg * std::pow(dx, -spec.a);
      if (dx == 0.0) return 0.5 * leg * std::pow(dy, -spec.a);
      return 0.0;
    }
  }
  return 0.0;
}

double singular_smooth_part(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::PowerLaw: {
      const double g = std::tgamma(1.0 - spec.a);
      return 1.0 / (g * g);
    }
    case KernelKind::BidirectionalPowerLaw:
      return 1.0 / (2.0 * std::tgamma(1.0 - spec.a));
    default:
      throw InvalidArgument("kernel has no singular factorisation");
  }
}

SplitFactors kernel_split_factors(const KernelSpec& spec, const Vec2& x, const Vec2& xp) {
  SplitFactors f;
  f.smooth = singular_smooth_part(spec);
  if (spec.kind == KernelKind::PowerLaw) {
    f.exponent_x = spec.a;
    f.exponent_y = spec.a;
  } else if (x.y() == xp.y()) {
    f.exponent_x = spec.a;
  } else {
    f.exponent_y = spec.a;
  }
  return f;
}

HorizonSpec HorizonSpec::rect(double half_width) { return {HorizonKind::Rect, half_width, 0}; }
HorizonSpec HorizonSpec::circle(double radius) { return {HorizonKind::Circle, radius, 0}; }
HorizonSpec HorizonSpec::segments(double half_length) { return {HorizonKind::BidirectionalSegments, half_length, 0}; }
HorizonSpec HorizonSpec::full_region(int region) { return {HorizonKind::FullRegion, 0.0, region}; }

void HorizonSpec::validate() const {
  if (kind != HorizonKind::FullRegion) require(length > 0.0 && std::isfinite(length), "horizon length must be > 0");
}

std::string HorizonSpec::describe() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind) {
    case HorizonKind::Rect: s << "rect(l=" << length << ")"; break;
    case HorizonKind::Circle: s << "circle(l=" << length << ")"; break;
    case HorizonKind::BidirectionalSegments: s << "segments(l=" << length << ")"; break;
    case HorizonKind::FullRegion: s << "region(" << region << ")"; break;
  }
  return s.str();
}

double TruncatedRegion::measure() const {
  switch (kind) {
    case Kind::Empty: return 0.0;
    case Kind::Rect: return (hi - lo).prod();
    case Kind::Segments: return (x1 - x0) + (y1 - y0);
    case Kind::Polygon: {
      double a = polygon_area(vertices);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!edges[i].arc) continue;
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % vertices.size()];
        const double r = edges[i].radius;
        // Counter-clockwise central angle from p to q; atan2 stays accurate near a half circle.
        const Vec2 u = p - edges[i].center, v = q - edges[i].center;
        double theta = std::atan2(cross2(u, v), u.dot(v));
        if (theta <= 0.0) theta += 2.0 * kPi;
        a += 0.5 * r * r * (theta - std::sin(theta));
      }
      return a;
    }
  }
  return 0.0;
}

TruncatedRegion clip_circle_to_box(const Vec2& c, double r, const Vec2& lo, const Vec2& hi) {
  TruncatedRegion reg;
  reg.kind = TruncatedRegion::Kind::Polygon;
  const double tol = 1e-12 * std::max(1.0, r);
  struct Vertex {
    double angle;  // about c, used for arc spans
    Vec2 p;
    bool on_circle;
    double order = 0.0;  // about an interior point, used for sorting
  };
  std::vector<Vertex> vs;
  // Circle crossings with each box side.
  for (int axis = 0; axis < 2; ++axis) {
    const int other = 1 - axis;
    for (double v : {lo[axis], hi[axis]}) {
      const double d = v - c[axis];
      if (std::abs(d) >= r) continue;
      const double h = std::sqrt(r * r - d * d);
      for (double s : {-h, h}) {
        Vec2 p;
        p[axis] = v;
        p[other] = c[other] + s;
        if (p[other] < lo[other] - tol || p[other] > hi[other] + tol) continue;
        p[other] = std::clamp(p[other], lo[other], hi[other]);
        vs.push_back({wrap_angle(std::atan2(p.y() - c.y(), p.x() - c.x())), p, true});
      }
    }
  }
  for (const Vec2& p : {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())}) {
    if ((p - c).norm() < r - tol) vs.push_back({wrap_angle(std::atan2(p.y() - c.y(), p.x() - c.x())), p, false});
  }
  if (vs.empty()) {
    // Either the whole disc lies in the box or the box lies in the disc.
    if (in_box(c, lo, hi, 0.0)) {
      for (int k = 0; k < 4; ++k) {
        const double th = 0.5 * kPi * k;
        reg.vertices.push_back(c + r * Vec2(std::cos(th), std::sin(th)));
        reg.edges.push_back({true, c, r});
      }
    } else {
      reg.kind = TruncatedRegion::Kind::Empty;
    }
    return reg;
  }
  // The clipped disc is convex, so vertices sort by angle about any interior
  // point. The centre works unless it sits on the box boundary; then step inward.
  Vec2 ref = c;
  if (!in_box(c, lo + Vec2(tol, tol), hi - Vec2(tol, tol), 0.0)) {
    const Vec2 mid = 0.5 * (lo + hi);
    if ((mid - c).norm() > 0.0) ref = c + 1e-3 * std::min(r, (mid - c).norm()) * (mid - c).normalized();
  }
  for (Vertex& v : vs) v.order = wrap_angle(std::atan2(v.p.y() - ref.y(), v.p.x() - ref.x()));
  std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.order < b.order; });
  std::vector<Vertex> uniq;
  for (const auto& v : vs) {
    if (uniq.empty() || (v.p - uniq.back().p).norm() > tol) uniq.push_back(v);
  }
  if (uniq.size() > 1 && (uniq.front().p - uniq.back().p).norm() <= tol) uniq.pop_back();
  const std::size_t n = uniq.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& a = uniq[i];
    const Vertex& b = uniq[(i + 1) % n];
    reg.vertices.push_back(a.p);
    RegionEdge e;
    if (a.on_circle && b.on_circle) {
      double span = b.angle - a.angle;
      if (span <= 0.0) span += 2.0 * kPi;
      const double mid = a.angle + 0.5 * span;
      const Vec2 m = c + r * Vec2(std::cos(mid), std::sin(mid));
      if (in_box(m, lo, hi, tol)) e = {true, c, r};
    }
    reg.edges.push_back(e);
  }
  if (n < 3 && std::none_of(reg.edges.begin(), reg.edges.end(), [](const RegionEdge& e) { return e.arc; })) {
    reg.kind = TruncatedRegion::Kind::Empty;
  }
  return reg;
}

double ray_reach(const ParentMesh& domain, const Vec2& x, const Vec2& d, double length) {
  double t = length;
  if (domain.domain.kind == DomainDescriptor::Kind::Box) {
    for (int k = 0; k < 2; ++k) {
      if (d[k] > 0.0) t = std::min(t, (domain.domain.hi[k] - x[k]) / d[k]);
      if (d[k] < 0.0) t = std::min(t, (domain.domain.lo[k] - x[k]) / d[k]);
    }
    return std::max(t, 0.0);
  }
  for (const auto& [a, b] : domain_boundary_edges(domain)) {
    const Vec2 e = b - a;
    const double den = cross2(d, e);
    if (std::abs(den) < 1e-300) continue;
    const double s = cross2(a - x, e) / den;   // along the ray
    const double u = cross2(a - x, d) / den;   // along the edge
    if (s > 1e-14 && u >= -1e-12 && u <= 1.0 + 1e-12) t = std::min(t, s);
  }
  return t;
}

TruncatedRegion horizon_geometry(const HorizonSpec& h, const Vec2& x, const ParentMesh& domain) {
  h.validate();
  if (!point_in_domain(domain, x)) throw InvalidArgument("horizon requested for a point outside the domain");
  const bool box = domain.domain.kind == DomainDescriptor::Kind::Box;
  TruncatedRegion reg;
  switch (h.kind) {
    case HorizonKind::Rect: {
      require(box, "rectangular horizons need a box domain");
      const Vec2 l(h.length, h.length);
      reg.kind = TruncatedRegion::Kind::Rect;
      reg.lo = (x - l).cwiseMax(domain.domain.lo);
      reg.hi = (x + l).cwiseMin(domain.domain.hi);
      break;
    }
    case HorizonKind::Circle:
      require(box, "circular horizons need a box domain");
      reg = clip_circle_to_box(x, h.length, domain.domain.lo, domain.domain.hi);
      break;
    case HorizonKind::BidirectionalSegments:
      reg.kind = TruncatedRegion::Kind::Segments;
      reg.anchor = x;
      reg.x0 = x.x() - ray_reach(domain, x, Vec2(-1, 0), h.length);
      reg.x1 = x.x() + ray_reach(domain, x, Vec2(1, 0), h.length);
      reg.y0 = x.y() - ray_reach(domain, x, Vec2(0, -1), h.length);
      reg.y1 = x.y() + ray_reach(domain, x, Vec2(0, 1), h.length);
      break;
    case HorizonKind::FullRegion: {
      const auto it = domain.region_outlines.find(h.region);
      require(it != domain.region_outlines.end(), "unknown region " + std::to_string(h.region));
      const Polygon& poly = it->second;
      bool axis_rect = poly.size() == 4;
      for (std::size_t i = 0; axis_rect && i < 4; ++i) {
        const Vec2 e = poly[(i + 1) % 4] - poly[i];
        axis_rect = e.x() == 0.0 || e.y() == 0.0;
      }
      if (axis_rect) {
        reg.kind = TruncatedRegion::Kind::Rect;
        reg.lo = reg.hi = poly[0];
        for (const auto& p : poly) {
          reg.lo = reg.lo.cwiseMin(p);
          reg.hi = reg.hi.cwiseMax(p);
        }
      } else {
        reg.kind = TruncatedRegion::Kind::Polygon;
        reg.vertices = poly;
        reg.edges.assign(poly.size(), RegionEdge{});
      }
      break;
    }
  }
  return reg;
}

}  // namespace nlfem
