#pragma once

#include "nlfem/core.hpp"
#include "nlfem/geometry_mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlfem {

enum class KernelKind { BiExponential, PowerLaw, RadialExponential, Rational, BidirectionalPowerLaw };

/// Attenuation function K(x, x'). `a` and `b` hold the variant's parameters:
/// BiExponential(tau), PowerLaw(alpha), RadialExponential(amplitude tau1,
/// decay length tau2), Rational(tau1, tau2), BidirectionalPowerLaw(alpha).
struct KernelSpec {
  KernelKind kind = KernelKind::BiExponential;
  double a = 0.0;
  double b = 0.0;

  static KernelSpec bi_exponential(double tau);
  static KernelSpec power_law(double alpha);
  static KernelSpec radial_exponential(double tau1, double tau2);
  static KernelSpec rational(double tau1, double tau2);
  static KernelSpec bidirectional(double alpha);

  bool singular() const { return kind == KernelKind::PowerLaw || kind == KernelKind::BidirectionalPowerLaw; }
  double alpha() const;
  /// Throws InvalidArgument when a parameter leaves its admissible range.
  void validate() const;
  std::string describe() const;
};

double kernel_eval(const KernelSpec& spec, const Vec2& x, const Vec2& xp);

/// Kernel split into a bounded factor and per-axis |x - x'|^(-alpha) factors.
struct SplitFactors {
  double smooth = 0.0;
  std::optional<double> exponent_x;
  std::optional<double> exponent_y;
};
SplitFactors kernel_split_factors(const KernelSpec& spec, const Vec2& x, const Vec2& xp);

/// Bounded factor of a singular kernel; constant for the supported variants.
double singular_smooth_part(const KernelSpec& spec);

enum class HorizonKind { Rect, Circle, BidirectionalSegments, FullRegion };

struct HorizonSpec {
  HorizonKind kind = HorizonKind::Rect;
  double length = 0.0;  // half width, radius or half length
  int region = 0;       // FullRegion only

  static HorizonSpec rect(double half_width);
  static HorizonSpec circle(double radius);
  static HorizonSpec segments(double half_length);
  static HorizonSpec full_region(int region);
  void validate() const;
  std::string describe() const;
};

/// Edge i of a region runs from vertex i to vertex i+1; arc edges bulge
/// outward along the circle (center, radius).
struct RegionEdge {
  bool arc = false;
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Horizon intersected with the material domain.
struct TruncatedRegion {
  enum class Kind { Empty, Rect, Polygon, Segments };
  Kind kind = Kind::Empty;
  Vec2 lo = Vec2::Zero();  // Rect
  Vec2 hi = Vec2::Zero();
  std::vector<Vec2> vertices;  // Polygon, counter-clockwise
  std::vector<RegionEdge> edges;
  Vec2 anchor = Vec2::Zero();  // Segments: the point the legs pass through
  double x0 = 0.0, x1 = 0.0;   // Segments: x-leg extent
  double y0 = 0.0, y1 = 0.0;   // Segments: y-leg extent

  /// Exact measure: area for 2D regions, total leg length for segments.
  double measure() const;
};

TruncatedRegion horizon_geometry(const HorizonSpec& h, const Vec2& x, const ParentMesh& domain);

/// Intersection of the disc (c, r) with the box [lo, hi].
TruncatedRegion clip_circle_to_box(const Vec2& c, double r, const Vec2& lo, const Vec2& hi);

/// Largest t in [0, length] such that x + s d stays inside the domain for all s < t.
double ray_reach(const ParentMesh& domain, const Vec2& x, const Vec2& d, double length);

}  // namespace nlfem
