#include "nlfem/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlfem;

namespace {

// Area of a disc of radius r cut by one straight line at distance d < r from its centre.
double disc_minus_cap(double r, double d) {
  return M_PI * r * r - (r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d));
}

}  // namespace

TEST_CASE("kernel values follow their closed forms and are symmetric") {
  const Vec2 x(0.3, 0.4), y(0.35, 0.31);
  const double dx = 0.05, dy = 0.09, r = std::hypot(dx, dy);
  const KernelSpec be = KernelSpec::bi_exponential(0.002);
  CHECK(kernel_eval(be, x, y) == doctest::Approx(std::exp(-(dx * dx + dy * dy) / 0.002) / (M_PI * 0.002)));
  const KernelSpec pl = KernelSpec::power_law(0.6);
  const double g = std::tgamma(0.4);
  CHECK(kernel_eval(pl, x, y) == doctest::Approx(std::pow(dx * dy, -0.6) / (g * g)));
  const KernelSpec re = KernelSpec::radial_exponential(1e-3, 1e-2);
  CHECK(kernel_eval(re, x, y) == doctest::Approx(std::exp(-r / 1e-2) / 1e-3));
  const KernelSpec ra = KernelSpec::rational(100, 5000);
  CHECK(kernel_eval(ra, x, y) == doctest::Approx(1.0 / (100 * r * r + 5000)));
  for (const KernelSpec& k : {be, pl, re, ra}) CHECK(kernel_eval(k, x, y) == kernel_eval(k, y, x));
}

TEST_CASE("bidirectional kernel lives on the two legs through the point") {
  const KernelSpec k = KernelSpec::bidirectional(0.4);
  const Vec2 x(0.1, 0.2);
  CHECK(kernel_eval(k, x, Vec2(0.3, 0.5)) == 0.0);
  const double leg = 0.5 / (2.0 * std::tgamma(0.6));
  CHECK(kernel_eval(k, x, Vec2(0.3, 0.2)) == doctest::Approx(leg * std::pow(0.2, -0.4)));
  CHECK(kernel_eval(k, x, Vec2(0.1, 0.1)) == doctest::Approx(leg * std::pow(0.1, -0.4)));
  CHECK_THROWS_AS(kernel_eval(k, x, x), DomainError);
}

TEST_CASE("power-law kernel refuses evaluation on its singular lines") {
  const KernelSpec k = KernelSpec::power_law(0.3);
  CHECK_THROWS_AS(kernel_eval(k, Vec2(0.1, 0.1), Vec2(0.1, 0.5)), DomainError);
  CHECK_THROWS_AS(kernel_eval(k, Vec2(0.1, 0.1), Vec2(0.4, 0.1)), DomainError);
}

TEST_CASE("split factors recombine into the kernel value") {
  const Vec2 x(0.2, 0.7), y(0.45, 0.61);
  for (double a : {0.2, 0.5, 0.9}) {
    const KernelSpec k = KernelSpec::power_law(a);
    const SplitFactors f = kernel_split_factors(k, x, y);
    REQUIRE(f.exponent_x);
    REQUIRE(f.exponent_y);
    const double v = f.smooth * std::pow(std::abs(x.x() - y.x()), -*f.exponent_x) *
                     std::pow(std::abs(x.y() - y.y()), -*f.exponent_y);
    CHECK(v == doctest::Approx(kernel_eval(k, x, y)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(singular_smooth_part(KernelSpec::bi_exponential(0.1)), InvalidArgument);
}

TEST_CASE("kernel and horizon parameters are validated") {
  CHECK_THROWS_AS(KernelSpec::bi_exponential(0.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::power_law(1.5).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::power_law(0.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::bidirectional(1.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::radial_exponential(1.0, -1.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::rational(0.0, 1.0).validate(), InvalidArgument);
  CHECK_NOTHROW(KernelSpec::power_law(0.6).validate());
  CHECK_THROWS_AS(HorizonSpec::rect(0.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(HorizonSpec::circle(-1.0).validate(), InvalidArgument);
  CHECK_FALSE(KernelSpec::power_law(0.3).describe().empty());
}

TEST_CASE("rectangular horizons are clamped to the domain box") {
  const ParentMesh m = build_structured_quad_mesh(1.0, 1.0, 4, 4, 1);
  const TruncatedRegion in = horizon_geometry(HorizonSpec::rect(0.2), Vec2(0.5, 0.5), m);
  CHECK(in.kind == TruncatedRegion::Kind::Rect);
  CHECK(in.measure() == doctest::Approx(0.16));
  const TruncatedRegion corner = horizon_geometry(HorizonSpec::rect(0.2), Vec2(0.05, 0.9), m);
  CHECK((corner.lo - Vec2(0.0, 0.7)).norm() < 1e-15);
  CHECK((corner.hi - Vec2(0.25, 1.0)).norm() < 1e-15);
  CHECK(corner.measure() == doctest::Approx(0.25 * 0.3));
  CHECK_THROWS_AS(horizon_geometry(HorizonSpec::rect(0.2), Vec2(1.5, 0.5), m), InvalidArgument);
}

TEST_CASE("circular horizons clipped by the box have the exact cut-disc area") {
  const ParentMesh m = build_structured_quad_mesh(1.0, 1.0, 4, 4, 1);
  const double r = 0.2;
  CHECK(horizon_geometry(HorizonSpec::circle(r), Vec2(0.5, 0.5), m).measure() ==
        doctest::Approx(M_PI * r * r).epsilon(1e-12));
  for (double d : {0.0, 0.05, 0.13, 0.199}) {
    const TruncatedRegion reg = horizon_geometry(HorizonSpec::circle(r), Vec2(d, 0.5), m);
    CHECK(reg.measure() == doctest::Approx(disc_minus_cap(r, d)).epsilon(1e-12));
  }
  CHECK(horizon_geometry(HorizonSpec::circle(r), Vec2(0.0, 0.0), m).measure() ==
        doctest::Approx(0.25 * M_PI * r * r).epsilon(1e-12));
}

TEST_CASE("truncated area never grows as the point approaches the boundary") {
  const ParentMesh m = build_structured_quad_mesh(1.0, 1.0, 4, 4, 1);
  for (const HorizonSpec& h : {HorizonSpec::rect(0.25), HorizonSpec::circle(0.25)}) {
    for (const Vec2& dir : {Vec2(1, 0), Vec2(0, -1), Vec2(1, 1).normalized(), Vec2(-0.3, 1).normalized()}) {
      double prev = 1e300;
      for (int k = 0; k <= 200; ++k) {
        const Vec2 x = Vec2(0.5, 0.5) + (0.5 * k / 200.0) * dir;
        if (!point_in_domain(m, x)) break;
        const double a = horizon_geometry(h, x, m).measure();
        CHECK(a <= prev + 1e-14);
        prev = a;
      }
    }
  }
}

TEST_CASE("bidirectional legs stop at the first boundary crossing") {
  const ParentMesh ann = build_annulus_mesh(0.3, 0.5, 4, 64);
  const Vec2 x(0.4, 0.0);
  const TruncatedRegion reg = horizon_geometry(HorizonSpec::segments(0.2), x, ann);
  CHECK(reg.kind == TruncatedRegion::Kind::Segments);
  CHECK(reg.x1 == doctest::Approx(0.5).epsilon(1e-12));  // outer ring node at angle 0
  CHECK(reg.x0 == doctest::Approx(0.3).epsilon(1e-12));  // inner ring, not the far side of the hole
  CHECK(reg.y1 == doctest::Approx(0.2));
  CHECK(reg.y0 == doctest::Approx(-0.2));
  CHECK(reg.measure() == doctest::Approx(0.2 + 0.4));
}

TEST_CASE("full-region horizons return the region outline") {
  const ParentMesh m = build_inclusion_mesh(1.0, Vec2(0.5, 0.5), 0.15, 32, 3, 4, 1.2);
  const TruncatedRegion reg = horizon_geometry(HorizonSpec::full_region(1), Vec2(0.5, 0.5), m);
  CHECK(reg.kind == TruncatedRegion::Kind::Polygon);
  CHECK(reg.measure() == doctest::Approx(polygon_area(m.region_outlines.at(1))));
  CHECK_THROWS_AS(horizon_geometry(HorizonSpec::full_region(7), Vec2(0.5, 0.5), m), InvalidArgument);
}
