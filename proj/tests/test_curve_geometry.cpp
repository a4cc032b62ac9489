#include <cmath>
#include <random>

#include "curveswarm/curve_geometry.hpp"
#include "curveswarm/errors.hpp"
#include "doctest.h"

using namespace curveswarm;

namespace {

const PolarRose kRose{10.0, 6, 5.0};
const ConvexLimacon kLimacon{2.0, 4.5};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("radius derivatives per family") {
  const RadiusDerivs c = PolarCurve(Circle{10.0}).radius_derivs(1.3);
  CHECK(c.r == 10.0);
  CHECK(c.dr == 0.0);
  CHECK(c.ddr == 0.0);

  const RadiusDerivs l = PolarCurve(kLimacon).radius_derivs(kPi / 2);
  CHECK(l.r == doctest::Approx(6.5).epsilon(1e-15));
  CHECK(std::abs(l.dr) < 1e-15);
  CHECK(l.ddr == doctest::Approx(-2.0).epsilon(1e-15));

  const RadiusDerivs r = PolarCurve(kRose).radius_derivs(0.0);
  CHECK(r.r == 55.0);
  CHECK(r.dr == 0.0);
  CHECK(r.ddr == -180.0);
}

TEST_CASE("construction rejects invalid families") {
  CHECK_THROWS_AS(PolarCurve(ConvexLimacon{2.0, 3.9}), InvalidArgument);
  CHECK_THROWS_AS(PolarCurve(Circle{0.0}), InvalidArgument);
  CHECK_THROWS_AS(PolarCurve(PolarRose{0.5, 6, 5.0}), InvalidArgument);
  CHECK_THROWS_AS(PolarCurve(PolarRose{10.0, 0, 5.0}), InvalidArgument);
  CHECK_NOTHROW(PolarCurve(ConvexLimacon{2.0, 4.0}));
}

TEST_CASE("R and its derivatives are periodic") {
  for (const CurveFamily& f : {CurveFamily{Circle{3.0}}, CurveFamily{kLimacon}, CurveFamily{kRose}}) {
    const PolarCurve c(f);
    const RadiusDerivs a = c.radius_derivs(0.0);
    const RadiusDerivs b = c.radius_derivs(std::nextafter(kTwoPi, 0.0));
    CHECK(std::abs(a.r - b.r) < 1e-12);
    CHECK(std::abs(a.dr - b.dr) < 1e-10);
    CHECK(std::abs(a.ddr - b.ddr) < 1e-9);
  }
}

TEST_CASE("frame and curvature") {
  const PolarCurve circle(Circle{10.0});
  for (double phi : {0.0, 0.4, 2.5, 5.9}) CHECK(circle.curvature(phi) == doctest::Approx(0.1).epsilon(1e-14));

  // Hand evaluation at phi = pi/2: (b^2 + 2a^2 + 3ab) / (a + b)^3.
  CHECK(PolarCurve(kLimacon).curvature(kPi / 2) == doctest::Approx(0.20118343195266272).epsilon(1e-12));

  CHECK(std::abs(PolarCurve(kRose).kappa_max() - 0.0776) <= 1e-3);

  const PolarCurve rose(kRose);
  for (double phi : {0.0, 0.3, 1.7, 4.2}) {
    const CurveFrame f = rose.frame(phi);
    CHECK(std::abs(std::abs(f.tangent) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(f.normal) - 1.0) < 1e-12);
    CHECK(f.normal == Complex(0.0, -1.0) * f.tangent);
    CHECK(f.speed == doctest::Approx(std::abs(rose.rho_derivative(phi))));
  }
  CHECK(rose.frame(0.0).sigma == 0.0);
}

TEST_CASE("tangent slope") {
  const PolarCurve circle(Circle{10.0});
  CHECK_THROWS_AS(circle.tangent_slope(0.0), VerticalTangent);
  CHECK(std::abs(circle.tangent_slope(kPi / 2)) < 1e-15);

  // Central difference of rho(phi) = (b + a sin phi) e^{i phi}.
  CHECK(PolarCurve(kLimacon).tangent_slope(kPi / 4) == doctest::Approx(-1.6285393609671663).epsilon(1e-6));
}

TEST_CASE("slope identity: (1 + f^2) / f' = 1 / (kappa * speed)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (const CurveFamily& fam : {CurveFamily{kLimacon}, CurveFamily{kRose}, CurveFamily{PolarRose{10.0, 6, 1.0}}}) {
    const PolarCurve c(fam);
    int checked = 0;
    while (checked < 1000) {
      const double phi = angle(rng);
      double f = 0.0;
      double df = 0.0;
      try {
        f = c.tangent_slope(phi);
        df = c.tangent_slope_derivative(phi);
      } catch (const VerticalTangent&) {
        continue;
      }
      if (std::abs(c.curvature(phi)) < 1e-6) continue;
      const double lhs = (1.0 + f * f) / df;
      const double rhs = 1.0 / (c.curvature(phi) * c.speed(phi));
      REQUIRE(rel(lhs, rhs) < 1e-6);
      ++checked;
    }
  }
}

TEST_CASE("tangent matches finite differences of rho") {
  const double h = 1e-6;
  for (const CurveFamily& fam : {CurveFamily{kLimacon}, CurveFamily{kRose}}) {
    const PolarCurve c(fam);
    for (int j = 0; j < 200; ++j) {
      const double phi = 0.031 + j * kTwoPi / 200.0;
      const Complex d = (c.rho(phi + h) - c.rho(phi - h)) / (2.0 * h);
      CHECK(std::abs(d / std::abs(d) - c.tangent(phi)) < 1e-6);
    }
  }
}

TEST_CASE("curvature matches d mu / d sigma") {
  for (const CurveFamily& fam : {CurveFamily{kLimacon}, CurveFamily{kRose}}) {
    const PolarCurve c(fam);
    const double h = 1e-4;
    for (int j = 1; j < 100; ++j) {
      const double phi = j * kTwoPi / 100.0;
      const double dmu = c.unwrapped_tangent_angle(phi + h) - c.unwrapped_tangent_angle(phi - h);
      const double dsigma = c.arc_length(phi + h) - c.arc_length(phi - h);
      CHECK(std::abs(dmu / dsigma - c.curvature(phi)) < 1e-4);
    }
  }
}

TEST_CASE("arc length") {
  const PolarCurve circle(Circle{10.0});
  CHECK(std::abs(circle.arc_length(kPi) - 10.0 * kPi) < 1e-9);
  CHECK(circle.arc_length(0.0) == 0.0);

  const PolarCurve rose(kRose);
  CHECK(rel(rose.arc_length(kTwoPi), 340.82) < 5e-3);
  CHECK(rose.arc_length(kTwoPi) == doctest::Approx(rose.perimeter()).epsilon(1e-14));

  double prev = -1.0;
  for (int j = 0; j <= 5000; ++j) {
    const double s = rose.arc_length(j * kTwoPi / 5000.0);
    REQUIRE(s > prev);
    prev = s;
  }

  // Additivity against an independent composite Simpson on [phi1, phi2].
  const double phi1 = 1.1;
  const double phi2 = 3.7;
  const int m = 20000;
  const double step = (phi2 - phi1) / m;
  double piece = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    piece += w * rose.speed(phi1 + j * step);
  }
  piece *= step / 3.0;
  CHECK(std::abs(rose.arc_length(phi1) + piece - rose.arc_length(phi2)) < 1e-9);
}

TEST_CASE("enclosed area") {
  CHECK(std::abs(PolarCurve(Circle{10.0}).enclosed_area() - 100.0 * kPi) < 1e-9);
  CHECK(rel(PolarCurve(kRose).enclosed_area(), 7893.3) < 5e-3);
  // Shoelace area of a 1e5-point polyline of the limacon.
  CHECK(rel(PolarCurve(kLimacon).enclosed_area(), 69.90043648397757) < 1e-4);
}

TEST_CASE("isoperimetric inequality") {
  for (const CurveFamily& fam : {CurveFamily{kLimacon}, CurveFamily{kRose}, CurveFamily{PolarRose{10.0, 6, 1.0}}}) {
    const PolarCurve c(fam);
    CHECK(c.perimeter() * c.perimeter() > 4.0 * kPi * c.enclosed_area() * (1.0 + 1e-6));
    CHECK(c.perimeter() >= kTwoPi / c.kappa_max());
  }
  const PolarCurve circle(Circle{7.5});
  CHECK(rel(circle.perimeter() * circle.perimeter(), 4.0 * kPi * circle.enclosed_area()) < 1e-9);
  CHECK(rel(circle.perimeter(), kTwoPi / circle.kappa_max()) < 1e-9);
}

TEST_CASE("offset boundaries") {
  const PolarCurve circle(Circle{10.0});
  double worst = 0.0;
  for (const Complex& z : circle.offset_boundary(2.0, OffsetSide::exterior)) worst = std::max(worst, std::abs(std::abs(z) - 12.0));
  CHECK(worst < 1e-9);

  const PolarCurve rose(kRose);
  CHECK(rel(polyline_length(rose.offset_boundary(12.0, OffsetSide::exterior)), 416.21) < 1e-2);
  CHECK(rel(polyline_length(rose.offset_boundary(12.0, OffsetSide::interior)), 265.43) < 1e-2);
  CHECK_THROWS_AS(rose.offset_boundary(14.0, OffsetSide::interior), AssumptionViolated);
  CHECK_NOTHROW(rose.offset_boundary(14.0, OffsetSide::exterior));

  for (const double delta : {1.0, 5.0, 12.0}) {
    CHECK(rel(rose.offset_perimeter(delta, OffsetSide::exterior), rose.perimeter() + kTwoPi * delta) < 1e-2);
    CHECK(rel(rose.offset_perimeter(delta, OffsetSide::interior), rose.perimeter() - kTwoPi * delta) < 1e-2);
  }
}

TEST_CASE("offset simplicity check") {
  const Assumption1Check rose = check_assumption1(PolarCurve(kRose), 12.0);
  CHECK(rose.ok);
  CHECK(std::abs(rose.min_turn_radius - 12.87) <= 0.01);

  const Assumption1Check big = check_assumption1(PolarCurve(Circle{10.0}), 15.0);
  CHECK_FALSE(big.ok);
  CHECK_FALSE(big.reason.empty());
  CHECK(check_assumption1(PolarCurve(Circle{10.0}), 5.0).ok);
}

TEST_CASE("polyline helpers") {
  const std::vector<Complex> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(shoelace_area(square) == doctest::Approx(1.0));
  CHECK(polyline_length(square) == doctest::Approx(4.0));
  CHECK_FALSE(polyline_self_intersects(square));
  const std::vector<Complex> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(polyline_self_intersects(bowtie));
}

TEST_CASE("curve report") {
  const PolarCurve rose(kRose);
  const CurveReport r = curve_report(rose, 12.0);
  CHECK(r.assumption1_ok);
  CHECK(rel(r.boundary_areas.exterior, 12435.4) < 1e-2);
  CHECK(rel(r.boundary_areas.interior, 4255.7) < 1e-2);
  CHECK(rel(r.boundary_perimeters.exterior + r.boundary_perimeters.interior, 2.0 * r.perimeter) < 1e-2);
  CHECK(rel(r.boundary_areas.exterior - r.boundary_areas.interior, 2.0 * 12.0 * r.perimeter) < 1e-2);
  CHECK_THROWS_AS(curve_report(rose, 14.0), AssumptionViolated);

  for (const CurveFamily& fam :
       {CurveFamily{Circle{10.0}}, CurveFamily{kLimacon}, CurveFamily{PolarRose{10.0, 6, 1.0}}, CurveFamily{kRose}}) {
    CHECK(std::abs(PolarCurve(fam).total_signed_curvature() - kTwoPi) < 1e-6);
  }

  const CurveReport c = curve_report(PolarCurve(Circle{10.0}), 5.0);
  CHECK(std::abs(c.boundary_perimeters.exterior - 30.0 * kPi) < 1e-6);
  CHECK(std::abs(c.boundary_perimeters.interior - 10.0 * kPi) < 1e-6);
}
