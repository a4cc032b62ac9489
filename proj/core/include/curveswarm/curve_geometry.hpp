#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace curveswarm {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle to [0, 2pi).
double wrap_two_pi(double angle);

/// Wraps an angle to (-pi, pi].
double wrap_pi(double angle);

/// R(phi) = radius.
struct Circle {
  double radius = 1.0;
};

/// R(phi) = b + a sin(phi), convex and simple when b >= 2a.
struct ConvexLimacon {
  double a = 1.0;
  double b = 2.0;
};

/// R(phi) = s (a + cos(b phi)); b is a positive integer so the curve closes
/// after one turn, a > 1 keeps R positive.
struct PolarRose {
  double a = 2.0;
  int b = 1;
  double s = 1.0;
};

using CurveFamily = std::variant<Circle, ConvexLimacon, PolarRose>;

struct RadiusDerivs {
  double r = 0.0;
  double dr = 0.0;
  double ddr = 0.0;
};

/// Frame of the curve at a parameter value. `rho` is relative to the center.
struct CurveFrame {
  double phi = 0.0;
  Complex rho;
  Complex tangent;  // unit
  Complex normal;   // unit exterior normal, -i * tangent
  double mu = 0.0;  // arg(tangent), wrapped to (-pi, pi]
  double kappa = 0.0;
  double sigma = 0.0;
  double speed = 0.0;  // |d rho / d phi|
};

enum class OffsetSide { exterior, interior };

struct Assumption1Check {
  bool ok = false;
  double min_turn_radius = 0.0;
  std::string reason;
};

struct SidePair {
  double exterior = 0.0;
  double interior = 0.0;
};

struct CurveReport {
  double perimeter = 0.0;
  double area = 0.0;
  double kappa_max = 0.0;
  double min_turn_radius = 0.0;
  double total_signed_curvature = 0.0;
  SidePair boundary_perimeters;
  SidePair boundary_areas;
  bool assumption1_ok = false;
};

/// Simple closed polar curve rho(phi) = R(phi) e^{i phi} about `center`,
/// traversed anticlockwise.
///
/// Construction validates the family parameters and tabulates cumulative arc
/// length, unwrapped tangent angle and curvature extrema on a uniform grid of
/// `kGridIntervals` intervals. The object is immutable afterwards.
class PolarCurve {
 public:
  static constexpr int kGridIntervals = 8192;

  explicit PolarCurve(CurveFamily family, Complex center = {});

  const CurveFamily& family() const { return family_; }
  Complex center() const { return center_; }
  std::string describe() const;

  RadiusDerivs radius_derivs(double phi) const;
  double radius(double phi) const { return radius_derivs(phi).r; }

  /// Displacement from the center.
  Complex rho(double phi) const;
  /// Absolute position center + rho(phi).
  Complex point(double phi) const { return center_ + rho(phi); }
  Complex rho_derivative(double phi) const;
  double speed(double phi) const;
  Complex tangent(double phi) const;
  Complex normal(double phi) const;
  double curvature(double phi) const;

  CurveFrame frame(double phi) const;

  /// Slope dy/dx of the tangent line; throws VerticalTangent when the
  /// denominator R' cos(phi) - R sin(phi) vanishes.
  double tangent_slope(double phi) const;
  /// d/dphi of tangent_slope; same domain restriction.
  double tangent_slope_derivative(double phi) const;

  /// Arc length from phi = 0, phi in [0, 2pi].
  double arc_length(double phi) const;
  double perimeter() const { return perimeter_; }
  double enclosed_area() const { return area_; }

  /// max |kappa| over the curve.
  double kappa_max() const { return kappa_max_; }
  /// min 1/|kappa| over the curve.
  double min_turn_radius() const { return 1.0 / kappa_max_; }
  /// Integral of kappa d sigma over one traversal.
  double total_signed_curvature() const { return total_curvature_; }
  /// Tangent angle unwrapped continuously from phi = 0.
  double unwrapped_tangent_angle(double phi) const;

  /// Points center + rho(phi_j) +/- delta * normal(phi_j) on a uniform grid
  /// (closing point not repeated). Interior offsets must pass check_assumption1.
  std::vector<Complex> offset_boundary(double delta, OffsetSide side,
                                       int samples = kGridIntervals) const;
  /// Length of the offset curve, by quadrature of |d/dphi (rho +/- delta n)|.
  double offset_perimeter(double delta, OffsetSide side) const;

  /// Uniform samples center + rho(phi_j), j = 0..samples-1.
  std::vector<Complex> sample(int samples = kGridIntervals) const;

 private:
  double simpson_speed(double lo, double hi) const;

  CurveFamily family_;
  Complex center_;
  std::vector<double> sigma_table_;  // cumulative arc length at grid nodes
  std::vector<double> mu_table_;     // unwrapped tangent angle at grid nodes
  double perimeter_ = 0.0;
  double area_ = 0.0;
  double kappa_max_ = 0.0;
  double total_curvature_ = 0.0;
};

/// Tests the offset-curve simplicity condition for safe distance `delta`.
Assumption1Check check_assumption1(const PolarCurve& curve, double delta);

/// Fills every CurveReport field; throws AssumptionViolated when
/// check_assumption1 fails.
CurveReport curve_report(const PolarCurve& curve, double delta);

/// Polyline helpers (closed polylines, last point joins the first).
double polyline_length(const std::vector<Complex>& points);
double shoelace_area(const std::vector<Complex>& points);
bool polyline_self_intersects(const std::vector<Complex>& points);

}  // namespace curveswarm
