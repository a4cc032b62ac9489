#include "curveswarm/curve_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "curveswarm/errors.hpp"

namespace curveswarm {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const CurveFamily& family) {
  std::visit(Overloaded{
                 [](const Circle& c) {
                   if (!(c.radius > 0.0)) throw InvalidArgument("circle radius must be positive");
                 },
                 [](const ConvexLimacon& l) {
                   if (!(l.a > 0.0)) throw InvalidArgument("limacon requires a > 0");
                   if (!(l.b >= 2.0 * l.a)) throw InvalidArgument("limacon requires b >= 2a for a convex simple curve");
                 },
                 [](const PolarRose& p) {
                   if (!(p.s > 0.0)) throw InvalidArgument("polar rose requires s > 0");
                   if (p.b < 1) throw InvalidArgument("polar rose requires an integer b >= 1");
                   if (!(p.a > 1.0)) throw InvalidArgument("polar rose requires a > 1 so that R(phi) > 0");
                 },
             },
             family);
}

// kappa * |d rho/d phi|, i.e. d mu / d phi.
double turning_rate(const RadiusDerivs& d) {
  return (2.0 * d.dr * d.dr - d.r * d.ddr + d.r * d.r) / (d.dr * d.dr + d.r * d.r);
}

double golden_max(const auto& f, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

std::vector<Complex> raw_offset(const PolarCurve& curve, double delta, OffsetSide side, int samples) {
  const double sign = side == OffsetSide::exterior ? 1.0 : -1.0;
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double phi = kTwoPi * j / samples;
    out.push_back(curve.point(phi) + sign * delta * curve.normal(phi));
  }
  return out;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation(Complex a, Complex b, Complex c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_pi(double angle) {
  double w = wrap_two_pi(angle + kPi) - kPi;
  if (w <= -kPi) w += kTwoPi;
  return w;
}

PolarCurve::PolarCurve(CurveFamily family, Complex center) : family_(family), center_(center) {
  validate(family_);

  const int n = kGridIntervals;
  const double h = kTwoPi / n;
  sigma_table_.assign(n + 1, 0.0);
  mu_table_.assign(n + 1, 0.0);

  double area_sum = 0.0;
  double curvature_sum = 0.0;
  double prev_arg = std::arg(tangent(0.0));
  mu_table_[0] = prev_arg;
  std::vector<double> abs_kappa(n);

  for (int j = 0; j < n; ++j) {
    const double lo = j * h;
    const double hi = (j + 1) * h;
    const double mid = 0.5 * (lo + hi);
    sigma_table_[j + 1] = sigma_table_[j] + simpson_speed(lo, hi);

    const RadiusDerivs dlo = radius_derivs(lo);
    const RadiusDerivs dmid = radius_derivs(mid);
    const RadiusDerivs dhi = radius_derivs(hi);
    area_sum += h / 6.0 * (dlo.r * dlo.r + 4.0 * dmid.r * dmid.r + dhi.r * dhi.r);
    curvature_sum += h / 6.0 * (turning_rate(dlo) + 4.0 * turning_rate(dmid) + turning_rate(dhi));

    const double next_arg = std::arg(tangent(hi));
    mu_table_[j + 1] = mu_table_[j] + wrap_pi(next_arg - prev_arg);
    prev_arg = next_arg;

    abs_kappa[j] = std::abs(curvature(lo));
  }
  perimeter_ = sigma_table_[n];
  area_ = 0.5 * area_sum;
  total_curvature_ = curvature_sum;

  const auto peak = std::max_element(abs_kappa.begin(), abs_kappa.end()) - abs_kappa.begin();
  const double centre = peak * h;
  kappa_max_ = std::max(abs_kappa[peak], golden_max([this](double p) { return std::abs(curvature(p)); },
                                                    centre - h, centre + h));
}

std::string PolarCurve::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Circle& c) { os << "circle(R=" << c.radius << ")"; },
                 [&](const ConvexLimacon& l) { os << "convex_limacon(a=" << l.a << ", b=" << l.b << ")"; },
                 [&](const PolarRose& p) { os << "polar_rose(a=" << p.a << ", b=" << p.b << ", s=" << p.s << ")"; },
             },
             family_);
  os << " at (" << center_.real() << ", " << center_.imag() << ")";
  return os.str();
}

RadiusDerivs PolarCurve::radius_derivs(double phi) const {
  return std::visit(Overloaded{
                        [](const Circle& c) { return RadiusDerivs{c.radius, 0.0, 0.0}; },
                        [phi](const ConvexLimacon& l) {
                          const double s = std::sin(phi);
                          return RadiusDerivs{l.b + l.a * s, l.a * std::cos(phi), -l.a * s};
                        },
                        [phi](const PolarRose& p) {
                          const double bp = p.b * phi;
                          const double c = std::cos(bp);
                          return RadiusDerivs{p.s * (p.a + c), -p.s * p.b * std::sin(bp), -p.s * p.b * p.b * c};
                        },
                    },
                    family_);
}

Complex PolarCurve::rho(double phi) const { return radius(phi) * std::polar(1.0, phi); }

Complex PolarCurve::rho_derivative(double phi) const {
  const RadiusDerivs d = radius_derivs(phi);
  return Complex{d.dr, d.r} * std::polar(1.0, phi);
}

double PolarCurve::speed(double phi) const {
  const RadiusDerivs d = radius_derivs(phi);
  return std::sqrt(d.dr * d.dr + d.r * d.r);
}

Complex PolarCurve::tangent(double phi) const {
  const Complex v = rho_derivative(phi);
  return v / std::abs(v);
}

Complex PolarCurve::normal(double phi) const { return -kI * tangent(phi); }

double PolarCurve::curvature(double phi) const {
  const RadiusDerivs d = radius_derivs(phi);
  const double q = d.dr * d.dr + d.r * d.r;
  return (2.0 * d.dr * d.dr - d.r * d.ddr + d.r * d.r) / (q * std::sqrt(q));
}

CurveFrame PolarCurve::frame(double phi) const {
  CurveFrame f;
  f.phi = phi;
  f.rho = rho(phi);
  const Complex v = rho_derivative(phi);
  f.speed = std::abs(v);
  f.tangent = v / f.speed;
  f.normal = -kI * f.tangent;
  f.mu = std::arg(f.tangent);
  f.kappa = curvature(phi);
  f.sigma = arc_length(wrap_two_pi(phi));
  return f;
}

double PolarCurve::tangent_slope(double phi) const {
  const RadiusDerivs d = radius_derivs(phi);
  const double den = d.dr * std::cos(phi) - d.r * std::sin(phi);
  if (std::abs(den) <= 1e-12) throw VerticalTangent("tangent is vertical at phi = " + std::to_string(phi));
  return (d.dr * std::sin(phi) + d.r * std::cos(phi)) / den;
}

double PolarCurve::tangent_slope_derivative(double phi) const {
  const RadiusDerivs d = radius_derivs(phi);
  const double den = d.dr * std::cos(phi) - d.r * std::sin(phi);
  if (std::abs(den) <= 1e-12) throw VerticalTangent("tangent is vertical at phi = " + std::to_string(phi));
  return (2.0 * d.dr * d.dr - d.r * d.ddr + d.r * d.r) / (den * den);
}

double PolarCurve::simpson_speed(double lo, double hi) const {
  return (hi - lo) / 6.0 * (speed(lo) + 4.0 * speed(0.5 * (lo + hi)) + speed(hi));
}

double PolarCurve::arc_length(double phi) const {
  phi = std::clamp(phi, 0.0, kTwoPi);
  const double h = kTwoPi / kGridIntervals;
  const int j = std::min(static_cast<int>(phi / h), kGridIntervals - 1);
  const double node = j * h;
  if (phi <= node) return sigma_table_[j];
  return sigma_table_[j] + simpson_speed(node, phi);
}

double PolarCurve::unwrapped_tangent_angle(double phi) const {
  phi = std::clamp(phi, 0.0, kTwoPi);
  const double h = kTwoPi / kGridIntervals;
  const int j = std::min(static_cast<int>(phi / h), kGridIntervals - 1);
  return mu_table_[j] + wrap_pi(std::arg(tangent(phi)) - std::arg(tangent(j * h)));
}

std::vector<Complex> PolarCurve::offset_boundary(double delta, OffsetSide side, int samples) const {
  if (!(delta > 0.0)) throw InvalidArgument("offset distance must be positive");
  if (samples < 3) throw InvalidArgument("offset boundary needs at least 3 samples");
  if (side == OffsetSide::interior) {
    const Assumption1Check check = check_assumption1(*this, delta);
    if (!check.ok) throw AssumptionViolated(check.reason);
  }
  return raw_offset(*this, delta, side, samples);
}

double PolarCurve::offset_perimeter(double delta, OffsetSide side) const {
  const double sign = side == OffsetSide::exterior ? 1.0 : -1.0;
  const auto integrand = [&](double phi) {
    const RadiusDerivs d = radius_derivs(phi);
    const double sp = std::sqrt(d.dr * d.dr + d.r * d.r);
    return sp * std::abs(1.0 + sign * delta * turning_rate(d) / sp);
  };
  const int n = kGridIntervals;
  const double h = kTwoPi / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double lo = j * h;
    sum += h / 6.0 * (integrand(lo) + 4.0 * integrand(lo + 0.5 * h) + integrand(lo + h));
  }
  return sum;
}

std::vector<Complex> PolarCurve::sample(int samples) const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) out.push_back(point(kTwoPi * j / samples));
  return out;
}

Assumption1Check check_assumption1(const PolarCurve& curve, double delta) {
  Assumption1Check check;
  check.min_turn_radius = curve.min_turn_radius();
  if (!(delta > 0.0)) {
    check.reason = "safe distance must be positive";
    return check;
  }
  if (!(delta < check.min_turn_radius)) {
    std::ostringstream os;
    os << "delta = " << delta << " is not below the minimum turn radius " << check.min_turn_radius;
    check.reason = os.str();
    return check;
  }
  for (const OffsetSide side : {OffsetSide::interior, OffsetSide::exterior}) {
    if (polyline_self_intersects(raw_offset(curve, delta, side, PolarCurve::kGridIntervals))) {
      check.reason = side == OffsetSide::interior ? "interior offset polyline self-intersects"
                                                  : "exterior offset polyline self-intersects";
      return check;
    }
  }
  check.ok = true;
  return check;
}

CurveReport curve_report(const PolarCurve& curve, double delta) {
  const Assumption1Check check = check_assumption1(curve, delta);
  if (!check.ok) throw AssumptionViolated(check.reason);

  CurveReport report;
  report.perimeter = curve.perimeter();
  report.area = curve.enclosed_area();
  report.kappa_max = curve.kappa_max();
  report.min_turn_radius = curve.min_turn_radius();
  report.total_signed_curvature = curve.total_signed_curvature();
  report.boundary_perimeters.exterior = curve.offset_perimeter(delta, OffsetSide::exterior);
  report.boundary_perimeters.interior = curve.offset_perimeter(delta, OffsetSide::interior);
  report.boundary_areas.exterior = shoelace_area(curve.offset_boundary(delta, OffsetSide::exterior));
  report.boundary_areas.interior = shoelace_area(curve.offset_boundary(delta, OffsetSide::interior));
  report.assumption1_ok = true;
  return report;
}

double polyline_length(const std::vector<Complex>& points) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += std::abs(points[(i + 1) % points.size()] - points[i]);
  }
  return total;
}

double shoelace_area(const std::vector<Complex>& points) {
  double twice = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    twice += cross(points[i], points[(i + 1) % points.size()]);
  }
  return 0.5 * twice;
}

// Sort-and-sweep over x extents; only segments whose x ranges overlap are
// tested exactly. Adjacent segments (sharing a vertex) are skipped.
bool polyline_self_intersects(const std::vector<Complex>& points) {
  const std::size_t n = points.size();
  if (n < 4) return false;

  struct Segment {
    std::size_t index;
    double xmin, xmax, ymin, ymax;
  };
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = points[i];
    const Complex b = points[(i + 1) % n];
    segs.push_back({i, std::min(a.real(), b.real()), std::max(a.real(), b.real()), std::min(a.imag(), b.imag()),
                    std::max(a.imag(), b.imag())});
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) { return l.xmin < r.xmin; });

  const auto adjacent = [n](std::size_t i, std::size_t j) {
    const std::size_t d = i > j ? i - j : j - i;
    return d <= 1 || d == n - 1;
  };

  std::vector<Segment> active;
  for (const Segment& s : segs) {
    std::erase_if(active, [&](const Segment& a) { return a.xmax < s.xmin; });
    for (const Segment& a : active) {
      if (adjacent(a.index, s.index)) continue;
      if (a.ymax < s.ymin || s.ymax < a.ymin) continue;
      if (segments_intersect(points[a.index], points[(a.index + 1) % n], points[s.index],
                             points[(s.index + 1) % n])) {
        return true;
      }
    }
    active.push_back(s);
  }
  return false;
}

}  // namespace curveswarm
