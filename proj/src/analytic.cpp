#include "sawdil/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "sawdil/errors.hpp"

namespace sawdil {
namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

constexpr double kDeg = pi / 180.0;
constexpr double kQuadTolerance = 1e-12;
// Gauss-Kronrod reports an error floor near 1e-14 relative; asking for less
// makes it subdivide into roundoff.
constexpr double kKronrodTolerance = 1e-10;
// A quadrature is rejected when its error estimate exceeds both bounds:
// relative to the L1 norm, and absolute (every law here has O(1) mass).
constexpr double kAcceptError = 1e-9;
constexpr double kAcceptAbsolute = 1e-11;

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  return rule;
}

void check_accuracy(const char* what, double value, double error, double l1) {
  if (!(error <= std::max(kAcceptError * l1, kAcceptAbsolute)) || !std::isfinite(value)) {
    throw AccuracyError(std::string("quadrature did not converge: ") + what, value, error);
  }
}

template <class F>
double tanh_sinh_integral(F f, double a, double b, const char* what) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double v = tanh_sinh_rule().integrate(f, a, b, kQuadTolerance, &error, &l1);
  check_accuracy(what, v, error, l1);
  return v;
}

template <class F>
double half_line_integral(F f, const char* what) {
  double error = 0.0;
  double l1 = 0.0;
  const double v = exp_sinh_rule().integrate(f, 0.0, std::numeric_limits<double>::infinity(), kQuadTolerance,
                                             &error, &l1);
  check_accuracy(what, v, error, l1);
  return v;
}

template <class F>
double kronrod_integral(F f, double a, double b, const char* what) {
  double error = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, kKronrodTolerance,
                                                                                 &error, &l1);
  check_accuracy(what, v, error, l1);
  return v;
}

// log(cosh(y) + c) for |c| < 1 without overflow.
double log_cosh_plus(double y, double c) {
  const double a = std::fabs(y);
  const double e = std::exp(-a);
  return a - std::numbers::ln2 + std::log1p(e * e + 2.0 * c * e);
}

// log(1 + exp(l)) without overflow.
double log1p_exp(double l) { return l > 0 ? l + std::log1p(std::exp(-l)) : std::log1p(std::exp(l)); }

// Principal z^(-1/3) with -0.0 imaginary parts read as boundary values
// from above.
cplx upper(cplx z) { return {z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}; }

// Coefficients of (1 - y)^(-2/3) = sum a_k y^k.
double next_coefficient(double a, int k) { return a * (2.0 / 3.0 + k) / (k + 1); }

const cplx kRot2 = std::polar(1.0, -2.0 * pi / 3.0);  // e^(-2 pi i / 3)
const cplx kRot4 = std::polar(1.0, -4.0 * pi / 3.0);  // e^(-4 pi i / 3)

// int_0^s (u (2 - u))^(-2/3) du for 0 <= s <= 1: distance from the nearer
// of -1, 1 measured inside (-1, 1).
double inner_segment(double lo, double hi) {
  return tanh_sinh_integral([](double u) { return std::pow(u * (2.0 - u), -2.0 / 3.0); }, lo, hi,
                            "Schwarz-Christoffel inner segment");
}

// int over t in [lo, hi] of (t (t + 2))^(-2/3), i.e. |w^2 - 1|^(-2/3) at
// |w| = 1 + t.
double outer_segment(double lo, double hi) {
  return tanh_sinh_integral([](double t) { return std::pow(t * (t + 2.0), -2.0 / 3.0); }, lo, hi,
                            "Schwarz-Christoffel outer segment");
}

// F on the real axis, as boundary values from above.
cplx sc_F_real(double x) {
  if (std::fabs(x) >= 3.0) return sc_F_series(cplx(x, 0.0));
  if (x >= 1.0) return sc_F_series(cplx(3.0, 0.0)) + outer_segment(x - 1.0, 2.0);
  const cplx f1 = sc_F_series(cplx(3.0, 0.0)) + outer_segment(0.0, 2.0);
  if (x >= -1.0) {
    double seg = 0.0;
    if (x >= 0.0) {
      seg = inner_segment(0.0, 1.0 - x);
    } else {
      seg = inner_segment(0.0, 1.0) + (inner_segment(0.0, 1.0) - inner_segment(0.0, 1.0 + x));
    }
    return f1 + kRot2 * seg;
  }
  // -3 < x < -1, with s = -1 - w.
  return sc_F_series(cplx(-3.0, 0.0)) - kRot4 * outer_segment(-1.0 - x, 2.0);
}

cplx sc_integrand(cplx w) { return std::pow(w + 1.0, -2.0 / 3.0) * std::pow(w - 1.0, -2.0 / 3.0); }

double angle_rad(double deg) { return deg * kDeg; }

double wrap_unit(double c) {
  c = std::fmod(c, 1.0);
  return c < 0 ? c + 1.0 : c;
}

}  // namespace

const char* to_string(Axis a) { return a == Axis::native ? "native" : "polar_angle"; }

Axis axis_from_string(const std::string& name) {
  if (name == "native") return Axis::native;
  if (name == "polar_angle" || name == "polar") return Axis::polar_angle;
  throw ConfigError("unknown axis: " + name);
}

// ---------------------------------------------------------------------------

PanelIntegral::PanelIntegral(std::function<double(double)> f, double a, double b, int panels)
    : f_(std::move(f)), a_(a), b_(b) {
  if (!(b > a) || panels < 2) throw InvalidArgument("panel integral needs b > a and at least two panels");
  h_ = (b - a) / panels;
  cumulative_.assign(static_cast<std::size_t>(panels) + 1, 0.0);
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h_;
    const double hi = k == panels - 1 ? b : a + (k + 1) * h_;
    double piece = 0.0;
    if (k == 0 || k == panels - 1) {
      piece = end_panel(lo, hi);
    } else {
      piece = boost::math::quadrature::gauss<double, 20>::integrate(f_, lo, hi);
    }
    cumulative_[static_cast<std::size_t>(k) + 1] = cumulative_[static_cast<std::size_t>(k)] + piece;
  }
}

double PanelIntegral::end_panel(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  // On slivers the adaptive error estimate is dominated by roundoff in the
  // abscissas, while the bounded integrand is effectively polynomial.
  if (hi - lo < h_ / 64) return boost::math::quadrature::gauss<double, 20>::integrate(f_, lo, hi);
  return kronrod_integral(f_, lo, hi, "end panel");
}

double PanelIntegral::integral_to(double w) const {
  if (!(w > a_)) return 0.0;
  if (w >= b_) return total();
  const int panels = static_cast<int>(cumulative_.size()) - 1;
  const int k = std::clamp(static_cast<int>((w - a_) / h_), 0, panels - 1);
  if (k == 0) return end_panel(a_, w);
  if (k == panels - 1) return total() - end_panel(w, b_);
  const double lo = a_ + k * h_;
  return cumulative_[static_cast<std::size_t>(k)] + boost::math::quadrature::gauss<double, 20>::integrate(f_, lo, w);
}

// ---------------------------------------------------------------------------

cplx sc_F_series(cplx z) {
  z = upper(z);
  if (std::abs(z) < 3.0 || z.imag() < 0) throw UnsupportedRegion("series needs |z| >= 3 and Im z >= 0");
  const cplx y = 1.0 / (z * z);
  cplx power = 1.0;
  cplx sum = 0.0;
  double a = 1.0;
  for (int k = 0; k < 200; ++k) {
    const cplx term = a * power / (1.0 / 3.0 + 2.0 * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    a = next_coefficient(a, k);
    power *= y;
  }
  return std::pow(z, -1.0 / 3.0) * sum;
}

cplx sc_F(cplx z) {
  z = upper(z);
  if (z.imag() < 0) throw UnsupportedRegion("F is only defined on the closed upper half plane");
  if (std::abs(z) >= 3.0) return sc_F_series(z);
  if (z.imag() == 0.0) return sc_F_real(z.real());
  // Straight path from z out to radius 3.
  const cplx z3 = 3.0 * z / std::abs(z);
  const cplx dz = z3 - z;
  auto re = [&](double s) { return (sc_integrand(z + s * dz) * dz).real(); };
  auto im = [&](double s) { return (sc_integrand(z + s * dz) * dz).imag(); };
  const double r = tanh_sinh_integral(re, 0.0, 1.0, "Schwarz-Christoffel radial path");
  const double i = tanh_sinh_integral(im, 0.0, 1.0, "Schwarz-Christoffel radial path");
  return sc_F_series(z3) + cplx(r, i);
}

double sc_phi(double v) {
  const double y = std::pow(v, 6);
  double power = v;
  double sum = 0.0;
  double a = 1.0;
  for (int k = 0; k < 400; ++k) {
    const double term = a * power / (1.0 / 3.0 + 2.0 * k);
    sum += term;
    if (term < 1e-18 * sum) break;
    a = next_coefficient(a, k);
    power *= y;
  }
  return sum;
}

std::array<double, 3> triangle_side_masses() {
  // |x^2 - 1|^(-1/4) (x^2 + 3)^(-5/8) with the singular point moved to 0.
  auto outer = [](double t) {
    const double x = 1.0 + t;
    return std::pow(t * (t + 2.0), -0.25) * std::pow(x * x + 3.0, -0.625);
  };
  auto inner = [](double u) {
    const double x = 1.0 - u;
    return std::pow(u * (2.0 - u), -0.25) * std::pow(x * x + 3.0, -0.625);
  };
  const double right = half_line_integral(outer, "triangle side (1, inf)");
  // x = -1 - s on (-inf, -1): same integrand in s.
  const double left = half_line_integral(outer, "triangle side (-inf, -1)");
  // (-1, 1) as u = 1 - x on (0, 1] and s = 1 + x on (0, 1].
  const double middle = tanh_sinh_integral(inner, 0.0, 1.0, "triangle side (-1, 1)") +
                        tanh_sinh_integral(inner, 0.0, 1.0, "triangle side (-1, 1)");
  return {right, left, middle};
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kPanels = 64;

double triangle_v3() { return std::cbrt(1.0 / 3.0); }

// Mass density of one half side in v = x^(-1/3), vertex at v = 0.
double triangle_mass(double v) {
  if (v <= 0.0) return 0.0;
  const double v6 = std::pow(v, 6);
  return 3.0 * std::pow(v, 1.25) * std::pow(1.0 - v6, -0.25) * std::pow(1.0 + 3.0 * v6, -0.625);
}

// v with Phi(v) = target, 0 <= target <= Phi(v3).
double triangle_v_from_phi(double target) {
  const double v3 = triangle_v3();
  if (target <= 0.0) return 0.0;
  if (target >= sc_phi(v3)) return v3;
  auto f = [target](double v) {
    const double d = 3.0 * std::pow(1.0 - std::pow(v, 6), -2.0 / 3.0);
    return std::make_pair(sc_phi(v) - target, d);
  };
  std::uintmax_t iterations = 100;
  return boost::math::tools::newton_raphson_iterate(f, target / 3.0, 0.0, v3, 50, iterations);
}

// Distance (in units of half the side) from the nearer end vertex of the
// side containing polar angle t in [0, 120] measured from its first vertex,
// and whether the point lies in the first half.
std::pair<double, bool> triangle_half_position(double t_deg) {
  const double s = std::tan(angle_rad(t_deg - 60.0));
  const double u = (std::sqrt(3.0) / 2.0 - std::fabs(s) / 2.0) / (std::sqrt(3.0) / 2.0);
  return {std::clamp(u, 0.0, 1.0), t_deg <= 60.0};
}

double strip_chordal_mass(double theta) {
  const double s = std::sin(theta);
  if (s <= 0.0) return 0.0;
  const double x = std::cos(theta) / s;
  const double y = pi * x / 2.0;
  return std::exp(-1.25 * log_cosh_plus(y, 0.0) - 2.0 * std::log(s));
}

double offcenter_mass(double phi, double a, double b) {
  return std::pow(1.0 + a * a + b * b + 2.0 * a * std::cos(phi) + 2.0 * b * std::sin(phi), -0.625);
}

double tangent_mass(double phi) { return std::pow(2.0 * (1.0 + std::sin(phi)), -0.625); }

// Density in phi on the arc of the unit circle centred at (0, b), in log
// space: f maps the arc to t on the negative real axis, f = -t.
double partial_mass(double phi, double b) {
  const double d = std::sqrt(1.0 - b * b);
  const double k = pi / std::atan2(d, -b);
  const cplx z(std::cos(phi), b + std::sin(phi));
  const double rp = std::abs(z + d);
  const double rm = std::abs(z - d);
  if (rp <= 0.0 || rm <= 0.0) return 0.0;
  const double lp = std::log(rp);
  const double lm = std::log(rm);
  return std::exp(0.625 * (k - 1.0) * lp - 0.625 * (k + 1.0) * lm - 1.25 * log1p_exp(k * (lp - lm)));
}

}  // namespace

AnalyticLaw::AnalyticLaw(const StarDomain& domain) : domain_(domain) {
  switch (domain_.geometry()) {
    case Geometry::strip_chordal: {
      pieces_.push_back(std::make_shared<PanelIntegral>(strip_chordal_mass, 0.0, pi, kPanels));
      normalization_ = 2.0 * half_line_integral(
                                 [](double x) { return std::pow(1.0 / std::cosh(pi * x / 2.0), 1.25); },
                                 "chordal strip normalisation");
      break;
    }
    case Geometry::strip_radial: {
      const double h = domain_.strip_h().value();
      const double c = std::cos(pi * h);
      auto upper_mass = [h, c](double theta) {
        const double s = std::sin(theta);
        if (s <= 0.0) return 0.0;
        const double x = (1.0 - h) * std::cos(theta) / s;
        return std::exp(-0.625 * log_cosh_plus(pi * x, c) - 2.0 * std::log(s)) * (1.0 - h);
      };
      auto lower_mass = [h, c](double theta) {
        const double s = -std::sin(theta);
        if (s <= 0.0) return 0.0;
        const double x = h * std::cos(theta) / s;
        return std::exp(-0.625 * log_cosh_plus(pi * x, -c) - 2.0 * std::log(s)) * h;
      };
      pieces_.push_back(std::make_shared<PanelIntegral>(upper_mass, 0.0, pi, kPanels));
      pieces_.push_back(std::make_shared<PanelIntegral>(lower_mass, pi, 2.0 * pi, kPanels));
      normalization_ =
          2.0 * half_line_integral([c](double x) { return std::pow(std::cosh(pi * x) + c, -0.625); },
                                   "radial strip normalisation") +
          2.0 * half_line_integral([c](double x) { return std::pow(std::cosh(pi * x) - c, -0.625); },
                                   "radial strip normalisation");
      break;
    }
    case Geometry::triangle: {
      pieces_.push_back(std::make_shared<PanelIntegral>(triangle_mass, 0.0, triangle_v3(), kPanels));
      // Six half sides, each the image of (3, inf).
      normalization_ = 6.0 * half_line_integral(
                                 [](double t) {
                                   const double x = 3.0 + t;
                                   return std::pow(x * x - 1.0, -0.25) * std::pow(x * x + 3.0, -0.625);
                                 },
                                 "triangle normalisation");
      break;
    }
    case Geometry::circle_centered:
      normalization_ = 2.0 * pi;
      break;
    case Geometry::circle_offcenter: {
      const auto [a, b] = domain_.center();
      auto mass = [a, b](double phi) { return offcenter_mass(phi, a, b); };
      pieces_.push_back(std::make_shared<PanelIntegral>(mass, -pi, pi, kPanels));
      normalization_ = kronrod_integral(mass, -pi, pi, "off-centre circle normalisation");
      break;
    }
    case Geometry::circle_partial: {
      const double b = domain_.center().second;
      auto mass = [b](double phi) { return partial_mass(phi, b); };
      const auto [lo, hi] = domain_.parameter_window();
      pieces_.push_back(std::make_shared<PanelIntegral>(mass, angle_rad(lo), angle_rad(hi), kPanels));
      normalization_ = tanh_sinh_integral(mass, angle_rad(lo), angle_rad(hi), "partial circle normalisation");
      break;
    }
    case Geometry::circle_tangent: {
      pieces_.push_back(std::make_shared<PanelIntegral>(tangent_mass, 0.0, pi, kPanels));
      normalization_ = tanh_sinh_integral(tangent_mass, 0.0, pi, "tangent circle normalisation");
      break;
    }
  }
}

std::pair<double, double> AnalyticLaw::range(Axis axis) const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (domain_.geometry()) {
    case Geometry::strip_chordal:
      return axis == Axis::native ? std::pair{-inf, inf} : std::pair{0.0, 180.0};
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      return {0.0, 360.0};
    case Geometry::circle_offcenter:
      return axis == Axis::native ? std::pair{-180.0, 180.0} : std::pair{0.0, 360.0};
    case Geometry::circle_partial:
      return axis == Axis::native ? domain_.parameter_window() : std::pair{0.0, 180.0};
    case Geometry::circle_tangent:
      return axis == Axis::native ? std::pair{0.0, 180.0} : std::pair{45.0, 135.0};
  }
  return {-inf, inf};
}

double AnalyticLaw::density_value(double param) const {
  const auto [lo, hi] = range(Axis::native);
  const bool periodic = domain_.geometry() == Geometry::strip_radial || domain_.geometry() == Geometry::triangle ||
                        domain_.geometry() == Geometry::circle_centered ||
                        domain_.geometry() == Geometry::circle_offcenter;
  const bool inside = periodic ? (param >= lo && param <= hi) : (param > lo && param < hi);
  if (!inside || std::isnan(param)) throw DomainError("density parameter outside the open range");
  switch (domain_.geometry()) {
    case Geometry::strip_chordal:
      return std::pow(1.0 / std::cosh(pi * param / 2.0), 1.25);
    case Geometry::strip_radial: {
      const double t = angle_rad(param);
      const double s = std::sin(t);
      if (s == 0.0) throw DomainError("radial strip density at a point at infinity");
      const double h = domain_.strip_h().value();
      const double c = std::cos(pi * h);
      if (s > 0) return std::pow(std::cosh(pi * (1.0 - h) * std::cos(t) / s) + c, -0.625);
      return std::pow(std::cosh(pi * h * std::cos(t) / -s) - c, -0.625);
    }
    case Geometry::triangle: {
      const double t = std::fmod(param, 120.0);
      const auto [u, first_half] = triangle_half_position(t);
      const double v = triangle_v_from_phi(sc_phi(triangle_v3()) * u);
      const double v6 = std::pow(v, 6);
      return std::pow(v, 1.25) * std::pow(1.0 - v6, 5.0 / 12.0) * std::pow(1.0 + 3.0 * v6, -0.625);
    }
    case Geometry::circle_centered:
      return 1.0;
    case Geometry::circle_offcenter: {
      const auto [a, b] = domain_.center();
      return offcenter_mass(angle_rad(param), a, b);
    }
    case Geometry::circle_partial:
      return partial_mass(angle_rad(param), domain_.center().second);
    case Geometry::circle_tangent:
      return tangent_mass(angle_rad(param));
  }
  return 0.0;
}

double AnalyticLaw::native_cdf(double param) const {
  const auto [lo, hi] = range(Axis::native);
  if (param <= lo) return 0.0;
  if (param >= hi) return 1.0;
  switch (domain_.geometry()) {
    case Geometry::strip_chordal: {
      const PanelIntegral& p = *pieces_[0];
      const double theta = std::atan2(1.0, param);
      return (p.total() - p.integral_to(theta)) / normalization_;
    }
    case Geometry::strip_radial: {
      const double t = angle_rad(param);
      if (t <= pi) return pieces_[0]->integral_to(t) / normalization_;
      return (pieces_[0]->total() + pieces_[1]->integral_to(t)) / normalization_;
    }
    case Geometry::triangle: {
      const PanelIntegral& p = *pieces_[0];
      const double half = p.total();
      const int side = std::min(static_cast<int>(param / 120.0), 2);
      const double t = param - 120.0 * side;
      const auto [u, first_half] = triangle_half_position(t);
      const double v = triangle_v_from_phi(sc_phi(triangle_v3()) * u);
      const double within = first_half ? p.integral_to(v) : 2.0 * half - p.integral_to(v);
      return (2.0 * side * half + within) / normalization_;
    }
    case Geometry::circle_centered:
      return param / 360.0;
    case Geometry::circle_offcenter:
    case Geometry::circle_partial:
    case Geometry::circle_tangent:
      return pieces_[0]->integral_to(angle_rad(param)) / normalization_;
  }
  return 0.0;
}

double AnalyticLaw::native_from_polar(double theta_deg) const {
  const auto [lo, hi] = domain_.parameter_window();
  return std::clamp(domain_.parameter_at_polar(theta_deg), lo, hi);
}

double AnalyticLaw::cdf(double param, Axis axis) const {
  if (std::isnan(param)) throw InvalidArgument("cdf at NaN");
  if (axis == Axis::native) return native_cdf(param);
  const auto [lo, hi] = range(Axis::polar_angle);
  if (param <= lo) return 0.0;
  if (param >= hi) return 1.0;
  switch (domain_.geometry()) {
    case Geometry::strip_chordal: {
      const PanelIntegral& p = *pieces_[0];
      return p.integral_to(angle_rad(param)) / normalization_;
    }
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      return native_cdf(param);
    case Geometry::circle_offcenter: {
      const double start = native_cdf(native_from_polar(0.0));
      return wrap_unit(native_cdf(native_from_polar(param)) - start);
    }
    case Geometry::circle_partial:
    case Geometry::circle_tangent:
      return native_cdf(native_from_polar(param));
  }
  return 0.0;
}

double AnalyticLaw::folded_cdf(double t, double period, Axis axis) const {
  const auto [lo, hi] = range(axis);
  if (lo != 0.0 || hi != 360.0) throw InvalidArgument("folding needs a full-turn axis");
  const double copies = 360.0 / period;
  const int n = static_cast<int>(std::lround(copies));
  if (period <= 0 || std::fabs(copies - n) > 1e-9) throw InvalidArgument("period must divide 360");
  if (t <= 0) return 0.0;
  if (t >= period) return 1.0;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += cdf(k * period + t, axis) - cdf(k * period, axis);
  return sum;
}

double AnalyticLaw::quantile(double q, Axis axis) const {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level outside [0, 1]");
  auto [lo, hi] = range(axis);
  const bool chordal_x = domain_.geometry() == Geometry::strip_chordal && axis == Axis::native;
  if (chordal_x) {
    // Bisect in the polar angle, where the range is finite; x decreases.
    double a = 0.0;
    double b = 180.0;
    for (int i = 0; i < 100; ++i) {
      const double m = 0.5 * (a + b);
      (cdf(m, Axis::polar_angle) >= 1.0 - q ? b : a) = m;
    }
    return 1.0 / std::tan(angle_rad(0.5 * (a + b)));
  }
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (lo + hi);
    (cdf(m, axis) >= q ? hi : lo) = m;
  }
  return hi;
}

double AnalyticLaw::panel_total_ratio() const {
  double total = 0.0;
  switch (domain_.geometry()) {
    case Geometry::circle_centered:
      return 1.0;
    case Geometry::triangle:
      total = 6.0 * pieces_[0]->total();
      break;
    default:
      for (const auto& p : pieces_) total += p->total();
  }
  return total / normalization_;
}

}  // namespace sawdil
