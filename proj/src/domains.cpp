#include "sawdil/domains.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sawdil/errors.hpp"

namespace sawdil {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap360(double t) {
  double r = std::fmod(t, 360.0);
  if (r < 0) r += 360.0;
  return r;
}

double wrap180(double t) {
  double r = std::fmod(t, 180.0);
  if (r < 0) r += 180.0;
  return r;
}

// Angle of the outward normal of the triangle side met at polar angle t.
double triangle_normal(double t) {
  if (t < 120.0) return 60.0;
  if (t < 240.0) return 180.0;
  return 300.0;
}

// Smallest lambda with |z - lambda c| = lambda, for a unit circle through
// or around the origin (|c| <= 1). Written to avoid cancellation.
double circle_gauge(double x, double y, double ca, double cb) {
  const double cz = ca * x + cb * y;
  const double zz = x * x + y * y;
  const double k = 1.0 - ca * ca - cb * cb;
  const double q = std::sqrt(cz * cz + k * zz);
  if (cz > 0) return zz / (q + cz);
  return (q - cz) / k;
}

// Triangle gauge pieces as u + v sqrt(3): -2x, x + sqrt(3) y, x - sqrt(3) y.
struct Surd3 {
  std::int64_t u;
  std::int64_t v;
};

Surd3 triangle_max(Point z) {
  const Surd3 c[3] = {{-2LL * z.x, 0}, {z.x, z.y}, {z.x, -static_cast<std::int64_t>(z.y)}};
  Surd3 best = c[0];
  for (int i = 1; i < 3; ++i) {
    if (sign_surd(static_cast<__int128>(c[i].u) - best.u, static_cast<__int128>(c[i].v) - best.v, 3) > 0) {
      best = c[i];
    }
  }
  return best;
}

template <class Pred>
bool interior_sites_satisfy(std::span<const Point> sites, Pred pred) {
  if (sites.size() < 3) return true;
  const std::size_t last = sites.size() - 1;
  for (std::size_t i = 1; i < last; ++i) {
    if (!pred(sites[i])) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Geometry g) {
  switch (g) {
    case Geometry::strip_chordal: return "strip_chordal";
    case Geometry::strip_radial: return "strip_radial";
    case Geometry::triangle: return "triangle";
    case Geometry::circle_centered: return "circle_centered";
    case Geometry::circle_offcenter: return "circle_offcenter";
    case Geometry::circle_partial: return "circle_partial";
    case Geometry::circle_tangent: return "circle_tangent";
  }
  return "?";
}

Geometry geometry_from_string(const std::string& name) {
  for (Geometry g : {Geometry::strip_chordal, Geometry::strip_radial, Geometry::triangle,
                     Geometry::circle_centered, Geometry::circle_offcenter, Geometry::circle_partial,
                     Geometry::circle_tangent}) {
    if (name == to_string(g)) return g;
  }
  throw ConfigError("unknown geometry: " + name);
}

double ExactScale::value() const {
  return (static_cast<double>(a) + static_cast<double>(b) * std::sqrt(static_cast<double>(s))) /
         static_cast<double>(d);
}

int sign_surd(__int128 u, __int128 v, std::int64_t s) {
  if (v == 0 || s == 0) return (u > 0) - (u < 0);
  const int su = (u > 0) - (u < 0);
  const int sv = v > 0 ? 1 : -1;
  if (su == 0) return sv;
  if (su == sv) return su;
  // Opposite signs: compare u^2 with v^2 s.
  const __int128 lhs = u * u;
  const __int128 rhs = v * v * s;
  if (lhs == rhs) return 0;
  return lhs > rhs ? su : sv;
}

double polar_angle_deg(Point p) {
  double t = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x)) / kDeg;
  if (t < 0) t += 360.0;
  return t;
}

StarDomain StarDomain::strip_chordal() {
  StarDomain d;
  d.geometry_ = Geometry::strip_chordal;
  return d;
}

StarDomain StarDomain::strip_radial(Rational h) {
  if (h.num <= 0 || h.num >= h.den) throw InvalidArgument("strip_radial needs 0 < h < 1");
  StarDomain d;
  d.geometry_ = Geometry::strip_radial;
  d.h_ = h;
  return d;
}

StarDomain StarDomain::triangle() {
  StarDomain d;
  d.geometry_ = Geometry::triangle;
  return d;
}

StarDomain StarDomain::circle_centered() {
  StarDomain d;
  d.geometry_ = Geometry::circle_centered;
  return d;
}

StarDomain StarDomain::circle_offcenter(double a, double b) {
  if (!(a * a + b * b < 1.0)) throw InvalidArgument("circle_offcenter needs |a + ib| < 1");
  StarDomain d;
  d.geometry_ = Geometry::circle_offcenter;
  d.ca_ = a;
  d.cb_ = b;
  return d;
}

StarDomain StarDomain::circle_partial(double b) {
  if (!(b > -1.0 && b < 0.0)) throw InvalidArgument("circle_partial needs -1 < b < 0");
  StarDomain d;
  d.geometry_ = Geometry::circle_partial;
  d.cb_ = b;
  return d;
}

StarDomain StarDomain::circle_tangent() {
  StarDomain d;
  d.geometry_ = Geometry::circle_tangent;
  d.cb_ = 1.0;
  return d;
}

DomainKind StarDomain::kind() const {
  switch (geometry_) {
    case Geometry::strip_chordal:
    case Geometry::circle_partial:
    case Geometry::circle_tangent:
      return DomainKind::chordal;
    default:
      return DomainKind::radial;
  }
}

bool StarDomain::admissible(double theta_deg) const {
  if (!std::isfinite(theta_deg)) return false;
  const double t = wrap360(theta_deg);
  switch (geometry_) {
    case Geometry::strip_chordal:
    case Geometry::circle_partial:
    case Geometry::circle_tangent:
      return t > 0.0 && t < 180.0;
    case Geometry::strip_radial:
      return t != 0.0 && t != 180.0;
    default:
      return true;
  }
}

double StarDomain::radial_distance(double theta_deg) const {
  if (!admissible(theta_deg)) throw NoBoundaryError("no target boundary in direction " + std::to_string(theta_deg));
  const double t = wrap360(theta_deg);
  const double s = std::sin(t * kDeg);
  const double c = std::cos(t * kDeg);
  switch (geometry_) {
    case Geometry::strip_chordal:
      return 1.0 / s;
    case Geometry::strip_radial:
      return s > 0 ? (1.0 - h_.value()) / s : h_.value() / -s;
    case Geometry::triangle:
      return 0.5 / std::cos((t - triangle_normal(t)) * kDeg);
    case Geometry::circle_centered:
      return 1.0;
    case Geometry::circle_offcenter:
    case Geometry::circle_partial:
    case Geometry::circle_tangent: {
      const double cu = ca_ * c + cb_ * s;
      return cu + std::sqrt(cu * cu + 1.0 - ca_ * ca_ - cb_ * cb_);
    }
  }
  return 0.0;
}

BoundaryGeometry StarDomain::boundary_geometry(double theta_deg) const {
  BoundaryGeometry g;
  g.D = radial_distance(theta_deg);
  const double t = wrap360(theta_deg);
  switch (geometry_) {
    case Geometry::strip_chordal:
    case Geometry::strip_radial:
      g.alpha = 90.0;
      break;
    case Geometry::triangle:
      g.alpha = wrap180(triangle_normal(t));
      break;
    case Geometry::circle_centered:
      g.alpha = wrap180(t);
      break;
    default: {
      const double px = g.D * std::cos(t * kDeg) - ca_;
      const double py = g.D * std::sin(t * kDeg) - cb_;
      g.alpha = wrap180(std::atan2(py, px) / kDeg);
      break;
    }
  }
  g.tau = wrap180(g.alpha + 90.0);
  return g;
}

double StarDomain::thickness_weight(double theta_deg) const {
  const BoundaryGeometry g = boundary_geometry(theta_deg);
  return 1.0 / (g.D * std::fabs(std::cos((theta_deg - g.alpha) * kDeg)));
}

double StarDomain::gauge(double x, double y) const {
  switch (geometry_) {
    case Geometry::strip_chordal:
      return y > 0 ? y : kInf;
    case Geometry::strip_radial:
      if (y > 0) return y / (1.0 - h_.value());
      if (y < 0) return -y / h_.value();
      return 0.0;
    case Geometry::triangle:
      return std::max({-2.0 * x, x + std::numbers::sqrt3 * y, x - std::numbers::sqrt3 * y});
    case Geometry::circle_centered:
      return std::hypot(x, y);
    case Geometry::circle_offcenter:
      return circle_gauge(x, y, ca_, cb_);
    case Geometry::circle_partial:
    case Geometry::circle_tangent:
      return y > 0 ? circle_gauge(x, y, ca_, cb_) : kInf;
  }
  return kInf;
}

Dilation StarDomain::dilation_of(Point e) const {
  if (e == Point{0, 0}) throw UndefinedDilation("endpoint at the origin");
  if (!admissible(polar_angle_deg(e))) throw UndefinedDilation("endpoint direction misses the target boundary");
  Dilation lam;
  switch (geometry_) {
    case Geometry::strip_chordal:
      lam.exact = ExactScale{e.y, 0, 0, 1};
      break;
    case Geometry::strip_radial:
      if (e.y > 0) {
        lam.exact = ExactScale{static_cast<std::int64_t>(e.y) * h_.den, 0, 0, h_.den - h_.num};
      } else {
        lam.exact = ExactScale{-static_cast<std::int64_t>(e.y) * h_.den, 0, 0, h_.num};
      }
      break;
    case Geometry::triangle: {
      const Surd3 m = triangle_max(e);
      lam.exact = ExactScale{m.u, m.v, 3, 1};
      break;
    }
    case Geometry::circle_centered:
      lam.exact = ExactScale{0, 1, norm2(e), 1};
      break;
    case Geometry::circle_tangent:
      lam.exact = ExactScale{norm2(e), 0, 0, 2LL * e.y};
      break;
    default:
      break;
  }
  lam.value = lam.exact ? lam.exact->value() : gauge(e.x, e.y);
  if (!(lam.value > 0) || !std::isfinite(lam.value)) throw UndefinedDilation("no positive dilation for endpoint");
  return lam;
}

bool StarDomain::point_inside(Point z, const Dilation& lambda) const {
  const Point pts[3] = {{0, 0}, z, {0, 0}};
  return strictly_inside(std::span<const Point>(pts, 3), lambda);
}

bool StarDomain::strictly_inside(std::span<const Point> sites, const Dilation& lambda) const {
  if (!lambda.exact) {
    const double lam = lambda.value;
    return interior_sites_satisfy(sites, [&](Point p) { return gauge(p.x, p.y) < lam; });
  }
  const ExactScale L = *lambda.exact;
  const __int128 a = L.a;
  const __int128 b = L.b;
  const __int128 d = L.d;
  switch (geometry_) {
    case Geometry::strip_chordal:
      return interior_sites_satisfy(sites, [&](Point p) { return p.y > 0 && sign_surd(a - d * p.y, b, L.s) > 0; });
    case Geometry::strip_radial: {
      const __int128 hn = h_.num;
      const __int128 hd = h_.den;
      return interior_sites_satisfy(sites, [&](Point p) {
        if (p.y > 0) return sign_surd((hd - hn) * a - d * p.y * hd, (hd - hn) * b, L.s) > 0;
        if (p.y < 0) return sign_surd(hn * a + d * p.y * hd, hn * b, L.s) > 0;
        return true;
      });
    }
    case Geometry::triangle:
      if (L.b != 0 && L.s != 3) break;
      return interior_sites_satisfy(sites, [&](Point p) {
        const __int128 x = p.x;
        const __int128 y = p.y;
        return sign_surd(a + 2 * d * x, b, 3) > 0 && sign_surd(a - d * x, b - d * y, 3) > 0 &&
               sign_surd(a - d * x, b + d * y, 3) > 0;
      });
    case Geometry::circle_centered: {
      const __int128 u0 = a * a + b * b * L.s;
      const __int128 v = 2 * a * b;
      return interior_sites_satisfy(sites, [&](Point p) { return sign_surd(u0 - d * d * norm2(p), v, L.s) > 0; });
    }
    case Geometry::circle_tangent:
      return interior_sites_satisfy(sites, [&](Point p) {
        return p.y > 0 && sign_surd(2 * a * p.y - d * norm2(p), 2 * b * p.y, L.s) > 0;
      });
    default:
      break;
  }
  const double lam = lambda.value;
  return interior_sites_satisfy(sites, [&](Point p) { return gauge(p.x, p.y) < lam; });
}

double StarDomain::boundary_parameter(Point e, double lambda) const {
  const double x = e.x / lambda;
  const double y = e.y / lambda;
  double param = 0.0;
  switch (geometry_) {
    case Geometry::strip_chordal:
      param = x;
      break;
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      param = polar_angle_deg(e);
      break;
    default:
      param = std::atan2(y - cb_, x - ca_) / kDeg;
      break;
  }
  const auto [lo, hi] = parameter_window();
  if (param < lo || param > hi) throw WindowedOut("boundary parameter outside the window");
  return param;
}

double StarDomain::parameter_at_polar(double theta_deg) const {
  const double D = radial_distance(theta_deg);
  const double t = wrap360(theta_deg);
  const double x = D * std::cos(t * kDeg);
  const double y = D * std::sin(t * kDeg);
  switch (geometry_) {
    case Geometry::strip_chordal:
      return std::cos(t * kDeg) / std::sin(t * kDeg);
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      return t;
    default:
      return std::atan2(y - cb_, x - ca_) / kDeg;
  }
}

std::pair<double, double> StarDomain::parameter_window() const {
  switch (geometry_) {
    case Geometry::strip_chordal:
      return {-kInf, kInf};
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      return {0.0, 360.0};
    case Geometry::circle_offcenter:
      return {-180.0, 180.0};
    case Geometry::circle_partial: {
      const double phi0 = std::asin(-cb_) / kDeg;
      return {phi0, 180.0 - phi0};
    }
    case Geometry::circle_tangent:
      return {0.0, 180.0};
  }
  return {-kInf, kInf};
}

std::vector<Point> StarDomain::rational_tangents() const {
  switch (geometry_) {
    case Geometry::strip_chordal:
    case Geometry::strip_radial:
      return {{1, 0}};
    case Geometry::triangle:
      return {{0, 1}};
    default:
      return {};
  }
}

}  // namespace sawdil
