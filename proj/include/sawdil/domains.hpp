#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sawdil/lattice.hpp"
#include "sawdil/walk.hpp"

namespace sawdil {

enum class Geometry {
  strip_chordal,
  strip_radial,
  triangle,
  circle_centered,
  circle_offcenter,
  circle_partial,
  circle_tangent,
};

enum class DomainKind { radial, chordal };

const char* to_string(Geometry g);
Geometry geometry_from_string(const std::string& name);

// Boundary data at polar angle theta. alpha is the angle of the normal line
// and tau of the tangent line, both in degrees mod 180.
struct BoundaryGeometry {
  double D = 0.0;
  double alpha = 0.0;
  double tau = 0.0;
};

// (a + b sqrt(s)) / d with d > 0 and s >= 0.
struct ExactScale {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t s = 0;
  std::int64_t d = 1;

  double value() const;
};

// Sign of u + v sqrt(s), exactly.
int sign_surd(__int128 u, __int128 v, std::int64_t s);

// A dilation factor. When `exact` is set, strictly_inside compares sites
// against it without rounding.
struct Dilation {
  double value = 0.0;
  std::optional<ExactScale> exact;

  static Dilation approximate(double v) { return {v, std::nullopt}; }
  static Dilation rational(Rational r) { return {r.value(), ExactScale{r.num, 0, 0, r.den}}; }
};

// One of the seven benchmark star-shaped domains, at unit scale. Angles at
// this interface are degrees.
class StarDomain {
 public:
  static StarDomain strip_chordal();
  // {-h < y < 1 - h} with 0 < h < 1.
  static StarDomain strip_radial(Rational h = Rational(1, 4));
  // Equilateral, circumradius 1, vertices at polar angles 0, 120, 240.
  static StarDomain triangle();
  static StarDomain circle_centered();
  // Unit disc centred at (a, b) with a^2 + b^2 < 1.
  static StarDomain circle_offcenter(double a = 0.75, double b = 0.0);
  // Unit disc centred at (0, b), -1 < b < 0, intersected with y > 0.
  static StarDomain circle_partial(double b = -0.75);
  // Unit disc centred at (0, 1); endpoints conditioned on the upper arc.
  static StarDomain circle_tangent();

  Geometry geometry() const { return geometry_; }
  DomainKind kind() const;
  PlaneConstraint constraint() const {
    return kind() == DomainKind::chordal ? PlaneConstraint::half_plane : PlaneConstraint::full_plane;
  }
  std::string name() const { return to_string(geometry_); }

  Rational strip_h() const { return h_; }
  std::pair<double, double> center() const { return {ca_, cb_}; }

  bool admissible(double theta_deg) const;

  // Throw NoBoundaryError outside the admissible set.
  double radial_distance(double theta_deg) const;
  BoundaryGeometry boundary_geometry(double theta_deg) const;
  double thickness_weight(double theta_deg) const;

  // Throws UndefinedDilation for the origin or an inadmissible angle.
  Dilation dilation_of(Point endpoint) const;

  // True iff sites 1..N-1 lie strictly inside lambda * D. Site 0 and the
  // endpoint are exempt.
  bool strictly_inside(std::span<const Point> sites, const Dilation& lambda) const;
  // Same test for a single point.
  bool point_inside(Point z, const Dilation& lambda) const;

  // Law coordinate of endpoint / lambda on the unit boundary: x for the
  // chordal strip, polar angle in [0, 360) for the radial strip, triangle and
  // centred circle, angle about the centre in (-180, 180] for the other
  // circles. Throws WindowedOut outside parameter_window().
  double boundary_parameter(Point endpoint, double lambda) const;
  // Same coordinate for the boundary point at polar angle theta.
  double parameter_at_polar(double theta_deg) const;
  std::pair<double, double> parameter_window() const;

  // Tangent directions of flat target-boundary pieces with rational slope,
  // as primitive integer vectors.
  std::vector<Point> rational_tangents() const;

 private:
  StarDomain() = default;

  double gauge(double x, double y) const;

  Geometry geometry_ = Geometry::circle_centered;
  Rational h_{1, 4};
  double ca_ = 0.0;
  double cb_ = 0.0;
};

// Polar angle of a lattice point in [0, 360).
double polar_angle_deg(Point p);

}  // namespace sawdil
