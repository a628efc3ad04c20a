#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sawdil/domains.hpp"

namespace sawdil {

// Coordinate along the target boundary. `native` is the coordinate returned
// by StarDomain::boundary_parameter; `polar_angle` is the polar angle of
// the boundary point about the origin, in degrees.
enum class Axis { native, polar_angle };

const char* to_string(Axis a);
Axis axis_from_string(const std::string& name);

// Integral of f over [a, b] tabulated on equal panels, so that partial
// integrals cost one panel evaluation. Interior panels use 20-point
// Gauss-Legendre; the two end panels use adaptive Gauss-Kronrod, since the
// integrands are bounded but may be non-smooth at the range ends.
class PanelIntegral {
 public:
  PanelIntegral(std::function<double(double)> f, double a, double b, int panels = 64);

  double lower() const { return a_; }
  double upper() const { return b_; }
  double total() const { return cumulative_.back(); }
  // Integral from a to w, with w clamped to [a, b].
  double integral_to(double w) const;

 private:
  double end_panel(double lo, double hi) const;

  std::function<double(double)> f_;
  double a_;
  double b_;
  double h_;
  std::vector<double> cumulative_;
};

// Schwarz-Christoffel map F(z) = int_z^inf (w+1)^(-2/3) (w-1)^(-2/3) dw from
// the upper half plane onto an equilateral triangle, with principal
// branches. Real arguments are boundary values from above.
//
// Series in z^(-1/3 - 2k); requires |z| >= 3 and Im z >= 0.
std::complex<double> sc_F_series(std::complex<double> z);
// Series for |z| >= 3, quadrature along the real axis or a radial path
// otherwise. Throws UnsupportedRegion for Im z < 0.
std::complex<double> sc_F(std::complex<double> z);

// Phi(v) = F(v^-3) for 0 <= v <= 3^(-1/3), i.e. the map along the real half
// line [3, inf) in the variable v = x^(-1/3).
double sc_phi(double v);

// Boundary law of the endpoint predicted from SLE partition functions, for
// one benchmark domain.
class AnalyticLaw {
 public:
  explicit AnalyticLaw(const StarDomain& domain);

  const StarDomain& domain() const { return domain_; }
  Geometry geometry() const { return domain_.geometry(); }

  // Closed range of the native coordinate.
  std::pair<double, double> range(Axis axis = Axis::native) const;

  // Unnormalised density with respect to arc length at the boundary point
  // with native coordinate `param`. Throws DomainError outside the open
  // range (angles of the periodic laws are accepted anywhere in range).
  double density_value(double param) const;

  double cdf(double param, Axis axis = Axis::native) const;

  // CDF of the coordinate reduced mod `period` (which must divide 360), for
  // laws whose axis is a full turn starting at 0.
  double folded_cdf(double t, double period, Axis axis = Axis::native) const;

  // Smallest coordinate with cdf >= q, by bisection.
  double quantile(double q, Axis axis = Axis::native) const;

  // Total mass from the panel tables divided by the independently computed
  // normalisation; 1 up to quadrature error.
  double panel_total_ratio() const;
  double normalization() const { return normalization_; }

 private:
  double native_cdf(double param) const;
  double native_from_polar(double theta_deg) const;

  StarDomain domain_;
  double normalization_ = 1.0;
  std::vector<std::shared_ptr<PanelIntegral>> pieces_;
};

// Masses of the three triangle sides in the half-plane picture, each side
// integrated on its own: (1, inf), (-inf, -1), (-1, 1) for the density
// (|x^2 - 1|)^(-1/4) (x^2 + 3)^(-5/8).
std::array<double, 3> triangle_side_masses();

}  // namespace sawdil
