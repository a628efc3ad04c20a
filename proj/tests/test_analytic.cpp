#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sawdil/analytic.hpp"
#include "sawdil/errors.hpp"

using namespace sawdil;
using doctest::Approx;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<StarDomain> all_domains() {
  return {StarDomain::strip_chordal(),      StarDomain::strip_radial(),     StarDomain::triangle(),
          StarDomain::circle_centered(),    StarDomain::circle_offcenter(), StarDomain::circle_partial(),
          StarDomain::circle_tangent()};
}

// Direct quadrature of the Schwarz-Christoffel integrand from x to infinity.
double sc_quadrature(double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [](double w) { return std::pow((w + 1) * (w - 1), -2.0 / 3.0); };
  return integrator.integrate(f, x, std::numeric_limits<double>::infinity());
}

// Polar-axis CDF from the native density pushed through the boundary
// parametrisation with the Jacobian d(arc)/d(theta) = D / |cos(theta - alpha)|.
double jacobian_polar_cdf(const AnalyticLaw& law, double theta) {
  const StarDomain& d = law.domain();
  auto f = [&](double t) {
    BoundaryGeometry g;
    try {
      g = d.boundary_geometry(t);
    } catch (const NoBoundaryError&) {
      return 0.0;
    }
    const double jac = g.D / std::fabs(std::cos((t - g.alpha) * kPi / 180));
    double param = d.parameter_at_polar(t);
    const auto [lo, hi] = law.range(Axis::native);
    param = std::clamp(param, lo, hi);
    double rho = 0;
    try {
      rho = law.density_value(param);
    } catch (const DomainError&) {
      rho = 0;
    }
    return rho * jac;
  };
  const auto [lo, hi] = law.range(Axis::polar_angle);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double eps = 1e-9;
  const double part = GK::integrate(f, lo + eps, theta, 15, 1e-12);
  const double total = GK::integrate(f, lo + eps, hi - eps, 15, 1e-12);
  return part / total;
}

}  // namespace

TEST_CASE("axis names") {
  CHECK(axis_from_string("native") == Axis::native);
  CHECK(axis_from_string("polar") == Axis::polar_angle);
  CHECK(axis_from_string(to_string(Axis::polar_angle)) == Axis::polar_angle);
  CHECK_THROWS_AS(axis_from_string("arc"), ConfigError);
}

TEST_CASE("Schwarz-Christoffel series against quadrature") {
  for (double x = 3.0; x <= 50.0; x += 0.5) {
    CHECK(std::fabs(sc_F_series(x).real() - sc_quadrature(x)) < 1e-8);
    CHECK(std::fabs(sc_F_series(x).imag()) < 1e-12);
  }
  CHECK(sc_F(3.0).real() > 0);
  CHECK(sc_F(1.7).real() == Approx(sc_quadrature(1.7)).epsilon(1e-9));
}

TEST_CASE("Schwarz-Christoffel triangle geometry") {
  const cplx a = sc_F(1.0);
  const cplx b = sc_F(-1.0);
  const cplx vertex = 0.0;  // image of infinity
  const double s1 = std::abs(a - vertex);
  const double s2 = std::abs(b - vertex);
  const double s3 = std::abs(a - b);
  CHECK(std::fabs(s1 - s2) < 1e-10);
  CHECK(std::fabs(s1 - s3) < 1e-10);
  CHECK(std::abs(sc_F(3.0) - 0.5 * a) < 1e-10);
  CHECK(std::abs(sc_F(-3.0) - 0.5 * b) < 1e-10);
  CHECK(std::abs(sc_F(0.0) - 0.5 * (a + b)) < 1e-10);
  CHECK_THROWS_AS(sc_F(cplx(0.5, -0.1)), UnsupportedRegion);
  // Inside the triangle off the boundary the image is the centre for i sqrt 3.
  CHECK(std::abs(sc_F(cplx(0, std::sqrt(3.0))) - (a + b) / 3.0) < 1e-9);
}

TEST_CASE("laws are normalised and monotone") {
  for (const StarDomain& d : all_domains()) {
    CAPTURE(d.name());
    const AnalyticLaw law(d);
    CHECK(std::fabs(law.panel_total_ratio() - 1) < 1e-8);
    for (Axis axis : {Axis::native, Axis::polar_angle}) {
      auto [lo, hi] = law.range(axis);
      CHECK(law.cdf(lo, axis) == Approx(0).epsilon(1e-12));
      CHECK(std::fabs(law.cdf(hi, axis) - 1) < 1e-8);
      if (!std::isfinite(lo)) lo = -60;
      if (!std::isfinite(hi)) hi = 60;
      double prev = 0;
      for (int i = 0; i <= 10000; ++i) {
        const double c = law.cdf(lo + (hi - lo) * i / 10000, axis);
        REQUIRE(c >= prev - 1e-15);
        REQUIRE(c <= 1 + 1e-12);
        prev = c;
      }
      CHECK(std::fabs(prev - 1) < 1e-8);
    }
  }
}

TEST_CASE("quantiles invert the CDF") {
  for (const StarDomain& d : all_domains()) {
    const AnalyticLaw law(d);
    for (double q : {0.01, 0.3, 0.5, 0.77, 0.99}) {
      CHECK(law.cdf(law.quantile(q)) == Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("chordal strip law") {
  const AnalyticLaw law(StarDomain::strip_chordal());
  CHECK(law.density_value(0) == Approx(1.0));
  CHECK(law.density_value(1.3) == Approx(std::pow(std::cosh(kPi * 1.3 / 2), -1.25)).epsilon(1e-12));
  CHECK(law.density_value(-2.1) == Approx(law.density_value(2.1)).epsilon(1e-14));
  CHECK(law.cdf(0) == Approx(0.5).epsilon(1e-12));
  CHECK(law.cdf(-1.1) == Approx(1 - law.cdf(1.1)).epsilon(1e-12));
}

TEST_CASE("radial strip branches at x = 0") {
  const double h = 0.25;
  const AnalyticLaw law(StarDomain::strip_radial(Rational(1, 4)));
  const double c = std::cos(kPi * h);
  CHECK(law.density_value(270) / law.density_value(90) == Approx(std::pow((1 + c) / (1 - c), 0.625)).epsilon(1e-12));
  CHECK_THROWS_AS(law.density_value(0), DomainError);
}

TEST_CASE("triangle law") {
  const AnalyticLaw law(StarDomain::triangle());
  CHECK(law.cdf(120) == Approx(1.0 / 3).epsilon(1e-10));
  CHECK(law.cdf(240) == Approx(2.0 / 3).epsilon(1e-10));
  for (double t : {17.0, 60.0, 99.0}) {
    CHECK(law.cdf(360 - t) == Approx(1 - law.cdf(t)).epsilon(1e-9));
    CHECK(law.density_value(t) == Approx(law.density_value(t + 120)).epsilon(1e-9));
  }
  const auto m = triangle_side_masses();
  CHECK(std::fabs(m[0] - m[1]) < 1e-8);
  CHECK(std::fabs(m[0] - m[2]) < 1e-8);
  CHECK(law.folded_cdf(60, 120) == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("circle laws") {
  const AnalyticLaw centered(StarDomain::circle_centered());
  CHECK(centered.density_value(10) == centered.density_value(200));
  CHECK(centered.cdf(90) == Approx(0.25).epsilon(1e-12));
  CHECK(centered.folded_cdf(30, 90) == Approx(1.0 / 3).epsilon(1e-12));

  const AnalyticLaw off(StarDomain::circle_offcenter(0.75, 0));
  CHECK(off.density_value(0) == Approx(std::pow(1.75, -1.25)).epsilon(1e-12));
  CHECK(off.density_value(0) / off.density_value(180) == Approx(std::pow(49.0, -0.625)).epsilon(1e-12));
  CHECK(off.density_value(-40) == Approx(off.density_value(40)).epsilon(1e-14));

  const AnalyticLaw trivial(StarDomain::circle_offcenter(0, 0));
  for (double phi : {-170.0, -45.0, 0.0, 33.0, 120.0}) {
    CHECK(trivial.density_value(phi) == Approx(trivial.density_value(0)).epsilon(1e-15));
    CHECK(trivial.cdf(phi) == Approx((phi + 180) / 360).epsilon(1e-12));
    CHECK(trivial.cdf(phi + 180, Axis::polar_angle) == Approx(centered.cdf(phi + 180)).epsilon(1e-12));
  }

  const AnalyticLaw tangent(StarDomain::circle_tangent());
  CHECK(tangent.density_value(90) == Approx(std::pow(2.0, -1.25)).epsilon(1e-14));
  for (double phi : {5.0, 40.0, 90.0, 131.0, 178.0}) {
    const double p = phi * kPi / 180;
    const double literal = std::pow(std::fabs(1 - std::cos(p) + std::sin(p)), -1.25) * std::pow(1 - std::cos(p), 0.625);
    CHECK(tangent.density_value(phi) == Approx(literal).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tangent.density_value(-1), DomainError);
  CHECK_THROWS_AS(tangent.density_value(181), DomainError);

  const AnalyticLaw partial(StarDomain::circle_partial(-0.75));
  const auto [lo, hi] = partial.range();
  for (int i = 1; i < 50; ++i) CHECK(partial.density_value(lo + (hi - lo) * i / 50) > 0);
}

TEST_CASE("polar-axis CDFs match direct Jacobian integration") {
  for (const StarDomain& d : {StarDomain::strip_chordal(), StarDomain::circle_offcenter(), StarDomain::circle_tangent(),
                              StarDomain::circle_partial(), StarDomain::strip_radial(), StarDomain::triangle()}) {
    CAPTURE(d.name());
    const AnalyticLaw law(d);
    const auto [lo, hi] = law.range(Axis::polar_angle);
    for (double u : {0.1, 0.35, 0.5, 0.8}) {
      const double theta = lo + u * (hi - lo);
      if (d.geometry() == Geometry::strip_radial && (std::fabs(theta - 180) < 1 || theta < 1)) continue;
      CHECK(law.cdf(theta, Axis::polar_angle) == Approx(jacobian_polar_cdf(law, theta)).epsilon(1e-6));
    }
  }
}

TEST_CASE("panel integral") {
  const PanelIntegral p([](double x) { return std::exp(-x); }, 0.0, 3.0);
  CHECK(p.total() == Approx(1 - std::exp(-3.0)).epsilon(1e-14));
  CHECK(p.integral_to(1.234) == Approx(1 - std::exp(-1.234)).epsilon(1e-13));
  CHECK(p.integral_to(-5) == 0);
  CHECK(p.integral_to(10) == p.total());
  CHECK_THROWS_AS(PanelIntegral([](double) { return 1.0; }, 1.0, 1.0), InvalidArgument);
  // Not integrable at the left end.
  CHECK_THROWS_AS(PanelIntegral([](double x) { return std::sin(1 / x) / (x * x); }, 0.0, 1.0), AccuracyError);
}
