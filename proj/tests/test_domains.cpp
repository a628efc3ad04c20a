#include <cmath>
#include <vector>

#include "doctest.h"
#include "sawdil/domains.hpp"
#include "sawdil/errors.hpp"
#include "sawdil/rng.hpp"

using namespace sawdil;
using doctest::Approx;

namespace {

std::vector<StarDomain> all_domains() {
  return {StarDomain::strip_chordal(),      StarDomain::strip_radial(),     StarDomain::triangle(),
          StarDomain::circle_centered(),    StarDomain::circle_offcenter(), StarDomain::circle_partial(),
          StarDomain::circle_tangent()};
}

// Domains whose dilation is a ratio of integers.
bool rational_scale(const StarDomain& d) {
  return d.geometry() == Geometry::strip_chordal || d.geometry() == Geometry::strip_radial;
}

}  // namespace

TEST_CASE("geometry names round trip") {
  for (const StarDomain& d : all_domains()) CHECK(geometry_from_string(d.name()) == d.geometry());
  CHECK_THROWS_AS(geometry_from_string("hexagon"), ConfigError);
}

TEST_CASE("kinds and constraints") {
  CHECK(StarDomain::strip_chordal().kind() == DomainKind::chordal);
  CHECK(StarDomain::circle_partial().kind() == DomainKind::chordal);
  CHECK(StarDomain::circle_tangent().constraint() == PlaneConstraint::half_plane);
  CHECK(StarDomain::triangle().kind() == DomainKind::radial);
  CHECK(StarDomain::circle_offcenter().constraint() == PlaneConstraint::full_plane);
}

TEST_CASE("radial distance") {
  for (double t : {0.0, 37.0, 211.0}) CHECK(StarDomain::circle_centered().radial_distance(t) == Approx(1.0));
  const StarDomain strip = StarDomain::strip_chordal();
  CHECK(strip.radial_distance(90) == Approx(1.0));
  for (double t : {5.0, 30.0, 100.0, 170.0}) {
    CHECK(strip.radial_distance(t) == Approx(1.0 / std::sin(t * M_PI / 180.0)).epsilon(1e-12));
  }
  CHECK(StarDomain::triangle().radial_distance(180) == Approx(0.5).epsilon(1e-14));
  CHECK(StarDomain::triangle().radial_distance(0) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(strip.radial_distance(270), NoBoundaryError);
  CHECK_THROWS_AS(strip.radial_distance(0), NoBoundaryError);
}

TEST_CASE("boundary geometry") {
  const BoundaryGeometry c = StarDomain::circle_centered().boundary_geometry(37);
  CHECK(c.alpha == Approx(37));
  CHECK(c.tau == Approx(127));
  for (double t : {20.0, 90.0, 160.0}) {
    const BoundaryGeometry s = StarDomain::strip_chordal().boundary_geometry(t);
    CHECK(s.alpha == Approx(90));
    CHECK(s.tau == Approx(0).epsilon(1e-12));
  }
  const BoundaryGeometry lower = StarDomain::strip_radial().boundary_geometry(250);
  CHECK(lower.alpha == Approx(90));
  const BoundaryGeometry tri = StarDomain::triangle().boundary_geometry(50);
  CHECK(tri.alpha == Approx(60));
  CHECK(tri.tau == Approx(150));
  CHECK(StarDomain::triangle().boundary_geometry(180).tau == Approx(90));
}

TEST_CASE("dilation") {
  CHECK(StarDomain::circle_centered().dilation_of({3, 4}).value == Approx(5.0).epsilon(1e-15));
  CHECK(StarDomain::strip_radial().dilation_of({7, -2}).value == 8.0);
  CHECK(StarDomain::strip_radial().dilation_of({7, 3}).value == 4.0);
  CHECK(StarDomain::circle_tangent().dilation_of({0, 2}).value == Approx(1.0).epsilon(1e-15));
  CHECK(StarDomain::circle_partial().dilation_of({0, 1}).value == Approx(4.0).epsilon(1e-14));
  CHECK(StarDomain::strip_chordal().dilation_of({-9, 5}).value == 5.0);
  CHECK_THROWS_AS(StarDomain::circle_centered().dilation_of({0, 0}), UndefinedDilation);
  CHECK_THROWS_AS(StarDomain::strip_chordal().dilation_of({3, 0}), UndefinedDilation);
  CHECK_THROWS_AS(StarDomain::strip_radial().dilation_of({3, 0}), UndefinedDilation);
}

TEST_CASE("thickness weight") {
  for (double t : {0.0, 45.0, 123.0, 300.0}) CHECK(StarDomain::circle_centered().thickness_weight(t) == Approx(1.0));
  for (int k = 1; k <= 10; ++k) {
    CHECK(StarDomain::strip_chordal().thickness_weight(16.0 * k + 1.0) == Approx(1.0).epsilon(1e-12));
  }
  CHECK(StarDomain::circle_offcenter(0.75, 0).thickness_weight(0) == Approx(4.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("weights are positive and invert the shell thickness on a fine grid") {
  for (const StarDomain& d : all_domains()) {
    int seen = 0;
    for (int i = 0; i < 3600; ++i) {
      const double t = 0.1 * i + 0.05;
      if (!d.admissible(t)) continue;
      const double w = d.thickness_weight(t);
      REQUIRE(std::isfinite(w));
      REQUIRE(w > 0);
      const BoundaryGeometry g = d.boundary_geometry(t);
      const double shell = g.D * std::fabs(std::cos((t - g.alpha) * M_PI / 180.0));
      REQUIRE(w * shell == Approx(1.0).epsilon(1e-9));
      ++seen;
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("boundary parameter") {
  CHECK(StarDomain::strip_chordal().boundary_parameter({5, 5}, 5) == 1.0);
  CHECK(StarDomain::circle_offcenter().boundary_parameter({7, 0}, 4) == Approx(0).epsilon(1e-12));
  CHECK(StarDomain::circle_tangent().boundary_parameter({0, 2}, 1) == Approx(90));
  CHECK(StarDomain::strip_radial().boundary_parameter({-4, -1}, 4) == Approx(194.03624346792648));
  CHECK(StarDomain::triangle().boundary_parameter({-1, 0}, 2) == Approx(180));
  // Lower arc of the tangent circle: (3, 1) has lambda 5 and lies below the
  // scaled centre (0, 5).
  const StarDomain tangent = StarDomain::circle_tangent();
  const double lambda = tangent.dilation_of({3, 1}).value;
  CHECK(lambda == Approx(5));
  CHECK_THROWS_AS(tangent.boundary_parameter({3, 1}, lambda), WindowedOut);
}

TEST_CASE("strict interior") {
  const StarDomain strip = StarDomain::strip_chordal();
  const std::vector<Point> inside{{0, 0}, {0, 1}, {1, 1}, {1, 2}};
  CHECK(strip.strictly_inside(inside, strip.dilation_of(inside.back())));
  const std::vector<Point> touching{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {3, 1}, {3, 2}};
  CHECK_FALSE(strip.strictly_inside(touching, strip.dilation_of(touching.back())));

  const StarDomain disc = StarDomain::circle_centered();
  const std::vector<Point> small{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 2}, {4, 2}};
  CHECK(disc.strictly_inside(small, disc.dilation_of(small.back())));
  // Sites (5, 0) and (4, 3) sit on the circle of radius 5 through the end.
  const std::vector<Point> on_circle{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {5, 1}, {4, 1},
                                     {4, 2}, {4, 3}, {3, 3}, {3, 4}};
  CHECK_FALSE(disc.strictly_inside(on_circle, disc.dilation_of(on_circle.back())));
}

TEST_CASE("endpoint over lambda lies on the unit boundary") {
  SplitMix64 rng(99);
  for (const StarDomain& d : all_domains()) {
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      const Point z{static_cast<int>(rng.below(401)) - 200, static_cast<int>(rng.below(401)) - 200};
      Dilation lambda;
      try {
        lambda = d.dilation_of(z);
      } catch (const Error&) {
        continue;
      }
      const double theta = polar_angle_deg(z);
      const double r = std::hypot(z.x, z.y) / lambda.value;
      REQUIRE(std::fabs(r - d.radial_distance(theta)) <= 1e-12 * d.radial_distance(theta));
      ++checked;

      const double twice = d.dilation_of({3 * z.x, 3 * z.y}).value;
      if (rational_scale(d)) {
        REQUIRE(twice == 3 * lambda.value);
      } else {
        REQUIRE(twice == Approx(3 * lambda.value).epsilon(1e-14));
      }
    }
    CHECK(checked > 1000);
  }
}

TEST_CASE("strict interior is monotone in lambda for radial domains") {
  SplitMix64 rng(5);
  for (const StarDomain& d : {StarDomain::strip_radial(), StarDomain::triangle(), StarDomain::circle_centered(),
                              StarDomain::circle_offcenter()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<Point> w{{0, 0}};
      while (w.size() < 25) {
        const Point steps[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        w.push_back(w.back() + steps[rng.below(4)]);
      }
      const double lambda = 1.0 + 20.0 * rng.uniform();
      if (d.strictly_inside(w, Dilation::approximate(lambda))) {
        CHECK(d.strictly_inside(w, Dilation::approximate(lambda * 1.01)));
        CHECK(d.strictly_inside(w, Dilation::approximate(lambda * 3)));
      }
    }
  }
}
