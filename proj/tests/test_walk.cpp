#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sawdil/errors.hpp"
#include "sawdil/lattice.hpp"
#include "sawdil/walk.hpp"

using namespace sawdil;

namespace {

const PivotSymmetry kRot90 = PivotSymmetry::all()[1];
const PivotSymmetry kRot180 = PivotSymmetry::all()[2];

std::vector<Point> apply_all(PivotSymmetry g, const std::vector<Point>& sites) {
  std::vector<Point> out;
  for (Point p : sites) out.push_back(g.apply(p));
  return out;
}

int min_y(const std::vector<Point>& sites) {
  int m = 0;
  for (Point p : sites) m = std::min(m, p.y);
  return m;
}

LatticeWalk random_walk(int n, SplitMix64& rng, PlaneConstraint c) {
  LatticeWalk w = make_rod(n, c == PlaneConstraint::half_plane ? Point{0, 1} : Point{1, 0});
  for (int i = 0; i < 20 * n; ++i) pivot_once(w, rng, c);
  return w;
}

}  // namespace

TEST_CASE("point group elements are orthogonal") {
  for (PivotSymmetry g : PivotSymmetry::all()) {
    CHECK(g.is_orthogonal());
    CHECK(std::abs(g.determinant()) == 1);
    CHECK(g.compose(g.inverse()) == PivotSymmetry::identity());
  }
}

TEST_CASE("exponents") {
  CHECK(CriticalExponents::p_radial == Rational(-61, 48));
  CHECK(CriticalExponents::p_chordal == Rational(-3, 4));
  CHECK(CriticalExponents::rho == Rational(25, 64));
}

TEST_CASE("rods") {
  CHECK(make_rod(0, {1, 0}).sites() == std::vector<Point>{{0, 0}});
  CHECK(make_rod(3, {1, 0}).sites() == std::vector<Point>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const LatticeWalk north = make_rod(5, {0, 1});
  CHECK(min_y(north.sites()) == 0);
  CHECK(north.endpoint() == Point{0, 5});
  CHECK_THROWS_AS(make_rod(3, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(make_rod(-1, {1, 0}), InvalidArgument);
}

TEST_CASE("walk construction validates") {
  const std::vector<Point> loop{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  CHECK_THROWS_AS(LatticeWalk{loop}, InvalidArgument);
  const std::vector<Point> jump{{0, 0}, {2, 0}};
  CHECK_THROWS_AS(LatticeWalk{jump}, InvalidArgument);
  const std::vector<Point> offset{{1, 0}, {2, 0}};
  CHECK_THROWS_AS(LatticeWalk{offset}, InvalidArgument);
}

TEST_CASE("self-avoidance oracle") {
  CHECK(check_self_avoiding(make_rod(50, {0, -1}).sites()));
  const std::vector<Point> loop{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  CHECK_FALSE(check_self_avoiding(loop));
  const std::vector<Point> jump{{0, 0}, {1, 1}};
  CHECK_FALSE(check_self_avoiding(jump));
}

TEST_CASE("single pivots") {
  SUBCASE("rotation of a two-step rod") {
    LatticeWalk w = make_rod(2, {1, 0});
    CHECK(w.try_pivot(1, kRot90, PlaneConstraint::full_plane));
    CHECK(w.sites() == std::vector<Point>{{0, 0}, {1, 0}, {1, 1}});
  }
  SUBCASE("collision leaves the walk untouched") {
    LatticeWalk w = make_rod(3, {1, 0});
    const auto before = w.sites();
    CHECK_FALSE(w.try_pivot(1, kRot180, PlaneConstraint::full_plane));
    CHECK(w.sites() == before);
  }
  SUBCASE("half plane rejects tails below the axis") {
    LatticeWalk w = make_rod(5, {0, 1});
    const auto before = w.sites();
    CHECK_FALSE(w.try_pivot(0, kRot180, PlaneConstraint::half_plane));
    CHECK(w.sites() == before);
    CHECK(w.try_pivot(0, kRot180, PlaneConstraint::full_plane));
    CHECK(w.endpoint() == Point{0, -5});
  }
}

TEST_CASE("head pivot is a tail pivot followed by a global symmetry") {
  SplitMix64 rng(7);
  for (PlaneConstraint c : {PlaneConstraint::full_plane, PlaneConstraint::half_plane}) {
    for (int trial = 0; trial < 300; ++trial) {
      const LatticeWalk start = random_walk(30, rng, c);
      const int k = static_cast<int>(rng.below(30));
      const PivotSymmetry g = PivotSymmetry::all()[1 + rng.below(7)];
      LatticeWalk tail = start;
      const bool tail_ok = tail.try_pivot(k, g.inverse(), PlaneConstraint::full_plane);
      const std::vector<Point> expected = apply_all(g, tail.sites());
      const bool expect_accept =
          tail_ok && (c == PlaneConstraint::full_plane || min_y(expected) >= 0);
      LatticeWalk head = start;
      const bool accepted = head.try_head_pivot(k, g, c);
      REQUIRE(accepted == expect_accept);
      CHECK(head.sites() == (accepted ? expected : start.sites()));
    }
  }
}

TEST_CASE("long random pivot sequences stay valid") {
  for (PlaneConstraint c : {PlaneConstraint::full_plane, PlaneConstraint::half_plane}) {
    SplitMix64 rng(11);
    LatticeWalk w = make_rod(60, c == PlaneConstraint::half_plane ? Point{0, 1} : Point{1, 0});
    int accepted = 0;
    for (int i = 0; i < 20000; ++i) {
      accepted += pivot_once(w, rng, c);
      const auto sites = w.sites();
      REQUIRE(sites.size() == 61);
      REQUIRE(sites[0] == Point{0, 0});
      REQUIRE(check_self_avoiding(sites));
      if (c == PlaneConstraint::half_plane) REQUIRE(min_y(sites) >= 0);
      // The occupancy index agrees with the site list.
      for (Point p : sites) REQUIRE(w.occupied(p));
      REQUIRE_FALSE(w.occupied(sites.back() + Point{1000, 1000}));
    }
    CHECK(accepted > 0);
    CHECK(accepted < 20000);
  }
}

TEST_CASE("one-side test") {
  const std::vector<Point> up{{0, 0}, {0, 1}, {1, 1}, {1, 2}};
  CHECK(stays_strictly_one_side(up, LineDirection::from_degrees(0)));
  const std::vector<Point> back{{0, 0}, {0, 1}, {-1, 1}, {-1, 0}};
  CHECK_FALSE(stays_strictly_one_side(back, LineDirection::from_degrees(0)));
  CHECK(stays_strictly_one_side(back, LineDirection::from_degrees(0.1)));
  // Exact at rational tangents: (2,1) lies on the line at atan(1/2).
  const std::vector<Point> on_line{{0, 0}, {1, 0}, {1, 1}, {2, 1}};
  const double atan_half = std::atan2(1.0, 2.0) * 180.0 / M_PI;
  CHECK(LineDirection::from_degrees(atan_half).is_exact());
  CHECK_FALSE(stays_strictly_one_side(on_line, LineDirection::from_degrees(atan_half)));
}

TEST_CASE("one-side test under reflection in the x axis") {
  SplitMix64 rng(3);
  const PivotSymmetry flip = PivotSymmetry::all()[4];
  for (int trial = 0; trial < 400; ++trial) {
    const LatticeWalk w = random_walk(12, rng, PlaneConstraint::full_plane);
    const double theta = trial % 4 == 0 ? 45.0 : 1.0 + 178.0 * rng.uniform();
    const auto sites = w.sites();
    const auto mirrored = apply_all(flip, sites);
    CHECK(stays_strictly_one_side(sites, LineDirection::from_degrees(theta)) ==
          stays_strictly_one_side(mirrored, LineDirection::from_degrees(180.0 - theta)));
  }
}

TEST_CASE("angular extent agrees with the direct test") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const LatticeWalk w = random_walk(15, rng, PlaneConstraint::full_plane);
    const auto sites = w.sites();
    const AngularExtent e = angular_extent(sites);
    for (double theta : {0.0, 10.0, 26.565051177077990, 45.0, 90.0, 133.0, 179.5}) {
      const LineDirection line = LineDirection::from_degrees(theta);
      CHECK(e.strictly_left_of(line) == stays_strictly_one_side(sites, line));
    }
  }
}
