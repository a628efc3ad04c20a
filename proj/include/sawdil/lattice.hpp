#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>

namespace sawdil {

// A site of the square lattice Z^2, in lattice units.
struct Point {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(Point, Point) = default;
  friend constexpr auto operator<=>(Point, Point) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline std::ostream& operator<<(std::ostream& os, Point p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

constexpr std::int64_t cross(Point a, Point b) {
  return static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(a.y) * b.x;
}

constexpr std::int64_t dot(Point a, Point b) {
  return static_cast<std::int64_t>(a.x) * b.x + static_cast<std::int64_t>(a.y) * b.y;
}

constexpr std::int64_t norm2(Point a) { return dot(a, a); }

constexpr bool is_unit_step(Point d) {
  return (d.x == 0 && (d.y == 1 || d.y == -1)) || (d.y == 0 && (d.x == 1 || d.x == -1));
}

// Element of the point group of the square lattice, as the integer matrix
// [[xx, xy], [yx, yy]] acting on column vectors.
class PivotSymmetry {
 public:
  constexpr PivotSymmetry() = default;
  constexpr PivotSymmetry(int xx, int xy, int yx, int yy) : xx_(xx), xy_(xy), yx_(yx), yy_(yy) {}

  static constexpr PivotSymmetry identity() { return {1, 0, 0, 1}; }

  // Index 0 is the identity; 1..3 are rotations by 90, 180, 270 degrees;
  // 4..7 are the reflections in the x axis, y axis, and both diagonals.
  static const std::array<PivotSymmetry, 8>& all();

  constexpr Point apply(Point p) const { return {xx_ * p.x + xy_ * p.y, yx_ * p.x + yy_ * p.y}; }

  // this * other: apply `other` first.
  constexpr PivotSymmetry compose(PivotSymmetry o) const {
    return {xx_ * o.xx_ + xy_ * o.yx_, xx_ * o.xy_ + xy_ * o.yy_,
            yx_ * o.xx_ + yy_ * o.yx_, yx_ * o.xy_ + yy_ * o.yy_};
  }

  // Orthogonal, so the inverse is the transpose.
  constexpr PivotSymmetry inverse() const { return {xx_, yx_, xy_, yy_}; }

  constexpr int determinant() const { return xx_ * yy_ - xy_ * yx_; }

  constexpr bool is_orthogonal() const {
    const PivotSymmetry p = compose(inverse());
    return p == identity();
  }

  constexpr int xx() const { return xx_; }
  constexpr int xy() const { return xy_; }
  constexpr int yx() const { return yx_; }
  constexpr int yy() const { return yy_; }

  friend constexpr bool operator==(PivotSymmetry, PivotSymmetry) = default;

 private:
  int xx_ = 1, xy_ = 0, yx_ = 0, yy_ = 1;
};

inline constexpr std::array<PivotSymmetry, 8> kSquareLatticeSymmetries{{
    {1, 0, 0, 1},
    {0, -1, 1, 0},
    {-1, 0, 0, -1},
    {0, 1, -1, 0},
    {1, 0, 0, -1},
    {-1, 0, 0, 1},
    {0, 1, 1, 0},
    {0, -1, -1, 0},
}};

inline const std::array<PivotSymmetry, 8>& PivotSymmetry::all() { return kSquareLatticeSymmetries; }

// Exact rational number with a positive, reduced denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator-(Rational a, Rational b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend constexpr Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend constexpr bool operator==(Rational, Rational) = default;
};

// Two-dimensional SAW exponents.
struct CriticalExponents {
  static constexpr Rational nu{3, 4};
  static constexpr Rational gamma{43, 32};
  static constexpr Rational rho{25, 64};
  static constexpr Rational p_radial = (rho - gamma) / nu;
  static constexpr Rational p_chordal = (Rational{2} * rho - gamma) / nu;
};

static_assert(CriticalExponents::p_radial == Rational(-61, 48));
static_assert(CriticalExponents::p_chordal == Rational(-3, 4));

}  // namespace sawdil
