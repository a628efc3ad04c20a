#pragma once

#include <span>
#include <vector>

#include "sawdil/lattice.hpp"
#include "sawdil/rng.hpp"
#include "sawdil/site_index.hpp"

namespace sawdil {

enum class PlaneConstraint { full_plane, half_plane };

// An N-step self-avoiding walk on Z^2 starting at the origin.
//
// Internally the sites are kept in a moving frame: the walk seen by callers
// is frame * (stored[i] - stored[0]). A pivot then only rewrites the shorter
// of the two arms; when that arm is the head, the frame absorbs the
// symmetry instead. The occupancy index is keyed by stored coordinates.
class LatticeWalk {
 public:
  // Validates that `sites` starts at the origin, uses unit steps and is
  // self-avoiding. Throws InvalidArgument otherwise.
  explicit LatticeWalk(std::span<const Point> sites);

  // The straight walk 0, d, 2d, ..., n d. Throws InvalidArgument if d is not
  // a unit lattice vector or n < 0.
  static LatticeWalk rod(int n, Point direction);

  int steps() const { return static_cast<int>(stored_.size()) - 1; }

  Point site(int i) const { return frame_.apply(stored_[static_cast<std::size_t>(i)] - stored_[0]); }
  Point endpoint() const { return site(steps()); }

  std::vector<Point> sites() const;
  // Writes the sites into `out` (resized to steps() + 1).
  void copy_sites(std::vector<Point>& out) const;

  bool occupied(Point p) const;

  // Applies `g` to the part of the walk after site k, about site k, if the
  // result is self-avoiding and respects `constraint` (half_plane: every
  // site has y >= 0). Returns whether the move was accepted; on rejection
  // the walk is unchanged. Requires 0 <= k < steps().
  bool try_pivot(int k, PivotSymmetry g, PlaneConstraint constraint);

  // Applies `g` to the part of the walk before site k, about site k, then
  // translates the walk back to the origin. Equal to try_pivot(k, g^-1)
  // followed by rotating the whole walk by g, so it moves the sites near the
  // origin, which tail pivots rarely do under half_plane.
  bool try_head_pivot(int k, PivotSymmetry g, PlaneConstraint constraint);

  friend bool operator==(const LatticeWalk& a, const LatticeWalk& b) { return a.sites() == b.sites(); }

 private:
  bool satisfies_half_plane(int k, PivotSymmetry g) const;
  bool head_satisfies_half_plane(int k, PivotSymmetry g) const;
  bool stage_pivot(int k, PivotSymmetry g);
  void commit_pivot(int k, PivotSymmetry g);
  void recenter();

  std::vector<Point> stored_;
  PivotSymmetry frame_;
  SiteIndex index_;
  std::vector<Point> scratch_;
};

inline LatticeWalk make_rod(int n, Point direction) { return LatticeWalk::rod(n, direction); }

// One pivot proposal: site uniform in [0, N), symmetry uniform among the
// seven non-identity elements. Under half_plane the move is a tail or a
// head pivot with probability 1/2 each; both are their own inverse family,
// so the uniform measure stays stationary. Walks with no steps are left
// alone.
bool pivot_once(LatticeWalk& walk, SplitMix64& rng, PlaneConstraint constraint);

// O(N) oracle independent of LatticeWalk: unit steps and distinct sites.
bool check_self_avoiding(std::span<const Point> sites);

// A line through the origin. Integer directions give exact side tests.
class LineDirection {
 public:
  static LineDirection exact(Point direction);
  // Snaps to an exact direction when theta is within 1e-9 degrees of the
  // angle of a primitive integer vector with both coordinates at most 16 in
  // magnitude.
  static LineDirection from_degrees(double theta_deg);

  bool is_exact() const { return exact_; }
  Point integer_direction() const { return direction_; }
  double degrees() const { return degrees_; }

  // Strictly left of the direction vector, i.e. -x sin(t) + y cos(t) > 0.
  bool strictly_left(Point p) const {
    if (exact_) return cross(direction_, p) > 0;
    return -p.x * sin_ + p.y * cos_ > 0.0;
  }

 private:
  bool exact_ = false;
  Point direction_{};
  double degrees_ = 0.0;
  double cos_ = 1.0;
  double sin_ = 0.0;
};

// True iff every site but the origin lies strictly above the line through
// the origin at angle theta.
bool stays_strictly_one_side(std::span<const Point> sites, const LineDirection& line);
bool stays_strictly_one_side(const LatticeWalk& walk, double theta_deg);

// The smallest cone containing sites 1..N, when it is narrower than a half
// plane. Every such site lies in the closed cone from `first` counter-
// clockwise to `last`.
struct AngularExtent {
  bool empty = false;  // the walk has no sites besides the origin
  bool pointed = false;
  Point first{};
  Point last{};

  // Equivalent to stays_strictly_one_side for the walk the extent came from.
  bool strictly_left_of(const LineDirection& line) const {
    return empty || (pointed && line.strictly_left(first) && line.strictly_left(last));
  }
};

AngularExtent angular_extent(std::span<const Point> sites);

}  // namespace sawdil
