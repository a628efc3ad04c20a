#include "sawdil/walk.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <unordered_set>

#include "sawdil/errors.hpp"

namespace sawdil {
namespace {

constexpr int kRecenterLimit = 1 << 28;

std::uint64_t pack(Point p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
         static_cast<std::uint32_t>(p.y);
}

}  // namespace

LatticeWalk::LatticeWalk(std::span<const Point> sites) : stored_(sites.begin(), sites.end()) {
  if (stored_.empty() || stored_[0] != Point{0, 0}) {
    throw InvalidArgument("walk must start at the origin");
  }
  if (!check_self_avoiding(stored_)) {
    throw InvalidArgument("walk is not a self-avoiding nearest-neighbour path");
  }
  index_.rebuild(stored_);
}

LatticeWalk LatticeWalk::rod(int n, Point direction) {
  if (n < 0) throw InvalidArgument("rod length must be nonnegative");
  if (!is_unit_step(direction)) throw InvalidArgument("rod direction must be a unit lattice vector");
  std::vector<Point> sites(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) sites[static_cast<std::size_t>(i)] = {i * direction.x, i * direction.y};
  return LatticeWalk(sites);
}

std::vector<Point> LatticeWalk::sites() const {
  std::vector<Point> out;
  copy_sites(out);
  return out;
}

void LatticeWalk::copy_sites(std::vector<Point>& out) const {
  out.resize(stored_.size());
  const Point origin = stored_[0];
  for (std::size_t i = 0; i < stored_.size(); ++i) out[i] = frame_.apply(stored_[i] - origin);
}

bool LatticeWalk::occupied(Point p) const {
  // canonical p corresponds to stored frame^-1 p + stored[0]
  const Point q = frame_.inverse().apply(p) + stored_[0];
  return index_.find(q, stored_) != SiteIndex::kNotFound;
}

bool LatticeWalk::satisfies_half_plane(int k, PivotSymmetry g) const {
  // New canonical tail: c_k + (g * frame)(s_i - s_k); only its y row matters.
  const PivotSymmetry m = g.compose(frame_);
  const Point sk = stored_[static_cast<std::size_t>(k)];
  const long base = site(k).y;
  const long my_x = m.yx();
  const long my_y = m.yy();
  const std::size_t n = stored_.size();
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < n; ++i) {
    const Point d = stored_[i] - sk;
    if (base + my_x * d.x + my_y * d.y < 0) return false;
  }
  return true;
}

bool LatticeWalk::head_satisfies_half_plane(int k, PivotSymmetry g) const {
  // Head sites become g c_i; tail sites shift by g c_k - c_k.
  const Point pk = site(k);
  const long shift = g.apply(pk).y - pk.y;
  for (int i = 1; i <= k; ++i) {
    if (g.apply(site(i)).y < 0) return false;
  }
  if (shift >= 0) return true;
  const PivotSymmetry m = frame_;
  const Point s0 = stored_[0];
  const long my_x = m.yx();
  const long my_y = m.yy();
  const std::size_t n = stored_.size();
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < n; ++i) {
    const Point d = stored_[i] - s0;
    if (my_x * d.x + my_y * d.y + shift < 0) return false;
  }
  return true;
}

// Self-avoidance check of the tail pivot (k, g); fills scratch_ with the new
// positions of the shorter arm.
bool LatticeWalk::stage_pivot(int k, PivotSymmetry g) {
  const int n = steps();
  const auto uk = static_cast<std::size_t>(k);
  const Point pivot = stored_[uk];
  // Symmetry in stored coordinates: frame^-1 g frame.
  const PivotSymmetry h = frame_.inverse().compose(g).compose(frame_);
  const bool move_tail = (n - k) <= k;

  scratch_.clear();
  if (move_tail) {
    for (int i = k + 1; i <= n; ++i) {
      const Point p = pivot + h.apply(stored_[static_cast<std::size_t>(i)] - pivot);
      const std::int32_t j = index_.find(p, stored_);
      if (j != SiteIndex::kNotFound && j < k) return false;
      scratch_.push_back(p);
    }
  } else {
    const PivotSymmetry hinv = h.inverse();
    for (int i = k - 1; i >= 0; --i) {
      const Point p = pivot + hinv.apply(stored_[static_cast<std::size_t>(i)] - pivot);
      const std::int32_t j = index_.find(p, stored_);
      if (j != SiteIndex::kNotFound && j > k) return false;
      scratch_.push_back(p);
    }
  }
  return true;
}

void LatticeWalk::commit_pivot(int k, PivotSymmetry g) {
  const int n = steps();
  const bool move_tail = (n - k) <= k;
  // Erase every moving site before inserting any, so that a new position
  // equal to an old position of the same arm never meets itself.
  const int lo = move_tail ? k + 1 : 0;
  const int hi = move_tail ? n : k - 1;
  for (int i = lo; i <= hi; ++i) index_.erase(i, stored_);
  if (move_tail) {
    for (int i = k + 1; i <= n; ++i) stored_[static_cast<std::size_t>(i)] = scratch_[static_cast<std::size_t>(i - k - 1)];
  } else {
    for (int i = k - 1; i >= 0; --i) stored_[static_cast<std::size_t>(i)] = scratch_[static_cast<std::size_t>(k - 1 - i)];
    frame_ = g.compose(frame_);
  }
  for (int i = lo; i <= hi; ++i) index_.insert(stored_[static_cast<std::size_t>(i)], i);
  if (!move_tail && (std::abs(stored_[0].x) > kRecenterLimit || std::abs(stored_[0].y) > kRecenterLimit)) {
    recenter();
  } else if (index_.needs_rebuild()) {
    index_.rebuild(stored_);
  }
}

bool LatticeWalk::try_pivot(int k, PivotSymmetry g, PlaneConstraint constraint) {
  if (!stage_pivot(k, g)) return false;
  if (constraint == PlaneConstraint::half_plane && !satisfies_half_plane(k, g)) return false;
  commit_pivot(k, g);
  return true;
}

bool LatticeWalk::try_head_pivot(int k, PivotSymmetry g, PlaneConstraint constraint) {
  const PivotSymmetry ginv = g.inverse();
  if (!stage_pivot(k, ginv)) return false;
  if (constraint == PlaneConstraint::half_plane && !head_satisfies_half_plane(k, g)) return false;
  commit_pivot(k, ginv);
  frame_ = g.compose(frame_);
  return true;
}

void LatticeWalk::recenter() {
  const Point origin = stored_[0];
  for (Point& p : stored_) p = p - origin;
  index_.rebuild(stored_);
}

bool pivot_once(LatticeWalk& walk, SplitMix64& rng, PlaneConstraint constraint) {
  const int n = walk.steps();
  if (n < 1) return false;
  const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const auto g = PivotSymmetry::all()[1 + rng.below(7)];
  if (constraint == PlaneConstraint::half_plane && (rng() & 1)) return walk.try_head_pivot(k, g, constraint);
  return walk.try_pivot(k, g, constraint);
}

bool check_self_avoiding(std::span<const Point> sites) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(sites.size() * 2);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i > 0 && !is_unit_step(sites[i] - sites[i - 1])) return false;
    if (!seen.insert(pack(sites[i])).second) return false;
  }
  return true;
}

LineDirection LineDirection::exact(Point direction) {
  if (direction == Point{0, 0}) throw InvalidArgument("line direction must be nonzero");
  LineDirection line;
  line.exact_ = true;
  line.direction_ = direction;
  line.degrees_ = std::atan2(direction.y, direction.x) * 180.0 / std::numbers::pi;
  if (line.degrees_ < 0) line.degrees_ += 360.0;
  line.cos_ = std::cos(line.degrees_ * std::numbers::pi / 180.0);
  line.sin_ = std::sin(line.degrees_ * std::numbers::pi / 180.0);
  return line;
}

LineDirection LineDirection::from_degrees(double theta_deg) {
  constexpr int kMaxCoordinate = 16;
  constexpr double kTolerance = 1e-9;
  double t = std::fmod(theta_deg, 360.0);
  if (t < 0) t += 360.0;
  for (int q = -kMaxCoordinate; q <= kMaxCoordinate; ++q) {
    for (int p = -kMaxCoordinate; p <= kMaxCoordinate; ++p) {
      if ((p == 0 && q == 0) || std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      double a = std::atan2(p, q) * 180.0 / std::numbers::pi;
      if (a < 0) a += 360.0;
      double diff = std::fabs(a - t);
      diff = std::min(diff, 360.0 - diff);
      if (diff < kTolerance) return exact({q, p});
    }
  }
  LineDirection line;
  line.degrees_ = t;
  line.cos_ = std::cos(t * std::numbers::pi / 180.0);
  line.sin_ = std::sin(t * std::numbers::pi / 180.0);
  return line;
}

bool stays_strictly_one_side(std::span<const Point> sites, const LineDirection& line) {
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (!line.strictly_left(sites[i])) return false;
  }
  return true;
}

bool stays_strictly_one_side(const LatticeWalk& walk, double theta_deg) {
  return stays_strictly_one_side(walk.sites(), LineDirection::from_degrees(theta_deg));
}

AngularExtent angular_extent(std::span<const Point> sites) {
  AngularExtent ext;
  if (sites.size() < 2) {
    ext.empty = true;
    return ext;
  }
  Point first = sites[1];
  Point last = sites[1];
  for (std::size_t i = 2; i < sites.size(); ++i) {
    const Point p = sites[i];
    const std::int64_t cf = cross(first, p);
    const std::int64_t cl = cross(p, last);
    const bool after_first = cf > 0 || (cf == 0 && dot(first, p) > 0);
    const bool before_last = cl > 0 || (cl == 0 && dot(p, last) > 0);
    if (after_first && before_last) {
      // Inside the closed cone. A cone of zero width whose point lies on
      // the opposite ray fails both tests below.
      continue;
    }
    if (cf < 0 || (cf == 0 && !after_first)) {
      // Clockwise of `first` (or opposite to it).
      if (cross(p, last) > 0 && cf < 0) {
        first = p;
        continue;
      }
      return ext;
    }
    if (cl < 0 && cf > 0) {
      last = p;
      continue;
    }
    return ext;
  }
  ext.pointed = true;
  ext.first = first;
  ext.last = last;
  return ext;
}

}  // namespace sawdil
