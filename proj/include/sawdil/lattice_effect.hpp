#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sawdil/lattice.hpp"
#include "sawdil/stats.hpp"
#include "sawdil/walk.hpp"

namespace sawdil {

struct LatticeEffectPoint {
  double theta_deg = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool is_special = false;
};

struct LatticeEffectMeta {
  int n_steps = 0;
  std::uint64_t attempts = 0;  // per chain
  std::uint64_t seed = 0;
  int chains = 1;
  double normalization = 1.0;  // value = normalization * N^rho * fraction
};

// Normalised estimate of l(theta) on [0, 90): a generic grid plus isolated
// values at angles with rational tangent.
class LatticeEffectTable {
 public:
  LatticeEffectTable() = default;
  // Points may be given in any order; specials are flagged by is_special.
  // Throws InvalidArgument on a non-positive value, a negative error or an
  // angle outside [0, 90).
  LatticeEffectTable(std::vector<LatticeEffectPoint> points, LatticeEffectMeta meta);

  const std::vector<LatticeEffectPoint>& generic() const { return generic_; }
  const std::vector<LatticeEffectPoint>& specials() const { return specials_; }
  const LatticeEffectMeta& meta() const { return meta_; }

  // l at tangent angle tau (degrees, any real). Reduced with period 90 and
  // the reflection tau -> 90 - tau; an angle within 1e-9 degrees of a special
  // returns the special value, otherwise the generic grid is interpolated
  // linearly without crossing a special angle.
  double lookup(double tau_deg) const;

  // Trapezoid integral of the periodic generic curve over [0, 180).
  double generic_integral() const;

  // Every value and error multiplied by c.
  LatticeEffectTable scaled(double c) const;
  // Rescaled so that generic_integral() == 1.
  LatticeEffectTable normalized() const;

  void write_csv(std::ostream& os) const;
  static LatticeEffectTable read_csv(std::istream& is);
  void save(const std::filesystem::path& path) const;
  static LatticeEffectTable load(const std::filesystem::path& path);

  friend bool operator==(const LatticeEffectTable& a, const LatticeEffectTable& b);

 private:
  double interpolate(double theta) const;
  double folded_generic(double r) const;

  std::vector<LatticeEffectPoint> generic_;
  std::vector<LatticeEffectPoint> specials_;
  std::vector<double> special_folded_;  // special angles reduced to [0, 45]
  LatticeEffectMeta meta_;
};

// Reduction of an angle to [0, 45] under period 90 and theta -> 90 - theta.
double fold_to_45(double theta_deg);

// Primitive direction in the quarter turn x > 0, y >= 0 equivalent to d
// under rotations by 90 degrees.
Point reduce_direction(Point d);

// Default special directions: tangents 0, 1, 1/2, 1/3, 2/3 and their
// reflections.
std::vector<Point> default_special_directions();

// Generic grid (k + 1/2) * step for k = 0 .. 90/step - 1.
std::vector<double> generic_grid(double step);

// Counts how often sampled walks stay strictly on one side of lines at a
// fixed set of angles. For each angle the four rotations by multiples of 90
// degrees are averaged, which leaves the expectation unchanged.
class SideEventCounter {
 public:
  // Angles snap to exact integer directions as LineDirection::from_degrees.
  SideEventCounter(std::vector<double> angles_deg, int total_batches);

  void add(std::span<const Point> sites, int batch);
  void merge(const SideEventCounter& other);

  std::size_t size() const { return angles_.size(); }
  double angle(std::size_t i) const { return angles_[i]; }
  std::uint64_t samples() const;
  // Fraction of samples with the event at angle i, batch-means error.
  Estimate fraction(std::size_t i, int min_batches = 30) const;

 private:
  std::vector<double> angles_;
  std::vector<std::array<LineDirection, 4>> lines_;
  int batches_;
  std::vector<double> hits_;    // [angle * batches + batch], quarter counts
  std::vector<double> counts_;  // [batch]
};

struct LatticeEffectConfig {
  int n_steps = 4000;
  std::uint64_t attempts = 10'000'000;  // per chain
  std::uint64_t sample_interval = 100;
  int chains = 1;
  std::uint64_t seed = 1;
  double grid_step = 0.5;
  // Tangent directions required by configured domains, added to the
  // defaults together with their reflections.
  std::vector<Point> extra_specials;
  // Run the chains on this many threads (0: hardware concurrency).
  int threads = 0;
};

// N^rho * fraction of walks strictly above the line at theta, from one
// full-plane chain. Throws InsufficientData with fewer than 30 nonempty
// batches.
Estimate estimate_l_at(double theta_deg, int n_steps, std::uint64_t attempts, std::uint64_t seed,
                       std::uint64_t sample_interval = 100);

// Angles (degrees, [0, 90)) tabulated by build_table: the generic grid
// followed by the special angles.
std::vector<double> table_angles(const LatticeEffectConfig& config, std::vector<bool>* is_special = nullptr);

// Unnormalised table from an accumulated counter whose angles are
// table_angles(config).
LatticeEffectTable table_from_counter(const SideEventCounter& counter, const LatticeEffectConfig& config);

LatticeEffectTable build_table(const LatticeEffectConfig& config);

// Pointwise fit a + b N^(-1/2) through two tables on identical grids,
// returning a (renormalised).
LatticeEffectTable extrapolate(const LatticeEffectTable& small_n, const LatticeEffectTable& large_n);

}  // namespace sawdil
