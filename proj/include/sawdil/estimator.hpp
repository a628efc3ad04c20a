#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sawdil/analytic.hpp"
#include "sawdil/chain.hpp"
#include "sawdil/domains.hpp"
#include "sawdil/lattice_effect.hpp"
#include "sawdil/stats.hpp"

namespace sawdil {

// Exponent p of the dilation weight lambda^p for a domain kind.
double default_exponent(DomainKind kind);

// One walk of the dilation ensemble. lambda is stored raw so that the
// exponent is applied at analysis time.
struct DilationSample {
  std::uint64_t chain_id = 0;
  std::uint64_t sample_index = 0;
  double lambda = 0.0;
  Point endpoint{};
  double theta_deg = 0.0;  // polar angle of the endpoint
  double param = 0.0;      // native law coordinate
  double w_thickness = 0.0;
  double l_value = 1.0;  // lattice effect at the tangent angle, 1 if uncorrected

  // lambda^p * w_thickness / l_value.
  double weight(double p) const;

  friend bool operator==(const DilationSample&, const DilationSample&) = default;
};

// Turns sampled walks into DilationSamples for one domain.
class DilationObserver {
 public:
  // Throws ConfigError when `constraint` is not the one the domain needs.
  // The table, if given, must outlive the observer.
  DilationObserver(const StarDomain& domain, PlaneConstraint constraint,
                   const LatticeEffectTable* correction = nullptr);

  const StarDomain& domain() const { return domain_; }

  // Empty when lambda is undefined, the walk leaves lambda * D, or the end
  // point is outside the parameter window.
  std::optional<DilationSample> observe(std::span<const Point> sites, std::uint64_t chain_id = 0,
                                        std::uint64_t sample_index = 0) const;
  std::optional<DilationSample> observe(const ChainSample& s) const {
    return observe(s.sites, s.chain_id, s.sample_index);
  }

 private:
  StarDomain domain_;
  const LatticeEffectTable* correction_;
};

struct SamplingResult {
  // samples[d] for observer d, chains concatenated in chain order.
  std::vector<std::vector<DilationSample>> samples;
  std::vector<ChainStats> chains;
  // State of every chain at the end of the run, for checkpoints.
  std::vector<ChainState> final_states;

  std::uint64_t retained() const;
  double acceptance() const;
};

// Runs `chains` chains of `base` (chain c gets chain_id c and seed
// chain_seed(base.seed, c)) on up to `threads` threads and observes every
// retained walk with each observer. `extra`, if set, is called once per
// chain and may return a visitor that also sees that chain's samples.
// With `resume` (one state per chain), chain c continues from resume[c]
// up to base.attempts instead of starting afresh.
SamplingResult collect_samples(const ChainConfig& base, int chains, int threads,
                               std::span<const DilationObserver> observers,
                               const std::function<SampleVisitor(int)>& extra = {},
                               std::span<const ChainState> resume = {});

// Boundary tangent angle at the sample's endpoint, degrees mod 180.
double tangent_angle(const StarDomain& domain, const DilationSample& s);

// Copies of `samples` with l_value recomputed from `table` (or reset to 1).
std::vector<DilationSample> with_correction(std::span<const DilationSample> samples, const StarDomain& domain,
                                            const LatticeEffectTable* table);

// Coordinate of a sample on an axis, optionally reduced mod `fold` degrees
// (0: no folding).
double sample_coordinate(const DilationSample& s, Axis axis, double fold = 0.0);

// Batch of every sample: chains in order of first appearance, kBatchesPerChain
// contiguous batches each, sized by the largest sample index seen per chain.
std::vector<int> assign_batches(std::span<const DilationSample> samples, int* total_batches = nullptr);

struct CdfPoint {
  double x = 0.0;
  double cdf = 0.0;
  double error = 0.0;
};

// Weighted empirical CDF (right-continuous step function) with batch-means
// errors at every step.
class WeightedCdf {
 public:
  // Throws InsufficientData when the samples occupy fewer than
  // `min_batches` batches.
  WeightedCdf(std::span<const DilationSample> samples, double p, Axis axis = Axis::native, double fold = 0.0,
              int min_batches = 30);

  Axis axis() const { return axis_; }
  double fold() const { return fold_; }
  const std::vector<CdfPoint>& steps() const { return steps_; }

  // Fraction of weight at coordinates <= x, and strictly below x.
  double value(double x) const;
  double left_limit(double x) const;
  // Error of value(x).
  double error(double x) const;

  double effective_sample_size() const { return ess_; }
  std::size_t samples() const { return count_; }
  int batches() const { return batches_; }

 private:
  std::vector<CdfPoint> steps_;
  Axis axis_;
  double fold_;
  double ess_ = 0.0;
  std::size_t count_ = 0;
  int batches_ = 0;
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
};

struct SegmentMass {
  Segment segment;
  Estimate mass;
};

// Weighted mass in each segment [lo, hi) of the coordinate (the last
// segment also takes hi). Throws InvalidArgument when a sample falls in no
// segment or in two.
std::vector<SegmentMass> segment_masses(std::span<const DilationSample> samples, double p,
                                        std::span<const Segment> segments, Axis axis = Axis::native,
                                        int min_batches = 30);

// Samples CSV with a header row. Numbers are written in shortest round-trip
// form, so read(write(s)) == s.
void write_samples_csv(std::ostream& os, std::span<const DilationSample> samples);
std::vector<DilationSample> read_samples_csv(std::istream& is);
void save_samples(const std::filesystem::path& path, std::span<const DilationSample> samples);
std::vector<DilationSample> load_samples(const std::filesystem::path& path);

}  // namespace sawdil
