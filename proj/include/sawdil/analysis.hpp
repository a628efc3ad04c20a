#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sawdil/analytic.hpp"
#include "sawdil/domains.hpp"
#include "sawdil/estimator.hpp"
#include "sawdil/lattice_effect.hpp"

namespace sawdil {

// Flat key=value experiment description. Blank lines and '#' comments are
// ignored; unknown keys are errors.
struct ExperimentConfig {
  Geometry geometry = Geometry::circle_centered;
  Rational h{1, 4};       // strip_radial
  double center_a = 0.75;  // circle_offcenter
  double center_b = 0.0;   // circle_offcenter; circle_partial uses -0.75 unless set
  std::optional<double> partial_b;

  int n_steps = 4000;
  std::uint64_t attempts = 100'000'000;  // total over all chains
  int chains = 8;
  std::uint64_t seed = 1;
  std::uint64_t sample_interval = 10;
  std::optional<std::uint64_t> burn_in;
  int threads = 0;

  std::optional<double> p;  // default: exact value for the domain kind
  bool correction = false;
  std::string ltable_path;                     // load if present, else build and save here
  std::uint64_t ltable_attempts = 10'000'000;  // per chain, when building

  Axis axis = Axis::native;
  double fold = 0.0;  // reduce the coordinate mod fold degrees (0: off)
  int bins = 100;
  bool svg = true;
  std::string outdir = "out";

  StarDomain domain() const;
  double exponent() const;
  std::uint64_t attempts_per_chain() const { return attempts / static_cast<std::uint64_t>(chains); }
  // Throws ConfigError.
  void validate() const;
};

// Integer or "num/den"; throws ConfigError naming `key`.
Rational parse_rational(const std::string& key, const std::string& value);
// Nonnegative integer, also in exact 1e8 form; throws ConfigError naming `key`.
std::uint64_t parse_count(const std::string& key, const std::string& value);

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);
// Applies one key=value setting; throws ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

struct CdfDifference {
  double value = 0.0;
  double error = 0.0;  // batch-means 1 sigma of the empirical CDF at the maximiser
  double at = 0.0;     // abscissa of the maximum
};

// sup |empirical - analytic| over both one-sided limits at every step and a
// uniform grid of `grid` points. With fold > 0 the analytic CDF is folded
// mod fold as well. Throws ConfigError when the empirical CDF was built on
// another axis or fold.
CdfDifference max_cdf_difference(const WeightedCdf& empirical, const AnalyticLaw& law, Axis axis,
                                 double fold = 0.0, int grid = 1000);

// Integral of (histogram density - law density)^2 over `bins` equal bins.
// The binned interval is the axis range when finite, otherwise the law's
// 0.0005 to 0.9995 quantile range. Throws BinningError when fewer than 50
// bins, or fewer than 90% of them, hold weight.
double l2_density_difference(std::span<const DilationSample> samples, double p, const AnalyticLaw& law, int bins,
                             Axis axis = Axis::native, double fold = 0.0);

struct PScan {
  std::vector<double> grid;
  std::vector<double> l2;
  double p_star = 0.0;
};

// Scans the grid and refines the minimum by a parabola through the lowest
// grid point and its neighbours. Throws BracketError when the lowest point
// is at an end of the grid.
PScan estimate_p(std::span<const DilationSample> samples, std::span<const double> p_grid, const AnalyticLaw& law,
                 int bins, Axis axis = Axis::native, double fold = 0.0);

// Evenly spaced grid from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int points);

// Boundary pieces reported separately: the three triangle sides and the two
// radial-strip lines on the native axis; empty otherwise.
std::vector<Segment> default_segments(const StarDomain& domain);

struct ComparisonReport {
  std::string geometry;
  double p = 0.0;
  Axis axis = Axis::native;
  double fold = 0.0;
  bool correction = false;
  CdfDifference max_diff;
  std::optional<double> l2;  // unset when too few bins hold weight
  std::vector<SegmentMass> segments;
  int n_steps = 0;
  std::uint64_t attempts = 0;
  int chains = 0;
  std::uint64_t retained = 0;  // retained walks
  std::uint64_t samples = 0;   // walks with a sample
  double acceptance = 0.0;     // pivot acceptance fraction
  double effective_samples = 0.0;
  double wall_seconds = 0.0;
};

void write_report_json(std::ostream& os, const ComparisonReport& report);

// CSV of the comparison at every step: param, empirical, analytic, diff,
// stderr.
void write_cdf_csv(std::ostream& os, const WeightedCdf& empirical, const AnalyticLaw& law, Axis axis,
                   double fold = 0.0);

// Lattice table for a configuration: loaded from ltable_path if it exists,
// otherwise built at the configuration's N (and saved when a path is set).
LatticeEffectTable obtain_table(const ExperimentConfig& config);

// Chain settings shared by the chains of an experiment (chain_id and seed
// are assigned per chain by collect_samples).
ChainConfig chain_config(const ExperimentConfig& config);

// Runs the chains of an experiment, observing the configured domain (with
// the lattice correction when enabled). `resume` continues from saved chain
// states, one per chain.
SamplingResult sample_experiment(const ExperimentConfig& config, std::span<const ChainState> resume = {});

// Compares given samples against the law of the configured domain.
ComparisonReport analyze_samples(const ExperimentConfig& config, std::span<const DilationSample> samples,
                                 std::uint64_t retained = 0, double acceptance = 0.0);

// Runs the chains and writes samples.csv, cdf.csv, report.json and
// (optionally) cdf.svg to config.outdir, plus timing.txt with the wall time.
// Nothing is written when the run yields no samples (InsufficientData).
ComparisonReport run_experiment(const ExperimentConfig& config);

// Writes cdf.csv, report.json and cdf.svg for already collected samples.
void write_outputs(const ExperimentConfig& config, std::span<const DilationSample> samples,
                   const ComparisonReport& report);

}  // namespace sawdil
