#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sawdil/analysis.hpp"
#include "sawdil/errors.hpp"
#include "sawdil/plot.hpp"
#include "test_support.hpp"

using namespace sawdil;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse(
      "# comment\n"
      "geometry = strip_radial\n"
      "h = 1/3   # trailing comment\n"
      "\n"
      "attempts = 2e6\n"
      "chains = 4\n"
      "p = -61/48\n"
      "correction = yes\n"
      "axis = polar\n"
      "fold = 0\n"
      "svg = off\n"
      "outdir = /tmp/x\n");
  CHECK(c.geometry == Geometry::strip_radial);
  CHECK(c.h == Rational(1, 3));
  CHECK(c.attempts == 2'000'000);
  CHECK(c.attempts_per_chain() == 500'000);
  REQUIRE(c.p.has_value());
  CHECK(*c.p == Approx(-61.0 / 48));
  CHECK(c.correction);
  CHECK(c.axis == Axis::polar_angle);
  CHECK_FALSE(c.svg);
  CHECK(c.outdir == "/tmp/x");

  const ExperimentConfig d = parse("geometry = triangle\np = exact\n");
  CHECK(d.exponent() == Approx(-61.0 / 48));
  CHECK(parse("geometry = circle_tangent\n").exponent() == -0.75);
  CHECK(parse("geometry = circle_partial\n").domain().geometry() == Geometry::circle_partial);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("geometry\n"), ConfigError);
  CHECK_THROWS_AS(parse("chains = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("attempts = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("n_steps = many\n"), ConfigError);
  CHECK_THROWS_AS(parse("bins = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("geometry = triangle\nfold = 70\n"), ConfigError);
  CHECK_THROWS_AS(parse("geometry = strip_chordal\nfold = 90\n"), ConfigError);
  CHECK_THROWS_AS(parse("h = 2/0\n"), ConfigError);
  CHECK_THROWS_AS(parse("correction = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), IoError);
  CHECK_NOTHROW(parse("geometry = triangle\nfold = 120\n"));
  CHECK_NOTHROW(parse("attempts = 0\n"));
  try {
    parse("seed = 1\nbogus = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("planted exponent is recovered") {
  const auto samples = testing::planted_strip_samples(1000000, -1.0, 11);
  const AnalyticLaw law(StarDomain::strip_chordal());
  const auto grid = linear_grid(-1.5, -0.5, 21);
  const PScan scan = estimate_p(samples, grid, law, 100);
  CHECK(std::fabs(scan.p_star + 1.0) < 0.01);

  const auto shifted = linear_grid(-0.9, -0.3, 13);
  CHECK_THROWS_AS(estimate_p(samples, shifted, law, 100), BracketError);
  const std::vector<double> two{-1.0, -0.5};
  CHECK_THROWS_AS(estimate_p(samples, two, law, 100), InvalidArgument);
  CHECK_THROWS_AS(l2_density_difference(samples, -1.0, law, 20), BinningError);
}

TEST_CASE("L2 distance vanishes on exact bin masses") {
  const StarDomain d = StarDomain::circle_offcenter();
  const AnalyticLaw law(d);
  const auto [lo, hi] = law.range();
  const int bins = 90;
  const double width = (hi - lo) / bins;
  std::vector<DilationSample> samples;
  for (int k = 0; k < bins; ++k) {
    DilationSample s;
    s.lambda = 1;
    s.param = lo + (k + 0.5) * width;
    s.w_thickness = law.cdf(lo + (k + 1) * width) - law.cdf(lo + k * width);
    samples.push_back(s);
  }
  CHECK(l2_density_difference(samples, -1.27, law, bins) < 1e-20);
  for (int k = 0; k < bins / 2; ++k) samples[static_cast<std::size_t>(k)].w_thickness *= 1.1;
  CHECK(l2_density_difference(samples, -1.27, law, bins) > 1e-6);
  samples.resize(40);
  CHECK_THROWS_AS(l2_density_difference(samples, -1.27, law, bins), BinningError);
}

TEST_CASE("CDF distance") {
  const auto samples = testing::planted_strip_samples(50000, -1.0, 12);
  const AnalyticLaw law(StarDomain::strip_chordal());
  const WeightedCdf native(samples, -1.0);
  const CdfDifference at_truth = max_cdf_difference(native, law, Axis::native);
  CHECK(at_truth.value < 5 * at_truth.error + 0.01);
  CHECK(at_truth.error > 0);
  const CdfDifference off = max_cdf_difference(WeightedCdf(samples, 0.0), law, Axis::native);
  CHECK(off.value > 0.1);

  // The supremum does not depend on how the boundary is parametrised.
  const WeightedCdf polar(samples, -1.0, Axis::polar_angle);
  CHECK(max_cdf_difference(polar, law, Axis::polar_angle).value == Approx(at_truth.value).epsilon(1e-6));

  CHECK_THROWS_AS(max_cdf_difference(native, law, Axis::polar_angle), ConfigError);
  CHECK_THROWS_AS(max_cdf_difference(native, law, Axis::native, 90), ConfigError);
}

TEST_CASE("exact samples of a uniform law") {
  // On the centred circle the law is uniform, so equally weighted grid
  // points have a CDF distance of half a step.
  const AnalyticLaw law(StarDomain::circle_centered());
  std::vector<DilationSample> samples;
  for (int i = 0; i < 3600; ++i) {
    DilationSample s;
    s.chain_id = static_cast<std::uint64_t>(i % 4);
    s.sample_index = static_cast<std::uint64_t>(i / 4);
    s.lambda = 7;
    s.param = s.theta_deg = 0.1 * i + 0.05;
    s.w_thickness = 1;
    samples.push_back(s);
  }
  const WeightedCdf cdf(samples, -1.27);
  CHECK(max_cdf_difference(cdf, law, Axis::native).value == Approx(1.0 / 7200).epsilon(1e-6));
  const WeightedCdf folded(samples, -1.27, Axis::native, 90);
  // Folding stacks four points on each abscissa.
  CHECK(max_cdf_difference(folded, law, Axis::native, 90).value == Approx(1.0 / 1800).epsilon(1e-6));
}

TEST_CASE("default segments") {
  CHECK(default_segments(StarDomain::triangle()).size() == 3);
  CHECK(default_segments(StarDomain::strip_radial()).size() == 2);
  CHECK(default_segments(StarDomain::circle_centered()).empty());
}

TEST_CASE("experiment outputs") {
  const fs::path root = fs::temp_directory_path() / "sawdil_analysis_test";
  fs::remove_all(root);
  ExperimentConfig c = parse(
      "geometry = triangle\n"
      "n_steps = 60\n"
      "attempts = 400000\n"
      "chains = 2\n"
      "threads = 2\n"
      "seed = 5\n"
      "bins = 50\n");
  c.outdir = (root / "a").string();
  const ComparisonReport a = run_experiment(c);
  c.outdir = (root / "b").string();
  const ComparisonReport b = run_experiment(c);

  for (const char* f : {"samples.csv", "cdf.csv", "report.json"}) {
    CAPTURE(f);
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
  CHECK(fs::exists(root / "a" / "cdf.svg"));
  CHECK(fs::exists(root / "a" / "timing.txt"));
  CHECK(a.samples > 0);
  CHECK(a.segments.size() == 3);
  CHECK(a.attempts == 400000);

  std::ifstream is(root / "a" / "cdf.csv");
  const CdfTable table = read_cdf_csv(is);
  REQUIRE(!table.param.empty());
  CHECK(std::is_sorted(table.param.begin(), table.param.end()));
  CHECK(table.empirical.back() == Approx(1.0).epsilon(1e-12));
  CHECK(table.param.size() <= a.samples);

  const auto json = nlohmann::json::parse(slurp(root / "a" / "report.json"));
  CHECK(json["geometry"] == "triangle");
  CHECK(json["max_cdf_difference"]["value"].get<double>() == Approx(a.max_diff.value));
  CHECK(json["segments"].size() == 3);
  CHECK_FALSE(json.contains("wall_seconds"));

  // A run without attempts leaves nothing behind.
  c.attempts = 0;
  c.outdir = (root / "empty").string();
  CHECK_THROWS_AS(run_experiment(c), InsufficientData);
  CHECK_FALSE(fs::exists(root / "empty"));
  fs::remove_all(root);
}
