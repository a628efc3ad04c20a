#include "sawdil/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sawdil/errors.hpp"
#include "sawdil/plot.hpp"
#include "sawdil/text.hpp"

namespace sawdil {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Config values reuse the CSV field parsers but report ConfigError.
template <class F>
auto config_value(const std::string& key, F parse) {
  try {
    return parse();
  } catch (const IoError&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) return config_value(key, [&] { return parse_double(v, key.c_str()); });
  const Rational r = parse_rational(key, v);
  return r.value();
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

int parse_int(const std::string& key, const std::string& v) {
  const long long n = config_value(key, [&] { return parse_integer(v, key.c_str()); });
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    throw ConfigError("value out of range for '" + key + "'");
  }
  return static_cast<int>(n);
}

bool full_turn(const ExperimentConfig& c, Axis axis) {
  switch (c.geometry) {
    case Geometry::strip_radial:
    case Geometry::triangle:
    case Geometry::circle_centered:
      return true;
    case Geometry::circle_offcenter:
      return axis == Axis::polar_angle;
    default:
      return false;
  }
}

// Analytic CDF matching an empirical CDF's coordinate.
double law_cdf(const AnalyticLaw& law, double x, Axis axis, double fold) {
  return fold > 0 ? law.folded_cdf(x, fold, axis) : law.cdf(x, axis);
}

// Finite interval carrying the comparison: [0, fold], the axis range, or
// central quantiles when the range is infinite.
std::pair<double, double> comparison_interval(const AnalyticLaw& law, Axis axis, double fold, double tail) {
  if (fold > 0) return {0.0, fold};
  auto [lo, hi] = law.range(axis);
  if (!std::isfinite(lo)) lo = law.quantile(tail, axis);
  if (!std::isfinite(hi)) hi = law.quantile(1.0 - tail, axis);
  return {lo, hi};
}

template <class F>
void write_file(const std::filesystem::path& path, F body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

std::string axis_label(const StarDomain& domain, Axis axis, double fold) {
  std::string label;
  if (axis == Axis::polar_angle) {
    label = "polar angle (deg)";
  } else if (domain.geometry() == Geometry::strip_chordal) {
    label = "x";
  } else {
    label = "boundary angle (deg)";
  }
  if (fold > 0) label += " mod " + format_double(fold);
  return label;
}

}  // namespace

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  // Accept 1e8 style counts as long as they are exact integers.
  if (v.find_first_of("eE.") != std::string::npos) {
    const double d = config_value(key, [&] { return parse_double(v, key.c_str()); });
    if (!(d >= 0 && d < 1.8e19) || d != std::floor(d)) throw ConfigError("bad count for '" + key + "': " + v);
    return static_cast<std::uint64_t>(d);
  }
  return config_value(key, [&] { return static_cast<std::uint64_t>(parse_unsigned(v, key.c_str())); });
}

Rational parse_rational(const std::string& key, const std::string& v) {
  const auto slash = v.find('/');
  return config_value(key, [&] {
    if (slash == std::string::npos) return Rational(parse_integer(v, key.c_str()));
    const long long num = parse_integer(trim(v.substr(0, slash)), key.c_str());
    const long long den = parse_integer(trim(v.substr(slash + 1)), key.c_str());
    if (den == 0) throw ConfigError("zero denominator for '" + key + "'");
    return Rational(num, den);
  });
}

StarDomain ExperimentConfig::domain() const {
  switch (geometry) {
    case Geometry::strip_chordal: return StarDomain::strip_chordal();
    case Geometry::strip_radial: return StarDomain::strip_radial(h);
    case Geometry::triangle: return StarDomain::triangle();
    case Geometry::circle_centered: return StarDomain::circle_centered();
    case Geometry::circle_offcenter: return StarDomain::circle_offcenter(center_a, center_b);
    case Geometry::circle_partial: return StarDomain::circle_partial(partial_b.value_or(-0.75));
    case Geometry::circle_tangent: return StarDomain::circle_tangent();
  }
  throw ConfigError("unknown geometry");
}

double ExperimentConfig::exponent() const { return p.value_or(default_exponent(domain().kind())); }

void ExperimentConfig::validate() const {
  if (n_steps < 1) throw ConfigError("n_steps must be positive");
  if (chains < 1) throw ConfigError("chains must be positive");
  if (sample_interval < 1) throw ConfigError("sample_interval must be positive");
  if (threads < 0) throw ConfigError("threads must not be negative");
  if (bins < 1) throw ConfigError("bins must be positive");
  if (correction && ltable_attempts < 1 && !std::filesystem::exists(ltable_path)) {
    throw ConfigError("ltable_attempts must be positive");
  }
  if (p && !std::isfinite(*p)) throw ConfigError("p must be finite");
  if (!(fold >= 0)) throw ConfigError("fold must not be negative");
  if (fold > 0) {
    const double copies = 360.0 / fold;
    if (std::fabs(copies - std::round(copies)) > 1e-9) throw ConfigError("fold must divide 360");
    if (!full_turn(*this, axis)) throw ConfigError("fold needs an axis covering a full turn");
  }
  if (outdir.empty()) throw ConfigError("outdir must not be empty");
  try {
    (void)domain();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("bad domain parameters: ") + e.what());
  }
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "geometry") {
    c.geometry = geometry_from_string(v);
  } else if (key == "h") {
    c.h = parse_rational(key, v);
  } else if (key == "center_a") {
    c.center_a = parse_real(key, v);
  } else if (key == "center_b") {
    c.center_b = parse_real(key, v);
  } else if (key == "partial_b") {
    c.partial_b = parse_real(key, v);
  } else if (key == "n_steps") {
    c.n_steps = parse_int(key, v);
  } else if (key == "attempts") {
    c.attempts = parse_count(key, v);
  } else if (key == "chains") {
    c.chains = parse_int(key, v);
  } else if (key == "seed") {
    c.seed = parse_count(key, v);
  } else if (key == "sample_interval") {
    c.sample_interval = parse_count(key, v);
  } else if (key == "burn_in") {
    if (v == "default") {
      c.burn_in.reset();
    } else {
      c.burn_in = parse_count(key, v);
    }
  } else if (key == "threads") {
    c.threads = parse_int(key, v);
  } else if (key == "p") {
    if (v == "default" || v == "exact") {
      c.p.reset();
    } else {
      c.p = parse_real(key, v);
    }
  } else if (key == "correction") {
    c.correction = parse_bool(key, v);
  } else if (key == "ltable_path") {
    c.ltable_path = v;
  } else if (key == "ltable_attempts") {
    c.ltable_attempts = parse_count(key, v);
  } else if (key == "axis") {
    c.axis = axis_from_string(v);
  } else if (key == "fold") {
    c.fold = parse_real(key, v);
  } else if (key == "bins") {
    c.bins = parse_int(key, v);
  } else if (key == "svg") {
    c.svg = parse_bool(key, v);
  } else if (key == "outdir") {
    c.outdir = v;
  } else {
    throw ConfigError("unknown key: " + key);
  }
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_setting(c, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  return parse_config(is);
}

CdfDifference max_cdf_difference(const WeightedCdf& empirical, const AnalyticLaw& law, Axis axis, double fold,
                                 int grid) {
  if (empirical.axis() != axis || empirical.fold() != fold) {
    throw ConfigError("empirical CDF was built on another axis");
  }
  CdfDifference best;
  auto consider = [&](double d, double err, double at) {
    if (d > best.value) best = {d, err, at};
  };
  const auto& steps = empirical.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double F = law_cdf(law, steps[i].x, axis, fold);
    consider(std::fabs(steps[i].cdf - F), steps[i].error, steps[i].x);
    const double below = i == 0 ? 0.0 : steps[i - 1].cdf;
    const double below_err = i == 0 ? 0.0 : steps[i - 1].error;
    consider(std::fabs(below - F), below_err, steps[i].x);
  }
  if (grid > 1) {
    const auto [lo, hi] = comparison_interval(law, axis, fold, 1e-4);
    for (int j = 0; j <= grid; ++j) {
      const double x = lo + (hi - lo) * j / grid;
      const double F = law_cdf(law, x, axis, fold);
      consider(std::fabs(empirical.value(x) - F), empirical.error(x), x);
    }
  }
  return best;
}

double l2_density_difference(std::span<const DilationSample> samples, double p, const AnalyticLaw& law, int bins,
                             Axis axis, double fold) {
  if (bins < 50) throw BinningError("need at least 50 bins");
  const auto [lo, hi] = comparison_interval(law, axis, fold, 0.0005);
  const double width = (hi - lo) / bins;
  std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
  double total = 0.0;
  for (const DilationSample& s : samples) {
    const double w = s.weight(p);
    total += w;
    const double x = sample_coordinate(s, axis, fold);
    if (x < lo || x > hi) continue;
    const int k = std::min(bins - 1, static_cast<int>((x - lo) / width));
    mass[static_cast<std::size_t>(k)] += w;
  }
  const auto filled = std::count_if(mass.begin(), mass.end(), [](double m) { return m > 0; });
  if (!(total > 0) || filled < 50 || filled < 0.9 * bins) {
    throw BinningError("only " + std::to_string(filled) + " of " + std::to_string(bins) + " bins hold weight");
  }
  double sum = 0.0;
  double F_prev = law_cdf(law, lo, axis, fold);
  for (int k = 0; k < bins; ++k) {
    const double F = law_cdf(law, k + 1 == bins ? hi : lo + (k + 1) * width, axis, fold);
    const double d = (mass[static_cast<std::size_t>(k)] / total - (F - F_prev)) / width;
    sum += d * d * width;
    F_prev = F;
  }
  return sum;
}

PScan estimate_p(std::span<const DilationSample> samples, std::span<const double> p_grid, const AnalyticLaw& law,
                 int bins, Axis axis, double fold) {
  if (p_grid.size() < 3) throw InvalidArgument("p grid needs at least three points");
  if (!std::is_sorted(p_grid.begin(), p_grid.end()) ||
      std::adjacent_find(p_grid.begin(), p_grid.end()) != p_grid.end()) {
    throw InvalidArgument("p grid must be strictly increasing");
  }
  PScan scan;
  scan.grid.assign(p_grid.begin(), p_grid.end());
  for (double p : p_grid) scan.l2.push_back(l2_density_difference(samples, p, law, bins, axis, fold));
  const auto i = static_cast<std::size_t>(std::min_element(scan.l2.begin(), scan.l2.end()) - scan.l2.begin());
  if (i == 0 || i + 1 == scan.l2.size()) throw BracketError("L2 minimum lies on the edge of the p grid");
  const double x0 = scan.grid[i - 1], x1 = scan.grid[i], x2 = scan.grid[i + 1];
  const double y0 = scan.l2[i - 1], y1 = scan.l2[i], y2 = scan.l2[i + 1];
  // Vertex of the parabola through the three points.
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  scan.p_star = den != 0 ? x1 - 0.5 * num / den : x1;
  return scan;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return g;
}

std::vector<Segment> default_segments(const StarDomain& domain) {
  switch (domain.geometry()) {
    case Geometry::triangle: return {{0, 120}, {120, 240}, {240, 360}};
    case Geometry::strip_radial: return {{0, 180}, {180, 360}};
    default: return {};
  }
}

void write_report_json(std::ostream& os, const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["geometry"] = r.geometry;
  j["p"] = r.p;
  j["axis"] = to_string(r.axis);
  j["fold"] = r.fold;
  j["correction"] = r.correction;
  j["error_convention"] = "1 sigma, batch means";
  j["max_cdf_difference"] = {{"value", r.max_diff.value}, {"stderr", r.max_diff.error}, {"at", r.max_diff.at}};
  j["l2_density_difference"] = r.l2 ? nlohmann::ordered_json(*r.l2) : nlohmann::ordered_json(nullptr);
  auto segs = nlohmann::ordered_json::array();
  for (const SegmentMass& s : r.segments) {
    segs.push_back({{"lo", s.segment.lo}, {"hi", s.segment.hi}, {"mass", s.mass.value}, {"stderr", s.mass.error}});
  }
  j["segments"] = segs;
  j["n_steps"] = r.n_steps;
  j["attempts"] = r.attempts;
  j["chains"] = r.chains;
  j["retained"] = r.retained;
  j["samples"] = r.samples;
  j["acceptance"] = r.acceptance;
  j["effective_samples"] = r.effective_samples;
  os << j.dump(2) << '\n';
}

void write_cdf_csv(std::ostream& os, const WeightedCdf& empirical, const AnalyticLaw& law, Axis axis,
                   double fold) {
  if (empirical.axis() != axis || empirical.fold() != fold) {
    throw ConfigError("empirical CDF was built on another axis");
  }
  os << "param,empirical,analytic,diff,stderr\n";
  for (const CdfPoint& s : empirical.steps()) {
    const double F = law_cdf(law, s.x, axis, fold);
    os << format_double(s.x) << ',' << format_double(s.cdf) << ',' << format_double(F) << ','
       << format_double(s.cdf - F) << ',' << format_double(s.error) << '\n';
  }
}

LatticeEffectTable obtain_table(const ExperimentConfig& config) {
  if (!config.ltable_path.empty() && std::filesystem::exists(config.ltable_path)) {
    return LatticeEffectTable::load(config.ltable_path);
  }
  LatticeEffectConfig lc;
  lc.n_steps = config.n_steps;
  lc.attempts = config.ltable_attempts;
  lc.chains = config.chains;
  // Distinct master seed so the table chains never coincide with the
  // sampling chains.
  lc.seed = config.seed ^ 0x6c7461626c650000ULL;
  lc.threads = config.threads;
  lc.extra_specials = config.domain().rational_tangents();
  LatticeEffectTable table = build_table(lc);
  if (!config.ltable_path.empty()) {
    const std::filesystem::path path(config.ltable_path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    table.save(path);
  }
  return table;
}

ChainConfig chain_config(const ExperimentConfig& config) {
  ChainConfig c;
  c.n_steps = config.n_steps;
  c.constraint = config.domain().constraint();
  c.sample_interval = config.sample_interval;
  c.attempts = config.attempts_per_chain();
  c.burn_in_accepted = config.burn_in;
  c.seed = config.seed;
  return c;
}

SamplingResult sample_experiment(const ExperimentConfig& config, std::span<const ChainState> resume) {
  config.validate();
  const StarDomain domain = config.domain();
  std::optional<LatticeEffectTable> table;
  if (config.correction) table = obtain_table(config);
  const std::vector<DilationObserver> observers{
      DilationObserver(domain, domain.constraint(), table ? &*table : nullptr)};
  return collect_samples(chain_config(config), config.chains, config.threads, observers, {}, resume);
}

ComparisonReport analyze_samples(const ExperimentConfig& config, std::span<const DilationSample> samples,
                                 std::uint64_t retained, double acceptance) {
  config.validate();
  if (samples.empty()) throw InsufficientData("no samples to analyse");
  const StarDomain domain = config.domain();
  const AnalyticLaw law(domain);
  const double p = config.exponent();
  const WeightedCdf empirical(samples, p, config.axis, config.fold);

  ComparisonReport r;
  r.geometry = domain.name();
  r.p = p;
  r.axis = config.axis;
  r.fold = config.fold;
  r.correction = config.correction;
  r.max_diff = max_cdf_difference(empirical, law, config.axis, config.fold);
  try {
    r.l2 = l2_density_difference(samples, p, law, config.bins, config.axis, config.fold);
  } catch (const BinningError&) {
    r.l2.reset();
  }
  const std::vector<Segment> segments = default_segments(domain);
  if (!segments.empty()) r.segments = segment_masses(samples, p, segments, Axis::native);
  r.n_steps = config.n_steps;
  r.attempts = config.attempts_per_chain() * static_cast<std::uint64_t>(config.chains);
  r.chains = config.chains;
  r.retained = retained;
  r.samples = samples.size();
  r.acceptance = acceptance;
  r.effective_samples = empirical.effective_sample_size();
  return r;
}

void write_outputs(const ExperimentConfig& config, std::span<const DilationSample> samples,
                   const ComparisonReport& report) {
  const std::filesystem::path dir(config.outdir);
  std::filesystem::create_directories(dir);
  const StarDomain domain = config.domain();
  const AnalyticLaw law(domain);
  const WeightedCdf empirical(samples, report.p, config.axis, config.fold);
  write_file(dir / "cdf.csv", [&](std::ostream& os) { write_cdf_csv(os, empirical, law, config.axis, config.fold); });
  write_file(dir / "report.json", [&](std::ostream& os) { write_report_json(os, report); });
  if (!config.svg) return;

  PlotSeries emp{"empirical", {}, {}};
  PlotSeries exact{"analytic", {}, {}};
  PlotSeries diff{"empirical - analytic", {}, {}};
  PlotSeries band_hi{"+1 sigma", {}, {}};
  PlotSeries band_lo{"-1 sigma", {}, {}};
  for (const CdfPoint& s : empirical.steps()) {
    const double F = law_cdf(law, s.x, config.axis, config.fold);
    emp.x.push_back(s.x);
    emp.y.push_back(s.cdf);
    exact.x.push_back(s.x);
    exact.y.push_back(F);
    diff.x.push_back(s.x);
    diff.y.push_back(s.cdf - F);
    band_hi.x.push_back(s.x);
    band_hi.y.push_back(s.error);
    band_lo.x.push_back(s.x);
    band_lo.y.push_back(-s.error);
  }
  std::ostringstream title;
  title << domain.name() << ", p = " << format_double(report.p) << (config.correction ? ", corrected" : "");
  PlotOptions opt;
  opt.title = title.str();
  opt.x_label = axis_label(domain, config.axis, config.fold);
  opt.y_label = "CDF";
  const std::vector<PlotSeries> cdf_series{emp, exact};
  write_file(dir / "cdf.svg", [&](std::ostream& os) { write_svg_plot(os, cdf_series, opt); });
  opt.y_label = "CDF difference";
  const std::vector<PlotSeries> diff_series{diff, band_hi, band_lo};
  write_file(dir / "diff.svg", [&](std::ostream& os) { write_svg_plot(os, diff_series, opt); });
}

ComparisonReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.attempts_per_chain() == 0) throw InsufficientData("no attempted pivots");
  const auto start = std::chrono::steady_clock::now();
  const SamplingResult result = sample_experiment(config);
  const std::vector<DilationSample>& samples = result.samples.front();
  if (samples.empty()) throw InsufficientData("the run produced no samples");
  ComparisonReport report = analyze_samples(config, samples, result.retained(), result.acceptance());
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(config.outdir);
  std::filesystem::create_directories(dir);
  save_samples(dir / "samples.csv", samples);
  write_outputs(config, samples, report);
  write_file(dir / "timing.txt", [&](std::ostream& os) { os << "wall_seconds " << report.wall_seconds << '\n'; });
  return report;
}

}  // namespace sawdil
