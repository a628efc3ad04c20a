// Command-line front end: lattice tables, sampling, analysis and plots.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sawdil/analysis.hpp"
#include "sawdil/analytic.hpp"
#include "sawdil/chain.hpp"
#include "sawdil/errors.hpp"
#include "sawdil/estimator.hpp"
#include "sawdil/lattice_effect.hpp"
#include "sawdil/plot.hpp"
#include "sawdil/text.hpp"

namespace fs = std::filesystem;
using namespace sawdil;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInsufficient = 3, kIo = 4 };

struct ConfigArgs {
  std::string path;
  std::vector<std::string> settings;
};

void add_config_options(CLI::App* app, ConfigArgs& args) {
  app->add_option("-c,--config", args.path, "key=value configuration file");
  app->add_option("-s,--set", args.settings, "override one setting, key=value (repeatable)");
}

ExperimentConfig make_config(const ConfigArgs& args) {
  ExperimentConfig c = args.path.empty() ? ExperimentConfig{} : load_config(args.path);
  for (const std::string& kv : args.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  c.validate();
  return c;
}

template <class F>
void write_to(const fs::path& path, F body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  body(os);
  if (!os) throw IoError("failed writing " + path.string());
}

fs::path checkpoint_path(const fs::path& outdir, int chain) {
  char name[32];
  std::snprintf(name, sizeof name, "chain_%03d.ckpt", chain);
  return outdir / "checkpoints" / name;
}

void print_report(const ComparisonReport& r) {
  std::printf("%s p=%s samples=%llu ess=%.0f max|dCDF|=%.5f +- %.5f at %s", r.geometry.c_str(),
              format_double(r.p).c_str(), static_cast<unsigned long long>(r.samples), r.effective_samples,
              r.max_diff.value, r.max_diff.error, format_double(r.max_diff.at).c_str());
  if (r.l2) std::printf(" l2=%.4g", *r.l2);
  std::printf("\n");
  for (const SegmentMass& s : r.segments) {
    std::printf("  [%g, %g): %.5f +- %.5f\n", s.segment.lo, s.segment.hi, s.mass.value, s.mass.error);
  }
}

// Samples of a configuration with its lattice correction (or none) applied.
std::vector<DilationSample> corrected_samples(const ExperimentConfig& c, const std::string& path) {
  std::vector<DilationSample> samples = load_samples(path);
  if (c.correction) {
    const LatticeEffectTable table = obtain_table(c);
    return with_correction(samples, c.domain(), &table);
  }
  return with_correction(samples, c.domain(), nullptr);
}

int cmd_ltable_build(int n_steps, std::uint64_t attempts, int chains, std::uint64_t seed, std::uint64_t interval,
                     double step, int threads, const std::string& out) {
  LatticeEffectConfig lc;
  lc.n_steps = n_steps;
  lc.attempts = attempts;
  lc.chains = chains;
  lc.seed = seed;
  lc.sample_interval = interval;
  lc.grid_step = step;
  lc.threads = threads;
  const LatticeEffectTable table = build_table(lc);
  write_to(out, [&](std::ostream& os) { table.write_csv(os); });
  std::printf("wrote %s: %zu generic, %zu special angles, l(0)/l(30) = %.5f\n", out.c_str(),
              table.generic().size(), table.specials().size(), table.lookup(0.0) / table.lookup(30.0));
  return kOk;
}

int cmd_ltable_show(const std::string& path, const std::vector<double>& thetas) {
  const LatticeEffectTable table = LatticeEffectTable::load(path);
  const LatticeEffectMeta& m = table.meta();
  std::printf("n_steps %d, chains %d, attempts per chain %llu, seed %llu\n", m.n_steps, m.chains,
              static_cast<unsigned long long>(m.attempts), static_cast<unsigned long long>(m.seed));
  std::printf("l(0)/l(30) = %.5f\n", table.lookup(0.0) / table.lookup(30.0));
  for (const LatticeEffectPoint& p : table.specials()) {
    std::printf("special %9.5f  %.6f +- %.6f\n", p.theta_deg, p.value, p.error);
  }
  for (double t : thetas) std::printf("l(%g) = %.6f\n", t, table.lookup(t));
  return kOk;
}

int cmd_sample(const ExperimentConfig& c, bool resume) {
  const fs::path dir(c.outdir);
  std::vector<ChainState> states;
  std::vector<DilationSample> previous;
  if (resume) {
    for (int k = 0; k < c.chains; ++k) states.push_back(load_checkpoint(checkpoint_path(dir, k)));
    previous = load_samples(dir / "samples.csv");
  } else if (c.attempts_per_chain() == 0) {
    throw InsufficientData("no attempted pivots");
  }
  const SamplingResult r = sample_experiment(c, states);
  // Keep chain order: each chain's new samples follow its old ones.
  std::vector<DilationSample> merged;
  merged.reserve(previous.size() + r.samples.front().size());
  for (int k = 0; k < c.chains; ++k) {
    const auto id = static_cast<std::uint64_t>(k);
    for (const DilationSample& s : previous) {
      if (s.chain_id == id) merged.push_back(s);
    }
    for (const DilationSample& s : r.samples.front()) {
      if (s.chain_id == id) merged.push_back(s);
    }
  }
  fs::create_directories(dir / "checkpoints");
  save_samples(dir / "samples.csv", merged);
  for (int k = 0; k < c.chains; ++k) {
    save_checkpoint(checkpoint_path(dir, k), r.final_states[static_cast<std::size_t>(k)]);
  }
  std::printf("%zu samples from %llu retained walks, acceptance %.4f\n", merged.size(),
              static_cast<unsigned long long>(r.retained()), r.acceptance());
  return kOk;
}

int cmd_analyze(const ExperimentConfig& c, const std::string& samples_path) {
  const std::vector<DilationSample> samples = corrected_samples(c, samples_path);
  const ComparisonReport r = analyze_samples(c, samples);
  write_outputs(c, samples, r);
  print_report(r);
  return kOk;
}

int cmd_estimate_p(const ExperimentConfig& c, const std::string& samples_path, double lo, double hi, int points) {
  const std::vector<DilationSample> samples = corrected_samples(c, samples_path);
  const AnalyticLaw law(c.domain());
  const std::vector<double> grid = linear_grid(lo, hi, points);
  const PScan scan = estimate_p(samples, grid, law, c.bins, c.axis, c.fold);
  write_to(fs::path(c.outdir) / "pscan.csv", [&](std::ostream& os) {
    os << "p,l2\n";
    for (std::size_t i = 0; i < scan.grid.size(); ++i) {
      os << format_double(scan.grid[i]) << ',' << format_double(scan.l2[i]) << '\n';
    }
  });
  std::printf("p_star %.6f\n", scan.p_star);
  return kOk;
}

int cmd_analytic(const ExperimentConfig& c, int points, std::optional<double> from, std::optional<double> to) {
  if (points < 2) throw ConfigError("need at least two points");
  const AnalyticLaw law(c.domain());
  auto [lo, hi] = law.range(c.axis);
  if (!std::isfinite(lo)) lo = law.quantile(0.001, c.axis);
  if (!std::isfinite(hi)) hi = law.quantile(0.999, c.axis);
  lo = from.value_or(lo);
  hi = to.value_or(hi);
  const bool with_density = c.axis == Axis::native;
  std::cout << (with_density ? "param,density,cdf\n" : "param,cdf\n");
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    std::cout << format_double(x) << ',';
    if (with_density) {
      double d = 0.0;
      try {
        d = law.density_value(x) / law.normalization();
      } catch (const DomainError&) {
        d = std::nan("");
      }
      std::cout << format_double(d) << ',';
    }
    std::cout << format_double(c.fold > 0 ? law.folded_cdf(x, c.fold, c.axis) : law.cdf(x, c.axis)) << '\n';
  }
  return kOk;
}

int cmd_plot(const std::vector<std::string>& cdf_files, const std::string& ltable, const std::string& mode,
             const std::string& title, const std::string& xlabel, const std::string& out) {
  std::vector<PlotSeries> series;
  PlotOptions opt;
  opt.title = title;
  opt.x_label = xlabel;
  if (!ltable.empty()) {
    const LatticeEffectTable table = LatticeEffectTable::load(ltable);
    PlotSeries generic{"generic", {}, {}};
    PlotSeries special{"rational tangent", {}, {}, true};
    for (const auto& p : table.generic()) {
      generic.x.push_back(p.theta_deg);
      generic.y.push_back(p.value);
    }
    for (const auto& p : table.specials()) {
      special.x.push_back(p.theta_deg);
      special.y.push_back(p.value);
    }
    series.push_back(generic);
    if (!special.x.empty()) series.push_back(special);
    opt.y_label = "l(theta)";
    if (opt.x_label.empty()) opt.x_label = "theta (deg)";
  }
  for (const std::string& f : cdf_files) {
    std::ifstream is(f);
    if (!is) throw IoError("cannot open " + f);
    const CdfTable t = read_cdf_csv(is);
    const std::string stem = fs::path(f).parent_path().filename().string();
    const std::string name = stem.empty() ? fs::path(f).stem().string() : stem;
    if (mode == "cdf") {
      series.push_back({name + " empirical", t.param, t.empirical});
      series.push_back({name + " analytic", t.param, t.analytic});
      opt.y_label = "CDF";
    } else {
      series.push_back({name, t.param, t.diff});
      opt.y_label = "CDF difference";
    }
  }
  write_to(out, [&](std::ostream& os) { write_svg_plot(os, series, opt); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilation-ensemble self-avoiding walk sampler and boundary-law comparison"};
  app.require_subcommand(1);

  // ltable
  auto* ltable = app.add_subcommand("ltable", "build or inspect a lattice-effect table");
  ltable->require_subcommand(1);
  auto* lbuild = ltable->add_subcommand("build", "estimate l(theta) from full-plane chains");
  int l_steps = 4000;
  std::uint64_t l_attempts = 0;
  int l_chains = 8;
  std::uint64_t l_seed = 1;
  std::uint64_t l_interval = 100;
  double l_step = 0.5;
  int l_threads = 0;
  std::string l_out;
  lbuild->add_option("--n-steps", l_steps, "walk length")->capture_default_str();
  std::string l_attempts_text = "1e7";
  lbuild->add_option("--attempts", l_attempts_text, "attempted pivots per chain")->capture_default_str();
  lbuild->add_option("--chains", l_chains)->capture_default_str();
  lbuild->add_option("--seed", l_seed)->capture_default_str();
  lbuild->add_option("--interval", l_interval, "attempts between samples")->capture_default_str();
  lbuild->add_option("--grid-step", l_step, "generic grid spacing in degrees")->capture_default_str();
  lbuild->add_option("--threads", l_threads, "0: all cores")->capture_default_str();
  lbuild->add_option("-o,--out", l_out, "table CSV")->required();
  auto* lshow = ltable->add_subcommand("show", "print a table summary");
  std::string l_in;
  std::vector<double> l_thetas;
  lshow->add_option("table", l_in, "table CSV")->required();
  lshow->add_option("--theta", l_thetas, "angles to look up");

  // sample / run / analyze / estimate-p / analytic share the config options.
  ConfigArgs sample_args, run_args, analyze_args, p_args, analytic_args;
  auto* sample = app.add_subcommand("sample", "run chains, write samples.csv and checkpoints");
  add_config_options(sample, sample_args);
  bool resume = false;
  sample->add_flag("--resume", resume, "continue from the checkpoints in outdir up to the configured attempts");

  auto* run = app.add_subcommand("run", "sample and analyse in one go");
  add_config_options(run, run_args);

  auto* analyze = app.add_subcommand("analyze", "compare saved samples with the analytic law");
  add_config_options(analyze, analyze_args);
  std::string analyze_samples_path;
  analyze->add_option("--samples", analyze_samples_path, "samples CSV")->required();

  auto* estp = app.add_subcommand("estimate-p", "fit the weight exponent by L2 density distance");
  add_config_options(estp, p_args);
  std::string p_samples;
  double p_lo = -1.25;
  double p_hi = -0.25;
  int p_points = 21;
  estp->add_option("--samples", p_samples, "samples CSV")->required();
  estp->add_option("--p-min", p_lo)->capture_default_str();
  estp->add_option("--p-max", p_hi)->capture_default_str();
  estp->add_option("--points", p_points)->capture_default_str();

  auto* analytic = app.add_subcommand("analytic", "tabulate the analytic law as CSV");
  add_config_options(analytic, analytic_args);
  int a_points = 181;
  std::optional<double> a_from, a_to;
  analytic->add_option("--points", a_points)->capture_default_str();
  analytic->add_option("--from", a_from);
  analytic->add_option("--to", a_to);

  auto* plot = app.add_subcommand("plot", "SVG from comparison CSVs or a lattice table");
  std::vector<std::string> plot_files;
  std::string plot_ltable, plot_mode = "cdf", plot_title, plot_xlabel, plot_out;
  plot->add_option("--cdf", plot_files, "cdf.csv files");
  plot->add_option("--ltable", plot_ltable, "lattice table CSV");
  plot->add_option("--mode", plot_mode, "cdf or diff")->check(CLI::IsMember({"cdf", "diff"}))->capture_default_str();
  plot->add_option("--title", plot_title);
  plot->add_option("--xlabel", plot_xlabel);
  plot->add_option("-o,--out", plot_out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*lbuild) {
      l_attempts = parse_count("--attempts", l_attempts_text);
      return cmd_ltable_build(l_steps, l_attempts, l_chains, l_seed, l_interval, l_step, l_threads, l_out);
    }
    if (*lshow) return cmd_ltable_show(l_in, l_thetas);
    if (*sample) return cmd_sample(make_config(sample_args), resume);
    if (*run) {
      print_report(run_experiment(make_config(run_args)));
      return kOk;
    }
    if (*analyze) return cmd_analyze(make_config(analyze_args), analyze_samples_path);
    if (*estp) return cmd_estimate_p(make_config(p_args), p_samples, p_lo, p_hi, p_points);
    if (*analytic) return cmd_analytic(make_config(analytic_args), a_points, a_from, a_to);
    if (*plot) {
      if (plot_files.empty() && plot_ltable.empty()) throw ConfigError("plot needs --cdf or --ltable");
      return cmd_plot(plot_files, plot_ltable, plot_mode, plot_title, plot_xlabel, plot_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kInsufficient;
  } catch (const BinningError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kInsufficient;
  } catch (const BracketError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kInsufficient;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const CheckpointFormatError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
