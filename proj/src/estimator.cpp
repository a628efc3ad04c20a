#include "sawdil/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string>

#include "sawdil/errors.hpp"
#include "sawdil/parallel.hpp"
#include "sawdil/rng.hpp"
#include "sawdil/text.hpp"

namespace sawdil {

double default_exponent(DomainKind kind) {
  return kind == DomainKind::radial ? CriticalExponents::p_radial.value() : CriticalExponents::p_chordal.value();
}

double DilationSample::weight(double p) const { return std::pow(lambda, p) * w_thickness / l_value; }

DilationObserver::DilationObserver(const StarDomain& domain, PlaneConstraint constraint,
                                   const LatticeEffectTable* correction)
    : domain_(domain), correction_(correction) {
  if (constraint != domain.constraint()) {
    throw ConfigError(domain.name() + " needs " +
                      (domain.constraint() == PlaneConstraint::half_plane ? "half-plane" : "full-plane") +
                      " walks");
  }
}

std::optional<DilationSample> DilationObserver::observe(std::span<const Point> sites, std::uint64_t chain_id,
                                                        std::uint64_t sample_index) const {
  const Point end = sites.back();
  Dilation lambda;
  try {
    lambda = domain_.dilation_of(end);
  } catch (const UndefinedDilation&) {
    return std::nullopt;
  }
  if (!domain_.strictly_inside(sites, lambda)) return std::nullopt;
  DilationSample s;
  try {
    s.param = domain_.boundary_parameter(end, lambda.value);
  } catch (const WindowedOut&) {
    return std::nullopt;
  }
  s.chain_id = chain_id;
  s.sample_index = sample_index;
  s.lambda = lambda.value;
  s.endpoint = end;
  s.theta_deg = polar_angle_deg(end);
  s.w_thickness = domain_.thickness_weight(s.theta_deg);
  s.l_value = correction_ ? correction_->lookup(tangent_angle(domain_, s)) : 1.0;
  return s;
}

std::uint64_t SamplingResult::retained() const {
  std::uint64_t n = 0;
  for (const ChainStats& c : chains) n += c.samples;
  return n;
}

double SamplingResult::acceptance() const {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  for (const ChainStats& c : chains) {
    attempted += c.attempted;
    accepted += c.accepted;
  }
  return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
}

SamplingResult collect_samples(const ChainConfig& base, int chains, int threads,
                               std::span<const DilationObserver> observers,
                               const std::function<SampleVisitor(int)>& extra,
                               std::span<const ChainState> resume) {
  if (chains < 1) throw InvalidArgument("need at least one chain");
  if (!resume.empty() && resume.size() != static_cast<std::size_t>(chains)) {
    throw InvalidArgument("need one resume state per chain");
  }
  for (const DilationObserver& o : observers) {
    if (o.domain().constraint() != base.constraint) throw ConfigError("observer does not match the chain constraint");
  }
  const std::size_t nobs = observers.size();
  std::vector<std::vector<std::vector<DilationSample>>> per_chain(static_cast<std::size_t>(chains),
                                                                  std::vector<std::vector<DilationSample>>(nobs));
  std::vector<ChainStats> stats(static_cast<std::size_t>(chains));
  std::vector<ChainState> finals(static_cast<std::size_t>(chains));
  parallel_for(chains, threads, [&](int c) {
    ChainConfig config = base;
    config.chain_id = static_cast<std::uint64_t>(c);
    config.seed = chain_seed(base.seed, config.chain_id);
    const SampleVisitor visitor = extra ? extra(c) : SampleVisitor{};
    auto& out = per_chain[static_cast<std::size_t>(c)];
    std::vector<std::optional<DilationSample>> last(nobs);
    std::optional<PivotChain> fresh;
    if (resume.empty()) {
      fresh.emplace(config);
    } else {
      ChainState state = resume[static_cast<std::size_t>(c)];
      if (state.config.n_steps != base.n_steps || state.config.constraint != base.constraint ||
          state.config.chain_id != config.chain_id || state.config.seed != config.seed) {
        throw InvalidArgument("resume state does not belong to chain " + std::to_string(c));
      }
      state.config.attempts = base.attempts;
      fresh.emplace(state);
    }
    PivotChain& chain = *fresh;
    chain.run([&](const ChainSample& s) {
      for (std::size_t d = 0; d < nobs; ++d) {
        if (s.changed) last[d] = observers[d].observe(s);
        if (last[d]) {
          last[d]->sample_index = s.sample_index;
          out[d].push_back(*last[d]);
        }
      }
      if (visitor) visitor(s);
    });
    stats[static_cast<std::size_t>(c)] = chain.stats();
    finals[static_cast<std::size_t>(c)] = chain.state();
  });
  SamplingResult result;
  result.samples.resize(nobs);
  for (std::size_t d = 0; d < nobs; ++d) {
    for (auto& chain_samples : per_chain) {
      result.samples[d].insert(result.samples[d].end(), chain_samples[d].begin(), chain_samples[d].end());
    }
  }
  result.chains = std::move(stats);
  result.final_states = std::move(finals);
  return result;
}

double tangent_angle(const StarDomain& domain, const DilationSample& s) {
  return domain.boundary_geometry(s.theta_deg).tau;
}

std::vector<DilationSample> with_correction(std::span<const DilationSample> samples, const StarDomain& domain,
                                            const LatticeEffectTable* table) {
  std::vector<DilationSample> out(samples.begin(), samples.end());
  for (DilationSample& s : out) s.l_value = table ? table->lookup(tangent_angle(domain, s)) : 1.0;
  return out;
}

double sample_coordinate(const DilationSample& s, Axis axis, double fold) {
  double x = axis == Axis::native ? s.param : s.theta_deg;
  if (fold > 0) {
    x = std::fmod(x, fold);
    if (x < 0) x += fold;
  }
  return x;
}

std::vector<int> assign_batches(std::span<const DilationSample> samples, int* total_batches) {
  std::map<std::uint64_t, std::pair<int, std::uint64_t>> chains;  // id -> (rank, max index)
  std::vector<std::uint64_t> order;
  for (const DilationSample& s : samples) {
    auto [it, fresh] = chains.try_emplace(s.chain_id, 0, 0);
    if (fresh) {
      it->second.first = static_cast<int>(order.size());
      order.push_back(s.chain_id);
    }
    it->second.second = std::max(it->second.second, s.sample_index);
  }
  std::vector<int> batch(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [rank, max_index] = chains.at(samples[i].chain_id);
    batch[i] = rank * kBatchesPerChain + batch_of(samples[i].sample_index, max_index + 1);
  }
  if (total_batches) *total_batches = static_cast<int>(order.size()) * kBatchesPerChain;
  return batch;
}

namespace {

struct Weighted {
  double x;
  double w;
  int batch;
};

}  // namespace

WeightedCdf::WeightedCdf(std::span<const DilationSample> samples, double p, Axis axis, double fold,
                         int min_batches)
    : axis_(axis), fold_(fold), count_(samples.size()) {
  if (samples.empty()) throw InsufficientData("no samples");
  int total = 0;
  const std::vector<int> batch = assign_batches(samples, &total);
  std::vector<Weighted> items;
  items.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = samples[i].weight(p);
    if (!std::isfinite(w) || w < 0) throw InvalidArgument("sample weight is not finite");
    items.push_back({sample_coordinate(samples[i], axis, fold), w, batch[i]});
  }
  std::stable_sort(items.begin(), items.end(), [](const Weighted& a, const Weighted& b) { return a.x < b.x; });

  std::vector<double> wb(static_cast<std::size_t>(total), 0.0);
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  for (const Weighted& it : items) {
    wb[static_cast<std::size_t>(it.batch)] += it.w;
    sum_w += it.w;
    sum_w2 += it.w * it.w;
  }
  batches_ = nonempty_batches(wb);
  if (batches_ < min_batches) {
    throw InsufficientData("samples occupy " + std::to_string(batches_) + " batches, need " +
                           std::to_string(min_batches));
  }
  if (!(sum_w > 0)) throw InsufficientData("total weight is zero");
  ess_ = sum_w * sum_w / sum_w2;

  // Sweep in x keeping per-batch partial sums A_b and the moments
  // S_AA = sum A_b^2, S_AW = sum A_b W_b, S_WW = sum W_b^2, so that
  // sum_b (A_b - R W_b)^2 is available at every step in O(1).
  double s_ww = 0.0;
  for (double w : wb) s_ww += w * w;
  std::vector<double> ab(wb.size(), 0.0);
  double s_aa = 0.0;
  double s_aw = 0.0;
  double cum = 0.0;
  const double scale = batches_ > 1 ? static_cast<double>(batches_) / (batches_ - 1.0) : 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Weighted& it = items[i];
    const auto b = static_cast<std::size_t>(it.batch);
    s_aa += 2.0 * ab[b] * it.w + it.w * it.w;
    s_aw += it.w * wb[b];
    ab[b] += it.w;
    cum += it.w;
    if (i + 1 < items.size() && items[i + 1].x == it.x) continue;
    const double r = cum / sum_w;
    const double ss = std::max(0.0, s_aa - 2.0 * r * s_aw + r * r * s_ww);
    steps_.push_back({it.x, r, std::sqrt(scale * ss) / sum_w});
  }
  steps_.back().cdf = 1.0;
  steps_.back().error = 0.0;
}

double WeightedCdf::value(double x) const {
  const auto it = std::upper_bound(steps_.begin(), steps_.end(), x,
                                   [](double v, const CdfPoint& p) { return v < p.x; });
  return it == steps_.begin() ? 0.0 : std::prev(it)->cdf;
}

double WeightedCdf::left_limit(double x) const {
  const auto it = std::lower_bound(steps_.begin(), steps_.end(), x,
                                   [](const CdfPoint& p, double v) { return p.x < v; });
  return it == steps_.begin() ? 0.0 : std::prev(it)->cdf;
}

double WeightedCdf::error(double x) const {
  const auto it = std::upper_bound(steps_.begin(), steps_.end(), x,
                                   [](double v, const CdfPoint& p) { return v < p.x; });
  return it == steps_.begin() ? 0.0 : std::prev(it)->error;
}

std::vector<SegmentMass> segment_masses(std::span<const DilationSample> samples, double p,
                                        std::span<const Segment> segments, Axis axis, int min_batches) {
  if (segments.empty()) throw InvalidArgument("no segments");
  int total = 0;
  const std::vector<int> batch = assign_batches(samples, &total);
  const std::size_t nseg = segments.size();
  std::vector<double> num(nseg * static_cast<std::size_t>(total), 0.0);
  std::vector<double> den(static_cast<std::size_t>(total), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = sample_coordinate(samples[i], axis);
    int hit = -1;
    for (std::size_t k = 0; k < nseg; ++k) {
      const bool last = k + 1 == nseg;
      if (x >= segments[k].lo && (x < segments[k].hi || (last && x == segments[k].hi))) {
        if (hit >= 0) throw InvalidArgument("segments overlap");
        hit = static_cast<int>(k);
      }
    }
    if (hit < 0) throw InvalidArgument("sample coordinate outside every segment");
    const double w = samples[i].weight(p);
    num[static_cast<std::size_t>(hit) * static_cast<std::size_t>(total) + static_cast<std::size_t>(batch[i])] += w;
    den[static_cast<std::size_t>(batch[i])] += w;
  }
  std::vector<SegmentMass> out;
  for (std::size_t k = 0; k < nseg; ++k) {
    const std::span<const double> nk(num.data() + k * static_cast<std::size_t>(total), static_cast<std::size_t>(total));
    out.push_back({segments[k], ratio_batch_means(nk, den, min_batches)});
  }
  return out;
}

namespace {

constexpr const char* kSamplesHeader = "chain_id,sample_index,lambda,end_x,end_y,theta_deg,param,w_thickness,l_value";

}  // namespace

void write_samples_csv(std::ostream& os, std::span<const DilationSample> samples) {
  os << kSamplesHeader << '\n';
  for (const DilationSample& s : samples) {
    os << s.chain_id << ',' << s.sample_index << ',' << format_double(s.lambda) << ',' << s.endpoint.x << ','
       << s.endpoint.y << ',' << format_double(s.theta_deg) << ',' << format_double(s.param) << ','
       << format_double(s.w_thickness) << ',' << format_double(s.l_value) << '\n';
  }
}

std::vector<DilationSample> read_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSamplesHeader) throw IoError("samples CSV has an unexpected header");
  std::vector<DilationSample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw IoError("samples CSV row has " + std::to_string(f.size()) + " fields");
    DilationSample s;
    s.chain_id = parse_unsigned(f[0], "chain_id");
    s.sample_index = parse_unsigned(f[1], "sample_index");
    s.lambda = parse_double(f[2], "lambda");
    s.endpoint = {static_cast<int>(parse_integer(f[3], "end_x")), static_cast<int>(parse_integer(f[4], "end_y"))};
    s.theta_deg = parse_double(f[5], "theta_deg");
    s.param = parse_double(f[6], "param");
    s.w_thickness = parse_double(f[7], "w_thickness");
    s.l_value = parse_double(f[8], "l_value");
    if (!(s.lambda > 0) || !(s.w_thickness > 0) || !(s.l_value > 0)) {
      throw IoError("samples CSV row violates lambda, w_thickness, l_value > 0");
    }
    out.push_back(s);
  }
  return out;
}

void save_samples(const std::filesystem::path& path, std::span<const DilationSample> samples) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  write_samples_csv(os, samples);
  if (!os) throw IoError("failed writing: " + path.string());
}

std::vector<DilationSample> load_samples(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path.string());
  return read_samples_csv(is);
}

}  // namespace sawdil
