#include "sawdil/lattice_effect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "sawdil/chain.hpp"
#include "sawdil/errors.hpp"
#include "sawdil/parallel.hpp"
#include "sawdil/text.hpp"

namespace sawdil {
namespace {

constexpr double kSpecialTolerance = 1e-9;

double direction_angle(Point d) {
  return std::atan2(static_cast<double>(d.y), static_cast<double>(d.x)) * 180.0 / std::numbers::pi;
}

}  // namespace

double fold_to_45(double theta_deg) {
  double t = std::fmod(theta_deg, 90.0);
  if (t < 0) t += 90.0;
  if (t >= 90.0) t = 0.0;
  return t > 45.0 ? 90.0 - t : t;
}

Point reduce_direction(Point d) {
  if (d == Point{0, 0}) throw InvalidArgument("zero direction");
  const int g = std::gcd(std::abs(d.x), std::abs(d.y));
  d = {d.x / g, d.y / g};
  while (!(d.x > 0 && d.y >= 0)) d = {-d.y, d.x};
  return d;
}

std::vector<Point> default_special_directions() {
  return {{1, 0}, {1, 1}, {2, 1}, {1, 2}, {3, 1}, {1, 3}, {3, 2}, {2, 3}};
}

std::vector<double> generic_grid(double step) {
  if (!(step > 0) || step > 1.0) throw InvalidArgument("grid step must be in (0, 1] degrees");
  const auto n = static_cast<int>(std::llround(90.0 / step));
  if (std::fabs(n * step - 90.0) > 1e-9) throw InvalidArgument("grid step must divide 90 degrees");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = (k + 0.5) * step;
  return grid;
}

// ---------------------------------------------------------------------------

LatticeEffectTable::LatticeEffectTable(std::vector<LatticeEffectPoint> points, LatticeEffectMeta meta)
    : meta_(meta) {
  for (const auto& p : points) {
    if (!(p.value > 0) || !(p.error >= 0) || !(p.theta_deg >= 0 && p.theta_deg < 90.0)) {
      throw InvalidArgument("lattice-effect table entries need value > 0, error >= 0, angle in [0, 90)");
    }
    (p.is_special ? specials_ : generic_).push_back(p);
  }
  if (generic_.empty()) throw InvalidArgument("lattice-effect table has no generic points");
  const auto by_angle = [](const LatticeEffectPoint& a, const LatticeEffectPoint& b) {
    return a.theta_deg < b.theta_deg;
  };
  std::sort(generic_.begin(), generic_.end(), by_angle);
  std::sort(specials_.begin(), specials_.end(), by_angle);
  for (const auto& s : specials_) special_folded_.push_back(fold_to_45(s.theta_deg));
}

double LatticeEffectTable::interpolate(double theta) const {
  const auto it = std::upper_bound(generic_.begin(), generic_.end(), theta,
                                   [](double t, const LatticeEffectPoint& p) { return t < p.theta_deg; });
  // Neighbours on the circle of period 90.
  double t0, v0, t1, v1;
  if (it == generic_.begin()) {
    t0 = generic_.back().theta_deg - 90.0;
    v0 = generic_.back().value;
  } else {
    t0 = std::prev(it)->theta_deg;
    v0 = std::prev(it)->value;
  }
  if (it == generic_.end()) {
    t1 = generic_.front().theta_deg + 90.0;
    v1 = generic_.front().value;
  } else {
    t1 = it->theta_deg;
    v1 = it->value;
  }
  if (theta == t0) return v0;
  for (const auto& s : specials_) {
    for (double image : {s.theta_deg - 90.0, s.theta_deg, s.theta_deg + 90.0}) {
      if (image > t0 && image < t1) return theta < image ? v0 : v1;
    }
  }
  const double w = (theta - t0) / (t1 - t0);
  return v0 + w * (v1 - v0);
}

double LatticeEffectTable::folded_generic(double r) const {
  return 0.5 * (interpolate(r) + interpolate(90.0 - r));
}

double LatticeEffectTable::lookup(double tau_deg) const {
  const double r = fold_to_45(tau_deg);
  double sum = 0.0;
  int matches = 0;
  for (std::size_t i = 0; i < specials_.size(); ++i) {
    if (std::fabs(special_folded_[i] - r) < kSpecialTolerance) {
      sum += specials_[i].value;
      ++matches;
    }
  }
  if (matches > 0) return sum / matches;
  return folded_generic(r);
}

double LatticeEffectTable::generic_integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < generic_.size(); ++i) {
    total += (generic_[i + 1].theta_deg - generic_[i].theta_deg) * (generic_[i].value + generic_[i + 1].value) / 2;
  }
  const auto& first = generic_.front();
  const auto& last = generic_.back();
  total += (first.theta_deg + 90.0 - last.theta_deg) * (first.value + last.value) / 2;
  return 2.0 * total;
}

LatticeEffectTable LatticeEffectTable::scaled(double c) const {
  if (!(c > 0)) throw InvalidArgument("scale factor must be positive");
  LatticeEffectTable t = *this;
  for (auto* list : {&t.generic_, &t.specials_}) {
    for (auto& p : *list) {
      p.value *= c;
      p.error *= c;
    }
  }
  t.meta_.normalization *= c;
  return t;
}

LatticeEffectTable LatticeEffectTable::normalized() const { return scaled(1.0 / generic_integral()); }

bool operator==(const LatticeEffectTable& a, const LatticeEffectTable& b) {
  const auto same = [](const std::vector<LatticeEffectPoint>& x, const std::vector<LatticeEffectPoint>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const auto& p, const auto& q) {
      return p.theta_deg == q.theta_deg && p.value == q.value && p.error == q.error && p.is_special == q.is_special;
    });
  };
  return same(a.generic_, b.generic_) && same(a.specials_, b.specials_) && a.meta_.n_steps == b.meta_.n_steps &&
         a.meta_.attempts == b.meta_.attempts && a.meta_.seed == b.meta_.seed && a.meta_.chains == b.meta_.chains &&
         a.meta_.normalization == b.meta_.normalization;
}

// CSV layout: '#'-prefixed key=value metadata lines, then the header
// theta_deg,value,stderr,is_special and one row per angle in increasing
// order. Numbers use the shortest round-trip representation.
void LatticeEffectTable::write_csv(std::ostream& os) const {
  os << "# lattice-effect table\n"
     << "# n_steps=" << meta_.n_steps << '\n'
     << "# attempts=" << meta_.attempts << '\n'
     << "# chains=" << meta_.chains << '\n'
     << "# seed=" << meta_.seed << '\n'
     << "# normalization=" << format_double(meta_.normalization) << '\n'
     << "theta_deg,value,stderr,is_special\n";
  std::vector<LatticeEffectPoint> all = generic_;
  all.insert(all.end(), specials_.begin(), specials_.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.theta_deg < b.theta_deg; });
  for (const auto& p : all) {
    os << format_double(p.theta_deg) << ',' << format_double(p.value) << ',' << format_double(p.error) << ','
       << (p.is_special ? 1 : 0) << '\n';
  }
}

LatticeEffectTable LatticeEffectTable::read_csv(std::istream& is) {
  LatticeEffectMeta meta;
  std::vector<LatticeEffectPoint> points;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "n_steps") meta.n_steps = std::stoi(value);
      else if (key == "attempts") meta.attempts = std::stoull(value);
      else if (key == "chains") meta.chains = std::stoi(value);
      else if (key == "seed") meta.seed = std::stoull(value);
      else if (key == "normalization") meta.normalization = parse_double(value, "normalization");
      continue;
    }
    if (!header_seen) {
      if (line != "theta_deg,value,stderr,is_special") throw IoError("unexpected lattice-effect table header");
      header_seen = true;
      continue;
    }
    std::string_view rest(line);
    std::string_view cols[4];
    for (int c = 0; c < 4; ++c) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (c == 3)) throw IoError("bad lattice-effect table row: " + line);
      cols[c] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    LatticeEffectPoint p;
    p.theta_deg = parse_double(cols[0], "theta_deg");
    p.value = parse_double(cols[1], "value");
    p.error = parse_double(cols[2], "stderr");
    if (cols[3] != "0" && cols[3] != "1") throw IoError("bad is_special flag: " + line);
    p.is_special = cols[3] == "1";
    points.push_back(p);
  }
  if (!header_seen) throw IoError("lattice-effect table has no header");
  try {
    return LatticeEffectTable(std::move(points), meta);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid lattice-effect table: ") + e.what());
  }
}

void LatticeEffectTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  write_csv(os);
  if (!os) throw IoError("failed writing " + path.string());
}

LatticeEffectTable LatticeEffectTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  return read_csv(is);
}

// ---------------------------------------------------------------------------

SideEventCounter::SideEventCounter(std::vector<double> angles_deg, int total_batches)
    : angles_(std::move(angles_deg)), batches_(total_batches) {
  if (batches_ < 1) throw InvalidArgument("need at least one batch");
  for (double a : angles_) {
    std::array<LineDirection, 4> rot;
    const LineDirection base = LineDirection::from_degrees(a);
    for (int k = 0; k < 4; ++k) {
      if (base.is_exact()) {
        Point d = base.integer_direction();
        for (int j = 0; j < k; ++j) d = {-d.y, d.x};
        rot[static_cast<std::size_t>(k)] = LineDirection::exact(d);
      } else {
        rot[static_cast<std::size_t>(k)] = LineDirection::from_degrees(a + 90.0 * k);
      }
    }
    lines_.push_back(rot);
  }
  hits_.assign(angles_.size() * static_cast<std::size_t>(batches_), 0.0);
  counts_.assign(static_cast<std::size_t>(batches_), 0.0);
}

void SideEventCounter::add(std::span<const Point> sites, int batch) {
  if (batch < 0 || batch >= batches_) throw InvalidArgument("batch index out of range");
  counts_[static_cast<std::size_t>(batch)] += 1.0;
  const AngularExtent ext = angular_extent(sites);
  if (!ext.empty && !ext.pointed) return;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    int n = 0;
    for (const auto& line : lines_[i]) n += ext.strictly_left_of(line);
    if (n) hits_[i * static_cast<std::size_t>(batches_) + static_cast<std::size_t>(batch)] += 0.25 * n;
  }
}

void SideEventCounter::merge(const SideEventCounter& other) {
  if (other.angles_ != angles_ || other.batches_ != batches_) throw InvalidArgument("incompatible counters");
  for (std::size_t i = 0; i < hits_.size(); ++i) hits_[i] += other.hits_[i];
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t SideEventCounter::samples() const {
  return static_cast<std::uint64_t>(std::accumulate(counts_.begin(), counts_.end(), 0.0));
}

Estimate SideEventCounter::fraction(std::size_t i, int min_batches) const {
  const std::span<const double> hits(hits_.data() + i * static_cast<std::size_t>(batches_),
                                     static_cast<std::size_t>(batches_));
  return ratio_batch_means(hits, counts_, min_batches);
}

// ---------------------------------------------------------------------------

namespace {

double n_rho(int n_steps) { return std::pow(static_cast<double>(n_steps), CriticalExponents::rho.value()); }

ChainConfig full_plane_chain(int n_steps, std::uint64_t attempts, std::uint64_t interval, std::uint64_t seed,
                             std::uint64_t chain_id) {
  ChainConfig c;
  c.n_steps = n_steps;
  c.constraint = PlaneConstraint::full_plane;
  c.attempts = attempts;
  c.sample_interval = interval;
  c.seed = chain_seed(seed, chain_id);
  c.chain_id = chain_id;
  return c;
}

}  // namespace

Estimate estimate_l_at(double theta_deg, int n_steps, std::uint64_t attempts, std::uint64_t seed,
                       std::uint64_t sample_interval) {
  const ChainConfig config = full_plane_chain(n_steps, attempts, sample_interval, seed, 0);
  config.validate();
  const std::uint64_t total = attempts / sample_interval;
  if (total < 30) throw InsufficientData("too few attempts for 30 batches");
  SideEventCounter counter({theta_deg}, kBatchesPerChain);
  run_chain(config, [&](const ChainSample& s) { counter.add(s.sites, batch_of(s.sample_index, total)); });
  Estimate f = counter.fraction(0);
  const double scale = n_rho(n_steps);
  return {f.value * scale, f.error * scale};
}

std::vector<double> table_angles(const LatticeEffectConfig& config, std::vector<bool>* is_special) {
  std::vector<Point> dirs = default_special_directions();
  for (Point d : config.extra_specials) {
    const Point r = reduce_direction(d);
    dirs.push_back(r);
    dirs.push_back(reduce_direction({r.y, r.x}));
  }
  std::vector<Point> unique;
  for (Point d : dirs) {
    const Point r = reduce_direction(d);
    if (std::find(unique.begin(), unique.end(), r) == unique.end()) unique.push_back(r);
  }
  std::sort(unique.begin(), unique.end(), [](Point a, Point b) { return cross(a, b) > 0; });
  std::vector<double> specials;
  for (Point d : unique) specials.push_back(direction_angle(d));

  std::vector<double> angles = generic_grid(config.grid_step);
  for (double& g : angles) {
    for (double s : specials) {
      if (std::fabs(g - s) < kSpecialTolerance) g += config.grid_step / 4;
    }
  }
  if (is_special) {
    is_special->assign(angles.size(), false);
    is_special->resize(angles.size() + specials.size(), true);
  }
  angles.insert(angles.end(), specials.begin(), specials.end());
  return angles;
}

LatticeEffectTable table_from_counter(const SideEventCounter& counter, const LatticeEffectConfig& config) {
  std::vector<bool> special;
  const std::vector<double> angles = table_angles(config, &special);
  if (counter.size() != angles.size()) throw InvalidArgument("counter angles do not match the table config");
  const double scale = n_rho(config.n_steps);
  std::vector<LatticeEffectPoint> points;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const Estimate f = counter.fraction(i);
    if (!(f.value > 0)) {
      throw InsufficientData("no walk stayed on one side at angle " + format_double(angles[i]));
    }
    points.push_back({angles[i], f.value * scale, f.error * scale, special[i]});
  }
  LatticeEffectMeta meta;
  meta.n_steps = config.n_steps;
  meta.attempts = config.attempts;
  meta.seed = config.seed;
  meta.chains = config.chains;
  return LatticeEffectTable(std::move(points), meta);
}

LatticeEffectTable build_table(const LatticeEffectConfig& config) {
  if (config.chains < 1) throw InvalidArgument("need at least one chain");
  const std::vector<double> angles = table_angles(config);
  const std::uint64_t total = config.attempts / std::max<std::uint64_t>(config.sample_interval, 1);
  const int batches = config.chains * kBatchesPerChain;
  std::vector<SideEventCounter> counters(static_cast<std::size_t>(config.chains), SideEventCounter(angles, batches));
  parallel_for(config.chains, config.threads, [&](int c) {
    const ChainConfig cc = full_plane_chain(config.n_steps, config.attempts, config.sample_interval, config.seed,
                                            static_cast<std::uint64_t>(c));
    SideEventCounter& counter = counters[static_cast<std::size_t>(c)];
    run_chain(cc, [&](const ChainSample& s) {
      counter.add(s.sites, c * kBatchesPerChain + batch_of(s.sample_index, total));
    });
  });
  for (std::size_t c = 1; c < counters.size(); ++c) counters[0].merge(counters[c]);
  return table_from_counter(counters[0], config).normalized();
}

LatticeEffectTable extrapolate(const LatticeEffectTable& small_n, const LatticeEffectTable& large_n) {
  const double s1 = std::sqrt(static_cast<double>(small_n.meta().n_steps));
  const double s2 = std::sqrt(static_cast<double>(large_n.meta().n_steps));
  if (!(s2 > s1)) throw InvalidArgument("extrapolation needs two distinct N, smaller first");
  std::vector<LatticeEffectPoint> points;
  for (auto lists : {std::pair{&small_n.generic(), &large_n.generic()},
                     std::pair{&small_n.specials(), &large_n.specials()}}) {
    if (lists.first->size() != lists.second->size()) throw InvalidArgument("tables have different grids");
    for (std::size_t i = 0; i < lists.first->size(); ++i) {
      const auto& p = (*lists.first)[i];
      const auto& q = (*lists.second)[i];
      if (p.theta_deg != q.theta_deg) throw InvalidArgument("tables have different grids");
      LatticeEffectPoint r = q;
      r.value = (q.value * s2 - p.value * s1) / (s2 - s1);
      r.error = std::hypot(q.error * s2, p.error * s1) / (s2 - s1);
      if (!(r.value > 0)) throw InsufficientData("extrapolated value is not positive");
      points.push_back(r);
    }
  }
  LatticeEffectMeta meta = large_n.meta();
  meta.normalization = 1.0;
  return LatticeEffectTable(std::move(points), meta).normalized();
}

}  // namespace sawdil
