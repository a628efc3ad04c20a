#include "sawdil/chain.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "sawdil/errors.hpp"

namespace sawdil {

void ChainConfig::validate() const {
  if (n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  if (sample_interval < 1) throw InvalidArgument("sample_interval must be at least 1");
}

namespace {

LatticeWalk initial_rod(const ChainConfig& config) {
  const Point direction = config.constraint == PlaneConstraint::half_plane ? Point{0, 1} : Point{1, 0};
  return LatticeWalk::rod(config.n_steps, direction);
}

}  // namespace

PivotChain::PivotChain(const ChainConfig& config)
    : config_(config), walk_((config.validate(), initial_rod(config))), rng_(config.seed) {
  const std::uint64_t burn_in = config_.burn_in();
  for (std::uint64_t accepted = 0; accepted < burn_in;) {
    if (pivot_once(walk_, rng_, config_.constraint)) ++accepted;
  }
}

PivotChain::PivotChain(const ChainState& state)
    : config_(state.config),
      walk_(state.sites),
      rng_(SplitMix64::from_counter(state.rng_counter)),
      stats_(state.stats) {
  config_.validate();
  if (walk_.steps() != config_.n_steps) throw InvalidArgument("walk length does not match n_steps");
}

void PivotChain::advance_to(std::uint64_t target, const SampleVisitor& visitor) {
  target = std::min(target, config_.attempts);
  const std::uint64_t equilibration = config_.equilibration;
  const std::uint64_t interval = config_.sample_interval;
  while (stats_.attempted < target) {
    if (pivot_once(walk_, rng_, config_.constraint)) {
      ++stats_.accepted;
      buffer_stale_ = true;
    }
    ++stats_.attempted;
    if (stats_.attempted > equilibration && (stats_.attempted - equilibration) % interval == 0) {
      if (visitor) {
        const bool changed = buffer_stale_;
        if (changed) walk_.copy_sites(buffer_);
        buffer_stale_ = false;
        visitor(ChainSample{config_.chain_id, stats_.samples, buffer_, changed});
      }
      ++stats_.samples;
    }
  }
}

ChainState PivotChain::state() const {
  return ChainState{config_, walk_.sites(), rng_.counter(), stats_};
}

ChainStats run_chain(const ChainConfig& config, const SampleVisitor& visitor) {
  PivotChain chain(config);
  chain.run(visitor);
  return chain.stats();
}

// ---------------------------------------------------------------------------
// Checkpoint format, version 1:
//
//   sawdil-checkpoint 1
//   n_steps <int>
//   constraint full_plane|half_plane
//   sample_interval <u64>
//   equilibration <u64>
//   attempts <u64>
//   seed <u64>
//   chain_id <u64>
//   rng_counter <u64>
//   attempted <u64>
//   accepted <u64>
//   samples <u64>
//   sites <count>
//   <x> <y>            (count lines)
//   checksum <u64>     (FNV-1a of every preceding byte)
//   end
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "sawdil-checkpoint";
constexpr int kVersion = 1;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <class T>
T parse_number(std::string_view text, const char* field) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw CheckpointFormatError(std::string("bad value for ") + field);
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next(const char* what) {
    if (pos_ >= text_.size()) throw CheckpointFormatError(std::string("truncated checkpoint at ") + what);
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) throw CheckpointFormatError(std::string("truncated checkpoint at ") + what);
    std::string_view line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return line;
  }

  std::string_view field(const char* key) {
    std::string_view line = next(key);
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos || line.substr(0, space) != key) {
      throw CheckpointFormatError(std::string("expected field ") + key);
    }
    return line.substr(space + 1);
  }

  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(std::ostream& os, const ChainState& state) {
  std::ostringstream body;
  const ChainConfig& c = state.config;
  body << kMagic << ' ' << kVersion << '\n'
       << "n_steps " << c.n_steps << '\n'
       << "constraint " << (c.constraint == PlaneConstraint::half_plane ? "half_plane" : "full_plane") << '\n'
       << "sample_interval " << c.sample_interval << '\n'
       << "equilibration " << c.equilibration << '\n'
       << "attempts " << c.attempts << '\n'
       << "seed " << c.seed << '\n'
       << "chain_id " << c.chain_id << '\n'
       << "rng_counter " << state.rng_counter << '\n'
       << "attempted " << state.stats.attempted << '\n'
       << "accepted " << state.stats.accepted << '\n'
       << "samples " << state.stats.samples << '\n'
       << "sites " << state.sites.size() << '\n';
  for (const Point& p : state.sites) body << p.x << ' ' << p.y << '\n';
  const std::string text = body.str();
  os << text << "checksum " << fnv1a(text) << '\n' << "end\n";
}

ChainState read_checkpoint(std::istream& is) {
  std::ostringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();
  LineReader in(text);

  const std::string_view magic = in.next("header");
  if (magic != std::string(kMagic) + ' ' + std::to_string(kVersion)) {
    throw CheckpointFormatError("unsupported checkpoint header or version");
  }
  ChainState state;
  ChainConfig& c = state.config;
  c.n_steps = parse_number<int>(in.field("n_steps"), "n_steps");
  const std::string_view constraint = in.field("constraint");
  if (constraint == "half_plane") {
    c.constraint = PlaneConstraint::half_plane;
  } else if (constraint == "full_plane") {
    c.constraint = PlaneConstraint::full_plane;
  } else {
    throw CheckpointFormatError("bad constraint");
  }
  c.sample_interval = parse_number<std::uint64_t>(in.field("sample_interval"), "sample_interval");
  c.equilibration = parse_number<std::uint64_t>(in.field("equilibration"), "equilibration");
  c.attempts = parse_number<std::uint64_t>(in.field("attempts"), "attempts");
  c.seed = parse_number<std::uint64_t>(in.field("seed"), "seed");
  c.chain_id = parse_number<std::uint64_t>(in.field("chain_id"), "chain_id");
  state.rng_counter = parse_number<std::uint64_t>(in.field("rng_counter"), "rng_counter");
  state.stats.attempted = parse_number<std::uint64_t>(in.field("attempted"), "attempted");
  state.stats.accepted = parse_number<std::uint64_t>(in.field("accepted"), "accepted");
  state.stats.samples = parse_number<std::uint64_t>(in.field("samples"), "samples");
  const auto count = parse_number<std::size_t>(in.field("sites"), "sites");
  if (c.n_steps < 1 || count != static_cast<std::size_t>(c.n_steps) + 1) {
    throw CheckpointFormatError("site count does not match n_steps");
  }
  state.sites.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string_view line = in.next("sites");
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos) throw CheckpointFormatError("bad site line");
    state.sites.push_back({parse_number<int>(line.substr(0, space), "site"),
                           parse_number<int>(line.substr(space + 1), "site")});
  }
  const std::size_t body_end = in.position();
  const auto checksum = parse_number<std::uint64_t>(in.field("checksum"), "checksum");
  if (checksum != fnv1a(std::string_view(text).substr(0, body_end))) {
    throw CheckpointFormatError("checksum mismatch");
  }
  if (in.next("end") != "end") throw CheckpointFormatError("missing end marker");
  if (state.sites.front() != Point{0, 0} || !check_self_avoiding(state.sites)) {
    throw CheckpointFormatError("checkpointed walk is not a valid self-avoiding walk");
  }
  if (c.sample_interval < 1) throw CheckpointFormatError("sample_interval must be positive");
  return state;
}

void save_checkpoint(const std::filesystem::path& path, const ChainState& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(os, state);
  if (!os) throw IoError("failed writing checkpoint: " + path.string());
}

ChainState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path.string());
  return read_checkpoint(is);
}

}  // namespace sawdil
