#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sawdil/rng.hpp"
#include "sawdil/walk.hpp"

namespace sawdil {

struct ChainConfig {
  int n_steps = 1;
  PlaneConstraint constraint = PlaneConstraint::full_plane;
  // Attempted pivots between retained samples.
  std::uint64_t sample_interval = 100;
  // Attempted pivots discarded after initialisation, before sampling.
  std::uint64_t equilibration = 0;
  // Total attempted pivots, equilibration included.
  std::uint64_t attempts = 0;
  // Accepted pivots applied to the initial rod before any counting starts.
  // Unset means 10 * n_steps.
  std::optional<std::uint64_t> burn_in_accepted;
  std::uint64_t seed = 0;
  std::uint64_t chain_id = 0;

  std::uint64_t burn_in() const {
    return burn_in_accepted.value_or(10 * static_cast<std::uint64_t>(n_steps));
  }
  // Throws InvalidArgument on n_steps < 1 or sample_interval < 1.
  void validate() const;
};

struct ChainStats {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;

  double acceptance() const {
    return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
  }
  friend bool operator==(const ChainStats&, const ChainStats&) = default;
};

// What a visitor sees at each retained sample. `sites` is the walk in
// canonical coordinates and is only valid during the callback. `changed`
// is false only when no pivot was accepted since the previous sample seen
// by this chain object, so the walk is identical to the one seen then.
struct ChainSample {
  std::uint64_t chain_id = 0;
  std::uint64_t sample_index = 0;
  std::span<const Point> sites;
  bool changed = true;
};

using SampleVisitor = std::function<void(const ChainSample&)>;

// Everything needed to resume a chain exactly.
struct ChainState {
  ChainConfig config;
  std::vector<Point> sites;
  std::uint64_t rng_counter = 0;
  ChainStats stats;

  friend bool operator==(const ChainState& a, const ChainState& b) {
    return a.sites == b.sites && a.rng_counter == b.rng_counter && a.stats == b.stats &&
           a.config.n_steps == b.config.n_steps && a.config.constraint == b.config.constraint &&
           a.config.sample_interval == b.config.sample_interval &&
           a.config.equilibration == b.config.equilibration && a.config.attempts == b.config.attempts &&
           a.config.seed == b.config.seed && a.config.chain_id == b.config.chain_id;
  }
};

class PivotChain {
 public:
  // Starts from a rod (north under half_plane, east under full_plane) and
  // applies the burn-in.
  explicit PivotChain(const ChainConfig& config);
  explicit PivotChain(const ChainState& state);

  // Attempts pivots until `attempted` reaches min(target, config.attempts),
  // calling `visitor` at every retained sample.
  void advance_to(std::uint64_t target, const SampleVisitor& visitor);
  void run(const SampleVisitor& visitor) { advance_to(config_.attempts, visitor); }
  bool finished() const { return stats_.attempted >= config_.attempts; }

  const ChainConfig& config() const { return config_; }
  const ChainStats& stats() const { return stats_; }
  const LatticeWalk& walk() const { return walk_; }
  ChainState state() const;

 private:
  ChainConfig config_;
  LatticeWalk walk_;
  SplitMix64 rng_;
  ChainStats stats_;
  std::vector<Point> buffer_;
  bool buffer_stale_ = true;
};

ChainStats run_chain(const ChainConfig& config, const SampleVisitor& visitor);

// Versioned text checkpoint. Loading validates the version line, every
// field, the walk and a trailing checksum; any defect raises
// CheckpointFormatError.
void write_checkpoint(std::ostream& os, const ChainState& state);
ChainState read_checkpoint(std::istream& is);
void save_checkpoint(const std::filesystem::path& path, const ChainState& state);
ChainState load_checkpoint(const std::filesystem::path& path);

}  // namespace sawdil
