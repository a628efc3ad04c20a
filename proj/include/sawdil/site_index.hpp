#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sawdil/lattice.hpp"

namespace sawdil {

// Occupancy index of a walk: lattice point -> site index.
//
// Open addressing with linear probing over an L x L torus, so a point's home
// slot is its own coordinates mod L and neighbouring sites share cache
// lines. Slots hold only the site index; the key is read back from the
// site array, which therefore must be the one the index was built from and
// must be updated in step (erase before moving a site, insert after).
// Erased slots become tombstones; the owner rebuilds when
// needs_rebuild() says so, which costs O(n) rather than O(L^2).
class SiteIndex {
 public:
  static constexpr std::int32_t kNotFound = -1;

  SiteIndex() = default;

  void rebuild(std::span<const Point> sites);

  std::int32_t find(Point p, std::span<const Point> sites) const {
    std::size_t slot = home(p);
    while (true) {
      const std::int32_t index = slots_[slot];
      if (index == kEmpty) return kNotFound;
      if (index >= 0 && sites[static_cast<std::size_t>(index)] == p) return index;
      slot = (slot + 1) & mask_;
    }
  }

  // p must not already be present.
  void insert(Point p, std::int32_t index) {
    std::size_t slot = home(p);
    while (slots_[slot] >= 0) slot = (slot + 1) & mask_;
    if (slots_[slot] == kTombstone) {
      --tombstones_;
    } else {
      touched_.push_back(static_cast<std::uint32_t>(slot));
    }
    slots_[slot] = index;
  }

  // Removes the entry of sites[index], which must be present.
  void erase(std::int32_t index, std::span<const Point> sites) {
    std::size_t slot = home(sites[static_cast<std::size_t>(index)]);
    while (slots_[slot] != index) slot = (slot + 1) & mask_;
    slots_[slot] = kTombstone;
    ++tombstones_;
  }

  bool needs_rebuild() const { return tombstones_ > rebuild_threshold_; }

  std::size_t capacity() const { return slots_.size(); }

 private:
  static constexpr std::int32_t kEmpty = -1;
  static constexpr std::int32_t kTombstone = -2;

  std::size_t home(Point p) const {
    return (static_cast<std::size_t>(static_cast<std::uint32_t>(p.x)) & side_mask_) |
           ((static_cast<std::size_t>(static_cast<std::uint32_t>(p.y)) & side_mask_) << side_bits_);
  }

  std::vector<std::int32_t> slots_;
  std::size_t mask_ = 0;
  std::size_t side_mask_ = 0;
  int side_bits_ = 0;
  std::size_t tombstones_ = 0;
  std::size_t rebuild_threshold_ = 0;
  // Every slot that is not kEmpty, so a rebuild clears only those.
  std::vector<std::uint32_t> touched_;
};

}  // namespace sawdil
