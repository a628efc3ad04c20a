#include "sawdil/site_index.hpp"

#include <algorithm>

namespace sawdil {

void SiteIndex::rebuild(std::span<const Point> sites) {
  // Side L is the smallest power of two (at least 64) with L^2 >= 32 n.
  int bits = 6;
  while ((std::size_t{1} << (2 * bits)) < 32 * sites.size()) ++bits;
  const std::size_t side = std::size_t{1} << bits;
  if (bits != side_bits_ || slots_.size() != side * side) {
    side_bits_ = bits;
    side_mask_ = side - 1;
    mask_ = side * side - 1;
    slots_.assign(side * side, kEmpty);
  } else {
    for (std::uint32_t slot : touched_) slots_[slot] = kEmpty;
  }
  touched_.clear();
  tombstones_ = 0;
  rebuild_threshold_ = 8 * sites.size();
  for (std::size_t i = 0; i < sites.size(); ++i) insert(sites[i], static_cast<std::int32_t>(i));
}

}  // namespace sawdil
