#pragma once

#include <cstdint>
#include <span>

namespace sawdil {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Batches per chain used for batch-means errors throughout.
inline constexpr int kBatchesPerChain = 64;

// Contiguous batch of sample `index` out of `total` samples of one chain.
inline int batch_of(std::uint64_t index, std::uint64_t total, int batches = kBatchesPerChain) {
  if (total == 0) return 0;
  const auto b = static_cast<int>((static_cast<unsigned __int128>(index) * batches) / total);
  return b < batches ? b : batches - 1;
}

// Ratio sum(num) / sum(den) with a batch-means standard error:
// var = B/(B-1) * sum_b (num_b - R den_b)^2 / (sum den)^2 over the B batches
// with den_b > 0. Throws InsufficientData if fewer than `min_batches`
// batches are nonempty.
Estimate ratio_batch_means(std::span<const double> num, std::span<const double> den, int min_batches = 30);

int nonempty_batches(std::span<const double> den);

}  // namespace sawdil
