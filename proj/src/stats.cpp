#include "sawdil/stats.hpp"

#include <cmath>
#include <string>

#include "sawdil/errors.hpp"

namespace sawdil {

int nonempty_batches(std::span<const double> den) {
  int n = 0;
  for (double w : den) n += w > 0;
  return n;
}

Estimate ratio_batch_means(std::span<const double> num, std::span<const double> den, int min_batches) {
  if (num.size() != den.size()) throw InvalidArgument("batch arrays differ in length");
  const int batches = nonempty_batches(den);
  if (batches < min_batches) {
    throw InsufficientData("only " + std::to_string(batches) + " nonempty batches, need " +
                           std::to_string(min_batches));
  }
  double sa = 0.0;
  double sw = 0.0;
  for (std::size_t b = 0; b < num.size(); ++b) {
    sa += num[b];
    sw += den[b];
  }
  if (!(sw > 0)) throw InsufficientData("no weight in any batch");
  Estimate e;
  e.value = sa / sw;
  if (batches < 2) return e;
  double ss = 0.0;
  for (std::size_t b = 0; b < num.size(); ++b) {
    if (den[b] > 0) {
      const double r = num[b] - e.value * den[b];
      ss += r * r;
    }
  }
  e.error = std::sqrt(ss * batches / (batches - 1.0)) / sw;
  return e;
}

}  // namespace sawdil
