#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include "sawdil/estimator.hpp"
#include "sawdil/lattice.hpp"
#include "sawdil/rng.hpp"

namespace sawdil::testing {

// Every n-step SAW from the origin by depth-first search; with half_plane
// only walks whose sites all have y >= 0.
inline std::vector<std::vector<Point>> enumerate_saws(int n, bool half_plane = false) {
  std::vector<std::vector<Point>> out;
  std::vector<Point> walk{{0, 0}};
  std::set<Point> used{{0, 0}};
  const Point steps[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(walk.size()) == n + 1) {
      out.push_back(walk);
      return;
    }
    for (Point d : steps) {
      const Point q = walk.back() + d;
      if (used.count(q) || (half_plane && q.y < 0)) continue;
      walk.push_back(q);
      used.insert(q);
      self(self);
      used.erase(q);
      walk.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

// Synthetic chordal-strip samples whose weights lambda^p0 are exactly the
// importance ratio of the strip law against a Cauchy proposal, so that
// reweighting with p = p0 reproduces the law.
inline std::vector<DilationSample> planted_strip_samples(int n, double p0, std::uint64_t seed, int chains = 8) {
  SplitMix64 rng(seed);
  std::vector<DilationSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = std::tan(std::numbers::pi * (rng.uniform() - 0.5));
    const double g = 1.0 / (std::numbers::pi * (1 + x * x));
    const double f = std::pow(std::cosh(std::numbers::pi * x / 2), -1.25);
    DilationSample s;
    s.chain_id = static_cast<std::uint64_t>(i % chains);
    s.sample_index = static_cast<std::uint64_t>(i / chains);
    s.lambda = std::pow(f / g, 1.0 / p0);
    s.param = x;
    s.theta_deg = std::atan2(1.0, x) * 180 / std::numbers::pi;
    s.w_thickness = 1.0;
    s.l_value = 1.0;
    out.push_back(s);
  }
  return out;
}

}  // namespace sawdil::testing
