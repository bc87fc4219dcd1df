#pragma once

#include <vector>

namespace levylab {

/// Geometric evaluation grid t_k = t_max * theta^k for k = 0..count.
/// Times are stored ascending (smallest first); the construction formula is
/// applied directly for every k so each time is within one ulp of
/// t_max * theta^k.
struct TimeGrid {
  double t_max = 0.0;
  double theta = 0.0;
  int count = 0;                // largest exponent K; grid has K+1 times
  std::vector<double> times;    // ascending, strictly positive

  double smallest() const { return times.front(); }
  double largest() const { return times.back(); }
  /// Ratio of the largest to the smallest time, in decimal decades.
  double span_decades() const;
};

/// Builds the grid; throws std::invalid_argument unless t_max > 0,
/// theta in (0,1) and count >= 1.
TimeGrid make_grid(double t_max, double theta, int count);

}  // namespace levylab
