#include "levylab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylab {

double TimeGrid::span_decades() const {
  return std::log10(largest() / smallest());
}

TimeGrid make_grid(double t_max, double theta, int count) {
  if (!(t_max > 0.0))
    throw std::invalid_argument("make_grid: t_max must be > 0");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("make_grid: theta must lie in (0,1)");
  if (count < 1) throw std::invalid_argument("make_grid: count must be >= 1");

  TimeGrid g;
  g.t_max = t_max;
  g.theta = theta;
  g.count = count;
  g.times.resize(count + 1);
  for (int k = 0; k <= count; ++k)
    g.times[count - k] = t_max * std::pow(theta, double(k));
  if (!(g.times.front() > 0.0))
    throw std::invalid_argument("make_grid: grid underflows to zero");
  return g;
}

}  // namespace levylab
