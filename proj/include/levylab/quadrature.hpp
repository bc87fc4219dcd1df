#pragma once

#include <functional>

namespace levylab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Simpson integration of f over [a, b] to the given absolute
/// tolerance.  Throws QuadratureError when the tolerance cannot be met
/// within the depth budget; the exception carries the achieved estimate.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_depth = 52);

}  // namespace levylab
