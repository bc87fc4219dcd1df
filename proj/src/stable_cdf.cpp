#include "levylab/stable_cdf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "levylab/quadrature.hpp"

namespace levylab {

StableCdf::StableCdf(double alpha, double scale)
    : alpha_(alpha), scale_(scale), tail_switch_(15.0) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("StableCdf: alpha must lie in (0, 2]");
  if (!(scale > 0.0))
    throw std::invalid_argument("StableCdf: scale must be positive");
}

double StableCdf::operator()(double x) const {
  const double y = x / scale_;
  if (y == 0.0) return 0.5;
  if (alpha_ == 2.0) return 0.5 * std::erfc(-y / 2.0);  // Phi(y / sqrt(2))
  if (alpha_ == 1.0) return 0.5 + std::atan(y) / std::numbers::pi;
  return y > 0.0 ? standard(y) : 1.0 - standard(-y);
}

double StableCdf::standard(double y) const {
  if (y > tail_switch_) return 1.0 - tail_series(y);
  const double alpha = alpha_;
  const auto integrand = [alpha, y](double u) {
    if (u == 0.0) return y;
    return std::sin(u * y) * std::exp(-std::pow(u, alpha)) / u;
  };
  const double upper = std::pow(41.4, 1.0 / alpha);
  const double integral = integrate(integrand, 0.0, upper, 1e-10, 60).value;
  return 0.5 + integral / std::numbers::pi;
}

double StableCdf::tail_series(double y) const {
  const double logy = std::log(y);
  double tail = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double magnitude =
        std::exp(std::lgamma(double(k) * alpha_) -
                 std::lgamma(double(k) + 1.0) - double(k) * alpha_ * logy);
    if (magnitude > prev) break;  // past the smallest asymptotic term
    prev = magnitude;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    tail += sign * std::sin(0.5 * double(k) * std::numbers::pi * alpha_) *
            magnitude;
    if (magnitude < 1e-17) break;
  }
  return tail / std::numbers::pi;
}

}  // namespace levylab
