#include "levylab/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace levylab {

ScalingFunction ScalingFunction::power(double exponent) {
  if (!(exponent > 0.0))
    throw std::invalid_argument("ScalingFunction: exponent must be positive");
  ScalingFunction f;
  f.family_ = Family::Power;
  f.index_ = exponent;
  f.fn_ = [exponent](double t) { return std::pow(t, exponent); };
  return f;
}

ScalingFunction ScalingFunction::regularly_varying(
    double index, std::function<double(double)> slowly_varying) {
  if (!(index > 0.0))
    throw std::invalid_argument("ScalingFunction: index must be positive");
  if (!slowly_varying)
    throw std::invalid_argument(
        "ScalingFunction: missing slowly varying factor");
  ScalingFunction f;
  f.family_ = Family::RegularlyVarying;
  f.index_ = index;
  f.fn_ = [index, L = std::move(slowly_varying)](double t) {
    return std::pow(t, index) * L(t);
  };
  return f;
}

ScalingFunction ScalingFunction::khintchine() {
  ScalingFunction f;
  f.family_ = Family::Khintchine;
  f.index_ = 0.5;
  f.domain_limit_ = std::exp(-1.0);
  f.fn_ = [](double t) {
    return std::sqrt(2.0 * t * std::log(std::log(1.0 / t)));
  };
  return f;
}

ScalingFunction ScalingFunction::general_lil(std::function<double(double)> h) {
  if (!h)
    throw std::invalid_argument("ScalingFunction: missing slowly varying factor");
  ScalingFunction f;
  f.family_ = Family::GeneralLIL;
  f.domain_limit_ = std::exp(-1.0);
  f.fn_ = [h = std::move(h)](double t) {
    return std::sqrt(t * std::log(std::log(1.0 / t))) / h(1.0 / t);
  };
  return f;
}

ScalingFunction ScalingFunction::custom(std::function<double(double)> fn) {
  if (!fn) throw std::invalid_argument("ScalingFunction: missing callable");
  ScalingFunction f;
  f.family_ = Family::Custom;
  f.fn_ = std::move(fn);
  return f;
}

double ScalingFunction::operator()(double t) const {
  if (!(t > 0.0 && t < domain_limit_))
    throw std::domain_error("ScalingFunction: argument outside (0, limit)");
  const double v = fn_(t);
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::domain_error("ScalingFunction: values must be positive");
  return v;
}

}  // namespace levylab
