#pragma once

#include <functional>
#include <limits>
#include <optional>

namespace levylab {

/// Normalising function f(t) used to rescale a process as X_t / f(t) for
/// small t.  Four families:
///
///  * power(p)                         f(t) = t^p, p > 0
///  * regularly_varying(p, L)          f(t) = t^p L(t) with L slowly varying
///  * khintchine()                     f(t) = sqrt(2 t log log(1/t))
///  * general_lil(h)                   f(t) = sqrt(t log log(1/t)) / h(1/t)
///  * custom(f)                        arbitrary positive f, no known index
///
/// The regular-variation index drives the behaviour predictions; custom
/// and general iterated-logarithm functions carry none, so predictions on
/// them are refused.
class ScalingFunction {
public:
  enum class Family { Power, RegularlyVarying, Khintchine, GeneralLIL, Custom };

  static ScalingFunction power(double exponent);
  static ScalingFunction regularly_varying(
      double index, std::function<double(double)> slowly_varying);
  static ScalingFunction khintchine();
  /// h must be slowly varying and non-decreasing; evaluated at 1/t.
  static ScalingFunction general_lil(std::function<double(double)> h);
  static ScalingFunction custom(std::function<double(double)> f);

  /// Evaluates f(t); t must lie in (0, domain_limit()).
  double operator()(double t) const;

  Family family() const { return family_; }
  std::optional<double> index() const { return index_; }
  /// Supremum of the valid argument range (e^{-1} for the iterated-log
  /// family, +infinity otherwise).
  double domain_limit() const { return domain_limit_; }

private:
  ScalingFunction() = default;

  Family family_ = Family::Power;
  std::optional<double> index_;
  double domain_limit_ = std::numeric_limits<double>::infinity();
  std::function<double(double)> fn_;
};

}  // namespace levylab
