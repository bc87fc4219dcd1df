#pragma once

namespace levylab {

/// Distribution function of a symmetric stable law with characteristic
/// function exp(-(scale |z|)^alpha), the law of the unit-scale variate
/// from sample_standard_stable times `scale`.
///
/// alpha == 2 and alpha == 1 use the Gaussian and Cauchy closed forms.
/// Otherwise moderate arguments invert the characteristic function
/// numerically and large arguments switch to the power-tail series, whose
/// terms alternate; the crossover keeps both branches well inside their
/// accurate ranges.
class StableCdf {
public:
  StableCdf(double alpha, double scale);

  double operator()(double x) const;

  double alpha() const { return alpha_; }
  double scale() const { return scale_; }

private:
  double standard(double y) const;       // unit scale, y >= 0
  double tail_series(double y) const;    // upper tail mass at y > 0

  double alpha_;
  double scale_;
  double tail_switch_;
};

}  // namespace levylab
