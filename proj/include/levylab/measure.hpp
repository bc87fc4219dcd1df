#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "levylab/jump_law.hpp"
#include "levylab/rng.hpp"

namespace levylab {

/// Value of an absolute-moment integral that may diverge.  `value` is
/// meaningful only when `finite` is true; otherwise it is +infinity.
struct MomentValue {
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();
};

/// Jump intensity measure of a Levy process.  Four families are supported:
///
///  * finite_activity(rate, law)      rate * law(dx), total mass = rate
///  * stable_density(alpha, c+, c-)   c+- |x|^{-1-alpha} dx on each half line
///  * truncated_exponential()         e^{-|x|} dx restricted to [-1, 1]
///  * tabulated_density(...)          sampled density with a power-law
///                                    extension c |x|^{-eta} below the first
///                                    tabulated radius and zero beyond the
///                                    last one
///
/// Tail masses, truncated moments and the integral term of the
/// characteristic exponent are exact (closed form) for the first three
/// families and use adaptive quadrature for tabulated densities.
class LevyMeasure {
public:
  enum class Family {
    FiniteActivity,
    StableDensity,
    TruncatedExponential,
    TabulatedDensity,
  };

  static LevyMeasure finite_activity(double rate, JumpLaw law);
  static LevyMeasure stable_density(double alpha, double c_plus,
                                    double c_minus);
  static LevyMeasure truncated_exponential();
  static LevyMeasure tabulated_density(std::vector<double> radii,
                                       std::vector<double> density_plus,
                                       std::vector<double> density_minus,
                                       double small_x_exponent);

  Family family() const { return family_; }
  int dim() const { return dim_; }

  /// True when the total mass nu(R^d \ {0}) is finite.
  bool finite_total_mass() const;
  /// Total mass; throws std::domain_error when infinite.
  double total_mass() const;

  /// nu((x, inf)) for x > 0 (scalar measures).
  double tail_plus(double x) const;
  /// nu((-inf, -x)) for x > 0 (scalar measures).
  double tail_minus(double x) const;
  /// nu({ |x| >= eps }) for eps > 0; always finite.
  double mass_exceeding(double eps) const;

  /// integral of |x|^r over |x| <= 1, r > 0.  Divergence is reported
  /// exactly, not through overflow.  One-sided variants restrict to
  /// (0, 1] respectively [-1, 0) and are scalar only.
  MomentValue abs_moment_unit(double r, Side side = Side::Both) const;
  /// True when the jump part has paths of bounded variation, i.e. the
  /// first absolute moment converges at the origin.
  bool bounded_variation_jumps() const { return abs_moment_unit(1.0).finite; }
  /// Activity index: infimum of r for which abs_moment_unit(r) is finite.
  /// Found by bisection on [1e-6, 2] to +-1e-3; exactly 0 for measures
  /// whose every positive moment converges.
  double blumenthal_getoor_index() const;

  /// integral of x^2 over |x| < eps (scalar measures), eps in (0, 1].
  double second_moment_below(double eps) const;
  /// integral of x over |x| <= 1; requires bounded-variation jumps.
  Eigen::VectorXd mean_unit_ball() const;
  /// integral of x over eps <= |x| <= 1; finite for every eps > 0.
  Eigen::VectorXd mean_shell(double eps) const;

  /// Draw from nu conditioned on |x| >= eps and normalised; requires
  /// mass_exceeding(eps) > 0.
  Eigen::VectorXd sample_conditional_exceeding(double eps,
                                               RngStream& rng) const;

  /// integral of (e^{i z.x} - 1 - i z.x 1_{|x| <= 1}) nu(dx).
  /// Vector arguments are supported for finite-activity atom mixtures;
  /// everything else is scalar.
  std::complex<double> exponent_integral(const Eigen::VectorXd& z) const;
  std::complex<double> exponent_integral(double z) const;

  // Family parameters, for samplers and reports.
  double rate() const;             // FiniteActivity
  const JumpLaw& law() const;      // FiniteActivity
  double stable_alpha() const;     // StableDensity
  double stable_c_plus() const;    // StableDensity
  double stable_c_minus() const;   // StableDensity

private:
  LevyMeasure() = default;
  void require_scalar(const char* op) const;
  double density_plus_at(double x) const;   // tabulated, x > 0
  double density_minus_at(double x) const;  // tabulated, x > 0

  Family family_ = Family::FiniteActivity;
  int dim_ = 1;

  double rate_ = 0.0;
  std::optional<JumpLaw> law_;

  double alpha_ = 0.0, cp_ = 0.0, cm_ = 0.0;

  std::vector<double> radii_, gp_, gm_;
  double eta_ = 0.0;          // small-x power exponent
  double pow_cp_ = 0.0;       // matched power-law coefficients below radii_[0]
  double pow_cm_ = 0.0;
};

}  // namespace levylab
