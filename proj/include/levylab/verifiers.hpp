#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/predict.hpp"
#include "levylab/solver.hpp"
#include "levylab/stats.hpp"

namespace levylab {

enum class Verdict { ConvergesTo, DivergesInNorm, Oscillates, Inconclusive };
const char* to_string(Verdict v);

struct LimitEstimate {
  Verdict verdict = Verdict::Inconclusive;
  /// Componentwise median at the smallest time; the limit candidate.
  Eigen::VectorXd limit;
  SlopeInterval norm_slope;        // log median norm against log t
  SlopeInterval dispersion_slope;  // log dispersion against log t
  std::vector<double> median_norms;
  std::vector<double> dispersion;
};

/// Reads a verdict off a rescaled ensemble (at least 8 grid times).
/// Median norms rising toward t = 0 (slope at most -0.1 with the whole
/// bootstrap interval negative) is divergence; dispersion around the
/// candidate limit collapsing by a factor of ten (or provably shrinking)
/// is convergence; flat norms with flat nonvanishing dispersion is
/// oscillation; anything else is inconclusive.
LimitEstimate estimate_limit(const RescaledEnsemble& ensemble,
                             std::uint64_t seed);

/// Agreement between an estimate and a prediction: a zero limit must be
/// ConvergesTo with candidate norm at most zero_tolerance, a finite limit
/// must be matched within relative_tolerance, divergence and oscillation
/// must match by verdict.
bool agrees_with_prediction(const LimitEstimate& estimate,
                            const ShortTimePrediction& prediction,
                            double zero_tolerance = 0.05,
                            double relative_tolerance = 0.05);

struct DecayCheck {
  bool decays = false;
  /// Realized quadratic variation over [0, t] divided by t^{2p},
  /// summarized across paths per grid time.
  TimeSummary rescaled;
  SlopeFit slope;
};

/// Tests whether realized quadratic variation vanishes faster than t^{2p}:
/// the rescaled median at the smallest time must drop below a tenth of the
/// value at the largest (or vanish outright).  Scalar paths only.
DecayCheck qv_decay_check(const PathSource& source, const TimeGrid& grid,
                          double p, int workers);

struct CouplingReport {
  TimeSummary frozen;                 // coefficient frozen at the start
  std::vector<double> median_moving;  // coefficient read at the current state
  bool decays = false;                // factor-10 rule on the frozen medians
};

/// Gap between the solution increment and the frozen-coefficient
/// approximation, rescaled: || X_t - x0 - sigma(x0) L_t || / f(t) per grid
/// time (medians and maxima across paths), plus the variant with
/// sigma(X_t) in place of sigma(x0).  Solutions are computed from the
/// drivers here, so the two ensembles share every path's randomness.
CouplingReport coupling_gap(const PathSource& drivers,
                            std::shared_ptr<const SigmaMap> sigma,
                            const Eigen::VectorXd& initial_state,
                            const TimeGrid& grid, const ScalingFunction& f,
                            int workers, const SolveOptions& opt = {});

struct BandEstimate {
  double median = 0.0;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
};

/// Per-path running maximum of the rescaled norms over the whole grid,
/// summarized across paths; estimates the almost-sure limsup constant of
/// iterated-logarithm scalings.  Needs at least 20 grid times spanning at
/// least 6 decades.
BandEstimate limsup_estimate(const RescaledEnsemble& ensemble);

struct ClusterSet {
  Eigen::MatrixXd points;  // dim x pooled count, shell times only
  /// Hull indices and standard-deviation ellipse axes, two-dimensional
  /// ensembles only (empty / zero otherwise).
  std::vector<std::size_t> hull;
  EllipseAxes axes;
};

/// Pools every rescaled state with time inside [t_lo, t_hi] into one cloud;
/// the cloud estimates the set of accumulation points of the rescaled
/// process.  Throws when no grid time falls in the shell.
ClusterSet cluster_set_estimate(const RescaledEnsemble& ensemble, double t_lo,
                                double t_hi);

/// Kolmogorov-Smirnov distance of a sample (at least 100 points) against
/// the symmetric stable law with the given index and scale.
double ks_distance_to_stable(std::vector<double> sample, double alpha,
                             double scale);
/// Same, applied to the scalar rescaled states at the smallest time.
double ks_distance_to_stable(const RescaledEnsemble& ensemble, double alpha,
                             double scale);

struct TransferCheck {
  double ks = 1.0;
  double threshold = 0.05;
  bool passes = false;
  std::size_t paths = 0;
};

/// Distributional transfer from driver to solution: if L_t / f(t) has a
/// stable limit law, (X_t - x0) / (sigma(x0) f(t)) must approach the same
/// law.  Solves every driver path, reads the state at the smallest grid
/// time and compares against the stable law by KS distance.  Scalar, with
/// sigma(x0) != 0.
TransferCheck verify_distributional_transfer(
    const PathSource& drivers, std::shared_ptr<const SigmaMap> sigma,
    const Eigen::VectorXd& initial_state, const TimeGrid& grid,
    const ScalingFunction& scaling, double alpha, double stable_scale,
    double threshold, int workers, const SolveOptions& opt = {});

/// Permutation p-value of the energy test between the pooled rescaled
/// solution cloud (X_t - x0)/f(t) and sigma(x0) applied to the pooled
/// rescaled driver cloud, over shell times in [t_lo, t_hi].  The clouds
/// share the drivers' randomness, which only makes the test conservative.
double cluster_transfer_pvalue(const PathSource& drivers,
                               std::shared_ptr<const SigmaMap> sigma,
                               const Eigen::VectorXd& initial_state,
                               const TimeGrid& grid, const ScalingFunction& f,
                               double t_lo, double t_hi, int workers,
                               std::uint64_t seed, const SolveOptions& opt = {});

struct InProbabilityCheck {
  bool passes = false;
  std::vector<double> exceedance_smallest;  // per delta
  std::vector<double> exceedance_largest;
};

/// Convergence in probability to `target`: for every delta the exceedance
/// fraction at the smallest time must be under 5% and no more than a
/// percentage point above the fraction at the largest time.
InProbabilityCheck verify_in_probability(const RescaledEnsemble& ensemble,
                                         const Eigen::VectorXd& target,
                                         const std::vector<double>& deltas);

struct IntegralDecay {
  /// Median of | integral of phi d(driver) over (0, t] | / t^p per time.
  std::vector<double> medians;
  bool decays = false;
};

/// Checks that t^{-p} * integral of phi_{s-} dX_s vanishes as t -> 0 for
/// paired integrand/driver ensembles (matching counts, shared stored
/// times per pair), via the factor-10 rule on per-time medians.
IntegralDecay integral_lemma_check(const PathSource& integrands,
                                   const PathSource& drivers,
                                   const TimeGrid& grid, double p,
                                   int workers);

}  // namespace levylab
