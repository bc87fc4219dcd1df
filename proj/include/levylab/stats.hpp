#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace levylab {

/// Quantile with linear interpolation between order statistics (the
/// convention most statistics packages default to).  q in [0, 1].
double quantile(std::vector<double> sample, double q);

inline double median(std::vector<double> sample) {
  return quantile(std::move(sample), 0.5);
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
};

/// Least-squares slope of log(v) against log(t), skipping nonpositive
/// values (both t and v must be positive to enter the fit).
SlopeFit ols_loglog(const std::vector<double>& t, const std::vector<double>& v);

struct SlopeInterval {
  double slope = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int points_used = 0;
};

/// Pairs-bootstrap 95% interval for the log-log slope; fully determined by
/// the seed.
SlopeInterval bootstrap_slope_interval(const std::vector<double>& t,
                                       const std::vector<double>& v,
                                       int resamples, std::uint64_t seed);

/// Kolmogorov-Smirnov statistic of a sample against a continuous cdf.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

/// Energy distance statistic between two point clouds (columns are
/// points): 2 E|A - B| - E|A - A'| - E|B - B'|.
double energy_statistic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Permutation p-value for the energy statistic.  Clouds larger than
/// subsample_cap columns are thinned deterministically first; the
/// permutations are driven by the seed alone.
double energy_permutation_pvalue(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b, int permutations,
                                 std::uint64_t seed, int subsample_cap = 512);

/// Row-wise summary of a (time x path) value matrix: per-row median,
/// quartiles and maximum.
struct TimeSummary {
  std::vector<double> medians;
  std::vector<double> lower_quartiles;
  std::vector<double> upper_quartiles;
  std::vector<double> maxima;
};

TimeSummary summarize_rows(const Eigen::MatrixXd& rows);

/// Indices of the convex hull of a 2 x n point cloud, counterclockwise
/// (monotone chain).
std::vector<std::size_t> convex_hull_indices(const Eigen::MatrixXd& points);

/// Standard-deviation half-axes of a 2 x n cloud: square roots of the
/// covariance eigenvalues, returned (major, minor).
struct EllipseAxes {
  double major = 0.0;
  double minor = 0.0;
};
EllipseAxes covariance_ellipse_axes(const Eigen::MatrixXd& points);

}  // namespace levylab
