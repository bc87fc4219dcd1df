#include "levylab/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "levylab/errors.hpp"
#include "levylab/parallel.hpp"
#include "levylab/stable_cdf.hpp"

namespace levylab {
namespace {

void require_report_matches(const PathSkeleton& path, const TimeGrid& grid) {
  if (path.report.size() != grid.times.size()) {
    throw GridMismatchError("path reports " + std::to_string(path.report.size()) +
                            " times, grid has " +
                            std::to_string(grid.times.size()));
  }
  for (std::size_t k = 0; k < grid.times.size(); ++k) {
    if (path.times.at(path.report[k]) != grid.times[k]) {
      throw GridMismatchError("path evaluation times do not match the grid");
    }
  }
}

std::vector<double> row_vector(const Eigen::MatrixXd& m, int row) {
  std::vector<double> out(std::size_t(m.cols()));
  for (long j = 0; j < m.cols(); ++j) out[std::size_t(j)] = m(row, j);
  return out;
}

bool factor_ten_drop(const std::vector<double>& medians) {
  return medians.front() == 0.0 || medians.front() <= 0.1 * medians.back();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergesTo: return "converges";
    case Verdict::DivergesInNorm: return "diverges_in_norm";
    case Verdict::Oscillates: return "oscillates";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LimitEstimate estimate_limit(const RescaledEnsemble& e, std::uint64_t seed) {
  if (e.times.size() < 8 || e.paths == 0) {
    throw std::invalid_argument(
        "estimate_limit: need at least 8 grid times and one path");
  }
  const std::size_t K = e.times.size();
  LimitEstimate out;

  out.median_norms.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.median_norms[k] = median(row_vector(e.norms, int(k)));
  }
  out.norm_slope = bootstrap_slope_interval(e.times, out.median_norms, 200, seed);

  // Candidate limit: componentwise median at the smallest time.
  out.limit.resize(e.dim);
  for (int c = 0; c < e.dim; ++c) {
    out.limit[c] = median(row_vector(e.values.front(), c));
  }

  out.dispersion.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> dist(e.paths);
    for (std::size_t p = 0; p < e.paths; ++p) {
      dist[p] = (e.values[k].col(long(p)) - out.limit).norm();
    }
    out.dispersion[k] = median(std::move(dist));
  }
  out.dispersion_slope =
      bootstrap_slope_interval(e.times, out.dispersion, 200, seed + 1);

  const double d_small = out.dispersion.front();
  const double d_large = out.dispersion.back();
  const double m_small = out.median_norms.front();

  // Norms grow as t -> 0: slope of log(median norm) against log(t) is
  // decisively negative.
  if (out.norm_slope.slope <= -0.1 && out.norm_slope.hi < 0.0) {
    out.verdict = Verdict::DivergesInNorm;
    return out;
  }
  // Dispersion around the candidate collapses outright, by a factor of
  // ten across the grid, or with a slope interval bounded away from flat.
  const bool collapsed = d_small == 0.0 || d_small <= 0.1 * d_large;
  const bool shrinking = out.dispersion_slope.lo > 0.02 && d_small < d_large;
  if (collapsed || shrinking) {
    out.verdict = Verdict::ConvergesTo;
    return out;
  }
  // Flat nonvanishing norms with dispersion of the same size everywhere.
  const bool flat_norms = out.norm_slope.lo <= 0.0 && out.norm_slope.hi >= 0.0;
  const bool flat_dispersion =
      d_small > 0.0 && d_large > 0.0 && d_small >= 0.5 * d_large &&
      d_small <= 2.0 * d_large;
  if (flat_norms && flat_dispersion && m_small > 0.0) {
    out.verdict = Verdict::Oscillates;
    return out;
  }
  out.verdict = Verdict::Inconclusive;
  return out;
}

bool agrees_with_prediction(const LimitEstimate& estimate,
                            const ShortTimePrediction& prediction,
                            double zero_tolerance, double relative_tolerance) {
  switch (prediction.behavior) {
    case ShortTimeBehavior::ZeroLimit:
      return estimate.verdict == Verdict::ConvergesTo &&
             estimate.limit.norm() <= zero_tolerance;
    case ShortTimeBehavior::FiniteLimit: {
      if (estimate.verdict != Verdict::ConvergesTo || !prediction.limit) {
        return false;
      }
      const double ref = prediction.limit->norm();
      return (estimate.limit - *prediction.limit).norm() <=
             relative_tolerance * (ref > 0.0 ? ref : 1.0);
    }
    case ShortTimeBehavior::DivergesInNorm:
      return estimate.verdict == Verdict::DivergesInNorm;
    case ShortTimeBehavior::OscillatesLIL:
      return estimate.verdict == Verdict::Oscillates;
  }
  return false;
}

DecayCheck qv_decay_check(const PathSource& source, const TimeGrid& grid,
                          double p, int workers) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("qv_decay_check: p must be positive");
  }
  const std::size_t n = source.count();
  if (n == 0) throw std::invalid_argument("qv_decay_check: empty source");
  const std::size_t K = grid.times.size();

  Eigen::MatrixXd slots;
  slots.resize(long(K), long(n));
  for_each_index(n, workers, [&](std::size_t i) {
    PathSkeleton path = source(i);
    if (path.dim() != 1) {
      throw std::invalid_argument("qv_decay_check: scalar paths required");
    }
    require_report_matches(path, grid);
    PathSkeleton qv = realized_covariation(path, path);
    for (std::size_t k = 0; k < K; ++k) {
      const double scale = std::pow(grid.times[k], 2.0 * p);
      slots(long(k), long(i)) = qv.values(0, long(qv.report[k])) / scale;
    }
  });

  DecayCheck out;
  out.rescaled = summarize_rows(slots);
  out.slope = ols_loglog(grid.times, out.rescaled.medians);
  out.decays = factor_ten_drop(out.rescaled.medians);
  return out;
}

CouplingReport coupling_gap(const PathSource& drivers,
                            std::shared_ptr<const SigmaMap> sigma,
                            const Eigen::VectorXd& initial_state,
                            const TimeGrid& grid, const ScalingFunction& f,
                            int workers, const SolveOptions& opt) {
  const std::size_t n = drivers.count();
  if (n == 0) throw std::invalid_argument("coupling_gap: empty source");
  const std::size_t K = grid.times.size();
  std::vector<double> scale(K);
  for (std::size_t k = 0; k < K; ++k) scale[k] = f(grid.times[k]);

  Eigen::MatrixXd frozen, moving;
  frozen.resize(long(K), long(n));
  moving.resize(long(K), long(n));
  for_each_index(n, workers, [&](std::size_t i) {
    auto driver = std::make_shared<PathSkeleton>(drivers(i));
    require_report_matches(*driver, grid);
    const Eigen::MatrixXd sigma_start = (*sigma)(initial_state);
    SolutionPath sol = solve_sde(driver, sigma, initial_state, opt);
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t idx = driver->report[k];
      const Eigen::VectorXd state = sol.path.value_at(idx);
      const Eigen::VectorXd gain = state - initial_state;
      const Eigen::VectorXd level = driver->value_at(idx);
      frozen(long(k), long(i)) = (gain - sigma_start * level).norm() / scale[k];
      moving(long(k), long(i)) = (gain - (*sigma)(state)*level).norm() / scale[k];
    }
  });

  CouplingReport out;
  out.frozen = summarize_rows(frozen);
  out.median_moving.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.median_moving[k] = median(row_vector(moving, int(k)));
  }
  out.decays = factor_ten_drop(out.frozen.medians);
  return out;
}

BandEstimate limsup_estimate(const RescaledEnsemble& e) {
  if (e.paths == 0 || e.times.size() < 20 ||
      e.times.back() < 1e6 * e.times.front()) {
    throw std::invalid_argument(
        "limsup_estimate: need at least 20 times spanning 6 decades");
  }
  std::vector<double> maxima(e.paths);
  for (std::size_t p = 0; p < e.paths; ++p) {
    maxima[p] = e.norms.col(long(p)).maxCoeff();
  }
  BandEstimate out;
  out.median = quantile(maxima, 0.5);
  out.lower_quartile = quantile(maxima, 0.25);
  out.upper_quartile = quantile(maxima, 0.75);
  return out;
}

ClusterSet cluster_set_estimate(const RescaledEnsemble& e, double t_lo,
                                double t_hi) {
  std::vector<std::size_t> inside;
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    if (e.times[k] >= t_lo && e.times[k] <= t_hi) inside.push_back(k);
  }
  if (inside.empty()) {
    throw std::invalid_argument(
        "cluster_set_estimate: no grid time falls in the shell");
  }
  ClusterSet out;
  out.points.resize(e.dim, long(inside.size() * e.paths));
  long col = 0;
  for (std::size_t k : inside) {
    out.points.block(0, col, e.dim, long(e.paths)) = e.values[k];
    col += long(e.paths);
  }
  if (e.dim == 2) {
    out.hull = convex_hull_indices(out.points);
    out.axes = covariance_ellipse_axes(out.points);
  }
  return out;
}

double ks_distance_to_stable(std::vector<double> sample, double alpha,
                             double scale) {
  if (sample.size() < 100) {
    throw std::invalid_argument(
        "ks_distance_to_stable: need at least 100 samples");
  }
  StableCdf cdf(alpha, scale);
  return ks_statistic(std::move(sample),
                      [&cdf](double x) { return cdf(x); });
}

double ks_distance_to_stable(const RescaledEnsemble& e, double alpha,
                             double scale) {
  if (e.dim != 1) {
    throw std::invalid_argument("ks_distance_to_stable: scalar states required");
  }
  return ks_distance_to_stable(row_vector(e.values.front(), 0), alpha, scale);
}

TransferCheck verify_distributional_transfer(
    const PathSource& drivers, std::shared_ptr<const SigmaMap> sigma,
    const Eigen::VectorXd& initial_state, const TimeGrid& grid,
    const ScalingFunction& scaling, double alpha, double stable_scale,
    double threshold, int workers, const SolveOptions& opt) {
  const std::size_t n = drivers.count();
  if (n == 0) {
    throw std::invalid_argument("verify_distributional_transfer: empty source");
  }
  if (sigma->state_dim() != 1 || sigma->driver_dim() != 1) {
    throw std::invalid_argument(
        "verify_distributional_transfer: scalar equations only");
  }
  const double sigma_start = (*sigma)(initial_state)(0, 0);
  if (sigma_start == 0.0) {
    throw std::invalid_argument(
        "verify_distributional_transfer: coefficient vanishes at the start");
  }
  const double f0 = scaling(grid.smallest());

  std::vector<double> rescaled(n);
  for_each_index(n, workers, [&](std::size_t i) {
    auto driver = std::make_shared<PathSkeleton>(drivers(i));
    require_report_matches(*driver, grid);
    SolutionPath sol = solve_sde(driver, sigma, initial_state, opt);
    const std::size_t idx = driver->report.front();
    rescaled[i] =
        (sol.path.values(0, long(idx)) - initial_state(0)) / (sigma_start * f0);
  });

  TransferCheck out;
  out.paths = n;
  out.threshold = threshold;
  out.ks = ks_distance_to_stable(std::move(rescaled), alpha, stable_scale);
  out.passes = out.ks <= threshold;
  return out;
}

double cluster_transfer_pvalue(const PathSource& drivers,
                               std::shared_ptr<const SigmaMap> sigma,
                               const Eigen::VectorXd& initial_state,
                               const TimeGrid& grid, const ScalingFunction& f,
                               double t_lo, double t_hi, int workers,
                               std::uint64_t seed, const SolveOptions& opt) {
  const std::size_t n = drivers.count();
  if (n == 0) throw std::invalid_argument("cluster_transfer_pvalue: empty source");
  std::vector<std::size_t> inside;
  for (std::size_t k = 0; k < grid.times.size(); ++k) {
    if (grid.times[k] >= t_lo && grid.times[k] <= t_hi) inside.push_back(k);
  }
  if (inside.empty()) {
    throw std::invalid_argument(
        "cluster_transfer_pvalue: no grid time falls in the shell");
  }
  const Eigen::MatrixXd sigma_start = (*sigma)(initial_state);
  const int dim = int(sigma_start.rows());
  const long per_path = long(inside.size());

  Eigen::MatrixXd solution_cloud(dim, long(n) * per_path);
  Eigen::MatrixXd driver_cloud(dim, long(n) * per_path);
  for_each_index(n, workers, [&](std::size_t i) {
    auto driver = std::make_shared<PathSkeleton>(drivers(i));
    require_report_matches(*driver, grid);
    SolutionPath sol = solve_sde(driver, sigma, initial_state, opt);
    long col = long(i) * per_path;
    for (std::size_t k : inside) {
      const double ft = f(grid.times[k]);
      const std::size_t idx = driver->report[k];
      solution_cloud.col(col) =
          (sol.path.value_at(idx) - initial_state) / ft;
      driver_cloud.col(col) = sigma_start * driver->value_at(idx) / ft;
      ++col;
    }
  });
  return energy_permutation_pvalue(solution_cloud, driver_cloud, 199, seed);
}

InProbabilityCheck verify_in_probability(const RescaledEnsemble& e,
                                         const Eigen::VectorXd& target,
                                         const std::vector<double>& deltas) {
  if (e.paths == 0 || deltas.empty()) {
    throw std::invalid_argument("verify_in_probability: nothing to check");
  }
  if (target.size() != e.dim) {
    throw std::invalid_argument("verify_in_probability: target dimension");
  }
  const auto exceedance = [&](std::size_t k, double delta) {
    std::size_t hits = 0;
    for (std::size_t p = 0; p < e.paths; ++p) {
      if ((e.values[k].col(long(p)) - target).norm() > delta) ++hits;
    }
    return double(hits) / double(e.paths);
  };
  InProbabilityCheck out;
  out.passes = true;
  for (double delta : deltas) {
    const double small = exceedance(0, delta);
    const double large = exceedance(e.times.size() - 1, delta);
    out.exceedance_smallest.push_back(small);
    out.exceedance_largest.push_back(large);
    if (!(small < 0.05) || small > large + 0.01) out.passes = false;
  }
  return out;
}

IntegralDecay integral_lemma_check(const PathSource& integrands,
                                   const PathSource& drivers,
                                   const TimeGrid& grid, double p,
                                   int workers) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("integral_lemma_check: p must be positive");
  }
  const std::size_t n = integrands.count();
  if (n == 0 || n != drivers.count()) {
    throw std::invalid_argument(
        "integral_lemma_check: integrand and driver ensembles must pair up");
  }
  const std::size_t K = grid.times.size();

  Eigen::MatrixXd slots;
  slots.resize(long(K), long(n));
  for_each_index(n, workers, [&](std::size_t i) {
    const PathSkeleton phi = integrands(i);
    const PathSkeleton x = drivers(i);
    require_report_matches(x, grid);
    const PathSkeleton integral = stochastic_integral_left(phi, x);
    for (std::size_t k = 0; k < K; ++k) {
      slots(long(k), long(i)) =
          integral.value_at(integral.report[k]).norm() /
          std::pow(grid.times[k], p);
    }
  });

  IntegralDecay out;
  out.medians.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.medians[k] = median(row_vector(slots, int(k)));
  }
  out.decays = factor_ten_drop(out.medians);
  return out;
}

}  // namespace levylab
