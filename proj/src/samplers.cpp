#include "levylab/samplers.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levylab {

namespace {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols())
    throw std::invalid_argument("sample_brownian: covariance must be square");
  if ((cov - cov.transpose()).norm() > 1e-12 * (1.0 + cov.norm()))
    throw std::invalid_argument(
        "sample_brownian: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-12 * (1.0 + cov.norm()))
    throw std::invalid_argument(
        "sample_brownian: covariance must be positive semidefinite");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Sorted positive arrival times merged into a refined grid.  Every outer
// and refinement time is kept; arrivals landing exactly on a stored time
// (possible only through rounding) reuse its slot.
struct MergedTimes {
  std::vector<double> times;
  std::vector<std::size_t> report;
  std::vector<std::size_t> arrival_index;
};

MergedTimes merge_arrivals(const RefinedTimes& rt,
                           const std::vector<double>& arrivals) {
  MergedTimes m;
  m.times.reserve(rt.times.size() + arrivals.size());
  std::size_t a = 0, g = 0, next_report = 0;
  while (g < rt.times.size() || a < arrivals.size()) {
    double t;
    bool is_arrival = false, is_grid = false;
    if (a >= arrivals.size() || (g < rt.times.size() &&
                                 rt.times[g] <= arrivals[a])) {
      t = rt.times[g];
      is_grid = true;
      if (a < arrivals.size() && arrivals[a] == t) {
        is_arrival = true;
        ++a;
      }
      ++g;
    } else {
      t = arrivals[a];
      is_arrival = true;
      ++a;
    }
    m.times.push_back(t);
    const std::size_t idx = m.times.size() - 1;
    if (is_arrival) m.arrival_index.push_back(idx);
    if (is_grid && next_report < rt.report.size() &&
        rt.report[next_report] == g - 1) {
      m.report.push_back(idx);
      ++next_report;
    }
  }
  return m;
}

std::vector<double> poisson_arrivals(double rate, double t_max,
                                     RngStream& rng) {
  std::vector<double> arrivals;
  if (!(rate > 0.0)) return arrivals;
  double t = rng.exponential(rate);
  while (t <= t_max) {
    if (!arrivals.empty() && t <= arrivals.back())
      t = std::nextafter(arrivals.back(), t_max * 2.0);
    if (t > t_max) break;
    arrivals.push_back(t);
    t += rng.exponential(rate);
  }
  return arrivals;
}

}  // namespace

double sample_standard_stable(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("stable variate: alpha must lie in (0, 2]");
  if (!(beta >= -1.0 && beta <= 1.0))
    throw std::invalid_argument("stable variate: |beta| must be <= 1");
  if ((alpha == 1.0 || alpha == 2.0) && beta != 0.0)
    throw std::invalid_argument(
        "stable variate: beta must be 0 when alpha is 1 or 2");
  constexpr double pi = std::numbers::pi;
  if (alpha == 2.0) return std::numbers::sqrt2 * rng.normal();
  const double u = pi * (rng.uniform01() - 0.5);
  if (alpha == 1.0) return std::tan(u);
  const double w = rng.exponential(1.0);
  if (beta == 0.0) {
    return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
           std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  }
  const double zeta = -beta * std::tan(0.5 * pi * alpha);
  const double xi = std::atan(-zeta) / alpha;
  return std::pow(1.0 + zeta * zeta, 0.5 / alpha) *
         std::sin(alpha * (u + xi)) / std::pow(std::cos(u), 1.0 / alpha) *
         std::pow(std::cos(u - alpha * (u + xi)) / w,
                  (1.0 - alpha) / alpha);
}

PathSkeleton sample_brownian(const TimeGrid& grid, const Eigen::MatrixXd& cov,
                             const Eigen::VectorXd& drift, StreamKey key,
                             int refine) {
  const Eigen::MatrixXd root = psd_sqrt(cov);
  const int d = int(cov.rows());
  if (int(drift.size()) != d)
    throw std::invalid_argument("sample_brownian: drift dimension mismatch");
  const RefinedTimes rt = refined_times(grid, refine);
  const bool degenerate = cov.norm() == 0.0;

  std::vector<RngStream> streams;
  streams.reserve(std::size_t(d));
  for (int c = 0; c < d; ++c)
    streams.emplace_back(key.seed, key.path_id, std::uint32_t(c));

  PathSkeleton path;
  path.times = rt.times;
  path.report = rt.report;
  path.origin = Eigen::VectorXd::Zero(d);
  path.values.resize(d, long(rt.times.size()));
  path.shape_rows = d;
  path.shape_cols = 1;
  path.seed_id = std::uint64_t(key.path_id) << 32;
  // Gaussian increments must never be subdivided after the fact; with a
  // zero covariance the path degenerates to the exact drift line, which may.
  path.piecewise_linear = degenerate;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd z(d);
  double prev = 0.0;
  for (std::size_t i = 0; i < rt.times.size(); ++i) {
    const double dt = rt.times[i] - prev;
    for (int c = 0; c < d; ++c) z(c) = streams[std::size_t(c)].normal();
    state += std::sqrt(dt) * (root * z);
    path.values.col(long(i)) = state + drift * rt.times[i];
    prev = rt.times[i];
  }
  return path;
}

PathSkeleton sample_compound_poisson(const TimeGrid& grid, double rate,
                                     const JumpLaw& law,
                                     const Eigen::VectorXd& drift,
                                     StreamKey key) {
  if (rate < 0.0 || !std::isfinite(rate))
    throw std::invalid_argument("sample_compound_poisson: bad rate");
  const int d = law.dim();
  if (int(drift.size()) != d)
    throw std::invalid_argument(
        "sample_compound_poisson: drift dimension mismatch");

  RngStream rng(key.seed, key.path_id, 0);
  const RefinedTimes rt = refined_times(grid, 1);
  const std::vector<double> arrivals =
      poisson_arrivals(rate, grid.largest(), rng);
  const MergedTimes m = merge_arrivals(rt, arrivals);

  PathSkeleton path;
  path.times = m.times;
  path.report = m.report;
  path.origin = Eigen::VectorXd::Zero(d);
  path.values.resize(d, long(m.times.size()));
  path.shape_rows = d;
  path.shape_cols = 1;
  path.seed_id = rng.stream_id();
  path.piecewise_linear = true;

  Eigen::VectorXd state = Eigen::VectorXd::Zero(d);
  double prev = 0.0;
  std::size_t next_arrival = 0;
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    const double t = m.times[i];
    state += (t - prev) * drift;
    if (next_arrival < m.arrival_index.size() &&
        m.arrival_index[next_arrival] == i) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = state;
      rec.delta = law.sample(rng);
      state = rec.pre_value + rec.delta;
      path.jumps.push_back(std::move(rec));
      ++next_arrival;
    }
    path.values.col(long(i)) = state;
    prev = t;
  }
  return path;
}

PathSkeleton sample_stable(const TimeGrid& grid, double alpha, double scale,
                           double beta, StreamKey key, int refine) {
  if (!(scale > 0.0))
    throw std::invalid_argument("sample_stable: scale must be positive");
  const RefinedTimes rt = refined_times(grid, refine);
  RngStream rng(key.seed, key.path_id, 0);

  PathSkeleton path;
  path.times = rt.times;
  path.report = rt.report;
  path.origin = Eigen::VectorXd::Zero(1);
  path.values.resize(1, long(rt.times.size()));
  path.seed_id = rng.stream_id();
  path.piecewise_linear = false;

  double state = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < rt.times.size(); ++i) {
    const double dt = rt.times[i] - prev;
    state += std::pow(dt, 1.0 / alpha) * scale *
             sample_standard_stable(alpha, beta, rng);
    path.values(0, long(i)) = state;
    prev = rt.times[i];
  }
  return path;
}

PathSkeleton sample_truncated_levy(const TimeGrid& grid,
                                   const LevyMeasure& measure, double location,
                                   const TruncatedSamplerOptions& opt,
                                   StreamKey key) {
  if (measure.dim() != 1)
    throw std::invalid_argument(
        "sample_truncated_levy: measure must be scalar");
  if (!(opt.eps > 0.0 && opt.eps <= 1.0))
    throw std::invalid_argument(
        "sample_truncated_levy: eps must lie in (0, 1]");

  const double rate = measure.mass_exceeding(opt.eps);
  const double drift = location - measure.mean_shell(opt.eps)(0);
  const double sub_eps_sd =
      opt.gaussian_substitute
          ? std::sqrt(measure.second_moment_below(opt.eps))
          : 0.0;

  RngStream jump_rng(key.seed, key.path_id, 0);
  RngStream diff_rng(key.seed, key.path_id, 1);

  const RefinedTimes rt = refined_times(grid, opt.refine);
  const std::vector<double> arrivals =
      poisson_arrivals(rate, grid.largest(), jump_rng);
  const MergedTimes m = merge_arrivals(rt, arrivals);

  PathSkeleton path;
  path.times = m.times;
  path.report = m.report;
  path.origin = Eigen::VectorXd::Zero(1);
  path.values.resize(1, long(m.times.size()));
  path.seed_id = jump_rng.stream_id();
  path.piecewise_linear = !opt.gaussian_substitute;

  double state = 0.0, prev = 0.0;
  std::size_t next_arrival = 0;
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    const double t = m.times[i];
    state += (t - prev) * drift;
    if (sub_eps_sd > 0.0)
      state += sub_eps_sd * std::sqrt(t - prev) * diff_rng.normal();
    if (next_arrival < m.arrival_index.size() &&
        m.arrival_index[next_arrival] == i) {
      JumpRecord rec;
      rec.time_index = i;
      rec.pre_value = Eigen::VectorXd::Constant(1, state);
      rec.delta = measure.sample_conditional_exceeding(opt.eps, jump_rng);
      state = rec.pre_value(0) + rec.delta(0);
      path.jumps.push_back(std::move(rec));
      ++next_arrival;
    }
    path.values(0, long(i)) = state;
    prev = t;
  }
  return path;
}

PathSkeleton deterministic_linear(const TimeGrid& grid,
                                  const Eigen::VectorXd& slope) {
  const RefinedTimes rt = refined_times(grid, 1);
  const int d = int(slope.size());
  PathSkeleton path;
  path.times = rt.times;
  path.report = rt.report;
  path.origin = Eigen::VectorXd::Zero(d);
  path.values.resize(d, long(rt.times.size()));
  path.shape_rows = d;
  path.shape_cols = 1;
  for (std::size_t i = 0; i < rt.times.size(); ++i)
    path.values.col(long(i)) = rt.times[i] * slope;
  return path;
}

}  // namespace levylab
