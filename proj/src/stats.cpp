#include "levylab/stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "levylab/rng.hpp"

namespace levylab {

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double pos = q * double(sample.size() - 1);
  const std::size_t lo = std::size_t(pos);
  if (lo + 1 >= sample.size()) return sample.back();
  const double w = pos - double(lo);
  return sample[lo] * (1.0 - w) + sample[lo + 1] * w;
}

SlopeFit ols_loglog(const std::vector<double>& t,
                    const std::vector<double>& v) {
  if (t.size() != v.size())
    throw std::invalid_argument("ols_loglog: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(v[i] > 0.0)) continue;
    const double x = std::log(t[i]), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  SlopeFit fit;
  fit.points_used = n;
  if (n < 2) return fit;
  const double det = double(n) * sxx - sx * sx;
  if (det == 0.0) return fit;
  fit.slope = (double(n) * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / double(n);
  return fit;
}

SlopeInterval bootstrap_slope_interval(const std::vector<double>& t,
                                       const std::vector<double>& v,
                                       int resamples, std::uint64_t seed) {
  if (resamples < 8)
    throw std::invalid_argument("bootstrap: need at least 8 resamples");
  std::vector<double> tt, vv;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] > 0.0 && v[i] > 0.0) {
      tt.push_back(t[i]);
      vv.push_back(v[i]);
    }
  SlopeInterval out;
  const SlopeFit base = ols_loglog(tt, vv);
  out.slope = base.slope;
  out.points_used = base.points_used;
  if (base.points_used < 3) {
    out.lo = out.hi = base.slope;
    return out;
  }
  RngStream rng(seed, 0, kReservedSubstreamBase);
  const std::size_t n = tt.size();
  std::vector<double> rt(n), rv(n), slopes;
  slopes.reserve(std::size_t(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = std::size_t(rng.uniform01() * double(n));
      rt[i] = tt[std::min(j, n - 1)];
      rv[i] = vv[std::min(j, n - 1)];
    }
    const SlopeFit fit = ols_loglog(rt, rv);
    if (fit.points_used >= 2) slopes.push_back(fit.slope);
  }
  out.lo = quantile(slopes, 0.025);
  out.hi = quantile(slopes, 0.975);
  return out;
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - double(i + 1) / n));
    d = std::max(d, std::abs(f - double(i) / n));
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) -
                             double(j) / double(b.size())));
  }
  return d;
}

namespace {

double mean_cross_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double sum = 0.0;
  for (long i = 0; i < a.cols(); ++i)
    for (long j = 0; j < b.cols(); ++j)
      sum += (a.col(i) - b.col(j)).norm();
  return sum / (double(a.cols()) * double(b.cols()));
}

double mean_self_distance(const Eigen::MatrixXd& a) {
  if (a.cols() < 2) return 0.0;
  double sum = 0.0;
  for (long i = 0; i < a.cols(); ++i)
    for (long j = i + 1; j < a.cols(); ++j)
      sum += (a.col(i) - a.col(j)).norm();
  return 2.0 * sum / (double(a.cols()) * double(a.cols() - 1));
}

Eigen::MatrixXd thin_columns(const Eigen::MatrixXd& m, int cap,
                             RngStream& rng) {
  if (m.cols() <= cap) return m;
  std::vector<long> idx(std::size_t(m.cols()));
  std::iota(idx.begin(), idx.end(), 0L);
  for (std::size_t i = idx.size() - 1; i > 0; --i) {
    const std::size_t j = std::size_t(rng.uniform01() * double(i + 1));
    std::swap(idx[i], idx[std::min(j, i)]);
  }
  Eigen::MatrixXd out(m.rows(), cap);
  std::sort(idx.begin(), idx.begin() + cap);
  for (int k = 0; k < cap; ++k) out.col(k) = m.col(idx[std::size_t(k)]);
  return out;
}

}  // namespace

double energy_statistic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("energy: dimension mismatch");
  if (a.cols() == 0 || b.cols() == 0)
    throw std::invalid_argument("energy: empty cloud");
  return 2.0 * mean_cross_distance(a, b) - mean_self_distance(a) -
         mean_self_distance(b);
}

double energy_permutation_pvalue(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b, int permutations,
                                 std::uint64_t seed, int subsample_cap) {
  if (permutations < 19)
    throw std::invalid_argument("energy: need at least 19 permutations");
  RngStream rng(seed, 0, kReservedSubstreamBase + 1);
  const Eigen::MatrixXd aa = thin_columns(a, subsample_cap, rng);
  const Eigen::MatrixXd bb = thin_columns(b, subsample_cap, rng);
  const double observed = energy_statistic(aa, bb);

  const long na = aa.cols(), nb = bb.cols();
  Eigen::MatrixXd pool(aa.rows(), na + nb);
  pool.leftCols(na) = aa;
  pool.rightCols(nb) = bb;

  std::vector<long> idx(std::size_t(na + nb));
  std::iota(idx.begin(), idx.end(), 0L);
  int at_least = 0;
  Eigen::MatrixXd pa(aa.rows(), na), pb(aa.rows(), nb);
  for (int s = 0; s < permutations; ++s) {
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = std::size_t(rng.uniform01() * double(i + 1));
      std::swap(idx[i], idx[std::min(j, i)]);
    }
    for (long k = 0; k < na; ++k) pa.col(k) = pool.col(idx[std::size_t(k)]);
    for (long k = 0; k < nb; ++k)
      pb.col(k) = pool.col(idx[std::size_t(na + k)]);
    if (energy_statistic(pa, pb) >= observed) ++at_least;
  }
  return double(1 + at_least) / double(1 + permutations);
}

TimeSummary summarize_rows(const Eigen::MatrixXd& rows) {
  if (rows.cols() == 0)
    throw std::invalid_argument("summarize_rows: empty matrix");
  TimeSummary s;
  const std::size_t k = std::size_t(rows.rows());
  s.medians.resize(k);
  s.lower_quartiles.resize(k);
  s.upper_quartiles.resize(k);
  s.maxima.resize(k);
  std::vector<double> row(std::size_t(rows.cols()));
  for (std::size_t i = 0; i < k; ++i) {
    for (long j = 0; j < rows.cols(); ++j) row[std::size_t(j)] = rows(long(i), j);
    s.medians[i] = quantile(row, 0.5);
    s.lower_quartiles[i] = quantile(row, 0.25);
    s.upper_quartiles[i] = quantile(row, 0.75);
    s.maxima[i] = *std::max_element(row.begin(), row.end());
  }
  return s;
}

std::vector<std::size_t> convex_hull_indices(const Eigen::MatrixXd& points) {
  if (points.rows() != 2)
    throw std::invalid_argument("convex_hull: need 2 x n points");
  const long n = points.cols();
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (points(0, long(i)) != points(0, long(j)))
      return points(0, long(i)) < points(0, long(j));
    return points(1, long(i)) < points(1, long(j));
  });
  const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    const double ox = points(0, long(o)), oy = points(1, long(o));
    return (points(0, long(a)) - ox) * (points(1, long(b)) - oy) -
           (points(1, long(a)) - oy) * (points(0, long(b)) - ox);
  };
  std::vector<std::size_t> hull;
  // lower chain
  for (std::size_t id : order) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull.back(), id) <= 0.0)
      hull.pop_back();
    hull.push_back(id);
  }
  // upper chain
  const std::size_t lower = hull.size() + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (hull.size() >= lower &&
           cross(hull[hull.size() - 2], hull.back(), *it) <= 0.0)
      hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();  // first point repeats
  return hull;
}

EllipseAxes covariance_ellipse_axes(const Eigen::MatrixXd& points) {
  if (points.rows() != 2 || points.cols() < 2)
    throw std::invalid_argument("ellipse: need 2 x n points, n >= 2");
  const Eigen::VectorXd mean = points.rowwise().mean();
  const Eigen::MatrixXd centered = points.colwise() - mean;
  const Eigen::Matrix2d cov =
      centered * centered.transpose() / double(points.cols() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  EllipseAxes axes;
  axes.minor = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
  axes.major = std::sqrt(std::max(0.0, es.eigenvalues()(1)));
  return axes;
}

}  // namespace levylab
