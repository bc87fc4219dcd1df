#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levylab/grid.hpp"
#include "levylab/measure.hpp"
#include "levylab/path.hpp"
#include "levylab/samplers.hpp"
#include "levylab/stable_cdf.hpp"
#include "levylab/stats.hpp"

using namespace levylab;

namespace {

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

Eigen::MatrixXd scalar_matrix(double v) {
  Eigen::MatrixXd m(1, 1);
  m << v;
  return m;
}

}  // namespace

TEST_CASE("geometric grids") {
  const TimeGrid g = make_grid(1.0, 0.5, 3);
  REQUIRE(g.times.size() == 4);
  CHECK(g.times[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.times[3] == 1.0);
  CHECK(g.smallest() == g.times.front());
  CHECK(g.largest() == 1.0);
  CHECK(g.span_decades() == doctest::Approx(std::log10(8.0)));

  CHECK_THROWS_AS(make_grid(0.0, 0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("refined times interleave the outer grid") {
  const TimeGrid g = make_grid(1.0, 0.5, 2);  // 0.25, 0.5, 1.0
  const RefinedTimes r = refined_times(g, 2);
  const std::vector<double> expect{0.125, 0.25, 0.375, 0.5, 0.75, 1.0};
  REQUIRE(r.times.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(r.times[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  REQUIRE(r.report.size() == 3);
  CHECK(r.times[r.report[0]] == g.times[0]);
  CHECK(r.times[r.report[2]] == 1.0);

  const RefinedTimes plain = refined_times(g, 1);
  CHECK(plain.times == g.times);
}

TEST_CASE("deterministic line driver") {
  const TimeGrid g = make_grid(2.0, 0.5, 4);
  const PathSkeleton p = deterministic_linear(g, scalar(1.5));
  p.validate();
  CHECK(p.piecewise_linear);
  CHECK(p.jumps.empty());
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.values(0, long(i)) == doctest::Approx(1.5 * p.times[i]).epsilon(1e-15));
}

TEST_CASE("compound Poisson paths carry an exact jump ledger") {
  const TimeGrid g = make_grid(1.0, 0.5, 6);
  const JumpLaw law = JumpLaw::uniform(-1.0, 2.0);
  const PathSkeleton p =
      sample_compound_poisson(g, 4.0, law, scalar(0.5), {2024, 7});
  p.validate();
  CHECK(p.piecewise_linear);

  // Between stored points the path is the drift line; every deviation is a
  // ledger entry, and post == pre + delta holds exactly.
  for (const JumpRecord& j : p.jumps) {
    const Eigen::VectorXd post = p.value_at(j.time_index);
    CHECK(post[0] == j.pre_value[0] + j.delta[0]);
    CHECK(p.pre_value_at(j.time_index)[0] == j.pre_value[0]);
    CHECK(p.jump_at(j.time_index) != nullptr);
  }

  // Removing drift and jumps must leave exactly nothing.
  double jump_sum = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (next_jump < p.jumps.size() &&
           p.jumps[next_jump].time_index <= i) {
      jump_sum += p.jumps[next_jump].delta[0];
      ++next_jump;
    }
    CHECK(std::abs(p.values(0, long(i)) - 0.5 * p.times[i] - jump_sum) <
          1e-12);
  }

  // Report indices recover the outer grid.
  REQUIRE(p.report.size() == g.times.size());
  for (std::size_t k = 0; k < g.times.size(); ++k)
    CHECK(p.times[p.report[k]] == g.times[k]);
}

TEST_CASE("paths are pure functions of their stream key") {
  const TimeGrid g = make_grid(1.0, 0.5, 5);
  const JumpLaw law = JumpLaw::uniform(-1.0, 1.0);
  const PathSkeleton a =
      sample_compound_poisson(g, 5.0, law, scalar(0.0), {11, 3});
  const PathSkeleton b =
      sample_compound_poisson(g, 5.0, law, scalar(0.0), {11, 3});
  REQUIRE(a.times == b.times);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.jumps.size() == b.jumps.size());

  const PathSkeleton c =
      sample_compound_poisson(g, 5.0, law, scalar(0.0), {11, 4});
  const bool differs =
      c.times != a.times || (c.times == a.times &&
                             (a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
  CHECK(differs);

  const PathSkeleton w1 = sample_brownian(g, scalar_matrix(1.0), scalar(0.0),
                                          {99, 17});
  const PathSkeleton w2 = sample_brownian(g, scalar_matrix(1.0), scalar(0.0),
                                          {99, 17});
  CHECK((w1.values - w2.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Brownian marginals and covariance") {
  const TimeGrid g = make_grid(1.0, 0.5, 1);  // 0.5, 1.0
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.6, 0.6, 2.0;
  Eigen::VectorXd drift(2);
  drift << 0.3, -0.1;

  const int n = 6000;
  Eigen::MatrixXd ends(2, n);
  for (int i = 0; i < n; ++i) {
    const PathSkeleton p =
        sample_brownian(g, cov, drift, {5150, std::uint32_t(i)});
    p.validate();
    CHECK_FALSE(p.piecewise_linear);
    ends.col(i) = p.value_at(p.report.back());
  }
  const Eigen::VectorXd mean = ends.rowwise().mean();
  CHECK(mean[0] == doctest::Approx(0.3).epsilon(0.15));
  CHECK(mean[1] - (-0.1) == doctest::Approx(0.0).epsilon(1.0).scale(0.06));
  const Eigen::MatrixXd centered = ends.colwise() - mean;
  const Eigen::MatrixXd sample_cov =
      centered * centered.transpose() / double(n - 1);
  CHECK(sample_cov(0, 0) == doctest::Approx(1.0).epsilon(0.08));
  CHECK(sample_cov(1, 1) == doctest::Approx(2.0).epsilon(0.08));
  CHECK(sample_cov(0, 1) == doctest::Approx(0.6).epsilon(0.15));

  // Refinement adds interior points without changing the report times.
  const PathSkeleton fine = sample_brownian(g, cov, drift, {5150, 0}, 4);
  CHECK(fine.size() == 8);
  CHECK(fine.times[fine.report.back()] == 1.0);
}

TEST_CASE("zero-covariance Brownian input degenerates to the drift line") {
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  const PathSkeleton p =
      sample_brownian(g, scalar_matrix(0.0), scalar(2.0), {1, 1});
  CHECK(p.piecewise_linear);
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.values(0, long(i)) == doctest::Approx(2.0 * p.times[i]).epsilon(1e-15));
}

TEST_CASE("stable increments have the advertised marginal law") {
  const TimeGrid g = make_grid(0.25, 0.5, 1);
  const double alpha = 1.5, scale = 0.8;
  std::vector<double> ends;
  for (int i = 0; i < 3000; ++i) {
    const PathSkeleton p =
        sample_stable(g, alpha, scale, 0.0, {777, std::uint32_t(i)});
    CHECK(p.jumps.empty());
    CHECK_FALSE(p.piecewise_linear);
    ends.push_back(p.value_at(p.report.back())[0]);
  }
  // X_t ~ t^{1/alpha} scale S(alpha): scale parameter 0.25^{2/3} * 0.8.
  const StableCdf cdf(alpha, std::pow(0.25, 1.0 / alpha) * scale);
  CHECK(ks_statistic(std::move(ends), [&](double x) { return cdf(x); }) <
        0.035);

  // alpha = 2 is Brownian motion with variance 2 scale^2 t.
  std::vector<double> gauss;
  for (int i = 0; i < 3000; ++i) {
    const PathSkeleton p =
        sample_stable(g, 2.0, 1.0, 0.0, {778, std::uint32_t(i)});
    gauss.push_back(p.value_at(p.report.back())[0]);
  }
  double var = 0.0;
  for (double x : gauss) var += x * x;
  CHECK(var / 3000 == doctest::Approx(2.0 * 0.25).epsilon(0.1));

  RngStream probe(1, 0, 0);
  CHECK_THROWS_AS(sample_standard_stable(1.0, 0.5, probe),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_stable(g, 2.5, 1.0, 0.0, {1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_stable(g, 1.5, 1.0, 1.5, {1, 1}),
                  std::invalid_argument);
}

TEST_CASE("skewed stable variates match the one-sided construction") {
  // For alpha < 1 and beta = 1 the variate is positive and totally skewed;
  // check positivity and the median against the symmetric benchmark.
  RngStream rng(31, 0, 0);
  int negative = 0;
  for (int i = 0; i < 5000; ++i)
    if (sample_standard_stable(0.7, 1.0, rng) < 0.0) ++negative;
  CHECK(negative == 0);
}

TEST_CASE("truncated sampling keeps only resolvable jumps") {
  const TimeGrid g = make_grid(1.0, 0.5, 3);
  const LevyMeasure nu = LevyMeasure::truncated_exponential();
  TruncatedSamplerOptions opt;
  opt.eps = 0.2;

  const double rate = nu.mass_exceeding(opt.eps);
  int total_jumps = 0;
  const int n = 3000;
  std::vector<double> ends;
  for (int i = 0; i < n; ++i) {
    const PathSkeleton p =
        sample_truncated_levy(g, nu, 0.0, opt, {606, std::uint32_t(i)});
    p.validate();
    CHECK(p.piecewise_linear);
    for (const JumpRecord& j : p.jumps) {
      CHECK(std::abs(j.delta[0]) >= opt.eps * (1.0 - 1e-12));
      CHECK(std::abs(j.delta[0]) <= 1.0 + 1e-12);
    }
    total_jumps += int(p.jumps.size());
    ends.push_back(p.value_at(p.report.back())[0]);
  }
  CHECK(total_jumps / double(n) == doctest::Approx(rate).epsilon(0.05));

  // Symmetric measure, zero location: the compensated endpoint is centred
  // and its variance is the truncated second moment.
  double mean = 0.0, var = 0.0;
  for (double x : ends) mean += x;
  mean /= n;
  for (double x : ends) var += (x - mean) * (x - mean);
  var /= n - 1;
  const double second_above =
      nu.second_moment_below(1.0) - nu.second_moment_below(opt.eps);
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(second_above).epsilon(0.1));

  // The Gaussian substitute restores the missing small-jump variance.
  opt.gaussian_substitute = true;
  std::vector<double> subst;
  for (int i = 0; i < n; ++i) {
    const PathSkeleton p =
        sample_truncated_levy(g, nu, 0.0, opt, {607, std::uint32_t(i)});
    CHECK_FALSE(p.piecewise_linear);
    subst.push_back(p.value_at(p.report.back())[0]);
  }
  double var2 = 0.0, mean2 = 0.0;
  for (double x : subst) mean2 += x;
  mean2 /= n;
  for (double x : subst) var2 += (x - mean2) * (x - mean2);
  var2 /= n - 1;
  CHECK(var2 == doctest::Approx(nu.second_moment_below(1.0)).epsilon(0.1));

  CHECK_THROWS_AS(sample_truncated_levy(g, nu, 0.0,
                                        TruncatedSamplerOptions{.eps = 0.0},
                                        {1, 1}),
                  std::invalid_argument);
}

TEST_CASE("matrix drivers stack scalar components") {
  const TimeGrid g = make_grid(1.0, 0.5, 3);
  std::vector<PathSkeleton> parts;
  parts.push_back(deterministic_linear(g, scalar(1.0)));
  parts.push_back(deterministic_linear(g, scalar(-2.0)));
  parts.push_back(sample_compound_poisson(g, 3.0, JumpLaw::uniform(0.0, 1.0),
                                          scalar(0.0), {42, 0}));
  parts.push_back(deterministic_linear(g, scalar(0.5)));
  const PathSkeleton m = assemble_matrix_driver(parts, 2, 2);
  m.validate();
  CHECK(m.shape_rows == 2);
  CHECK(m.shape_cols == 2);
  CHECK(m.dim() == 4);
  const Eigen::MatrixXd at_end = m.matrix_at(m.report.back());
  CHECK(at_end(0, 0) == doctest::Approx(1.0));
  CHECK(at_end(1, 0) == doctest::Approx(-2.0));
  CHECK(at_end(1, 1) == doctest::Approx(0.5));
  // Jump ledger entries survive the merge with the full vector dimension.
  for (const JumpRecord& j : m.jumps) CHECK(j.delta.size() == 4);

  const PathSkeleton t = m.transposed();
  CHECK(t.matrix_at(t.report.back()) == at_end.transpose());
}

TEST_CASE("skeleton validation rejects inconsistent ledgers") {
  const TimeGrid g = make_grid(1.0, 0.5, 2);
  PathSkeleton p = deterministic_linear(g, scalar(1.0));

  PathSkeleton bad = p;
  JumpRecord j;
  j.time_index = 1;
  j.delta = scalar(0.7);
  j.pre_value = scalar(0.0);  // post != pre + delta
  bad.jumps.push_back(j);
  CHECK_THROWS_AS(bad.validate(), std::logic_error);

  PathSkeleton oob = p;
  JumpRecord k;
  k.time_index = 99;
  k.delta = scalar(0.0);
  k.pre_value = scalar(0.0);
  oob.jumps.push_back(k);
  CHECK_THROWS_AS(oob.validate(), std::logic_error);

  PathSkeleton shape = p;
  shape.shape_rows = 3;  // 3 x 1 != dim 1
  CHECK_THROWS_AS(shape.validate(), std::logic_error);
}
