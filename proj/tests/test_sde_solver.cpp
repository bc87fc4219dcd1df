#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "levylab/errors.hpp"
#include "levylab/samplers.hpp"
#include "levylab/sigma_map.hpp"
#include "levylab/solver.hpp"

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

std::shared_ptr<const PathSkeleton> shared(PathSkeleton p) {
  return std::make_shared<const PathSkeleton>(std::move(p));
}

std::shared_ptr<const SigmaMap> shared(SigmaMap s) {
  return std::make_shared<const SigmaMap>(std::move(s));
}

// sigma(x) = x as an affine map, the coefficient of the scalar exponential.
SigmaMap identity_coefficient() {
  return SigmaMap::affine(scalar_matrix(0.0), {scalar_matrix(1.0)});
}

}  // namespace

TEST_CASE("constant coefficients reproduce the driver affinely") {
  const TimeGrid g = make_grid(1.0, 0.5, 5);
  auto driver = shared(sample_compound_poisson(
      g, 6.0, JumpLaw::uniform(-1.0, 1.0), scalar(0.4), {314, 2}));
  Eigen::MatrixXd c(2, 1);
  c << 1.0, -2.0;
  Eigen::VectorXd x0(2);
  x0 << 0.25, 1.0;
  const SolutionPath sol =
      solve_sde(driver, shared(SigmaMap::constant(c)), x0);
  sol.path.validate();
  REQUIRE(sol.path.times == driver->times);
  for (std::size_t i = 0; i < sol.path.size(); ++i) {
    const double l = driver->values(0, long(i));
    CHECK(sol.path.values(0, long(i)) ==
          doctest::Approx(0.25 + l).epsilon(1e-12));
    CHECK(sol.path.values(1, long(i)) ==
          doctest::Approx(1.0 - 2.0 * l).epsilon(1e-12));
  }
  // Solution jumps mirror the driver ledger through sigma exactly.
  REQUIRE(sol.path.jumps.size() == driver->jumps.size());
  for (std::size_t k = 0; k < sol.path.jumps.size(); ++k) {
    const JumpRecord& j = sol.path.jumps[k];
    CHECK(j.delta[0] == driver->jumps[k].delta[0]);
    const Eigen::VectorXd post = j.pre_value + j.delta;
    CHECK((sol.path.value_at(j.time_index) - post).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("linear coefficient on a driftless jump driver is a product") {
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  auto driver = shared(sample_compound_poisson(
      g, 8.0, JumpLaw::uniform(-0.5, 0.5), scalar(0.0), {41, 9}));
  REQUIRE(!driver->jumps.empty());
  const SolutionPath sol =
      solve_sde(driver, shared(identity_coefficient()), scalar(1.5));
  double product = 1.5;
  for (const JumpRecord& j : driver->jumps) product *= 1.0 + j.delta[0];
  CHECK(sol.path.value_at(sol.path.report.back())[0] ==
        doctest::Approx(product).epsilon(1e-13));
}

TEST_CASE("Euler refinement converges at first order") {
  // dX = X dL with L_t = t: exact solution e^t.  Halving the step should
  // roughly halve the error.
  const TimeGrid g = make_grid(1.0, 0.5, 6);
  auto driver = shared(deterministic_linear(g, scalar(1.0)));
  auto sigma = shared(identity_coefficient());
  std::vector<double> errors;
  for (int sub : {8, 16, 32}) {
    SolveOptions opt;
    opt.substeps_per_interval = sub;
    const SolutionPath sol = solve_sde(driver, sigma, scalar(1.0), opt);
    errors.push_back(
        std::abs(sol.path.value_at(sol.path.report.back())[0] - std::exp(1.0)));
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(errors[1] / errors[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("driver recovery") {
  const TimeGrid g = make_grid(1.0, 0.5, 5);
  auto sigma = shared(SigmaMap::scalar_sinusoid(2.0, 1.0, 0.0, 0.0));

  SUBCASE("pure-jump round trip is exact") {
    auto driver = shared(sample_compound_poisson(
        g, 7.0, JumpLaw::uniform(-1.0, 1.0), scalar(0.0), {88, 5}));
    const SolutionPath sol = solve_sde(driver, sigma, scalar(0.3));
    const PathSkeleton rec = recover_driver(sol);
    REQUIRE(rec.times == driver->times);
    CHECK((rec.values - driver->values).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(rec.jumps.size() == driver->jumps.size());
    for (std::size_t k = 0; k < rec.jumps.size(); ++k)
      CHECK(rec.jumps[k].delta[0] ==
            doctest::Approx(driver->jumps[k].delta[0]).epsilon(1e-12));
  }

  SUBCASE("single-substep solutions invert exactly even with drift") {
    auto driver = shared(sample_compound_poisson(
        g, 4.0, JumpLaw::uniform(-1.0, 1.0), scalar(0.7), {88, 6}));
    SolveOptions opt;
    opt.substeps_per_interval = 1;
    const SolutionPath sol = solve_sde(driver, sigma, scalar(0.3), opt);
    const PathSkeleton rec = recover_driver(sol);
    CHECK((rec.values - driver->values).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("a singular coefficient raises a condition error") {
    auto driver = shared(deterministic_linear(g, scalar(1.0)));
    const SolutionPath sol =
        solve_sde(driver, shared(identity_coefficient()), scalar(0.0));
    CHECK_THROWS_AS(recover_driver(sol), ConditionError);
    try {
      recover_driver(sol);
    } catch (const ConditionError& e) {
      CHECK(e.at_time > 0.0);
    }
  }
}

TEST_CASE("explosive dynamics stop with an overflow error") {
  const TimeGrid g = make_grid(2.0, 0.5, 4);
  auto driver = shared(deterministic_linear(g, scalar(1.0)));
  auto square = shared(SigmaMap::custom(
      1, 1, "x^2", [](const Eigen::VectorXd& x) { return scalar_matrix(x[0] * x[0]); },
      [](const Eigen::VectorXd& x) { return scalar_matrix(2.0 * x[0]); }));
  CHECK_THROWS_AS(solve_sde(driver, square, scalar(1.0)), std::overflow_error);
}

TEST_CASE("coefficient jacobians") {
  const SigmaMap sinus = SigmaMap::scalar_sinusoid(2.0, 1.0, 0.5, 0.25);
  CHECK(sinus.jacobian_defect(scalar(0.3)) < 1e-8);
  CHECK(sinus.jacobian(scalar(0.3))(0, 0) ==
        doctest::Approx(std::cos(0.3) - 0.5 * std::sin(0.3) + 0.25));

  Eigen::MatrixXd b(2, 2);
  b << 0.0, 1.0, 0.5, 0.0;
  const SigmaMap aff = SigmaMap::affine(
      Eigen::MatrixXd::Identity(2, 2), {b, Eigen::MatrixXd::Zero(2, 2)});
  Eigen::VectorXd x(2);
  x << 0.4, -1.1;
  CHECK(aff.jacobian_defect(x) < 1e-8);

  // No analytic jacobian: finite differences are the jacobian by fiat.
  const SigmaMap plain = SigmaMap::custom(
      1, 1, "cube", [](const Eigen::VectorXd& v) {
        return scalar_matrix(v[0] * v[0] * v[0]);
      });
  CHECK(plain.jacobian_defect(scalar(0.7)) == 0.0);
  CHECK(plain.jacobian(scalar(0.5))(0, 0) ==
        doctest::Approx(0.75).epsilon(1e-6));

  // A wrong analytic jacobian is rejected at construction.
  CHECK_THROWS_AS(
      SigmaMap::custom(
          1, 1, "lying",
          [](const Eigen::VectorXd& v) { return scalar_matrix(v[0] * v[0]); },
          [](const Eigen::VectorXd&) { return scalar_matrix(7.0); }),
      std::invalid_argument);
}

TEST_CASE("integration by parts telescopes on driver-solution pairs") {
  const TimeGrid g = make_grid(1.0, 0.5, 5);
  auto sigma = shared(SigmaMap::scalar_sinusoid(2.0, 1.0, 0.0, 0.0));

  auto cp = shared(sample_compound_poisson(g, 5.0, JumpLaw::uniform(-1.0, 1.0),
                                           scalar(0.3), {500, 1}));
  const SolutionPath cp_sol = solve_sde(cp, sigma, scalar(0.1));
  CHECK(integration_by_parts_residual(*cp, cp_sol.path) < 1e-10);

  auto bm = shared(
      sample_brownian(g, scalar_matrix(1.0), scalar(0.0), {500, 2}));
  const SolutionPath bm_sol = solve_sde(bm, sigma, scalar(0.1));
  CHECK(integration_by_parts_residual(*bm, bm_sol.path) < 1e-10);
  CHECK(integration_by_parts_residual(bm_sol.path, bm_sol.path) < 1e-10);

  // Mismatched stored grids are refused, not silently interpolated.
  auto other = shared(sample_compound_poisson(
      g, 5.0, JumpLaw::uniform(-1.0, 1.0), scalar(0.3), {500, 3}));
  CHECK_THROWS_AS(integration_by_parts_residual(*cp, *other),
                  GridMismatchError);
}

TEST_CASE("realized covariation satisfies the Cauchy-Schwarz bound") {
  const TimeGrid g = make_grid(1.0, 0.5, 6);
  const PathSkeleton x =
      sample_brownian(g, scalar_matrix(1.0), scalar(0.0), {600, 1}, 8);
  const PathSkeleton y =
      sample_brownian(g, scalar_matrix(2.0), scalar(0.0), {600, 2}, 8);
  const PathSkeleton cxy = realized_covariation(x, y);
  const PathSkeleton cxx = realized_covariation(x, x);
  const PathSkeleton cyy = realized_covariation(y, y);
  for (std::size_t i = 0; i < cxy.size(); ++i) {
    const double lhs = cxy.values(0, long(i));
    const double rhs = std::sqrt(cxx.values(0, long(i)) * cyy.values(0, long(i)));
    CHECK(std::abs(lhs) <= rhs + 1e-12);
  }
  // Quadratic variation of the realized kind is nondecreasing.
  for (std::size_t i = 1; i < cxx.size(); ++i)
    CHECK(cxx.values(0, long(i)) >= cxx.values(0, long(i - 1)));
}

TEST_CASE("stochastic exponentials") {
  const TimeGrid g = make_grid(1.0, 0.5, 4);

  SUBCASE("scalar exponential is the jump product") {
    auto driver = shared(sample_compound_poisson(
        g, 6.0, JumpLaw::uniform(-0.5, 2.0), scalar(0.0), {700, 4}));
    const StochasticExponential e = stochastic_exponential(driver);
    double product = 1.0;
    double min_det = 1.0;
    for (const JumpRecord& j : driver->jumps) {
      product *= 1.0 + j.delta[0];
      min_det = std::min(min_det, std::abs(1.0 + j.delta[0]));
    }
    CHECK(e.solution.path.value_at(e.solution.path.report.back())[0] ==
          doctest::Approx(product).epsilon(1e-12));
    CHECK(e.min_jump_determinant == doctest::Approx(min_det));
    CHECK(e.invertible);
  }

  SUBCASE("a jump of -1 kills invertibility") {
    PathSkeleton d;
    d.times = {0.5, 1.0};
    d.values.resize(1, 2);
    d.values << -1.0, -1.0;
    d.origin = scalar(0.0);
    JumpRecord j;
    j.time_index = 0;
    j.pre_value = scalar(0.0);
    j.delta = scalar(-1.0);
    d.jumps.push_back(j);
    d.report = {0, 1};
    d.validate();
    const StochasticExponential e = stochastic_exponential(shared(std::move(d)));
    CHECK_FALSE(e.invertible);
    CHECK(e.min_jump_determinant == 0.0);
    CHECK(e.solution.path.value_at(1)[0] == 0.0);
  }

  SUBCASE("left and right exponentials are transpose-dual") {
    std::vector<PathSkeleton> parts;
    for (std::uint32_t c = 0; c < 4; ++c)
      parts.push_back(sample_compound_poisson(
          g, 3.0, JumpLaw::uniform(-0.4, 0.4), scalar(0.0), {701, c}));
    auto driver = shared(assemble_matrix_driver(parts, 2, 2));
    auto flipped = shared(driver->transposed());

    const StochasticExponential left =
        stochastic_exponential(driver, ExponentialSide::Left);
    const StochasticExponential right =
        stochastic_exponential(flipped, ExponentialSide::Right);
    const Eigen::MatrixXd zl =
        left.solution.path.matrix_at(left.solution.path.report.back());
    const Eigen::MatrixXd yr =
        right.solution.path.matrix_at(right.solution.path.report.back());
    CHECK((zl.transpose() - yr).cwiseAbs().maxCoeff() < 1e-12);

    // Non-square drivers have no multiplicative exponential.
    std::vector<PathSkeleton> two{parts[0], parts[1]};
    CHECK_THROWS_AS(
        stochastic_exponential(shared(assemble_matrix_driver(two, 2, 1))),
        std::invalid_argument);
  }
}

TEST_CASE("jump Taylor residuals of the coefficient") {
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  auto driver = shared(sample_compound_poisson(
      g, 6.0, JumpLaw::uniform(-1.0, 1.0), scalar(0.2), {800, 3}));

  const SolutionPath affine_sol =
      solve_sde(driver, shared(identity_coefficient()), scalar(0.4));
  for (const JumpTaylorResidual& r : ito_jump_residual(affine_sol)) {
    CHECK(r.residual.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(r.ratio < 1e-10);
  }

  // |sin''| <= 1 bounds the ratio by 1/2 for sigma = 2 + sin.
  const SolutionPath sin_sol = solve_sde(
      driver, shared(SigmaMap::scalar_sinusoid(2.0, 1.0, 0.0, 0.0)),
      scalar(0.4));
  const std::vector<JumpTaylorResidual> rs = ito_jump_residual(sin_sol);
  CHECK(rs.size() == driver->jumps.size());
  for (const JumpTaylorResidual& r : rs) CHECK(r.ratio <= 0.5 + 1e-9);

  auto smooth = shared(
      sample_brownian(g, scalar_matrix(1.0), scalar(0.0), {800, 4}));
  const SolutionPath bm_sol =
      solve_sde(smooth, shared(identity_coefficient()), scalar(0.4));
  CHECK(ito_jump_residual(bm_sol).empty());
}
