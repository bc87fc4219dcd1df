// Acceptance gate: ten numbered criteria, each printing one [PASS]/[FAIL]
// line with the measured quantity.  Criterion 8b is expected to stay red
// (see the note it prints); the binary exits 0 exactly when every other
// criterion passes and 8b fails, so any drift from that state is loud.

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/errors.hpp"
#include "levylab/measure.hpp"
#include "levylab/predict.hpp"
#include "levylab/runner.hpp"
#include "levylab/samplers.hpp"
#include "levylab/solver.hpp"
#include "levylab/stats.hpp"
#include "levylab/verifiers.hpp"

using namespace levylab;
namespace fs = std::filesystem;

namespace {

int g_checks_failed = 0;

// Always-on requirement: never compiled out in Release.
#define REQUIRE(cond, detail)                                              \
  do {                                                                     \
    if (!(cond)) {                                                         \
      std::ostringstream os_;                                              \
      os_ << detail;                                                       \
      std::cerr << "       check failed at line " << __LINE__ << ": "      \
                << #cond << "  [" << os_.str() << "]\n";                   \
      ++g_checks_failed;                                                   \
    }                                                                      \
  } while (0)

struct Outcome {
  std::string name;
  bool expected_pass = true;
  bool passed = false;
};

std::vector<Outcome> g_outcomes;

void criterion(const std::string& name, bool expected_pass,
               const std::function<void()>& body) {
  const int before = g_checks_failed;
  body();
  const bool ok = g_checks_failed == before;
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
  g_outcomes.push_back({name, expected_pass, ok});
}

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

std::shared_ptr<const SigmaMap> sinusoid_sigma() {
  return std::make_shared<const SigmaMap>(
      SigmaMap::scalar_sinusoid(2.0, 1.0, 0.0, 0.0));
}

PathSkeleton cp_driver(const TimeGrid& g, double drift, std::uint64_t seed,
                       std::size_t p) {
  return sample_compound_poisson(g, 5.0, JumpLaw::uniform(-1.0, 1.0),
                                 scalar(drift), {seed, std::uint32_t(p)});
}

double rel_residual(const PathSkeleton& x, const PathSkeleton& y) {
  const double scale = std::max(
      1.0, x.values.cwiseAbs().maxCoeff() * y.values.cwiseAbs().maxCoeff());
  return integration_by_parts_residual(x, y) / scale;
}

// ---------------------------------------------------------------------------

void criterion_1_pathwise_identities() {
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  auto sigma = sinusoid_sigma();
  double worst_ibp = 0.0;
  double worst_jump = 0.0;
  std::size_t kw_pairs = 0, kw_violations = 0, jumps_seen = 0;

  for (std::size_t p = 0; p < 1000; ++p) {
    std::shared_ptr<const PathSkeleton> driver;
    if (p % 2 == 0) {
      driver = std::make_shared<const PathSkeleton>(
          cp_driver(g, 0.3, 101, p));
    } else {
      driver = std::make_shared<const PathSkeleton>(sample_brownian(
          g, scalar_matrix(1.0), scalar(0.0), {102, std::uint32_t(p)}));
    }
    const SolutionPath sol = solve_sde(driver, sigma, scalar(0.1));

    // Product rule, on the first 200 pairs.
    if (p < 200) {
      worst_ibp = std::max(worst_ibp, rel_residual(*driver, sol.path));
    }

    // Cauchy-Schwarz for realized covariation, all 1000 pairs.
    const PathSkeleton cxy = realized_covariation(*driver, sol.path);
    const PathSkeleton cxx = realized_covariation(*driver, *driver);
    const PathSkeleton cyy = realized_covariation(sol.path, sol.path);
    ++kw_pairs;
    for (std::size_t i = 0; i < cxy.size(); ++i) {
      const double bound = std::sqrt(cxx.values(0, long(i)) *
                                     cyy.values(0, long(i)));
      if (std::abs(cxy.values(0, long(i))) > bound * (1.0 + 1e-12)) {
        ++kw_violations;
        break;
      }
    }

    // Jump ledger consistency: post state is exactly pre + delta.
    for (const JumpRecord& j : sol.path.jumps) {
      ++jumps_seen;
      const Eigen::VectorXd post = j.pre_value + j.delta;
      const double gap =
          (sol.path.value_at(j.time_index) - post).cwiseAbs().maxCoeff();
      const double scale = std::max(
          {1.0, j.pre_value.cwiseAbs().maxCoeff(), post.cwiseAbs().maxCoeff()});
      worst_jump = std::max(worst_jump, gap / scale);
    }
  }

  std::cout << "       integration-by-parts residual (relative, 200 pairs): "
            << worst_ibp << "\n";
  std::cout << "       covariation bound violations: " << kw_violations
            << " of " << kw_pairs << " pairs\n";
  std::cout << "       worst jump residual over " << jumps_seen
            << " jumps: " << worst_jump << " (limit 1 ulp)\n";
  REQUIRE(worst_ibp <= 1e-10, "ibp " << worst_ibp);
  REQUIRE(kw_violations == 0, kw_violations << " violations");
  REQUIRE(jumps_seen > 1000, "too few jumps to be meaningful");
  REQUIRE(worst_jump <= DBL_EPSILON, "jump residual " << worst_jump);
}

void criterion_2_drift_limit(LimitEstimate& out) {
  const TimeGrid g = make_grid(1.0, 0.5, 20);
  auto sigma = sinusoid_sigma();
  SolveOptions opt;
  opt.substeps_per_interval = 4;
  const PathSource solutions = PathSource::generator(10000, [&](std::size_t p) {
    auto d = std::make_shared<const PathSkeleton>(cp_driver(g, 0.3, 201, p));
    return solve_sde(d, sigma, scalar(0.0), opt).path;
  });
  const RescaledEnsemble e =
      rescale(solutions, g, ScalingFunction::power(1.0), 1);
  out = estimate_limit(e, 202);
  std::cout << "       verdict " << to_string(out.verdict) << ", limit "
            << (out.limit.size() ? out.limit[0] : 0.0)
            << " (target 0.6 +- 0.012)\n";
  REQUIRE(out.verdict == Verdict::ConvergesTo, to_string(out.verdict));
  REQUIRE(out.limit.size() == 1, "dim");
  REQUIRE(std::abs(out.limit[0] - 0.6) <= 0.012, "limit " << out.limit[0]);
}

void criterion_3_recovery() {
  const TimeGrid g = make_grid(1.0, 0.5, 20);
  auto sigma = sinusoid_sigma();
  SolveOptions opt;
  opt.substeps_per_interval = 4;

  // Recovered drivers of the criterion-2 ensemble carry the drift limit.
  const PathSource recovered = PathSource::generator(10000, [&](std::size_t p) {
    auto d = std::make_shared<const PathSkeleton>(cp_driver(g, 0.3, 201, p));
    return recover_driver(solve_sde(d, sigma, scalar(0.0), opt));
  });
  const LimitEstimate est =
      estimate_limit(rescale(recovered, g, ScalingFunction::power(1.0), 1), 302);
  std::cout << "       recovered-driver verdict " << to_string(est.verdict)
            << ", limit " << (est.limit.size() ? est.limit[0] : 0.0)
            << " (target 0.3 +- 2%)\n";
  REQUIRE(est.verdict == Verdict::ConvergesTo, to_string(est.verdict));
  REQUIRE(std::abs(est.limit[0] - 0.3) <= 0.006, "limit " << est.limit[0]);

  // Pure-jump round trip reproduces the driver to 1e-10.
  double worst = 0.0;
  for (std::size_t p = 0; p < 100; ++p) {
    auto d = std::make_shared<const PathSkeleton>(cp_driver(g, 0.0, 303, p));
    const PathSkeleton rec = recover_driver(solve_sde(d, sigma, scalar(0.0)));
    worst = std::max(worst, (rec.values - d->values).cwiseAbs().maxCoeff());
  }
  std::cout << "       pure-jump round-trip deviation: " << worst << "\n";
  REQUIRE(worst <= 1e-10, "round trip " << worst);
}

void criterion_4_coupling_gap() {
  auto sigma = sinusoid_sigma();

  // Jump driver with drift, linear rescaling, t = 2^-4 down to 2^-20.
  const TimeGrid jump_grid = make_grid(std::pow(2.0, -4.0), 0.5, 16);
  const PathSource jump_drivers =
      PathSource::generator(1000, [&](std::size_t p) {
        return cp_driver(jump_grid, 0.3, 401, p);
      });
  const CouplingReport jr =
      coupling_gap(jump_drivers, sigma, scalar(0.0), jump_grid,
                   ScalingFunction::power(1.0), 1);
  const double jump_ratio =
      jr.frozen.medians.front() /
      std::max(jr.frozen.medians.back(), DBL_MIN);
  std::cout << "       jump-driver gap medians: " << jr.frozen.medians.back()
            << " at 2^-4 -> " << jr.frozen.medians.front()
            << " at 2^-20 (ratio " << jump_ratio << ")\n";
  REQUIRE(jr.frozen.medians.front() <= 0.1 * jr.frozen.medians.back(),
          "ratio " << jump_ratio);

  // Brownian driver under the iterated-logarithm scaling, 1e-4 -> 1e-10.
  // Refined below the reporting grid so the gap at the smallest time is a
  // real integration error, not a single frozen Euler step.
  const TimeGrid bm_grid = make_grid(1e-4, 0.5, 20);
  const PathSource bm_drivers = PathSource::generator(1000, [&](std::size_t p) {
    return sample_brownian(bm_grid, scalar_matrix(1.0), scalar(0.0),
                           {402, std::uint32_t(p)}, 8);
  });
  const CouplingReport br =
      coupling_gap(bm_drivers, sigma, scalar(0.0), bm_grid,
                   ScalingFunction::khintchine(), 1);
  const double bm_ratio =
      br.frozen.medians.front() / std::max(br.frozen.medians.back(), DBL_MIN);
  std::cout << "       Brownian gap medians: " << br.frozen.medians.back()
            << " at 1e-4 -> " << br.frozen.medians.front()
            << " near 1e-10 (ratio " << bm_ratio << ")\n";
  REQUIRE(br.frozen.medians.front() <= 0.1 * br.frozen.medians.back(),
          "ratio " << bm_ratio);
}

void criterion_5_qv_decay() {
  const TimeGrid g = make_grid(1e-3, 0.5, 20);  // spans 6.0 decades
  const LevyMeasure heavy = LevyMeasure::stable_density(1.2, 0.5, 0.5);
  TruncatedSamplerOptions opt;
  opt.eps = 1e-6;
  const PathSource src = PathSource::generator(1000, [&](std::size_t p) {
    return sample_truncated_levy(g, heavy, 0.0, opt, {501, std::uint32_t(p)});
  });
  const DecayCheck check = qv_decay_check(src, g, 0.7, 1);
  std::cout << "       rescaled variation medians: "
            << check.rescaled.medians.back() << " -> "
            << check.rescaled.medians.front() << " over "
            << g.span_decades() << " decades\n";
  REQUIRE(g.span_decades() >= 6.0, g.span_decades());
  REQUIRE(check.decays, "front " << check.rescaled.medians.front() << " back "
                                 << check.rescaled.medians.back());
}

void criterion_6_lil_bands() {
  const TimeGrid g = make_grid(0.02, 0.5, 35);  // down to 5.8e-13
  auto sigma = sinusoid_sigma();

  const PathSource drivers = PathSource::generator(1000, [&](std::size_t p) {
    return sample_brownian(g, scalar_matrix(1.0), scalar(0.0),
                           {601, std::uint32_t(p)}, 8);
  });
  const BandEstimate driver_band =
      limsup_estimate(rescale(drivers, g, ScalingFunction::khintchine(), 1));

  const PathSource solutions = PathSource::generator(1000, [&](std::size_t p) {
    auto d = std::make_shared<const PathSkeleton>(sample_brownian(
        g, scalar_matrix(1.0), scalar(0.0), {601, std::uint32_t(p)}, 8));
    return solve_sde(d, sigma, scalar(0.0)).path;
  });
  const BandEstimate sol_band =
      limsup_estimate(rescale(solutions, g, ScalingFunction::khintchine(), 1));

  const double ratio = sol_band.median / driver_band.median;
  std::cout << "       driver limsup median " << driver_band.median
            << " (band [0.7, 1.05]), solution/driver ratio " << ratio
            << " (band [1.8, 2.2])\n";
  REQUIRE(driver_band.median >= 0.7 && driver_band.median <= 1.05,
          driver_band.median);
  REQUIRE(ratio >= 1.8 && ratio <= 2.2, ratio);
}

void criterion_7_cluster_geometry() {
  const TimeGrid g = make_grid(0.25, 0.5, 10);
  Eigen::VectorXd coeffs(2);
  coeffs << 1.0, 2.0;
  auto sigma = std::make_shared<const SigmaMap>(SigmaMap::diagonal(coeffs));
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(2);

  const PathSource drivers = PathSource::generator(500, [&](std::size_t p) {
    return sample_brownian(g, eye, zero2, {701, std::uint32_t(p)});
  });
  const PathSource solutions = PathSource::generator(500, [&](std::size_t p) {
    auto d = std::make_shared<const PathSkeleton>(
        sample_brownian(g, eye, zero2, {701, std::uint32_t(p)}));
    return solve_sde(d, sigma, zero2).path;
  });

  const RescaledEnsemble cloud =
      rescale(solutions, g, ScalingFunction::power(0.5), 1);
  const ClusterSet cluster =
      cluster_set_estimate(cloud, g.smallest(), g.largest());
  const double axis_ratio = cluster.axes.major / cluster.axes.minor;
  const double pvalue = cluster_transfer_pvalue(
      drivers, sigma, zero2, g, ScalingFunction::power(0.5), g.smallest(),
      g.largest(), 1, 702);
  std::cout << "       ellipse axis ratio " << axis_ratio
            << " (band [1.7, 2.3]); transfer p-value " << pvalue
            << " (reject below 0.01)\n";
  REQUIRE(axis_ratio >= 1.7 && axis_ratio <= 2.3, axis_ratio);
  REQUIRE(pvalue >= 0.01, pvalue);
}

void criterion_8a_stable_transfer() {
  // Smallest grid time 1e-4; the driver is refined below it so the
  // solution actually integrates the coefficient along the path.
  const TimeGrid g = make_grid(1e-4 * 1024.0, 0.5, 10);
  const double alpha = 1.5;
  const PathSource drivers = PathSource::generator(5000, [&](std::size_t p) {
    return sample_stable(g, alpha, 1.0, 0.0, {801, std::uint32_t(p)}, 30);
  });
  const TransferCheck check = verify_distributional_transfer(
      drivers, sinusoid_sigma(), scalar(0.0), g,
      ScalingFunction::power(1.0 / alpha), alpha, 1.0, 0.05, 1);
  std::cout << "       KS distance of rescaled solution to the stable law: "
            << check.ks << " (limit 0.05)\n";
  REQUIRE(check.passes, "ks " << check.ks);
}

void criterion_8b_gaussian_surrogate() {
  const TimeGrid g = make_grid(1e-4 * 1024.0, 0.5, 10);
  const LevyMeasure nu = LevyMeasure::truncated_exponential();
  const PathSource drivers = PathSource::generator(5000, [&](std::size_t p) {
    return sample_truncated_levy(g, nu, 0.0, TruncatedSamplerOptions{},
                                 {802, std::uint32_t(p)});
  });
  const RescaledEnsemble e =
      rescale(drivers, g, ScalingFunction::power(0.5), 1);
  // Gaussian with the measure's full variance, as a diffusive surrogate.
  const double variance = nu.second_moment_below(1.0);
  const double ks = ks_distance_to_stable(e, 2.0, std::sqrt(variance / 2.0));
  std::cout << "       KS distance of L(1e-4)/sqrt(1e-4) to N(0, " << variance
            << "): " << ks << " (limit 0.07)\n";
  std::cout << "       note: this stays red by design.  The driver makes\n"
               "       about 1.3 jumps per unit time, so by t = 1e-4 almost\n"
               "       every path is still the deterministic compensator\n"
               "       line and the rescaled marginal is a point mass, not\n"
               "       a Gaussian.  No diffusive limit exists to converge\n"
               "       to; the threshold is kept to document the gap.\n";
  REQUIRE(ks <= 0.07, "ks " << ks);
}

void criterion_9_prediction_matrix() {
  const TimeGrid g = make_grid(1.0, 0.5, 20);
  const std::size_t n = 4000;
  const double alpha = 1.2;

  // Driver catalogue paired with its exact characteristics.
  struct Entry {
    std::string name;
    CharacteristicTriplet triplet;
    std::function<PathSkeleton(std::size_t)> make;
  };
  std::vector<Entry> entries;
  entries.push_back({"brownian",
                     CharacteristicTriplet::make(scalar_matrix(1.0),
                                                 std::nullopt, scalar(0.0)),
                     [&](std::size_t p) {
                       return sample_brownian(g, scalar_matrix(1.0),
                                              scalar(0.0),
                                              {901, std::uint32_t(p)});
                     }});
  entries.push_back(
      {"compound_poisson",
       CharacteristicTriplet::make(
           scalar_matrix(0.0),
           LevyMeasure::finite_activity(5.0, JumpLaw::uniform(-1.0, 1.0)),
           scalar(0.3)),
       [&](std::size_t p) { return cp_driver(g, 0.3, 902, p); }});
  const double tail_total =
      alpha / (std::tgamma(1.0 - alpha) * std::cos(1.5707963267948966 * alpha));
  entries.push_back(
      {"stable",
       CharacteristicTriplet::make(
           scalar_matrix(0.0),
           LevyMeasure::stable_density(alpha, tail_total / 2.0,
                                       tail_total / 2.0),
           scalar(0.0)),
       [&](std::size_t p) {
         return sample_stable(g, alpha, 1.0, 0.0, {903, std::uint32_t(p)});
       }});

  int agreements = 0;
  for (const Entry& entry : entries) {
    const PathSource src = PathSource::generator(n, entry.make);
    for (double p : {0.4, 1.0, 1.5}) {
      const ShortTimePrediction pred =
          predict_short_time(entry.triplet, ScalingFunction::power(p));
      const LimitEstimate est =
          estimate_limit(rescale(src, g, ScalingFunction::power(p), 1), 904);
      const bool ok = agrees_with_prediction(est, pred);
      agreements += ok ? 1 : 0;
      std::cout << "       " << entry.name << " x power(" << p << "): rule "
                << to_string(pred.behavior) << ", simulation "
                << to_string(est.verdict) << (ok ? "" : "  <-- MISMATCH")
                << "\n";
    }
  }
  REQUIRE(agreements == 9, agreements << " of 9");
}

void criterion_10_determinism() {
  const char* config = R"({
    "seed": 77,
    "paths": 400,
    "grid": {"t_max": 1.0, "theta": 0.5, "count": 14},
    "driver": {"kind": "compound_poisson", "rate": 5.0,
               "jumps": {"kind": "uniform", "a": -1.0, "b": 1.0},
               "drift": [0.3]},
    "sigma": {"kind": "sinusoid", "a": 2.0, "b": 1.0, "c": 0.0, "d": 0.0},
    "x0": [0.0],
    "scaling": {"kind": "power", "exponent": 1.0},
    "verifiers": [{"name": "estimate_limit", "target": "driver"},
                  {"name": "estimate_limit", "target": "solution"},
                  {"name": "coupling_gap"},
                  {"name": "qv_decay", "p": 1.0}],
    "dump_paths": true
  })";

  const fs::path base = fs::temp_directory_path();
  const fs::path dir_a = base / "levylab_acceptance_w1";
  const fs::path dir_b = base / "levylab_acceptance_w8";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  ExperimentConfig cfg = parse_experiment_config(config);
  std::ostringstream log;

  cfg.workers = 1;
  cfg.output_dir = dir_a;
  const int rc_a = run_experiment(cfg, log);
  cfg.workers = 8;
  cfg.output_dir = dir_b;
  const int rc_b = run_experiment(cfg, log);
  REQUIRE(rc_a == 0, "exit " << rc_a);
  REQUIRE(rc_b == 0, "exit " << rc_b);

  std::size_t files = 0, identical = 0;
  for (const auto& item : fs::directory_iterator(dir_a)) {
    ++files;
    const fs::path twin = dir_b / item.path().filename();
    std::ifstream fa(item.path(), std::ios::binary);
    std::ifstream fb(twin, std::ios::binary);
    std::ostringstream ba, bb;
    ba << fa.rdbuf();
    bb << fb.rdbuf();
    if (fb.good() && ba.str() == bb.str()) ++identical;
  }
  std::cout << "       " << identical << " of " << files
            << " report files byte-identical between 1 and 8 workers\n";
  REQUIRE(files >= 8, files);
  REQUIRE(identical == files, identical << " of " << files);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

}  // namespace

int main() {
  std::cout.setf(std::ios::fmtflags(0), std::ios::floatfield);
  std::cout.precision(6);

  criterion("criterion 1: pathwise product-rule and ledger identities", true,
            criterion_1_pathwise_identities);

  LimitEstimate c2;
  criterion("criterion 2: short-time drift limit through the coefficient",
            true, [&] { criterion_2_drift_limit(c2); });
  criterion("criterion 3: driver recovery preserves the limit", true,
            criterion_3_recovery);
  criterion("criterion 4: frozen-coefficient coupling gap vanishes", true,
            criterion_4_coupling_gap);
  criterion("criterion 5: rescaled quadratic variation of a heavy-tail driver decays",
            true, criterion_5_qv_decay);
  criterion("criterion 6: iterated-logarithm bands transfer through sigma(0)",
            true, criterion_6_lil_bands);
  criterion("criterion 7: planar cluster geometry and energy transfer", true,
            criterion_7_cluster_geometry);
  criterion("criterion 8a: stable marginal transfer at t = 1e-4", true,
            criterion_8a_stable_transfer);
  criterion("criterion 8b: diffusive surrogate of a finite-activity driver",
            false, criterion_8b_gaussian_surrogate);
  criterion("criterion 9: decision rules match simulation on the 3x3 matrix",
            true, criterion_9_prediction_matrix);
  criterion("criterion 10: reports are byte-identical across worker counts",
            true, criterion_10_determinism);

  int surprises = 0;
  for (const Outcome& o : g_outcomes) {
    if (o.passed != o.expected_pass) {
      ++surprises;
      std::cerr << "UNEXPECTED " << (o.passed ? "PASS" : "FAIL") << ": "
                << o.name << "\n";
    }
  }
  int passed = 0;
  for (const Outcome& o : g_outcomes) passed += o.passed ? 1 : 0;
  std::cout << passed << " of " << g_outcomes.size()
            << " criteria passed; expected pattern is all green except 8b\n";
  if (surprises == 0) {
    std::cout << "acceptance: OK (outcomes match the documented expectation)\n";
    return 0;
  }
  std::cout << "acceptance: " << surprises
            << " outcome(s) differ from the documented expectation\n";
  return 1;
}
