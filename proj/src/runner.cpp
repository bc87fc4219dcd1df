#include "levylab/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "levylab/errors.hpp"
#include "levylab/predict.hpp"
#include "levylab/report.hpp"
#include "levylab/samplers.hpp"
#include "levylab/solver.hpp"
#include "levylab/verifiers.hpp"

namespace levylab {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------
// Config reading.  Every complaint names the dotted field path and the
// line the field appears on (0 when it cannot be located, e.g. a field
// that is missing altogether).

int find_line(const std::string& text, const std::string& path) {
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  std::stringstream segments(path);
  std::string segment;
  while (std::getline(segments, segment, '.')) {
    const std::string key = segment.substr(0, segment.find('['));
    if (key.empty()) continue;
    const std::size_t hit = text.find('"' + key + '"', pos);
    if (hit == std::string::npos) break;
    found = hit;
    pos = hit + key.size();
  }
  if (found == std::string::npos) return 0;
  return 1 + int(std::count(text.begin(), text.begin() + long(found), '\n'));
}

[[noreturn]] void bad(const std::string& text, const std::string& path,
                      const std::string& what) {
  throw ConfigError(path + ": " + what, path, find_line(text, path));
}

const json& member(const std::string& text, const json& obj,
                   const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  const std::string leaf =
      dot == std::string::npos ? path : path.substr(dot + 1);
  const auto it = obj.find(leaf);
  if (it == obj.end()) bad(text, path, "required field is missing");
  return *it;
}

bool has(const json& obj, const std::string& leaf) {
  return obj.find(leaf) != obj.end();
}

void check_keys(const std::string& text, const json& obj,
                const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) {
      const std::string path =
          prefix.empty() ? item.key() : prefix + "." + item.key();
      bad(text, path, "unknown field");
    }
  }
}

double number_at(const std::string& text, const json& obj,
                 const std::string& path) {
  const json& v = member(text, obj, path);
  if (!v.is_number()) bad(text, path, "must be a number");
  return v.get<double>();
}

double number_or(const std::string& text, const json& obj,
                 const std::string& path, double fallback) {
  const std::size_t dot = path.find_last_of('.');
  const std::string leaf =
      dot == std::string::npos ? path : path.substr(dot + 1);
  if (!has(obj, leaf)) return fallback;
  return number_at(text, obj, path);
}

int int_or(const std::string& text, const json& obj, const std::string& path,
           int fallback) {
  const std::size_t dot = path.find_last_of('.');
  const std::string leaf =
      dot == std::string::npos ? path : path.substr(dot + 1);
  if (!has(obj, leaf)) return fallback;
  const json& v = member(text, obj, path);
  if (!v.is_number_integer()) bad(text, path, "must be an integer");
  return v.get<int>();
}

bool bool_or(const std::string& text, const json& obj, const std::string& path,
             bool fallback) {
  const std::size_t dot = path.find_last_of('.');
  const std::string leaf =
      dot == std::string::npos ? path : path.substr(dot + 1);
  if (!has(obj, leaf)) return fallback;
  const json& v = member(text, obj, path);
  if (!v.is_boolean()) bad(text, path, "must be true or false");
  return v.get<bool>();
}

std::string string_at(const std::string& text, const json& obj,
                      const std::string& path) {
  const json& v = member(text, obj, path);
  if (!v.is_string()) bad(text, path, "must be a string");
  return v.get<std::string>();
}

const json& object_at(const std::string& text, const json& obj,
                      const std::string& path) {
  const json& v = member(text, obj, path);
  if (!v.is_object()) bad(text, path, "must be an object");
  return v;
}

Eigen::VectorXd vector_at(const std::string& text, const json& obj,
                          const std::string& path) {
  const json& v = member(text, obj, path);
  if (!v.is_array() || v.empty()) bad(text, path, "must be a nonempty array");
  Eigen::VectorXd out(long(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) bad(text, path, "entries must be numbers");
    out[long(i)] = v[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd matrix_at(const std::string& text, const json& obj,
                          const std::string& path) {
  const json& v = member(text, obj, path);
  if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty()) {
    bad(text, path, "must be a nonempty array of rows");
  }
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd out(long(v.size()), long(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols) {
      bad(text, path, "rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number()) bad(text, path, "entries must be numbers");
      out(long(r), long(c)) = v[r][c].get<double>();
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Driver catalog: each entry yields a per-path sampler plus the triplet
// driving the oracle predictions.

JumpLaw parse_jump_law(const std::string& text, const json& spec) {
  const std::string kind = string_at(text, spec, "driver.jumps.kind");
  if (kind == "uniform") {
    check_keys(text, spec, "driver.jumps", {"kind", "a", "b"});
    return JumpLaw::uniform(number_at(text, spec, "driver.jumps.a"),
                            number_at(text, spec, "driver.jumps.b"));
  }
  if (kind == "point_mass") {
    check_keys(text, spec, "driver.jumps", {"kind", "value"});
    return JumpLaw::point_mass(vector_at(text, spec, "driver.jumps.value"));
  }
  if (kind == "discrete") {
    check_keys(text, spec, "driver.jumps", {"kind", "atoms", "probabilities"});
    const json& atoms = member(text, spec, "driver.jumps.atoms");
    if (!atoms.is_array() || atoms.empty()) {
      bad(text, "driver.jumps.atoms", "must be a nonempty array of vectors");
    }
    std::vector<Eigen::VectorXd> points;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      json holder;
      holder["atoms"] = atoms[i];
      points.push_back(vector_at(text, holder, "driver.jumps.atoms"));
    }
    const json& probs = member(text, spec, "driver.jumps.probabilities");
    if (!probs.is_array() || probs.size() != atoms.size()) {
      bad(text, "driver.jumps.probabilities",
          "must list one probability per atom");
    }
    std::vector<double> weights;
    for (const json& p : probs) {
      if (!p.is_number()) {
        bad(text, "driver.jumps.probabilities", "entries must be numbers");
      }
      weights.push_back(p.get<double>());
    }
    return JumpLaw::discrete(std::move(points), std::move(weights));
  }
  bad(text, "driver.jumps.kind",
      "unknown jump law '" + kind + "' (uniform, point_mass, discrete)");
}

struct DriverParse {
  std::string kind;
  std::function<PathSkeleton(std::size_t)> make;
  CharacteristicTriplet triplet;
};

DriverParse parse_driver(const std::string& text, const json& spec,
                         const TimeGrid& grid, std::uint64_t seed) {
  DriverParse out;
  out.kind = string_at(text, spec, "driver.kind");
  try {
    if (out.kind == "brownian") {
      check_keys(text, spec, "driver", {"kind", "covariance", "drift", "refine"});
      const Eigen::MatrixXd cov = matrix_at(text, spec, "driver.covariance");
      Eigen::VectorXd drift = Eigen::VectorXd::Zero(cov.rows());
      if (has(spec, "drift")) drift = vector_at(text, spec, "driver.drift");
      const int refine = int_or(text, spec, "driver.refine", 1);
      out.triplet = CharacteristicTriplet::make(cov, std::nullopt, drift);
      out.make = [grid, cov, drift, refine, seed](std::size_t i) {
        return sample_brownian(grid, cov, drift,
                               StreamKey{seed, std::uint32_t(i)}, refine);
      };
      return out;
    }
    if (out.kind == "compound_poisson") {
      check_keys(text, spec, "driver", {"kind", "rate", "jumps", "drift"});
      const double rate = number_at(text, spec, "driver.rate");
      if (!(rate > 0.0)) bad(text, "driver.rate", "must be positive");
      const JumpLaw law =
          parse_jump_law(text, object_at(text, spec, "driver.jumps"));
      Eigen::VectorXd drift = Eigen::VectorXd::Zero(law.dim());
      if (has(spec, "drift")) drift = vector_at(text, spec, "driver.drift");
      LevyMeasure measure = LevyMeasure::finite_activity(rate, law);
      const Eigen::VectorXd location = drift + measure.mean_unit_ball();
      out.triplet = CharacteristicTriplet::make(
          Eigen::MatrixXd::Zero(law.dim(), law.dim()), std::move(measure),
          location);
      out.make = [grid, rate, law, drift, seed](std::size_t i) {
        return sample_compound_poisson(grid, rate, law, drift,
                                       StreamKey{seed, std::uint32_t(i)});
      };
      return out;
    }
    if (out.kind == "stable") {
      check_keys(text, spec, "driver", {"kind", "alpha", "beta", "scale", "refine"});
      const double alpha = number_at(text, spec, "driver.alpha");
      const double beta = number_or(text, spec, "driver.beta", 0.0);
      const double scale = number_or(text, spec, "driver.scale", 1.0);
      const int refine = int_or(text, spec, "driver.refine", 1);
      if (!(alpha > 0.0 && alpha <= 2.0)) {
        bad(text, "driver.alpha", "must lie in (0, 2]");
      }
      if (!(std::abs(beta) <= 1.0)) {
        bad(text, "driver.beta", "must lie in [-1, 1]");
      }
      if ((alpha == 1.0 || alpha == 2.0) && beta != 0.0) {
        bad(text, "driver.beta", "must be 0 when alpha is 1 or 2");
      }
      if (!(scale > 0.0)) bad(text, "driver.scale", "must be positive");
      if (alpha == 2.0) {
        Eigen::MatrixXd cov(1, 1);
        cov(0, 0) = 2.0 * scale * scale;
        out.triplet = CharacteristicTriplet::make(cov, std::nullopt,
                                                  Eigen::VectorXd::Zero(1));
      } else {
        const double total =
            alpha == 1.0
                ? 2.0 * scale / kPi
                : alpha * std::pow(scale, alpha) /
                      (std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0));
        const double cp = total * (1.0 + beta) / 2.0;
        const double cm = total * (1.0 - beta) / 2.0;
        Eigen::VectorXd location = Eigen::VectorXd::Zero(1);
        if (alpha < 1.0) location[0] = (cp - cm) / (1.0 - alpha);
        if (alpha > 1.0) location[0] = (cp - cm) / (alpha - 1.0);
        out.triplet = CharacteristicTriplet::make(
            Eigen::MatrixXd::Zero(1, 1),
            LevyMeasure::stable_density(alpha, cp, cm), location);
      }
      out.make = [grid, alpha, scale, beta, refine, seed](std::size_t i) {
        return sample_stable(grid, alpha, scale, beta,
                             StreamKey{seed, std::uint32_t(i)}, refine);
      };
      return out;
    }
    if (out.kind == "truncated_exponential") {
      check_keys(text, spec, "driver",
                 {"kind", "epsilon", "gaussian_substitute", "location", "refine"});
      TruncatedSamplerOptions opt;
      opt.eps = number_or(text, spec, "driver.epsilon", opt.eps);
      if (!(opt.eps > 0.0 && opt.eps <= 1.0)) {
        bad(text, "driver.epsilon", "must lie in (0, 1]");
      }
      opt.gaussian_substitute =
          bool_or(text, spec, "driver.gaussian_substitute", false);
      opt.refine = int_or(text, spec, "driver.refine", 1);
      const double location = number_or(text, spec, "driver.location", 0.0);
      LevyMeasure measure = LevyMeasure::truncated_exponential();
      out.triplet = CharacteristicTriplet::make(
          Eigen::MatrixXd::Zero(1, 1), measure,
          Eigen::VectorXd::Constant(1, location));
      out.make = [grid, measure, location, opt, seed](std::size_t i) {
        return sample_truncated_levy(grid, measure, location, opt,
                                     StreamKey{seed, std::uint32_t(i)});
      };
      return out;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad(text, "driver", e.what());
  }
  bad(text, "driver.kind",
      "unknown driver '" + out.kind +
          "' (brownian, compound_poisson, stable, truncated_exponential)");
}

std::shared_ptr<const SigmaMap> parse_sigma(const std::string& text,
                                            const json& spec) {
  const std::string kind = string_at(text, spec, "sigma.kind");
  try {
    if (kind == "constant") {
      check_keys(text, spec, "sigma", {"kind", "value"});
      return std::make_shared<SigmaMap>(
          SigmaMap::constant(matrix_at(text, spec, "sigma.value")));
    }
    if (kind == "diagonal") {
      check_keys(text, spec, "sigma", {"kind", "coefficients"});
      return std::make_shared<SigmaMap>(
          SigmaMap::diagonal(vector_at(text, spec, "sigma.coefficients")));
    }
    if (kind == "affine") {
      check_keys(text, spec, "sigma", {"kind", "intercept", "slopes"});
      const Eigen::MatrixXd intercept =
          matrix_at(text, spec, "sigma.intercept");
      const json& slopes = member(text, spec, "sigma.slopes");
      if (!slopes.is_array() || slopes.empty()) {
        bad(text, "sigma.slopes", "must be a nonempty array of matrices");
      }
      std::vector<Eigen::MatrixXd> parsed;
      for (const json& s : slopes) {
        json holder;
        holder["slopes"] = s;
        parsed.push_back(matrix_at(text, holder, "sigma.slopes"));
      }
      return std::make_shared<SigmaMap>(
          SigmaMap::affine(intercept, std::move(parsed)));
    }
    if (kind == "sinusoid") {
      check_keys(text, spec, "sigma", {"kind", "a", "b", "c", "d"});
      return std::make_shared<SigmaMap>(SigmaMap::scalar_sinusoid(
          number_or(text, spec, "sigma.a", 0.0),
          number_or(text, spec, "sigma.b", 0.0),
          number_or(text, spec, "sigma.c", 0.0),
          number_or(text, spec, "sigma.d", 0.0)));
    }
    if (kind == "bilinear") {
      check_keys(text, spec, "sigma", {"kind", "rows", "cols"});
      const int rows = int_or(text, spec, "sigma.rows", 0);
      const int cols = int_or(text, spec, "sigma.cols", 0);
      if (rows < 1 || cols < 1) {
        bad(text, "sigma.rows", "rows and cols must be positive");
      }
      return std::make_shared<SigmaMap>(SigmaMap::left_product(rows, cols));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad(text, "sigma", e.what());
  }
  bad(text, "sigma.kind",
      "unknown coefficient '" + kind +
          "' (affine, bilinear, constant, diagonal, sinusoid)");
}

ScalingFunction parse_scaling(const std::string& text, const json& spec,
                              const TimeGrid& grid) {
  const std::string kind = string_at(text, spec, "scaling.kind");
  if (kind == "power") {
    check_keys(text, spec, "scaling", {"kind", "exponent"});
    const double p = number_at(text, spec, "scaling.exponent");
    if (!(p > 0.0)) bad(text, "scaling.exponent", "must be positive");
    return ScalingFunction::power(p);
  }
  if (kind == "khintchine") {
    check_keys(text, spec, "scaling", {"kind"});
    ScalingFunction f = ScalingFunction::khintchine();
    if (grid.largest() >= f.domain_limit()) {
      bad(text, "grid.t_max",
          "must be below 1/e for the iterated-logarithm scaling");
    }
    return f;
  }
  bad(text, "scaling.kind",
      "unknown scaling '" + kind + "' (khintchine, power)");
}

std::vector<VerifierSpec> parse_verifiers(const std::string& text,
                                          const json& root, int driver_dim,
                                          int state_dim) {
  const json& list = member(text, root, "verifiers");
  if (!list.is_array()) bad(text, "verifiers", "must be an array");
  std::vector<VerifierSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string prefix = "verifiers[" + std::to_string(i) + "]";
    const json& v = list[i];
    if (!v.is_object()) bad(text, prefix, "must be an object");
    check_keys(text, v, prefix, {"name", "target", "p", "band"});
    VerifierSpec spec;
    spec.name = string_at(text, v, prefix + ".name");
    if (has(v, "target")) {
      spec.target = string_at(text, v, prefix + ".target");
      if (spec.target != "driver" && spec.target != "solution") {
        bad(text, prefix + ".target", "must be 'driver' or 'solution'");
      }
    }
    if (spec.name == "qv_decay") {
      spec.p = number_at(text, v, prefix + ".p");
      if (!(spec.p > 0.0)) bad(text, prefix + ".p", "must be positive");
      const int dim = spec.target == "driver" ? driver_dim : state_dim;
      if (dim != 1) {
        bad(text, prefix + ".name",
            "qv_decay needs a scalar target (dimension 1)");
      }
    } else if (spec.name == "limsup") {
      if (has(v, "band")) {
        const Eigen::VectorXd band = vector_at(text, v, prefix + ".band");
        if (band.size() != 2 || !(band[0] < band[1])) {
          bad(text, prefix + ".band", "must be [lo, hi] with lo < hi");
        }
        spec.band_lo = band[0];
        spec.band_hi = band[1];
      }
    } else if (spec.name != "estimate_limit" && spec.name != "coupling_gap") {
      bad(text, prefix + ".name",
          "unknown verifier '" + spec.name +
              "' (coupling_gap, estimate_limit, limsup, qv_decay)");
    }
    out.push_back(std::move(spec));
  }
  return out;
}

// ---------------------------------------------------------------------

json slope_json(const SlopeInterval& s) {
  return json{{"hi", s.hi}, {"lo", s.lo}, {"slope", s.slope}};
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

/// The oracle for a solution ensemble: same behaviour class as the driver,
/// with a finite limit pushed through the frozen coefficient.
ShortTimePrediction transfer_to_solution(const ShortTimePrediction& driver,
                                         const SigmaMap& sigma,
                                         const Eigen::VectorXd& x0) {
  ShortTimePrediction out = driver;
  if (out.limit) out.limit = sigma(x0) * (*out.limit);
  return out;
}

bool expected_qv_decay(const CharacteristicTriplet& triplet, double p) {
  if (triplet.has_gaussian_part()) return p < 0.5;
  if (!triplet.jumps) return true;  // pure drift: zero quadratic variation
  return triplet.jumps->abs_moment_unit(1.0 / p).finite;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min(std::size_t(e.byte), text.size());
    const int line =
        1 + int(std::count(text.begin(), text.begin() + long(byte), '\n'));
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(),
                      "(syntax)", line);
  }
  if (!root.is_object()) {
    throw ConfigError("config must be a JSON object", "(root)", 1);
  }
  check_keys(text, root, "",
             {"seed", "paths", "output_dir", "grid", "driver", "sigma", "x0",
              "scaling", "verifiers", "dump_paths"});

  ExperimentConfig cfg;

  {
    const json& seed = member(text, root, "seed");
    if (!seed.is_number_unsigned()) {
      bad(text, "seed", "must be a nonnegative integer (no wall-clock seeds)");
    }
    cfg.seed = seed.get<std::uint64_t>();
  }
  {
    const json& paths = member(text, root, "paths");
    if (!paths.is_number_unsigned()) {
      bad(text, "paths", "must be a nonnegative integer");
    }
    cfg.paths = paths.get<std::size_t>();
    if (cfg.paths < 2) bad(text, "paths", "need at least 2 paths");
    if (cfg.paths > 0xFFFFFFFFull) bad(text, "paths", "too many paths");
  }
  if (has(root, "output_dir")) {
    cfg.output_dir = string_at(text, root, "output_dir");
  }
  cfg.dump_paths = bool_or(text, root, "dump_paths", false);

  {
    const json& grid = object_at(text, root, "grid");
    check_keys(text, grid, "grid", {"t_max", "theta", "count"});
    try {
      cfg.grid = make_grid(number_at(text, grid, "grid.t_max"),
                           number_at(text, grid, "grid.theta"),
                           int_or(text, grid, "grid.count", 0));
    } catch (const std::exception& e) {
      bad(text, "grid", e.what());
    }
  }

  DriverParse driver =
      parse_driver(text, object_at(text, root, "driver"), cfg.grid, cfg.seed);
  cfg.driver_kind = driver.kind;
  cfg.make_driver = std::move(driver.make);
  cfg.triplet = std::move(driver.triplet);

  cfg.sigma = parse_sigma(text, object_at(text, root, "sigma"));
  cfg.initial_state = vector_at(text, root, "x0");
  if (cfg.initial_state.size() != cfg.sigma->state_dim()) {
    bad(text, "x0", "length must match the coefficient's state dimension (" +
                        std::to_string(cfg.sigma->state_dim()) + ")");
  }
  if (cfg.triplet.dim != cfg.sigma->driver_dim()) {
    bad(text, "sigma.kind",
        "coefficient expects a driver of dimension " +
            std::to_string(cfg.sigma->driver_dim()) + ", got " +
            std::to_string(cfg.triplet.dim));
  }

  cfg.scaling = parse_scaling(text, object_at(text, root, "scaling"), cfg.grid);
  cfg.verifiers = parse_verifiers(text, root, cfg.triplet.dim,
                                  cfg.sigma->state_dim());
  return cfg;
}

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
  std::filesystem::path out_dir = config.output_dir;
  if (const char* env = std::getenv("LEVYLAB_OUTPUT_DIR"); env && *env) {
    out_dir = env;
  }
  if (out_dir.empty()) {
    throw ConfigError("no output directory configured and LEVYLAB_OUTPUT_DIR "
                      "is not set",
                      "output_dir", 0);
  }
  std::filesystem::create_directories(out_dir);

  const PathSource drivers =
      PathSource::generator(config.paths, config.make_driver);
  const PathSource solutions = PathSource::generator(
      config.paths,
      [make = config.make_driver, sigma = config.sigma,
       x0 = config.initial_state](std::size_t i) {
        auto driver = std::make_shared<PathSkeleton>(make(i));
        return solve_sde(std::move(driver), sigma, x0).path;
      });

  const bool needs_driver_scaled = std::any_of(
      config.verifiers.begin(), config.verifiers.end(), [](const VerifierSpec& v) {
        return (v.name == "estimate_limit" || v.name == "limsup") &&
               v.target == "driver";
      });
  const bool needs_solution_scaled = std::any_of(
      config.verifiers.begin(), config.verifiers.end(), [](const VerifierSpec& v) {
        return (v.name == "estimate_limit" || v.name == "limsup") &&
               v.target == "solution";
      });
  const bool needs_prediction =
      std::any_of(config.verifiers.begin(), config.verifiers.end(),
                  [](const VerifierSpec& v) { return v.name == "estimate_limit"; });

  RescaledEnsemble driver_scaled, solution_scaled;
  if (needs_driver_scaled) {
    driver_scaled =
        rescale(drivers, config.grid, config.scaling, config.workers);
  }
  if (needs_solution_scaled) {
    solution_scaled = rescale(solutions, config.grid, config.scaling,
                              config.workers, config.initial_state);
  }
  ShortTimePrediction driver_prediction;
  if (needs_prediction) {
    driver_prediction = predict_short_time(config.triplet, config.scaling);
  }

  std::vector<VerdictRow> rows;
  json entries = json::array();
  bool all_agree = true;

  for (std::size_t i = 0; i < config.verifiers.size(); ++i) {
    const VerifierSpec& spec = config.verifiers[i];
    const bool on_driver = spec.target == "driver";
    VerdictRow row;
    row.verifier = spec.name + (on_driver ? "" : "_solution");
    json entry;
    entry["name"] = spec.name;
    entry["target"] = spec.target;

    std::vector<double> csv_times = config.grid.times;
    TimeSummary csv_summary;

    if (spec.name == "estimate_limit") {
      const RescaledEnsemble& ensemble =
          on_driver ? driver_scaled : solution_scaled;
      const ShortTimePrediction oracle =
          on_driver ? driver_prediction
                    : transfer_to_solution(driver_prediction, *config.sigma,
                                           config.initial_state);
      const LimitEstimate est = estimate_limit(ensemble, config.seed);
      row.verdict = to_string(est.verdict);
      row.agrees = agrees_with_prediction(est, oracle);
      entry["limit"] = to_std(est.limit);
      entry["norm_slope"] = slope_json(est.norm_slope);
      entry["oracle"] = to_string(oracle.behavior);
      if (oracle.limit) entry["oracle_limit"] = to_std(*oracle.limit);
      csv_summary = summarize_rows(ensemble.norms);
    } else if (spec.name == "qv_decay") {
      const DecayCheck check = qv_decay_check(
          on_driver ? drivers : solutions, config.grid, spec.p, config.workers);
      const bool expected = expected_qv_decay(config.triplet, spec.p);
      row.verdict = check.decays ? "decays" : "persists";
      row.agrees = check.decays == expected;
      entry["p"] = spec.p;
      entry["expected_decay"] = expected;
      entry["slope"] = check.slope.slope;
      csv_summary = check.rescaled;
    } else if (spec.name == "coupling_gap") {
      const CouplingReport report =
          coupling_gap(drivers, config.sigma, config.initial_state,
                       config.grid, config.scaling, config.workers);
      row.verdict = report.decays ? "decays" : "persists";
      row.agrees = report.decays;
      entry["gap_at_largest_time"] = report.frozen.medians.back();
      entry["gap_at_smallest_time"] = report.frozen.medians.front();
      csv_summary = report.frozen;
    } else {  // limsup
      const BandEstimate band =
          limsup_estimate(on_driver ? driver_scaled : solution_scaled);
      const bool in_band =
          band.median >= spec.band_lo && band.median <= spec.band_hi;
      row.verdict = in_band ? "in_band" : "out_of_band";
      row.agrees = in_band;
      entry["band"] = std::vector<double>{spec.band_lo, spec.band_hi};
      entry["lower_quartile"] = band.lower_quartile;
      entry["median"] = band.median;
      entry["upper_quartile"] = band.upper_quartile;
      const RescaledEnsemble& ensemble =
          on_driver ? driver_scaled : solution_scaled;
      csv_summary = summarize_rows(ensemble.norms);
    }

    row.pass = row.agrees;
    entry["agrees_with_oracle"] = row.agrees;
    entry["verdict"] = row.verdict;
    entries.push_back(entry);
    rows.push_back(row);
    if (!row.agrees) {
      all_agree = false;
      log << "verifier disagrees with oracle: " << row.verifier << "\n";
    }

    std::ostringstream name;
    name << "verifier_" << (i + 1 < 10 ? "0" : "") << (i + 1) << "_"
         << row.verifier << ".csv";
    write_summary_csv(out_dir / name.str(), csv_times, csv_summary,
                      config.paths);
  }

  write_verdicts_csv(out_dir / "verdicts.csv", rows);
  if (config.dump_paths) {
    write_paths_csv(out_dir / "driver_paths.csv", drivers);
    write_paths_csv(out_dir / "solution_paths.csv", solutions, "solution");
  }

  json report;
  report["schema_version"] = 1;
  report["all_pass"] = all_agree;
  report["config"] = {
      {"driver", config.driver_kind},
      {"grid",
       {{"count", config.grid.count},
        {"t_max", config.grid.t_max},
        {"theta", config.grid.theta}}},
      {"paths", config.paths},
      {"scaling",
       config.scaling.family() == ScalingFunction::Family::Power
           ? json{{"exponent", *config.scaling.index()}, {"kind", "power"}}
           : json{{"kind", "khintchine"}}},
      {"seed", config.seed},
      {"sigma", config.sigma->label()},
      {"x0", to_std(config.initial_state)},
  };
  report["verifiers"] = entries;
  std::ofstream out(out_dir / "report.json", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open report.json for writing");
  }
  out << report.dump(2) << '\n';

  return all_agree ? 0 : 1;
}

std::string list_catalog() {
  return
      "drivers:\n"
      "  brownian               covariance matrix, optional drift and refine\n"
      "  compound_poisson       rate, jumps {uniform|point_mass|discrete}, optional drift\n"
      "  stable                 alpha in (0,2], optional beta, scale, refine\n"
      "  truncated_exponential  optional epsilon, gaussian_substitute, location, refine\n"
      "coefficients:\n"
      "  affine                 intercept matrix plus one slope matrix per state component\n"
      "  bilinear               matrix state, increments X dL (stochastic exponentials)\n"
      "  constant               fixed matrix\n"
      "  diagonal               diag(coefficients), square\n"
      "  sinusoid               a + b sin x + c cos x + d x, scalar\n"
      "scalings:\n"
      "  khintchine             sqrt(2 t log log(1/t))\n"
      "  power                  t^exponent\n"
      "verifiers:\n"
      "  coupling_gap           rescaled gap to the frozen-coefficient approximation must vanish\n"
      "  estimate_limit         rescaled-ensemble verdict against the oracle prediction\n"
      "  limsup                 median per-path running maximum inside an acceptance band\n"
      "  qv_decay               rescaled quadratic variation must vanish iff the oracle says so\n";
}

}  // namespace levylab
