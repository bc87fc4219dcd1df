#include "levylab/predict.hpp"

#include "levylab/errors.hpp"

namespace levylab {

const char* to_string(ShortTimeBehavior b) {
  switch (b) {
    case ShortTimeBehavior::ZeroLimit:
      return "zero_limit";
    case ShortTimeBehavior::FiniteLimit:
      return "finite_limit";
    case ShortTimeBehavior::DivergesInNorm:
      return "diverges_in_norm";
    case ShortTimeBehavior::OscillatesLIL:
      return "oscillates_lil";
  }
  return "unknown";
}

namespace {

bool moment_finite(const CharacteristicTriplet& t, double r) {
  return !t.jumps || t.jumps->abs_moment_unit(r).finite;
}

bool is_zero(const Eigen::VectorXd& v, double ref) {
  return v.norm() <= 1e-12 * (1.0 + ref);
}

}  // namespace

ShortTimePrediction predict_short_time(const CharacteristicTriplet& triplet,
                                       const ScalingFunction& scaling) {
  if (!scaling.index())
    throw UnsupportedPredictionError(
        "predict_short_time: the scaling function carries no "
        "regular-variation index to decide with");
  const double p = *scaling.index();
  ShortTimePrediction out;

  if (p < 0.5) {
    out.behavior = ShortTimeBehavior::ZeroLimit;
    out.justification =
        "index below 1/2: every Levy process is o(f(t)) at small times";
    return out;
  }

  const bool gaussian = triplet.has_gaussian_part();

  if (p == 0.5) {
    if (gaussian) {
      out.behavior = ShortTimeBehavior::OscillatesLIL;
      out.justification =
          "critical index 1/2 with a Gaussian part: iterated-logarithm "
          "oscillation, no almost-sure limit";
      return out;
    }
    if (moment_finite(triplet, 1.0 / 0.51)) {
      out.behavior = ShortTimeBehavior::ZeroLimit;
      out.justification =
          "critical index 1/2, no Gaussian part, and the jump measure has a "
          "convergent 1/0.51 moment near 0, so the process is o(t^{0.51})";
      return out;
    }
    throw UnsupportedPredictionError(
        "predict_short_time: critical index 1/2 without a Gaussian part and "
        "with near-critical jump moments divergent; no decision rule covers "
        "this case");
  }

  // Index above 1/2 from here on.
  if (gaussian) {
    out.behavior = ShortTimeBehavior::DivergesInNorm;
    out.justification =
        "index above 1/2 with a Gaussian part: the diffusion term alone "
        "exceeds f(t)";
    return out;
  }
  if (!moment_finite(triplet, 1.0 / p)) {
    out.behavior = ShortTimeBehavior::DivergesInNorm;
    out.justification =
        "the 1/p moment of the jump measure diverges near 0: small-jump "
        "activity exceeds f(t)";
    return out;
  }
  if (p < 1.0) {
    out.behavior = ShortTimeBehavior::ZeroLimit;
    out.justification =
        "index in (1/2, 1) with a convergent 1/p jump moment: the process "
        "is o(f(t))";
    return out;
  }

  // A convergent 1/p moment with p >= 1 forces bounded variation, so the
  // drift of the bounded-variation decomposition exists.
  const TripletSummary summary = classify(triplet);
  const Eigen::VectorXd drift = *summary.true_drift;
  const double ref = triplet.location.norm();
  if (p == 1.0) {
    if (is_zero(drift, ref)) {
      out.behavior = ShortTimeBehavior::ZeroLimit;
      out.justification =
          "linear scaling of a bounded-variation process with zero drift";
    } else {
      out.behavior = ShortTimeBehavior::FiniteLimit;
      out.limit = drift;
      out.justification =
          "linear scaling of a bounded-variation process: X_t / t tends to "
          "the drift";
    }
    return out;
  }
  if (is_zero(drift, ref)) {
    out.behavior = ShortTimeBehavior::ZeroLimit;
    out.justification =
        "index above 1 with zero drift: the driftless bounded-variation "
        "process is o(f(t))";
  } else {
    out.behavior = ShortTimeBehavior::DivergesInNorm;
    out.justification =
        "index above 1 with nonzero drift: the drift term alone exceeds "
        "f(t)";
  }
  return out;
}

}  // namespace levylab
