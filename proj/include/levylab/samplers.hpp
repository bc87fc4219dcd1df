#pragma once

#include <cstdint>

#include "levylab/jump_law.hpp"
#include "levylab/measure.hpp"
#include "levylab/path.hpp"
#include "levylab/rng.hpp"

namespace levylab {

/// Address of one sampled path.  Component c of a multivariate path draws
/// from RngStream(seed, path_id, c), so regenerating a path never depends
/// on scheduling or on how many other paths exist.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t path_id = 0;
};

/// Unit-scale stable variate by the Chambers-Mallows-Stuck transform.
/// Convention: the characteristic function is
///   exp(-|z|^alpha (1 - i beta tan(pi alpha / 2) sgn z))      alpha != 1
/// with alpha in (0, 2] and |beta| <= 1; alpha == 1 and alpha == 2 require
/// beta == 0 (Cauchy and N(0, 2) respectively).
double sample_standard_stable(double alpha, double beta, RngStream& rng);

/// Brownian motion with covariance `cov` per unit time and deterministic
/// drift, on the outer grid plus `refine - 1` interior points per interval.
PathSkeleton sample_brownian(const TimeGrid& grid, const Eigen::MatrixXd& cov,
                             const Eigen::VectorXd& drift, StreamKey key,
                             int refine = 1);

/// Compound Poisson path with drift, X_t = drift t + (sum of jumps in
/// (0, t]).  Jump times are merged into the stored grid exactly and entered
/// in the ledger.
PathSkeleton sample_compound_poisson(const TimeGrid& grid, double rate,
                                     const JumpLaw& law,
                                     const Eigen::VectorXd& drift,
                                     StreamKey key);

/// Strictly stable path from exact increment laws: the increment over dt is
/// dt^{1/alpha} scale S(alpha, beta).  Individual jumps are not resolved,
/// so the ledger stays empty and the path must not be subdivided further.
PathSkeleton sample_stable(const TimeGrid& grid, double alpha, double scale,
                           double beta, StreamKey key, int refine = 1);

struct TruncatedSamplerOptions {
  /// Jumps of magnitude >= eps are sampled exactly; the rest is truncated.
  double eps = 1e-3;
  /// Replace the truncated small-jump part by a Brownian motion with the
  /// matching variance rate instead of dropping it.
  bool gaussian_substitute = false;
  int refine = 1;
};

/// Small-jump truncation sampler for a scalar measure with location
/// parameter `location` (jumps of size <= 1 compensated).  Jumps of
/// magnitude >= eps form a compound Poisson ledger, the drift absorbs the
/// compensator mass of [eps, 1], and the sub-eps remainder is dropped or
/// replaced per the options.
PathSkeleton sample_truncated_levy(const TimeGrid& grid,
                                   const LevyMeasure& measure, double location,
                                   const TruncatedSamplerOptions& opt,
                                   StreamKey key);

/// Deterministic straight line x(t) = slope t, as a driver with known
/// closed-form responses.
PathSkeleton deterministic_linear(const TimeGrid& grid,
                                  const Eigen::VectorXd& slope);

}  // namespace levylab
