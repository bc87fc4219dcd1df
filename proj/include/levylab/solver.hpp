#pragma once

#include <memory>
#include <vector>

#include "levylab/path.hpp"
#include "levylab/sigma_map.hpp"

namespace levylab {

struct SolveOptions {
  /// Euler substeps per stored driver interval; 0 picks
  /// ceil(dt / (1e-3 * t_max)) for piecewise-linear drivers and 1 otherwise.
  /// Drivers with distributional increments (Brownian, stable) are never
  /// subdivided: inventing interior points would bias the limit, so their
  /// accuracy is controlled at sampling time through `refine`.
  int substeps_per_interval = 0;
  /// Largest acceptable condition number when inverting sigma in
  /// recover_driver.
  double condition_limit = 1e12;
};

/// Solution of dX = sigma(X_) dL together with everything needed to check
/// it: the driver, the coefficient map and the starting state.
struct SolutionPath {
  PathSkeleton path;
  std::shared_ptr<const PathSkeleton> driver;
  std::shared_ptr<const SigmaMap> sigma;
  Eigen::VectorXd initial_state;
};

/// Jump-adapted Euler scheme.  Continuous driver increments are applied in
/// substeps (piecewise-linear drivers only); at each ledger jump the state
/// moves by exactly sigma(X_pre) * delta, so the solution ledger satisfies
/// post == pre + delta to the last bit.
SolutionPath solve_sde(std::shared_ptr<const PathSkeleton> driver,
                       std::shared_ptr<const SigmaMap> sigma,
                       const Eigen::VectorXd& initial_state,
                       const SolveOptions& opt = {});

/// Reconstructs the driver increments from a solution by inverting sigma
/// at the left limits: exact for pure-jump drivers, first order in the
/// mesh otherwise.  Throws ConditionError when sigma is too close to
/// singular at some step.
PathSkeleton recover_driver(const SolutionPath& solution,
                            double condition_limit = 1e12);

/// Which side of the driver differential the state sits on:
/// Left solves dZ = Z_{t-} dL, Right solves dY = dL Y_{t-}.
enum class ExponentialSide { Left, Right };

/// Multiplicative exponential of a square matrix driver, starting at the
/// identity.  Each ledger jump multiplies by (I + delta L) on the chosen
/// side; the factors' determinants decide invertibility.
struct StochasticExponential {
  SolutionPath solution;
  bool invertible = true;
  /// Smallest |det(I + delta L)| over ledger jumps (1 when there are none).
  double min_jump_determinant = 1.0;
};
StochasticExponential stochastic_exponential(
    std::shared_ptr<const PathSkeleton> driver,
    ExponentialSide side = ExponentialSide::Left, const SolveOptions& opt = {});

/// integral of Y_{s-} dX_s (matrix product) over the shared stored grid;
/// jump and continuous parts of every interval are kept separate, so the
/// discrete product rule below holds exactly.
PathSkeleton stochastic_integral_left(const PathSkeleton& y,
                                      const PathSkeleton& x);
/// integral of (dX_s) Y_{s-}.
PathSkeleton stochastic_integral_right(const PathSkeleton& y,
                                       const PathSkeleton& x);

/// Cumulative sum of dX dY (matrix product) over micro-steps: the realized
/// covariation, with jumps contributing their exact ledger deltas.
PathSkeleton realized_covariation(const PathSkeleton& x,
                                  const PathSkeleton& y);

/// Largest norm over stored times of
///   X Y - X_0 Y_0 - integral X_ dY - integral (dX) Y_ - [X, Y]
/// which telescopes to rounding error on any pair of compatible paths.
double integration_by_parts_residual(const PathSkeleton& x,
                                     const PathSkeleton& y);

struct JumpTaylorResidual {
  std::size_t time_index = 0;
  /// sigma(X_post) - sigma(X_pre) - (d sigma / dx)(X_pre) applied to the
  /// state jump.
  Eigen::MatrixXd residual;
  /// Frobenius norm of the residual over |Delta X|^2; for twice
  /// differentiable coefficients this is bounded by half the largest
  /// second derivative along the segment.
  double ratio = 0.0;
};

/// Second-order Taylor residual of the coefficient at every jump of a
/// solution; affine coefficients give exactly zero residuals, and a
/// jump-free path gives an empty ledger.
std::vector<JumpTaylorResidual> ito_jump_residual(const SolutionPath& solution);

}  // namespace levylab
