#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "levylab/grid.hpp"

namespace levylab {

/// One jump of a sampled path: where it happens, what it adds, and the left
/// limit immediately before it.  post value == pre_value + delta exactly
/// (the post value is computed from the other two, never rounded
/// separately).
struct JumpRecord {
  std::size_t time_index = 0;
  Eigen::VectorXd delta;
  Eigen::VectorXd pre_value;
};

/// Cadlag sample path on a finite refined grid.
///
/// `times` holds every stored time (outer evaluation times, refinement
/// points and jump times merged, strictly increasing, all positive).
/// `values.col(i)` is the state at times[i], after any jump at that time.
/// The left limit at a jump time is in the jump ledger.  Matrix-valued
/// paths are stored column-major vectorized with shape (shape_rows,
/// shape_cols); vector paths have shape_cols == 1.
///
/// `report` lists the indices of the outer evaluation grid inside `times`;
/// statistics are read at those indices only.
struct PathSkeleton {
  std::vector<double> times;
  Eigen::MatrixXd values;          // dim x times.size()
  Eigen::VectorXd origin;          // state at t = 0
  std::vector<JumpRecord> jumps;   // ascending by time_index
  std::vector<std::size_t> report;
  int shape_rows = 1;
  int shape_cols = 1;
  std::uint64_t seed_id = 0;

  /// True when the continuous part of the path between stored times is a
  /// straight line (deterministic drift, compound Poisson, truncated-series
  /// sampling without a Gaussian substitute).  Solvers may then subdivide
  /// stored increments exactly; distributional increments (Brownian,
  /// direct stable sampling) must not be subdivided.
  bool piecewise_linear = true;

  int dim() const { return int(values.rows()); }
  std::size_t size() const { return times.size(); }

  Eigen::VectorXd value_at(std::size_t idx) const { return values.col(long(idx)); }

  /// Left limit at times[idx]: the ledger pre value if a jump lands there,
  /// otherwise the stored value itself.
  Eigen::VectorXd pre_value_at(std::size_t idx) const;

  /// Ledger entry at the given time index, or nullptr.
  const JumpRecord* jump_at(std::size_t idx) const;

  /// Value as a shape_rows x shape_cols matrix.
  Eigen::MatrixXd matrix_at(std::size_t idx) const;

  /// Checks ledger ordering, index bounds, exact pre+delta == value and
  /// dimension consistency; throws std::logic_error on violation.
  void validate() const;

  /// Transposed matrix path (shape swapped, storage permuted accordingly).
  PathSkeleton transposed() const;
};

/// Outer grid times plus `refine - 1` equally spaced interior points per
/// interval (the first interval starts at 0).  Returns the merged times and
/// the indices of the outer times within them.
struct RefinedTimes {
  std::vector<double> times;
  std::vector<std::size_t> report;
};
RefinedTimes refined_times(const TimeGrid& grid, int refine);

/// Stacks independent scalar component paths into one (rows x cols)
/// matrix-valued path, component (i,k) at vector position i + k*rows.
/// Components must share the outer evaluation times; differing refined
/// grids are merged, which requires every component to be piecewise linear
/// between its stored points.
PathSkeleton assemble_matrix_driver(const std::vector<PathSkeleton>& components,
                                    int rows, int cols);

}  // namespace levylab
