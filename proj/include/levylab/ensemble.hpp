#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "levylab/path.hpp"
#include "levylab/scaling.hpp"

namespace levylab {

/// A family of paths addressed by path id.  Generator sources build each
/// path on demand (nothing is retained between calls, so ensembles far
/// larger than memory are fine); materialized sources serve stored paths.
class PathSource {
public:
  static PathSource generator(std::size_t count,
                              std::function<PathSkeleton(std::size_t)> make);
  static PathSource materialized(std::vector<PathSkeleton> paths);

  std::size_t count() const { return count_; }
  PathSkeleton operator()(std::size_t path_id) const;

private:
  PathSource() = default;
  std::size_t count_ = 0;
  std::function<PathSkeleton(std::size_t)> make_;
};

/// Ensemble of rescaled states (X_t - center) / f(t) read at the outer
/// evaluation times.  values[k] holds one column per path at times[k];
/// norms(k, p) caches the Euclidean norm of that column.
struct RescaledEnsemble {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> values;
  Eigen::MatrixXd norms;
  Eigen::VectorXd center;
  int dim = 0;
  std::size_t paths = 0;
};

/// Evaluates the source on the grid and rescales.  Every generated path
/// must report exactly the grid times; results land in per-path slots, so
/// the output is identical for any worker count.
RescaledEnsemble rescale(const PathSource& source, const TimeGrid& grid,
                         const ScalingFunction& scaling, int workers,
                         const Eigen::VectorXd& center = Eigen::VectorXd());

}  // namespace levylab
