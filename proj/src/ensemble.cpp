#include "levylab/ensemble.hpp"

#include <stdexcept>

#include "levylab/errors.hpp"
#include "levylab/parallel.hpp"

namespace levylab {

PathSource PathSource::generator(
    std::size_t count, std::function<PathSkeleton(std::size_t)> make) {
  if (count == 0) throw std::invalid_argument("PathSource: empty source");
  if (!make) throw std::invalid_argument("PathSource: missing generator");
  PathSource s;
  s.count_ = count;
  s.make_ = std::move(make);
  return s;
}

PathSource PathSource::materialized(std::vector<PathSkeleton> paths) {
  if (paths.empty()) throw std::invalid_argument("PathSource: empty source");
  auto store = std::make_shared<std::vector<PathSkeleton>>(std::move(paths));
  PathSource s;
  s.count_ = store->size();
  s.make_ = [store](std::size_t id) { return (*store)[id]; };
  return s;
}

PathSkeleton PathSource::operator()(std::size_t path_id) const {
  if (path_id >= count_)
    throw std::out_of_range("PathSource: path id out of range");
  return make_(path_id);
}

RescaledEnsemble rescale(const PathSource& source, const TimeGrid& grid,
                         const ScalingFunction& scaling, int workers,
                         const Eigen::VectorXd& center) {
  const std::size_t n_times = grid.times.size();
  const std::size_t n_paths = source.count();

  // Scales depend only on the grid; evaluate once.
  std::vector<double> scale(n_times);
  for (std::size_t k = 0; k < n_times; ++k) scale[k] = scaling(grid.times[k]);

  // Probe one path for the dimension, then fill per-path slots.
  const PathSkeleton probe = source(0);
  const int dim = probe.dim();
  const Eigen::VectorXd shift =
      center.size() == 0 ? Eigen::VectorXd::Zero(dim).eval() : center;
  if (int(shift.size()) != dim)
    throw std::invalid_argument("rescale: center dimension mismatch");

  RescaledEnsemble out;
  out.times = grid.times;
  out.center = shift;
  out.dim = dim;
  out.paths = n_paths;
  out.values.assign(n_times, Eigen::MatrixXd(dim, long(n_paths)));
  out.norms.resize(long(n_times), long(n_paths));

  for_each_index(n_paths, workers, [&](std::size_t p) {
    const PathSkeleton path = source(p);
    if (path.dim() != dim)
      throw GridMismatchError("rescale: path dimension changed mid-source");
    if (path.report.size() != n_times)
      throw GridMismatchError(
          "rescale: path does not report the evaluation grid");
    for (std::size_t k = 0; k < n_times; ++k) {
      const std::size_t idx = path.report[k];
      if (path.times[idx] != grid.times[k])
        throw GridMismatchError(
            "rescale: path reports different times than the grid");
      const Eigen::VectorXd v =
          (path.value_at(idx) - shift) / scale[k];
      out.values[k].col(long(p)) = v;
      out.norms(long(k), long(p)) = v.norm();
    }
  });
  return out;
}

}  // namespace levylab
