#include "levylab/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace levylab {

namespace {

std::string describe(std::size_t idx, double t) {
  std::ostringstream os;
  os << "index " << idx << " (t=" << t << ")";
  return os.str();
}

}  // namespace

const JumpRecord* PathSkeleton::jump_at(std::size_t idx) const {
  auto it = std::lower_bound(
      jumps.begin(), jumps.end(), idx,
      [](const JumpRecord& j, std::size_t i) { return j.time_index < i; });
  if (it != jumps.end() && it->time_index == idx) return &*it;
  return nullptr;
}

Eigen::VectorXd PathSkeleton::pre_value_at(std::size_t idx) const {
  if (const JumpRecord* j = jump_at(idx)) return j->pre_value;
  return value_at(idx);
}

Eigen::MatrixXd PathSkeleton::matrix_at(std::size_t idx) const {
  return Eigen::Map<const Eigen::MatrixXd>(values.col(long(idx)).data(),
                                           shape_rows, shape_cols);
}

void PathSkeleton::validate() const {
  const int d = dim();
  if (shape_rows * shape_cols != d)
    throw std::logic_error("PathSkeleton: shape does not match value rows");
  if (origin.size() != d)
    throw std::logic_error("PathSkeleton: origin dimension mismatch");
  if (values.cols() != long(times.size()))
    throw std::logic_error("PathSkeleton: value count != time count");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0))
      throw std::logic_error("PathSkeleton: nonpositive time at " +
                             describe(i, times[i]));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::logic_error("PathSkeleton: times not strictly increasing at " +
                             describe(i, times[i]));
  }
  std::size_t prev_jump = 0;
  bool first = true;
  for (const JumpRecord& j : jumps) {
    if (!first && j.time_index <= prev_jump)
      throw std::logic_error("PathSkeleton: ledger not strictly ordered");
    first = false;
    prev_jump = j.time_index;
    if (j.time_index >= times.size())
      throw std::logic_error("PathSkeleton: ledger index out of range");
    if (j.delta.size() != d || j.pre_value.size() != d)
      throw std::logic_error("PathSkeleton: ledger dimension mismatch");
    const Eigen::VectorXd post = j.pre_value + j.delta;
    if ((post - value_at(j.time_index)).cwiseAbs().maxCoeff() != 0.0)
      throw std::logic_error(
          "PathSkeleton: pre + delta != value at " +
          describe(j.time_index, times[j.time_index]));
  }
  for (std::size_t r : report)
    if (r >= times.size())
      throw std::logic_error("PathSkeleton: report index out of range");
}

PathSkeleton PathSkeleton::transposed() const {
  PathSkeleton out = *this;
  out.shape_rows = shape_cols;
  out.shape_cols = shape_rows;
  const int d = dim();
  Eigen::VectorXi perm(d);
  for (int i = 0; i < shape_rows; ++i)
    for (int k = 0; k < shape_cols; ++k)
      perm(k + i * shape_cols) = i + k * shape_rows;
  out.values.resize(d, values.cols());
  out.origin.resize(d);
  for (int r = 0; r < d; ++r) {
    out.values.row(r) = values.row(perm(r));
    out.origin(r) = origin(perm(r));
  }
  out.jumps = jumps;
  for (JumpRecord& j : out.jumps) {
    Eigen::VectorXd delta(d), pre(d);
    for (int r = 0; r < d; ++r) {
      delta(r) = j.delta(perm(r));
      pre(r) = j.pre_value(perm(r));
    }
    j.delta = std::move(delta);
    j.pre_value = std::move(pre);
  }
  return out;
}

RefinedTimes refined_times(const TimeGrid& grid, int refine) {
  if (refine < 1)
    throw std::invalid_argument("refined_times: refine must be >= 1");
  RefinedTimes out;
  out.times.reserve(grid.times.size() * std::size_t(refine));
  double prev = 0.0;
  for (double t : grid.times) {
    for (int j = 1; j < refine; ++j)
      out.times.push_back(prev + (t - prev) * double(j) / double(refine));
    out.times.push_back(t);  // outer time kept exact
    out.report.push_back(out.times.size() - 1);
    prev = t;
  }
  return out;
}

namespace {

// Value of a scalar component path at an arbitrary time, interpolating the
// continuous (linear) piece between stored points and respecting the left
// limit at jump times.
double component_value(const PathSkeleton& p, double t) {
  const auto& ts = p.times;
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it != ts.end() && *it == t)
    return p.values(0, long(it - ts.begin()));
  const std::size_t hi = std::size_t(it - ts.begin());
  const double t_hi = hi < ts.size() ? ts[hi] : ts.back();
  if (hi >= ts.size())
    throw std::invalid_argument("assemble_matrix_driver: time beyond path end");
  const double pre_hi = p.pre_value_at(hi)(0);
  const double t_lo = hi == 0 ? 0.0 : ts[hi - 1];
  const double v_lo = hi == 0 ? p.origin(0) : p.values(0, long(hi - 1));
  return v_lo + (pre_hi - v_lo) * (t - t_lo) / (t_hi - t_lo);
}

}  // namespace

PathSkeleton assemble_matrix_driver(const std::vector<PathSkeleton>& components,
                                    int rows, int cols) {
  const int d = rows * cols;
  if (rows < 1 || cols < 1 || components.size() != std::size_t(d))
    throw std::invalid_argument(
        "assemble_matrix_driver: need rows*cols scalar components");
  for (const PathSkeleton& c : components)
    if (c.dim() != 1)
      throw std::invalid_argument(
          "assemble_matrix_driver: components must be scalar paths");

  // All components must report at the same outer times.
  const PathSkeleton& first = components.front();
  std::vector<double> outer;
  for (std::size_t r : first.report) outer.push_back(first.times[r]);
  for (const PathSkeleton& c : components) {
    if (c.report.size() != outer.size())
      throw std::invalid_argument(
          "assemble_matrix_driver: outer grids differ between components");
    for (std::size_t k = 0; k < outer.size(); ++k)
      if (c.times[c.report[k]] != outer[k])
        throw std::invalid_argument(
            "assemble_matrix_driver: outer grids differ between components");
  }

  bool same_times = true;
  for (const PathSkeleton& c : components)
    if (c.times != first.times) same_times = false;
  if (!same_times)
    for (const PathSkeleton& c : components)
      if (!c.piecewise_linear)
        throw std::invalid_argument(
            "assemble_matrix_driver: merging refined grids requires piecewise "
            "linear components");

  std::vector<double> merged;
  if (same_times) {
    merged = first.times;
  } else {
    std::set<double> u;
    for (const PathSkeleton& c : components)
      u.insert(c.times.begin(), c.times.end());
    merged.assign(u.begin(), u.end());
  }

  PathSkeleton out;
  out.times = merged;
  out.shape_rows = rows;
  out.shape_cols = cols;
  out.values.resize(d, long(merged.size()));
  out.origin.resize(d);
  out.seed_id = first.seed_id;
  out.piecewise_linear = true;
  for (int c = 0; c < d; ++c) {
    out.origin(c) = components[c].origin(0);
    if (!components[c].piecewise_linear) out.piecewise_linear = false;
  }

  for (std::size_t i = 0; i < merged.size(); ++i)
    for (int c = 0; c < d; ++c)
      out.values(c, long(i)) = same_times
                                   ? components[c].values(0, long(i))
                                   : component_value(components[c], merged[i]);

  // Report indices against the merged axis.
  for (double t : outer) {
    auto it = std::lower_bound(merged.begin(), merged.end(), t);
    out.report.push_back(std::size_t(it - merged.begin()));
  }

  // Lift component jumps; group by merged index in case of coincident times.
  std::map<std::size_t, std::vector<int>> jumps_by_index;
  for (int c = 0; c < d; ++c)
    for (const JumpRecord& j : components[c].jumps) {
      const double t = components[c].times[j.time_index];
      auto it = std::lower_bound(merged.begin(), merged.end(), t);
      jumps_by_index[std::size_t(it - merged.begin())].push_back(c);
    }
  for (const auto& [idx, comps] : jumps_by_index) {
    JumpRecord rec;
    rec.time_index = idx;
    rec.delta = Eigen::VectorXd::Zero(d);
    rec.pre_value = out.value_at(idx);
    for (int c : comps) {
      const double t = merged[idx];
      const PathSkeleton& comp = components[c];
      auto it = std::lower_bound(comp.times.begin(), comp.times.end(), t);
      const JumpRecord* src = comp.jump_at(std::size_t(it - comp.times.begin()));
      rec.delta(c) = src->delta(0);
      rec.pre_value(c) = src->pre_value(0);
    }
    out.jumps.push_back(std::move(rec));
  }
  return out;
}

}  // namespace levylab
