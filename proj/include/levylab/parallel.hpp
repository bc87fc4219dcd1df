#pragma once

#include <cstddef>
#include <functional>

namespace levylab {

/// Runs fn(i) for every i in [0, n).  workers <= 1 executes the plain
/// serial loop, which is the reference implementation the parallel path is
/// benchmarked and tested against; larger counts split the range statically
/// across an OpenMP team.  Callers must write results into disjoint
/// per-index slots: the work assignment is deterministic but the execution
/// order is not.  The first exception thrown by any worker is rethrown
/// once the loop has drained.
void for_each_index(std::size_t n, int workers,
                    const std::function<void(std::size_t)>& fn);

}  // namespace levylab
