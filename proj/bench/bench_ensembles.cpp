// Times the ensemble kernels (path generation, SDE solving, rescaling)
// at several worker counts against the serial reference loop that runs
// when workers <= 1, and checks that the parallel schedule reproduces the
// serial results bit for bit.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/grid.hpp"
#include "levylab/samplers.hpp"
#include "levylab/sigma_map.hpp"
#include "levylab/solver.hpp"
#include "levylab/verifiers.hpp"

using namespace levylab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t paths = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
  const TimeGrid grid = make_grid(1.0, 0.5, 20);
  const JumpLaw law = JumpLaw::uniform(-1.0, 1.0);
  Eigen::VectorXd drift(1);
  drift << 0.3;

  const PathSource drivers =
      PathSource::generator(paths, [&](std::size_t i) {
        return sample_compound_poisson(grid, 5.0, law, drift,
                                       StreamKey{2024, std::uint32_t(i)});
      });
  const auto sigma =
      std::make_shared<SigmaMap>(SigmaMap::scalar_sinusoid(2.0, 1.0, 0.0, 0.0));
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  const PathSource solutions =
      PathSource::generator(paths, [&, sigma](std::size_t i) {
        auto driver = std::make_shared<PathSkeleton>(drivers(i));
        return solve_sde(std::move(driver), sigma, x0).path;
      });
  const ScalingFunction f = ScalingFunction::power(1.0);

  std::printf("%zu paths, %zu grid times\n\n", paths, grid.times.size());
  std::printf("%8s %14s %14s %10s %9s\n", "workers", "rescale [s]",
              "solve+gap [s]", "paths/s", "identical");

  RescaledEnsemble reference;
  CouplingReport reference_gap;
  for (const int workers : {1, 2, 4, 8}) {
    auto t0 = std::chrono::steady_clock::now();
    const RescaledEnsemble scaled = rescale(drivers, grid, f, workers);
    const double rescale_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const CouplingReport gap =
        coupling_gap(drivers, sigma, x0, grid, f, workers);
    const double solve_s = seconds_since(t0);

    bool identical = true;
    if (workers == 1) {
      reference = scaled;
      reference_gap = gap;
    } else {
      identical = (scaled.norms - reference.norms).cwiseAbs().maxCoeff() == 0.0;
      for (std::size_t k = 0; k < gap.frozen.medians.size(); ++k) {
        identical = identical &&
                    gap.frozen.medians[k] == reference_gap.frozen.medians[k];
      }
    }
    std::printf("%8d %14.3f %14.3f %10.0f %9s\n", workers, rescale_s, solve_s,
                double(paths) / (rescale_s + solve_s),
                workers == 1 ? "ref" : (identical ? "yes" : "NO"));
    if (!identical) return 1;
  }
  return 0;
}
