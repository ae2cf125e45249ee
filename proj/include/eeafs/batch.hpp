#ifndef EEAFS_BATCH_HPP
#define EEAFS_BATCH_HPP

#include <span>
#include <vector>

#include "eeafs/scenario.hpp"
#include "eeafs/simulation.hpp"

namespace eeafs {

// Independent runs share nothing, so a batch parallelizes over runs. The
// serial version is the reference the parallel one is tested against.
std::vector<RunResult> run_batch_serial(std::span<const ScenarioConfig> configs,
                                        const RunOptions& options = {});

// num_threads <= 0 uses the OpenMP default.
std::vector<RunResult> run_batch_parallel(std::span<const ScenarioConfig> configs,
                                          const RunOptions& options = {}, int num_threads = 0);

struct SurfacePoint {
    double h1 = 0.0;
    double h2 = 0.0;
    double energy = 0.0;
};

// Grid is row-major in h1, both ends inclusive.
std::vector<SurfacePoint> energy_surface_serial(const SurfaceSpec& spec);
std::vector<SurfacePoint> energy_surface_parallel(const SurfaceSpec& spec, int num_threads = 0);

} // namespace eeafs

#endif
