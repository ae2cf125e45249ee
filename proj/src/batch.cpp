#include "eeafs/batch.hpp"

#include "eeafs/errors.hpp"
#include "eeafs/metrics.hpp"

#include <cmath>
#include <exception>

#include <omp.h>

namespace eeafs {

namespace {

std::size_t grid_count(double lo, double hi, double step)
{
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

void check_surface(const SurfaceSpec& s)
{
    std::vector<std::string> errs;
    if (!(s.step > 0.0))
        errs.emplace_back("surface step must be > 0");
    if (!(s.h1_lo > 0.0 && s.h1_hi >= s.h1_lo))
        errs.emplace_back("surface h1 range must satisfy 0 < lo <= hi");
    if (!(s.h2_lo > 0.0 && s.h2_hi >= s.h2_lo))
        errs.emplace_back("surface h2 range must satisfy 0 < lo <= hi");
    if (!(s.c1 > 0.0 && s.c2 > 0.0))
        errs.emplace_back("surface execution times must be > 0");
    if (!errs.empty())
        throw ConfigError(std::move(errs));
}

SurfacePoint surface_point(const SurfaceSpec& s, std::size_t i, std::size_t j)
{
    const double h1 = s.h1_lo + static_cast<double>(i) * s.step;
    const double h2 = s.h2_lo + static_cast<double>(j) * s.step;
    const TaskLoad tasks[] = {{s.c1, h1}, {s.c2, h2}};
    return {h1, h2, energy_of_periods(tasks)};
}

} // namespace

std::vector<RunResult> run_batch_serial(std::span<const ScenarioConfig> configs, const RunOptions& options)
{
    std::vector<RunResult> out;
    out.reserve(configs.size());
    for (const auto& c : configs)
        out.push_back(run_scenario(c, options));
    return out;
}

std::vector<RunResult> run_batch_parallel(std::span<const ScenarioConfig> configs, const RunOptions& options,
                                          int num_threads)
{
    for (const auto& c : configs)
        validate(c);

    std::vector<RunResult> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
    const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = run_scenario(configs[static_cast<std::size_t>(i)], options);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }

    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

std::vector<SurfacePoint> energy_surface_serial(const SurfaceSpec& spec)
{
    check_surface(spec);
    const std::size_t n1 = grid_count(spec.h1_lo, spec.h1_hi, spec.step);
    const std::size_t n2 = grid_count(spec.h2_lo, spec.h2_hi, spec.step);
    std::vector<SurfacePoint> out;
    out.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            out.push_back(surface_point(spec, i, j));
    return out;
}

std::vector<SurfacePoint> energy_surface_parallel(const SurfaceSpec& spec, int num_threads)
{
    check_surface(spec);
    const std::size_t n1 = grid_count(spec.h1_lo, spec.h1_hi, spec.step);
    const std::size_t n2 = grid_count(spec.h2_lo, spec.h2_hi, spec.step);
    std::vector<SurfacePoint> out(n1 * n2);
    const auto total = static_cast<std::ptrdiff_t>(n1 * n2);
    const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();

    // Exceptions must not leave the parallel region.
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            out[idx] = surface_point(spec, idx / n2, idx % n2);
        } catch (...) {
#pragma omp critical(eeafs_surface_error)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace eeafs
