#ifndef EEAFS_SIMULATION_HPP
#define EEAFS_SIMULATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eeafs/scenario.hpp"

namespace eeafs {

struct LoopSample {
    double h = 0.0;   // assigned period
    double y = 0.0;
    double r = 0.0;
    double e = 0.0;   // r - y
    double ind = 0.0;
    double j = 0.0;   // accumulated IAE

    bool operator==(const LoopSample&) const = default;
};

struct TraceRecord {
    double t = 0.0;
    std::vector<LoopSample> loops;
    double alpha = 0.0;
    double energy = 0.0; // alpha^2
    double j_sum = 0.0;
    std::size_t misses = 0;

    bool operator==(const TraceRecord&) const = default;
};

struct RunSummary {
    std::string name;
    Scheme scheme = Scheme::opdvs;
    double beta = 0.0;
    double duration = 0.0;
    double average_energy = 0.0;
    double min_energy = 0.0;
    double max_energy = 0.0;
    std::vector<double> loop_costs;
    double j_sum = 0.0;
    std::size_t deadline_misses = 0;
    std::size_t timer_invocations = 0;
    std::size_t event_invocations = 0;
    // Largest distance of alpha^2 outside [E_min, E_max] of the active loops,
    // checked at every processed instant.
    double max_bound_violation = 0.0;
    // |sum c_nom / (alpha * h) - 1| over the periods and speed the feedback
    // scheduler decided, for every decision with alpha above alpha_min.
    double max_fs_utilization_error = 0.0;
    // Same for the applied speed over the reserved periods, checked after
    // each invocation with alpha above alpha_min.
    double max_utilization_error = 0.0;
    // Largest amount by which the demand floor lifted alpha above
    // max(reserved workload, alpha_min).
    double max_demand_excess = 0.0;
    double wall_seconds = 0.0;
};

struct RunResult {
    RunSummary summary;
    std::vector<TraceRecord> trace;
};

struct RunOptions {
    bool keep_trace = true;
};

// Deterministic closed-loop co-simulation of one scenario.
// Throws ConfigError for invalid configurations.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

} // namespace eeafs

#endif
