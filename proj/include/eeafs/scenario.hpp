#ifndef EEAFS_SCENARIO_HPP
#define EEAFS_SCENARIO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeafs/controller.hpp"
#include "eeafs/feedback_scheduler.hpp"
#include "eeafs/plant.hpp"

namespace eeafs {

struct Perturbation {
    double time = 0.0;
    double reference = 0.0; // new reference value from `time` on
};

using PerturbationSchedule = std::vector<Perturbation>;

// Replaces a loop's nominal period at `time` (Example 2 style operator change).
struct PeriodSwitch {
    double time = 0.0;
    double period = 0.0;
};

struct LoopConfig {
    std::string name;
    TransferFunction plant;
    PidGains gains;
    double c_nom = 0.002;
    double h0 = 0.010;
    double h_max = 0.040;
    double activation = 0.0;
    double initial_reference = 0.0;
    PerturbationSchedule perturbations;
    std::vector<PeriodSwitch> period_switches;
    std::optional<double> delta; // falls back to FsConfig::delta
};

struct ScenarioConfig {
    std::string name;
    std::vector<LoopConfig> loops;
    FsConfig fs; // fs.mode selects the scheme
    double duration = 8.0;
    double trace_stride = 1e-3;
    double plant_substep = kDefaultPlantSubstep;
    // Shortened periods take effect before the pending release when it fits.
    bool release_pull_in = true;
};

// Every violated invariant, empty when valid.
std::vector<std::string> check(const ScenarioConfig& cfg);

// Throws ConfigError listing every violation.
void validate(const ScenarioConfig& cfg);

// The four loops of the simulated system, all references at 0.
std::vector<LoopConfig> table1_loops();

// Unit square wave: reference toggles 1, 0, 1, ... at 0, interval, 2*interval, ...
PerturbationSchedule square_wave(double interval, double duration);

struct Overrides {
    std::optional<Scheme> scheme;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<double> t_fs;
    std::optional<double> duration;
    std::optional<double> trace_stride;
    std::optional<double> plant_substep;
    std::optional<bool> release_pull_in;
};

void apply(ScenarioConfig& cfg, const Overrides& o);

std::vector<std::string> preset_names();

ScenarioConfig section_5a(Scheme scheme, double beta = 40.0);
ScenarioConfig perturbation_interval_run(double interval, Scheme scheme, double duration = 12.0);
// case_two switches the period from 6 ms to 12 ms at t = 0.5 s.
ScenarioConfig example2(bool case_two);

// Single-run configuration for a preset name. For sweep presets this is the
// sweep's base run. Throws ConfigError for unknown names and for
// example1-surface, which has no dynamics.
ScenarioConfig preset(std::string_view name);

enum class SweepKind { schemes, beta, perturbation_interval, example2 };

struct SweepCase {
    std::string label;
    double parameter = 0.0; // beta or perturbation interval where applicable
    ScenarioConfig config;
};

struct Sweep {
    std::string name;
    SweepKind kind = SweepKind::schemes;
    std::vector<SweepCase> cases;
};

inline const std::vector<double> kBetaSweepValues{1, 10, 20, 40, 60, 80, kBetaInfinity};
inline const std::vector<double> kPerturbationIntervals{1, 2, 4, 6};

// section-5a: the three schemes. beta-sweep: opdvs then one EEAFS-1 run per
// beta. pi-sweep: (opdvs, EEAFS-1) per interval. example2: case I, case II.
Sweep make_sweep(std::string_view name, const Overrides& o = {});

// Example 1: two tasks, energy over a grid of periods.
struct SurfaceSpec {
    double c1 = 4.0;
    double c2 = 5.0;
    double h1_lo = 10.0;
    double h1_hi = 20.0;
    double h2_lo = 10.0;
    double h2_hi = 30.0;
    double step = 1.0;
};

} // namespace eeafs

#endif
