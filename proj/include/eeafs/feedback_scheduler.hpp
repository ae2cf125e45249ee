#ifndef EEAFS_FEEDBACK_SCHEDULER_HPP
#define EEAFS_FEEDBACK_SCHEDULER_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eeafs {

// opdvs keeps every period at h0 and only scales the speed.
enum class Scheme { opdvs, eeafs_exponential, eeafs_linear };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

inline constexpr double kBetaInfinity = std::numeric_limits<double>::infinity();

struct FsConfig {
    double t_fs = 0.050;
    double lambda = 0.3;
    double e_min = 0.02;
    double e_max = 0.2;
    double beta = 40.0; // kBetaInfinity selects the two-level limit
    double delta = 0.1;
    Scheme mode = Scheme::eeafs_exponential;
    double alpha_min = 0.05;
};

// Returns one message per violated invariant.
std::vector<std::string> check(const FsConfig& cfg);

struct LoopPerfState {
    double ind = 0.0;
    double e_at_last_fs = 0.0;
    double h_current = 0.0;
    double h0 = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    double delta = 0.1;
    bool observed = false; // false until the first invocation samples this loop
};

LoopPerfState make_loop_state(double h0, double h_max, double delta);

// ind' = lambda * ind + (1 - lambda) * e_abs
LoopPerfState update_ind(const LoopPerfState& state, double e_abs, double lambda);

// Period scaling factor in [1, r], r = h_max / h_min.
double eta_exponential(double ind, const FsConfig& cfg, double r);
double eta_linear(double ind, const FsConfig& cfg, double r);

// h = eta * h0, clamped to [h_min, h_max].
LoopPerfState assign_period(const LoopPerfState& state, double eta);

struct TaskLoad {
    double c_nom = 0.0;
    double period = 0.0;
};

// Minimum-energy speed: max(sum c_nom / h, alpha_min), at most 1.
// Throws InfeasibleError when the workload exceeds 1.
double opdvs_speed(std::span<const TaskLoad> tasks, double alpha_min);

bool event_trigger(double e_now, const LoopPerfState& state, double delta);

struct EnergyBounds {
    double e_min = 0.0;
    double e_max = 0.0;
};

struct LoopTiming {
    double c_nom = 0.0;
    double h0 = 0.0;
    double h_max = 0.0;
};

// Energy range reachable by period adaptation: (sum c/h_max)^2, (sum c/h0)^2.
EnergyBounds energy_bounds(std::span<const LoopTiming> loops);

struct FsTrigger {
    enum class Kind { timer, event } kind = Kind::timer;
    std::size_t loop = 0; // triggering loop for events
};

struct FsLoopInput {
    bool active = false;
    double e_abs = 0.0; // current |r - y|
    double c_nom = 0.0;
};

struct FsDecision {
    std::vector<double> periods; // per loop, after the invocation
    double alpha = 0.0;          // speed from the assigned periods of active loops
};

// One invocation. Timer: every active loop is sampled and re-assigned.
// Event: only `trigger.loop` is. The speed is recomputed either way.
FsDecision fs_invoke(const FsTrigger& trigger, std::span<LoopPerfState> loops,
                     std::span<const FsLoopInput> inputs, const FsConfig& cfg);

} // namespace eeafs

#endif
