#ifndef EEAFS_KERNEL_HPP
#define EEAFS_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace eeafs {

using TaskId = std::size_t;

// Two event times closer than this are the same instant.
inline constexpr double kTimeEps = 1e-12;

struct TaskSpec {
    TaskId id = 0;
    double period = 0.0; // seconds, also the relative deadline
    double c_nom = 0.0;  // execution time at full speed, seconds
};

void validate(const TaskSpec& spec);

struct Job {
    std::uint64_t seq = 0;
    double release = 0.0;
    double abs_deadline = 0.0;
    double remaining_nominal_work = 0.0;
};

struct TaskState {
    TaskSpec spec; // spec.period is the assigned period, used from the next release on
    std::deque<Job> pending_jobs;
    double next_release = 0.0;
    double last_release = 0.0;
    bool active = false;
    std::uint64_t released = 0;
};

struct ProcessorState {
    double alpha = 1.0;
    double alpha_min = 0.05;
};

enum class EventKind { job_release, job_completion, fs_timer, simulation_end };

struct KernelEvent {
    double time = 0.0;
    EventKind kind = EventKind::simulation_end;
};

struct Completion {
    TaskId task = 0;
    std::uint64_t seq = 0;
    double time = 0.0;
    bool missed = false;
};

struct AdvanceResult {
    double elapsed = 0.0;
    double end = 0.0; // time reached
    std::vector<Completion> completions;
};

struct DeadlineMiss {
    TaskId task = 0;
    std::uint64_t seq = 0;
    double deadline = 0.0;
    double completion = 0.0;
};

// Sum of c_nom / period.
double workload(std::span<const TaskSpec> tasks);

// EDF test with scaled execution times: workload <= alpha.
bool check_schedulability(std::span<const TaskSpec> tasks, double alpha);

double scaled_execution_time(double c_nom, double alpha);

// Preemptive EDF on one speed-scalable processor. Jobs retire alpha seconds
// of nominal work per second of wall time.
class EdfKernel {
public:
    explicit EdfKernel(ProcessorState processor);

    TaskId add_task(double period, double c_nom);

    // First job is released at `first_release`.
    void activate(TaskId id, double first_release);

    // Applies from the next release; the in-flight job keeps its deadline.
    void set_period(TaskId id, double period);

    // Moves pending releases forward to max(now, last release + period) for
    // idle tasks whose period shrank, in id order, keeping each move only while
    // demand_speed(now) stays within `speed_cap`. Returns the number moved.
    std::size_t pull_in_releases(double now, double speed_cap);

    void set_speed(double alpha);

    // Earliest next release over active tasks, +inf if none.
    double next_release_time() const;

    std::optional<double> next_completion_time(double now) const;

    // Runs EDF from `now` up to the earliest of next release, completion of
    // the running job, and `horizon`.
    AdvanceResult advance(double now, double horizon);

    // Releases every job due at `now`; returns them as (task, job) pairs in
    // task id order.
    std::vector<std::pair<TaskId, Job>> release_jobs(double now);

    // Sum of c_nom / assigned period over active tasks.
    double assigned_workload() const;

    // Shorter of the current release window and the assigned period; the
    // assigned period before the first release.
    double reserved_period(TaskId id) const;

    // Sum of c_nom / reserved_period over active tasks. Running at least this
    // fast keeps every job schedulable when no release is pulled in.
    double reserved_workload() const;

    // Lowest constant speed from `now` on under which EDF meets the deadline
    // of every pending job and of every future job at the assigned periods.
    // Never below assigned_workload(); +inf if a pending deadline has passed.
    double demand_speed(double now) const;

    // Counts pending jobs whose deadline already passed at `now`.
    std::size_t overdue_jobs(double now) const;

    // Job the scheduler would run right now, if any.
    std::optional<std::pair<TaskId, Job>> running_job() const;

    std::span<const TaskState> tasks() const { return tasks_; }
    const TaskState& task(TaskId id) const { return tasks_.at(id); }
    const ProcessorState& processor() const { return processor_; }
    const std::vector<DeadlineMiss>& deadline_misses() const { return misses_; }

    double busy_time() const { return busy_time_; }
    double retired_work() const { return retired_work_; }

private:
    std::optional<TaskId> pick() const;

    ProcessorState processor_;
    std::vector<TaskState> tasks_;
    std::vector<DeadlineMiss> misses_;
    double busy_time_ = 0.0;
    double retired_work_ = 0.0;
};

} // namespace eeafs

#endif
