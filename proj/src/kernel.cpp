#include "eeafs/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eeafs {

void validate(const TaskSpec& spec)
{
    if (!(spec.period > 0.0) || !std::isfinite(spec.period))
        throw std::invalid_argument("task " + std::to_string(spec.id) + ": period must be > 0");
    if (!(spec.c_nom > 0.0))
        throw std::invalid_argument("task " + std::to_string(spec.id) + ": c_nom must be > 0");
    if (spec.c_nom > spec.period)
        throw std::invalid_argument("task " + std::to_string(spec.id) + ": c_nom exceeds period");
}

double workload(std::span<const TaskSpec> tasks)
{
    double omega = 0.0;
    for (const auto& t : tasks) {
        validate(t);
        omega += t.c_nom / t.period;
    }
    return omega;
}

bool check_schedulability(std::span<const TaskSpec> tasks, double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("check_schedulability: alpha must be > 0");
    return workload(tasks) <= alpha;
}

double scaled_execution_time(double c_nom, double alpha)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("scaled_execution_time: alpha must be > 0");
    return c_nom / alpha;
}

EdfKernel::EdfKernel(ProcessorState processor) : processor_(processor)
{
    if (!(processor_.alpha_min > 0.0) || processor_.alpha_min > 1.0)
        throw std::invalid_argument("alpha_min must be in (0, 1]");
    set_speed(processor_.alpha);
}

TaskId EdfKernel::add_task(double period, double c_nom)
{
    TaskState st;
    st.spec = TaskSpec{tasks_.size(), period, c_nom};
    validate(st.spec);
    tasks_.push_back(std::move(st));
    return tasks_.back().spec.id;
}

void EdfKernel::activate(TaskId id, double first_release)
{
    auto& t = tasks_.at(id);
    t.active = true;
    t.next_release = first_release;
    t.last_release = first_release;
}

void EdfKernel::set_period(TaskId id, double period)
{
    auto& t = tasks_.at(id);
    TaskSpec next = t.spec;
    next.period = period;
    validate(next);
    t.spec = next;
}

std::size_t EdfKernel::pull_in_releases(double now, double speed_cap)
{
    std::size_t moved = 0;
    for (auto& t : tasks_) {
        if (!t.active || t.released == 0 || !t.pending_jobs.empty())
            continue;
        const double pulled = std::max(now, t.last_release + t.spec.period);
        if (pulled >= t.next_release - kTimeEps)
            continue;
        const double before = t.next_release;
        t.next_release = pulled;
        if (demand_speed(now) <= speed_cap + 1e-12)
            ++moved;
        else
            t.next_release = before;
    }
    return moved;
}

void EdfKernel::set_speed(double alpha)
{
    if (!(alpha >= processor_.alpha_min - 1e-15) || alpha > 1.0 + 1e-15)
        throw std::invalid_argument("speed " + std::to_string(alpha) + " outside [alpha_min, 1]");
    processor_.alpha = std::clamp(alpha, processor_.alpha_min, 1.0);
}

double EdfKernel::next_release_time() const
{
    double next = std::numeric_limits<double>::infinity();
    for (const auto& t : tasks_)
        if (t.active)
            next = std::min(next, t.next_release);
    return next;
}

std::optional<TaskId> EdfKernel::pick() const
{
    std::optional<TaskId> best;
    for (const auto& t : tasks_) {
        if (t.pending_jobs.empty())
            continue;
        // Jobs of one task are queued in deadline order.
        const Job& j = t.pending_jobs.front();
        if (!best) {
            best = t.spec.id;
            continue;
        }
        const Job& b = tasks_[*best].pending_jobs.front();
        // Ties go to the lower id, which is already `best`.
        if (j.abs_deadline < b.abs_deadline)
            best = t.spec.id;
    }
    return best;
}

std::optional<std::pair<TaskId, Job>> EdfKernel::running_job() const
{
    auto id = pick();
    if (!id)
        return std::nullopt;
    return std::pair{*id, tasks_[*id].pending_jobs.front()};
}

std::optional<double> EdfKernel::next_completion_time(double now) const
{
    auto id = pick();
    if (!id)
        return std::nullopt;
    return now + tasks_[*id].pending_jobs.front().remaining_nominal_work / processor_.alpha;
}

AdvanceResult EdfKernel::advance(double now, double horizon)
{
    if (!(horizon > now))
        throw std::invalid_argument("advance: horizon must be after now");

    AdvanceResult out;
    out.end = now;
    const double stop = std::min(horizon, next_release_time());
    if (stop <= now) {
        return out; // a release is due; caller must release first
    }

    auto id = pick();
    if (!id) {
        out.elapsed = stop - now;
        out.end = stop;
        return out;
    }

    auto& task = tasks_[*id];
    Job& job = task.pending_jobs.front();
    const double alpha = processor_.alpha;
    const double finish = now + job.remaining_nominal_work / alpha;

    if (finish <= stop + kTimeEps) {
        const double end = std::min(finish, stop);
        busy_time_ += end - now;
        retired_work_ += job.remaining_nominal_work;
        Completion c{*id, job.seq, end, end > job.abs_deadline + kTimeEps};
        if (c.missed)
            misses_.push_back({*id, job.seq, job.abs_deadline, end});
        task.pending_jobs.pop_front();
        out.elapsed = end - now;
        out.end = end;
        out.completions.push_back(c);
        return out;
    }

    const double dt = stop - now;
    job.remaining_nominal_work -= alpha * dt;
    busy_time_ += dt;
    retired_work_ += alpha * dt;
    out.elapsed = dt;
    out.end = stop;
    return out;
}

std::vector<std::pair<TaskId, Job>> EdfKernel::release_jobs(double now)
{
    std::vector<std::pair<TaskId, Job>> out;
    for (auto& t : tasks_) {
        if (!t.active || t.next_release > now + kTimeEps)
            continue;
        Job j;
        j.seq = t.released++;
        j.release = t.next_release;
        j.abs_deadline = j.release + t.spec.period;
        j.remaining_nominal_work = t.spec.c_nom;
        t.last_release = j.release;
        t.next_release = j.abs_deadline;
        t.pending_jobs.push_back(j);
        out.emplace_back(t.spec.id, j);
    }
    return out;
}

double EdfKernel::assigned_workload() const
{
    double u = 0.0;
    for (const auto& t : tasks_)
        if (t.active)
            u += t.spec.c_nom / t.spec.period;
    return u;
}

double EdfKernel::reserved_period(TaskId id) const
{
    const auto& t = tasks_.at(id);
    if (t.released == 0)
        return t.spec.period;
    return std::min(t.next_release - t.last_release, t.spec.period);
}

double EdfKernel::reserved_workload() const
{
    double u = 0.0;
    for (const auto& t : tasks_)
        if (t.active)
            u += t.spec.c_nom / reserved_period(t.spec.id);
    return u;
}

double EdfKernel::demand_speed(double now) const
{
    // Processor-demand test over [now, d] for every candidate deadline d.
    // Future jobs of task i have deadlines next_release + k * period, k >= 1.
    const double u = assigned_workload();

    std::vector<std::pair<double, double>> pending; // (deadline, remaining work)
    double backlog = 0.0;
    for (const auto& t : tasks_)
        for (const auto& j : t.pending_jobs) {
            if (j.abs_deadline <= now + kTimeEps)
                return std::numeric_limits<double>::infinity();
            pending.emplace_back(j.abs_deadline, j.remaining_nominal_work);
            backlog += j.remaining_nominal_work;
        }
    std::sort(pending.begin(), pending.end());

    struct Stream {
        double next_deadline;
        double period;
        double c_nom;
    };
    std::vector<Stream> streams;
    double lead = 0.0; // sum of u_i * (next_release_i - now)
    double longest = 0.0;
    for (const auto& t : tasks_) {
        if (!t.active)
            continue;
        const double start = std::max(t.next_release, now);
        streams.push_back({start + t.spec.period, t.spec.period, t.spec.c_nom});
        lead += t.spec.c_nom / t.spec.period * (start - now);
        longest = std::max(longest, t.spec.period);
    }

    // Beyond any d, demand(d) <= backlog + u * (d - now) - lead.
    const double excess = backlog - lead;
    if (excess <= 0.0)
        return u;

    double best = u;
    double demand = 0.0;
    std::size_t p = 0;
    const double limit = now + 64.0 * std::max(longest, 1e-3);
    for (;;) {
        double d = std::numeric_limits<double>::infinity();
        if (p < pending.size())
            d = pending[p].first;
        Stream* s = nullptr;
        for (auto& st : streams)
            if (st.next_deadline < d) {
                d = st.next_deadline;
                s = &st;
            }
        if (!std::isfinite(d) || d > limit)
            break;
        if (s) {
            demand += s->c_nom;
            s->next_deadline += s->period;
        } else {
            demand += pending[p++].second;
        }
        best = std::max(best, demand / (d - now));
        if (u + excess / (d - now) <= best)
            break;
    }
    return best;
}

std::size_t EdfKernel::overdue_jobs(double now) const
{
    std::size_t n = 0;
    for (const auto& t : tasks_)
        for (const auto& j : t.pending_jobs)
            if (j.abs_deadline < now - kTimeEps)
                ++n;
    return n;
}

} // namespace eeafs
