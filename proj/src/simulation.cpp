#include "eeafs/simulation.hpp"

#include "eeafs/controller.hpp"
#include "eeafs/kernel.hpp"
#include "eeafs/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

namespace eeafs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LoopRuntime {
    const LoopConfig* cfg = nullptr;
    StateSpaceModel model;
    PlantState plant;
    PidState pid;
    bool sampled = false;
    double last_release = 0.0;
    double r = 0.0;
    std::size_t next_perturbation = 0;
    std::size_t next_switch = 0;
    bool active = false;
    LoopCost cost;
    TaskId task = 0;
    double delta = 0.1;
    std::deque<double> outputs; // computed at release, applied at completion
};

class Simulator {
public:
    Simulator(const ScenarioConfig& cfg, const RunOptions& options)
        : cfg_(cfg), options_(options), kernel_(ProcessorState{cfg.fs.alpha_min, cfg.fs.alpha_min})
    {
        for (const auto& lc : cfg_.loops) {
            LoopRuntime rt;
            rt.cfg = &lc;
            rt.model = tf_to_ss(lc.plant);
            rt.plant = rest_state(rt.model);
            rt.r = lc.initial_reference;
            rt.delta = lc.delta.value_or(cfg_.fs.delta);
            rt.task = kernel_.add_task(lc.h0, lc.c_nom);
            loops_.push_back(std::move(rt));
            perf_.push_back(make_loop_state(lc.h0, lc.h_max, loops_.back().delta));
        }
        summary_.name = cfg_.name;
        summary_.scheme = cfg_.fs.mode;
        summary_.beta = cfg_.fs.beta;
        summary_.duration = cfg_.duration;
        summary_.min_energy = kInf;
        summary_.max_energy = 0.0;
    }

    RunResult run()
    {
        const auto wall0 = std::chrono::steady_clock::now();
        double t = 0.0;
        process_instant(t);
        while (t < cfg_.duration - kTimeEps) {
            const double horizon = next_horizon(t);
            auto step = kernel_.advance(t, horizon);
            const double t_end = step.end;
            if (t_end > t) {
                integrate_span(t, t_end);
                t = t_end;
            }
            for (const auto& c : step.completions)
                actuate(c);
            process_instant(t);
        }

        summary_.deadline_misses = kernel_.deadline_misses().size() + kernel_.overdue_jobs(cfg_.duration);
        summary_.average_energy = energy_.average();
        for (const auto& l : loops_)
            summary_.loop_costs.push_back(l.cost.iae);
        summary_.j_sum = j_sum();
        summary_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
        return {std::move(summary_), std::move(trace_)};
    }

private:
    double fs_time(std::size_t k) const { return static_cast<double>(k) * cfg_.fs.t_fs; }
    double stride_time(std::size_t k) const { return static_cast<double>(k) * cfg_.trace_stride; }

    static bool due(double when, double t) { return when <= t + kTimeEps; }

    double next_horizon(double t) const
    {
        double h = cfg_.duration;
        const double fs = fs_time(next_fs_);
        if (fs < cfg_.duration)
            h = std::min(h, fs);
        h = std::min(h, stride_time(next_stride_));
        for (const auto& l : loops_) {
            if (!l.active)
                h = std::min(h, l.cfg->activation);
            if (l.next_perturbation < l.cfg->perturbations.size())
                h = std::min(h, l.cfg->perturbations[l.next_perturbation].time);
            if (l.next_switch < l.cfg->period_switches.size())
                h = std::min(h, l.cfg->period_switches[l.next_switch].time);
        }
        return std::max(h, t + kTimeEps);
    }

    double j_sum() const
    {
        std::vector<LoopCost> costs;
        for (const auto& l : loops_)
            costs.push_back(l.cost);
        return total_cost(costs);
    }

    void integrate_span(double t0, double t1)
    {
        const double dt = t1 - t0;
        accumulate(energy_, kernel_.processor().alpha, dt);
        for (auto& l : loops_) {
            if (!l.active)
                continue;
            const double r = l.r;
            auto& cost = l.cost;
            l.plant = integrate(l.model, l.plant, dt, cfg_.plant_substep,
                                [&cost, r](double h, double y0, double y1) {
                                    accumulate_iae(cost, std::abs(r - y0), std::abs(r - y1), h);
                                });
        }
    }

    void actuate(const Completion& c)
    {
        for (auto& l : loops_) {
            if (l.task != c.task)
                continue;
            if (!l.outputs.empty()) {
                l.plant.u_held = l.outputs.front();
                l.outputs.pop_front();
                l.plant.y = output(l.model, l.plant.x, l.plant.u_held);
            }
            return;
        }
    }

    std::vector<FsLoopInput> fs_inputs() const
    {
        std::vector<FsLoopInput> in;
        in.reserve(loops_.size());
        for (const auto& l : loops_)
            in.push_back({l.active, std::abs(sample_error(l.r, l.plant.y)), l.cfg->c_nom});
        return in;
    }

    void apply_periods()
    {
        for (std::size_t i = 0; i < loops_.size(); ++i)
            if (kernel_.task(loops_[i].task).spec.period != perf_[i].h_current)
                kernel_.set_period(loops_[i].task, perf_[i].h_current);
    }

    void invoke(const FsTrigger& trigger)
    {
        const auto inputs = fs_inputs();
        const auto decision = fs_invoke(trigger, perf_, inputs, cfg_.fs);
        if (decision.alpha > cfg_.fs.alpha_min) {
            double u = 0.0;
            for (std::size_t i = 0; i < inputs.size(); ++i)
                if (inputs[i].active)
                    u += inputs[i].c_nom / decision.periods[i];
            summary_.max_fs_utilization_error =
                std::max(summary_.max_fs_utilization_error, std::abs(u / decision.alpha - 1.0));
        }
        apply_periods();
        if (trigger.kind == FsTrigger::Kind::timer)
            ++summary_.timer_invocations;
        else
            ++summary_.event_invocations;
        invoked_ = true;
    }

    void process_instant(double t)
    {
        now_ = t;
        invoked_ = false;
        const bool running = t < cfg_.duration - kTimeEps;

        if (running) {
            for (auto& l : loops_) {
                if (!l.active && due(l.cfg->activation, t)) {
                    l.active = true;
                    l.plant = rest_state(l.model);
                    l.sampled = false;
                    l.outputs.clear();
                    kernel_.activate(l.task, t);
                }
            }
        }
        for (auto& l : loops_) {
            const auto& pts = l.cfg->perturbations;
            while (l.next_perturbation < pts.size() && due(pts[l.next_perturbation].time, t))
                l.r = pts[l.next_perturbation++].reference;
        }
        for (std::size_t i = 0; i < loops_.size(); ++i) {
            auto& l = loops_[i];
            const auto& sws = l.cfg->period_switches;
            while (l.next_switch < sws.size() && due(sws[l.next_switch].time, t)) {
                const double h = sws[l.next_switch++].period;
                auto& p = perf_[i];
                p.h0 = p.h_min = h;
                p.h_max = std::max(p.h_max, h);
                p.h_current = h;
                kernel_.set_period(l.task, h);
            }
        }

        if (running && due(fs_time(next_fs_), t)) {
            invoke({FsTrigger::Kind::timer, 0});
            ++next_fs_;
        }
        if (running && cfg_.release_pull_in) {
            kernel_.pull_in_releases(t, kernel_.assigned_workload());
        }

        if (running)
            release_due(t);

        update_speed();
        check_instant();

        bool stride = false;
        while (due(stride_time(next_stride_), t)) {
            ++next_stride_;
            stride = true;
        }
        if (options_.keep_trace && (stride || invoked_))
            trace_.push_back(record(t));
    }

    void release_due(double t)
    {
        const bool adaptive = cfg_.fs.mode != Scheme::opdvs;
        for (std::size_t i = 0; i < loops_.size(); ++i) {
            auto& l = loops_[i];
            if (!l.active || !due(kernel_.task(l.task).next_release, t))
                continue;
            const double e_abs = std::abs(sample_error(l.r, l.plant.y));
            if (adaptive && (!perf_[i].observed || event_trigger(e_abs, perf_[i], l.delta)))
                invoke({FsTrigger::Kind::event, i});
        }

        for (const auto& [task, job] : kernel_.release_jobs(t)) {
            auto it = std::find_if(loops_.begin(), loops_.end(),
                                   [task = task](const LoopRuntime& l) { return l.task == task; });
            auto& l = *it;
            const double e = sample_error(l.r, l.plant.y);
            double h = job.abs_deadline - job.release;
            if (!l.sampled) {
                l.pid = pid_reset(e);
                l.sampled = true;
            } else {
                h = job.release - l.last_release;
            }
            l.last_release = job.release;
            auto out = pid_step(l.cfg->gains, l.pid, e, h);
            l.pid = out.state;
            l.outputs.push_back(out.u);
        }
    }

    void update_speed()
    {
        std::vector<TaskLoad> load;
        for (const auto& t : kernel_.tasks())
            if (t.active)
                load.push_back({t.spec.c_nom, kernel_.reserved_period(t.spec.id)});
        const double nominal = opdvs_speed(load, cfg_.fs.alpha_min);
        const double alpha = std::min(std::max(nominal, kernel_.demand_speed(now_)), 1.0);
        summary_.max_demand_excess = std::max(summary_.max_demand_excess, alpha - nominal);
        kernel_.set_speed(alpha);
    }

    void check_instant()
    {
        const double alpha = kernel_.processor().alpha;
        const double energy = instantaneous_energy(alpha);
        summary_.min_energy = std::min(summary_.min_energy, energy);
        summary_.max_energy = std::max(summary_.max_energy, energy);

        std::vector<LoopTiming> timing;
        for (std::size_t i = 0; i < loops_.size(); ++i) {
            if (!loops_[i].active)
                continue;
            timing.push_back({loops_[i].cfg->c_nom, perf_[i].h0, perf_[i].h_max});
        }
        if (!timing.empty()) {
            auto b = energy_bounds(timing);
            const double floor = cfg_.fs.alpha_min * cfg_.fs.alpha_min;
            const double lo = std::max(b.e_min, floor);
            const double hi = std::max(b.e_max, floor);
            const double v = std::max({0.0, lo - energy, energy - hi});
            summary_.max_bound_violation = std::max(summary_.max_bound_violation, v);
        }

        if (invoked_ && alpha > cfg_.fs.alpha_min) {
            summary_.max_utilization_error =
                std::max(summary_.max_utilization_error, std::abs(kernel_.reserved_workload() / alpha - 1.0));
        }
    }

    TraceRecord record(double t) const
    {
        TraceRecord rec;
        rec.t = t;
        rec.loops.reserve(loops_.size());
        for (std::size_t i = 0; i < loops_.size(); ++i) {
            const auto& l = loops_[i];
            LoopSample s;
            s.h = perf_[i].h_current;
            s.y = l.plant.y;
            s.r = l.r;
            s.e = sample_error(l.r, l.plant.y);
            s.ind = perf_[i].ind;
            s.j = l.cost.iae;
            rec.loops.push_back(s);
        }
        rec.alpha = kernel_.processor().alpha;
        rec.energy = rec.alpha * rec.alpha;
        rec.j_sum = j_sum();
        rec.misses = kernel_.deadline_misses().size();
        return rec;
    }

    const ScenarioConfig& cfg_;
    RunOptions options_;
    EdfKernel kernel_;
    std::vector<LoopRuntime> loops_;
    std::vector<LoopPerfState> perf_;
    EnergyAccumulator energy_;
    RunSummary summary_;
    std::vector<TraceRecord> trace_;
    std::size_t next_fs_ = 0;
    std::size_t next_stride_ = 0;
    bool invoked_ = false;
    double now_ = 0.0;
};

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options)
{
    validate(cfg);
    Simulator sim(cfg, options);
    return sim.run();
}

} // namespace eeafs
