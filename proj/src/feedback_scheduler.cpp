#include "eeafs/feedback_scheduler.hpp"

#include "eeafs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace eeafs {

std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::opdvs:
        return "opdvs";
    case Scheme::eeafs_exponential:
        return "eeafs-exp";
    case Scheme::eeafs_linear:
        return "eeafs-linear";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    if (name == "opdvs" || name == "opDVS")
        return Scheme::opdvs;
    if (name == "eeafs-exp" || name == "eeafs-exponential" || name == "eeafs-1" || name == "EEAFS-1")
        return Scheme::eeafs_exponential;
    if (name == "eeafs-linear" || name == "eeafs-2" || name == "EEAFS-2")
        return Scheme::eeafs_linear;
    return std::nullopt;
}

std::vector<std::string> check(const FsConfig& cfg)
{
    std::vector<std::string> out;
    if (!(cfg.t_fs > 0.0))
        out.emplace_back("fs.t_fs must be > 0");
    if (!(cfg.lambda >= 0.0 && cfg.lambda < 1.0))
        out.emplace_back("fs.lambda must be in [0, 1)");
    if (!(cfg.e_min > 0.0))
        out.emplace_back("fs.e_min must be > 0");
    if (!(cfg.e_min < cfg.e_max))
        out.emplace_back("fs.e_min must be < fs.e_max");
    if (!(cfg.beta > 0.0))
        out.emplace_back("fs.beta must be > 0 (or inf)");
    if (!(cfg.delta > 0.0))
        out.emplace_back("fs.delta must be > 0");
    if (!(cfg.alpha_min > 0.0 && cfg.alpha_min <= 1.0))
        out.emplace_back("fs.alpha_min must be in (0, 1]");
    return out;
}

LoopPerfState make_loop_state(double h0, double h_max, double delta)
{
    if (!(h0 > 0.0) || !(h_max >= h0))
        throw std::invalid_argument("loop periods need 0 < h0 <= h_max");
    LoopPerfState s;
    s.h0 = h0;
    s.h_min = h0;
    s.h_max = h_max;
    s.h_current = h0;
    s.delta = delta;
    return s;
}

LoopPerfState update_ind(const LoopPerfState& state, double e_abs, double lambda)
{
    if (!(e_abs >= 0.0))
        throw std::invalid_argument("update_ind: absolute error must be >= 0");
    LoopPerfState next = state;
    next.ind = lambda * state.ind + (1.0 - lambda) * e_abs;
    return next;
}

namespace {

void check_eta_args(const FsConfig& cfg, double r)
{
    if (!(r >= 1.0))
        throw std::invalid_argument("period ratio must be >= 1");
    if (!(cfg.e_min < cfg.e_max))
        throw std::invalid_argument("e_min must be < e_max");
}

} // namespace

double eta_exponential(double ind, const FsConfig& cfg, double r)
{
    check_eta_args(cfg, r);
    if (ind <= cfg.e_min)
        return r;
    if (ind >= cfg.e_max)
        return 1.0;
    if (std::isinf(cfg.beta))
        return 1.0;
    // (e^{-b ind} - e^{-b emax}) / (e^{-b emin} - e^{-b emax}) rewritten
    // relative to e_min so large b neither underflows nor cancels.
    const double b = cfg.beta;
    const double above = ind - cfg.e_min;
    const double span = cfg.e_max - cfg.e_min;
    const double num = -std::exp(-b * above) * std::expm1(-b * (span - above));
    const double den = -std::expm1(-b * span);
    const double frac = std::clamp(num / den, 0.0, 1.0);
    return frac * (r - 1.0) + 1.0;
}

double eta_linear(double ind, const FsConfig& cfg, double r)
{
    check_eta_args(cfg, r);
    if (ind <= cfg.e_min)
        return r;
    if (ind >= cfg.e_max)
        return 1.0;
    return r - (ind - cfg.e_min) / (cfg.e_max - cfg.e_min) * (r - 1.0);
}

LoopPerfState assign_period(const LoopPerfState& state, double eta)
{
    const double r = state.h_max / state.h_min;
    if (eta < 1.0 - 1e-12 || eta > r + 1e-12)
        std::clog << "warning: period scaling factor " << eta << " outside [1, " << r
                  << "], clamping\n";
    LoopPerfState next = state;
    next.h_current = std::clamp(eta * state.h0, state.h_min, state.h_max);
    return next;
}

double opdvs_speed(std::span<const TaskLoad> tasks, double alpha_min)
{
    double omega = 0.0;
    for (const auto& t : tasks) {
        if (!(t.period > 0.0))
            throw std::invalid_argument("opdvs_speed: period must be > 0");
        omega += t.c_nom / t.period;
    }
    if (omega > 1.0 + 1e-12)
        throw InfeasibleError("workload " + std::to_string(omega) + " exceeds full speed");
    return std::min(std::max(omega, alpha_min), 1.0);
}

bool event_trigger(double e_now, const LoopPerfState& state, double delta)
{
    return std::abs(e_now - state.e_at_last_fs) > delta;
}

EnergyBounds energy_bounds(std::span<const LoopTiming> loops)
{
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& l : loops) {
        lo += l.c_nom / l.h_max;
        hi += l.c_nom / l.h0;
    }
    return {lo * lo, hi * hi};
}

FsDecision fs_invoke(const FsTrigger& trigger, std::span<LoopPerfState> loops,
                     std::span<const FsLoopInput> inputs, const FsConfig& cfg)
{
    if (loops.size() != inputs.size())
        throw std::invalid_argument("fs_invoke: loop/input size mismatch");
    if (trigger.kind == FsTrigger::Kind::event && trigger.loop >= loops.size())
        throw std::invalid_argument("fs_invoke: event from unknown loop");

    auto reassign = [&](std::size_t i) {
        auto& st = loops[i];
        const double e = inputs[i].e_abs;
        if (!st.observed) {
            st.ind = e;
            st.observed = true;
        } else {
            st = update_ind(st, e, cfg.lambda);
        }
        st.e_at_last_fs = e;
        const double r = st.h_max / st.h_min;
        double eta = 1.0;
        switch (cfg.mode) {
        case Scheme::opdvs:
            eta = 1.0;
            break;
        case Scheme::eeafs_exponential:
            eta = eta_exponential(st.ind, cfg, r);
            break;
        case Scheme::eeafs_linear:
            eta = eta_linear(st.ind, cfg, r);
            break;
        }
        st = assign_period(st, eta);
    };

    if (trigger.kind == FsTrigger::Kind::timer) {
        for (std::size_t i = 0; i < loops.size(); ++i)
            if (inputs[i].active)
                reassign(i);
    } else if (inputs[trigger.loop].active) {
        reassign(trigger.loop);
    }

    FsDecision out;
    std::vector<TaskLoad> load;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        out.periods.push_back(loops[i].h_current);
        if (inputs[i].active)
            load.push_back({inputs[i].c_nom, loops[i].h_current});
    }
    out.alpha = opdvs_speed(load, cfg.alpha_min);
    return out;
}

} // namespace eeafs
