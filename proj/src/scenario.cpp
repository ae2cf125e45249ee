#include "eeafs/scenario.hpp"

#include "eeafs/errors.hpp"

#include <cmath>
#include <sstream>

namespace eeafs {

namespace {

std::string fmt_num(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_loop(const LoopConfig& l, std::size_t idx, double duration, std::vector<std::string>& out)
{
    const std::string p = "loop " + std::to_string(idx + 1) + (l.name.empty() ? "" : " (" + l.name + ")") + ": ";
    try {
        validate(l.plant);
    } catch (const std::exception& e) {
        out.push_back(p + e.what());
    }
    if (!std::isfinite(l.gains.kp) || !std::isfinite(l.gains.ki) || !std::isfinite(l.gains.kd))
        out.push_back(p + "PID gains must be finite");
    if (!(l.c_nom > 0.0))
        out.push_back(p + "c_nom must be > 0");
    if (!(l.h0 > 0.0))
        out.push_back(p + "h0 must be > 0");
    if (!(l.h_max >= l.h0))
        out.push_back(p + "h_max must be >= h0");
    if (l.c_nom > l.h0)
        out.push_back(p + "c_nom must not exceed h0");
    if (!(l.activation >= 0.0))
        out.push_back(p + "activation must be >= 0");
    if (!(l.activation < duration))
        out.push_back(p + "activation " + fmt_num(l.activation) + " s must precede the end of the run (" +
                      fmt_num(duration) + " s)");
    for (std::size_t k = 0; k < l.perturbations.size(); ++k) {
        const auto& pt = l.perturbations[k];
        if (!std::isfinite(pt.time) || !std::isfinite(pt.reference))
            out.push_back(p + "perturbation " + std::to_string(k + 1) + " is not finite");
        if (k > 0 && !(pt.time > l.perturbations[k - 1].time))
            out.push_back(p + "perturbation times must be strictly increasing");
    }
    for (std::size_t k = 0; k < l.period_switches.size(); ++k) {
        const auto& sw = l.period_switches[k];
        if (!(sw.period >= l.c_nom))
            out.push_back(p + "period switch " + std::to_string(k + 1) + " shorter than c_nom");
        if (k > 0 && !(sw.time > l.period_switches[k - 1].time))
            out.push_back(p + "period switch times must be strictly increasing");
    }
    if (l.delta && !(*l.delta > 0.0))
        out.push_back(p + "delta must be > 0");
}

} // namespace

std::vector<std::string> check(const ScenarioConfig& cfg)
{
    std::vector<std::string> out;
    if (!(cfg.duration > 0.0) || !std::isfinite(cfg.duration))
        out.emplace_back("duration must be > 0");
    if (!(cfg.trace_stride > 0.0))
        out.emplace_back("trace_stride must be > 0");
    if (!(cfg.plant_substep > 0.0))
        out.emplace_back("plant_substep must be > 0");
    if (cfg.loops.empty())
        out.emplace_back("scenario needs at least one loop");
    for (auto& m : check(cfg.fs))
        out.push_back(std::move(m));

    double omega = 0.0;
    for (std::size_t i = 0; i < cfg.loops.size(); ++i) {
        const auto& l = cfg.loops[i];
        check_loop(l, i, cfg.duration, out);
        double shortest = l.h0;
        for (const auto& sw : l.period_switches)
            shortest = std::min(shortest, sw.period);
        if (shortest > 0.0)
            omega += l.c_nom / shortest;
    }
    if (omega > 1.0 + 1e-12)
        out.push_back("nominal workload " + fmt_num(omega) + " exceeds 1 (sum of c_nom / h0 must be <= 1)");
    return out;
}

void validate(const ScenarioConfig& cfg)
{
    auto problems = check(cfg);
    if (!problems.empty())
        throw ConfigError(std::move(problems));
}

std::vector<LoopConfig> table1_loops()
{
    std::vector<LoopConfig> loops(4);
    loops[0].name = "loop1";
    loops[0].plant = {{1.0}, {1000.0, 50.0}};
    loops[0].gains = {1e4, 400.0, 0.0};
    loops[0].h0 = 0.010;
    loops[0].h_max = 0.040;

    loops[1].name = "loop2";
    loops[1].plant = {{1.0}, {1.0, 10.0, 20.0}};
    loops[1].gains = {30.0, 70.0, 0.0};
    loops[1].h0 = 0.007;
    loops[1].h_max = 0.030;

    loops[2].name = "loop3";
    loops[2].plant = {{1.0}, {0.5, 6.0, 10.0}};
    loops[2].gains = {100.0, 200.0, 2.0};
    loops[2].h0 = 0.008;
    loops[2].h_max = 0.030;

    loops[3].name = "loop4";
    loops[3].plant = {{1.0}, {1.0, 10.0, 20.0}};
    loops[3].gains = {200.0, 350.0, 3.0};
    loops[3].h0 = 0.009;
    loops[3].h_max = 0.040;

    for (auto& l : loops)
        l.c_nom = 0.002;
    return loops;
}

PerturbationSchedule square_wave(double interval, double duration)
{
    if (!(interval > 0.0))
        throw ConfigError("perturbation interval must be > 0");
    PerturbationSchedule out;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * interval;
        if (t >= duration)
            break;
        out.push_back({t, k % 2 == 0 ? 1.0 : 0.0});
    }
    return out;
}

void apply(ScenarioConfig& cfg, const Overrides& o)
{
    if (o.scheme)
        cfg.fs.mode = *o.scheme;
    if (o.beta)
        cfg.fs.beta = *o.beta;
    if (o.delta) {
        cfg.fs.delta = *o.delta;
        for (auto& l : cfg.loops)
            l.delta.reset();
    }
    if (o.t_fs)
        cfg.fs.t_fs = *o.t_fs;
    if (o.duration)
        cfg.duration = *o.duration;
    if (o.trace_stride)
        cfg.trace_stride = *o.trace_stride;
    if (o.plant_substep)
        cfg.plant_substep = *o.plant_substep;
    if (o.release_pull_in)
        cfg.release_pull_in = *o.release_pull_in;
}

std::vector<std::string> preset_names()
{
    return {"example1-surface", "example2", "section-5a", "beta-sweep", "pi-sweep"};
}

ScenarioConfig section_5a(Scheme scheme, double beta)
{
    ScenarioConfig cfg;
    cfg.name = "section-5a";
    cfg.loops = table1_loops();
    cfg.fs.mode = scheme;
    cfg.fs.beta = beta;
    cfg.duration = 8.0;
    cfg.loops[0].perturbations = {{0.0, 1.0}, {6.0, 0.0}};
    cfg.loops[1].perturbations = {{2.0, 1.0}, {6.0, 0.0}};
    for (std::size_t i : {2u, 3u}) {
        cfg.loops[i].activation = 4.0;
        cfg.loops[i].perturbations = {{4.0, 1.0}, {6.0, 0.0}};
    }
    return cfg;
}

ScenarioConfig perturbation_interval_run(double interval, Scheme scheme, double duration)
{
    ScenarioConfig cfg;
    std::ostringstream name;
    name << "pi-sweep-" << interval << "s";
    cfg.name = name.str();
    cfg.loops = table1_loops();
    cfg.fs.mode = scheme;
    cfg.duration = duration;
    for (auto& l : cfg.loops)
        l.perturbations = square_wave(interval, duration);
    return cfg;
}

ScenarioConfig example2(bool case_two)
{
    // Servo gains K = 0.96, Ti = 0.12, Td = 0.049 in parallel form.
    ScenarioConfig cfg;
    cfg.name = case_two ? "example2-case2" : "example2-case1";
    LoopConfig l;
    l.name = "dc-servo";
    l.plant = {{1000.0}, {1.0, 1.0, 0.0}};
    l.gains = {0.96, 0.96 / 0.12, 0.96 * 0.049};
    l.c_nom = 0.001;
    l.h0 = 0.006;
    l.h_max = 0.012;
    l.perturbations = {{0.0, 1.0}};
    if (case_two)
        l.period_switches = {{0.5, 0.012}};
    cfg.loops.push_back(l);
    cfg.fs.mode = Scheme::opdvs;
    // Dedicated processor at full speed.
    cfg.fs.alpha_min = 1.0;
    cfg.duration = 1.0;
    return cfg;
}

ScenarioConfig preset(std::string_view name)
{
    if (name == "section-5a" || name == "beta-sweep")
        return section_5a(Scheme::eeafs_exponential, 40.0);
    if (name == "pi-sweep")
        return perturbation_interval_run(1.0, Scheme::eeafs_exponential);
    if (name == "example2")
        return example2(true);
    if (name == "example1-surface")
        throw ConfigError("example1-surface has no dynamics; use the surface command");
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Sweep make_sweep(std::string_view name, const Overrides& o)
{
    Sweep sw;
    sw.name = std::string(name);
    auto finish = [&](ScenarioConfig cfg, Overrides keep) {
        apply(cfg, keep);
        return cfg;
    };

    if (name == "section-5a") {
        sw.kind = SweepKind::schemes;
        Overrides keep = o;
        keep.scheme.reset();
        const double beta = o.beta.value_or(40.0);
        sw.cases.push_back({"opDVS", 0.0, finish(section_5a(Scheme::opdvs, beta), keep)});
        sw.cases.push_back({"EEAFS-1", beta, finish(section_5a(Scheme::eeafs_exponential, beta), keep)});
        sw.cases.push_back({"EEAFS-2", 0.0, finish(section_5a(Scheme::eeafs_linear, beta), keep)});
    } else if (name == "beta-sweep") {
        sw.kind = SweepKind::beta;
        Overrides keep = o;
        keep.scheme.reset();
        keep.beta.reset();
        sw.cases.push_back({"opDVS", 0.0, finish(section_5a(Scheme::opdvs), keep)});
        for (double b : kBetaSweepValues) {
            std::ostringstream label;
            if (std::isinf(b))
                label << "beta=inf";
            else
                label << "beta=" << b;
            sw.cases.push_back({label.str(), b, finish(section_5a(Scheme::eeafs_exponential, b), keep)});
        }
    } else if (name == "pi-sweep") {
        sw.kind = SweepKind::perturbation_interval;
        Overrides keep = o;
        keep.scheme.reset();
        keep.duration.reset();
        const double duration = o.duration.value_or(12.0);
        const Scheme adaptive = (o.scheme && *o.scheme != Scheme::opdvs) ? *o.scheme : Scheme::eeafs_exponential;
        for (double pi : kPerturbationIntervals) {
            std::ostringstream label;
            label << "PI=" << pi << "s";
            sw.cases.push_back({label.str() + " opDVS", pi,
                                finish(perturbation_interval_run(pi, Scheme::opdvs, duration), keep)});
            sw.cases.push_back({label.str() + " EEAFS", pi,
                                finish(perturbation_interval_run(pi, adaptive, duration), keep)});
        }
    } else if (name == "example2") {
        sw.kind = SweepKind::example2;
        Overrides keep = o;
        keep.scheme.reset();
        sw.cases.push_back({"case I (6 ms)", 0.006, finish(example2(false), keep)});
        sw.cases.push_back({"case II (6 -> 12 ms)", 0.012, finish(example2(true), keep)});
    } else if (name == "example1-surface") {
        throw ConfigError("example1-surface has no dynamics; use the surface command");
    } else {
        throw ConfigError("unknown sweep preset '" + std::string(name) + "'");
    }
    return sw;
}

} // namespace eeafs
