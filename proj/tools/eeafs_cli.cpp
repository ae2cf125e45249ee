#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "eeafs/batch.hpp"
#include "eeafs/config_file.hpp"
#include "eeafs/errors.hpp"
#include "eeafs/report.hpp"
#include "eeafs/scenario.hpp"
#include "eeafs/simulation.hpp"

namespace fs = std::filesystem;
using namespace eeafs;

namespace {

enum ExitCode { ok = 0, config_failure = 1, infeasible = 2, io_failure = 3 };

struct Flags {
    std::string scheme;
    std::string beta;
    std::optional<double> delta, t_fs, duration, trace_stride, plant_substep;
    std::string out = "out";
    bool no_pull_in = false;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--scheme", f.scheme, "opdvs | eeafs-exp (eeafs-1) | eeafs-linear (eeafs-2)");
    cmd->add_option("--beta", f.beta, "exponential shape constant, or inf");
    cmd->add_option("--delta", f.delta, "event threshold on the absolute error change");
    cmd->add_option("--t-fs", f.t_fs, "feedback scheduler period, seconds");
    cmd->add_option("--duration", f.duration, "run length, seconds");
    cmd->add_option("--trace-stride", f.trace_stride, "seconds between trace rows");
    cmd->add_option("--plant-substep", f.plant_substep, "maximum RK4 substep, seconds");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--no-pull-in", f.no_pull_in, "shortened periods wait for the pending release");
}

Overrides to_overrides(const Flags& f)
{
    Overrides o;
    if (!f.scheme.empty()) {
        auto s = parse_scheme(f.scheme);
        if (!s)
            throw ConfigError("unknown scheme '" + f.scheme + "'");
        o.scheme = s;
    }
    if (!f.beta.empty()) {
        if (f.beta == "inf" || f.beta == "infinity")
            o.beta = kBetaInfinity;
        else
            try {
                o.beta = std::stod(f.beta);
            } catch (const std::exception&) {
                throw ConfigError("--beta: '" + f.beta + "' is not a number");
            }
    }
    o.delta = f.delta;
    o.t_fs = f.t_fs;
    o.duration = f.duration;
    o.trace_stride = f.trace_stride;
    o.plant_substep = f.plant_substep;
    if (f.no_pull_in)
        o.release_pull_in = false;
    return o;
}

fs::path prepare_out(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

bool is_preset(const std::string& name)
{
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

int cmd_run(const std::string& target, const Flags& f)
{
    ScenarioConfig cfg;
    if (is_preset(target))
        cfg = preset(target);
    else if (fs::exists(target))
        cfg = load_config(target);
    else
        throw ConfigError("'" + target + "' is neither a preset (" + [] {
            std::string s;
            for (const auto& n : preset_names())
                s += (s.empty() ? "" : ", ") + n;
            return s;
        }() + ") nor a readable config file");
    apply(cfg, to_overrides(f));
    validate(cfg);

    const auto dir = prepare_out(f.out);
    const auto result = run_scenario(cfg);
    std::ostringstream resolved;
    write_config(resolved, cfg);
    emit_text(dir / "config.ini", resolved.str());
    emit_trace(dir / "trace.csv", result.trace);
    const auto text = format_summary(result.summary);
    emit_text(dir / "summary.txt", text);
    std::cout << text;
    return ok;
}

int cmd_sweep(const std::string& name, const Flags& f, int threads, bool serial, bool traces)
{
    const auto sweep = make_sweep(name, to_overrides(f));
    std::vector<ScenarioConfig> configs;
    for (const auto& c : sweep.cases)
        configs.push_back(c.config);

    const auto dir = prepare_out(f.out);
    RunOptions opts;
    opts.keep_trace = traces;
    const auto results = serial ? run_batch_serial(configs, opts) : run_batch_parallel(configs, opts, threads);

    std::vector<RunSummary> summaries;
    for (std::size_t i = 0; i < results.size(); ++i) {
        summaries.push_back(results[i].summary);
        if (traces) {
            std::string file = sweep.cases[i].label;
            for (char& ch : file)
                if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-')
                    ch = '_';
            emit_trace(dir / ("trace_" + file + ".csv"), results[i].trace);
        }
    }
    const auto text = format_sweep_report(sweep, summaries);
    emit_text(dir / "summary.txt", text);
    std::cout << text;
    return ok;
}

int cmd_surface(const std::string& out, double step, int threads)
{
    SurfaceSpec spec;
    spec.step = step;
    const auto points = energy_surface_parallel(spec, threads);
    const auto dir = prepare_out(out);
    emit_surface(dir / "surface.csv", points);
    std::cout << "wrote " << points.size() << " points to " << (dir / "surface.csv").string() << '\n';
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-aware feedback scheduling co-simulator"};
    app.require_subcommand(1);

    Flags run_flags, sweep_flags;
    std::string run_target, sweep_target;
    auto* run = app.add_subcommand("run", "run one preset or config file");
    run->add_option("target", run_target, "preset name or config path")->required();
    add_common(run, run_flags);

    int threads = 0;
    bool serial = false;
    bool traces = false;
    auto* sweep = app.add_subcommand("sweep", "run a preset's comparison set");
    sweep->add_option("preset", sweep_target, "section-5a | beta-sweep | pi-sweep | example2")->required();
    add_common(sweep, sweep_flags);
    sweep->add_option("--threads", threads, "OpenMP threads (0 = default)");
    sweep->add_flag("--serial", serial, "run cases one after another");
    sweep->add_flag("--traces", traces, "also write one trace per case");

    std::string surface_out = "out";
    double surface_step = 1.0;
    int surface_threads = 0;
    auto* surface = app.add_subcommand("surface", "energy over the two-task period grid");
    surface->add_option("--out", surface_out, "output directory");
    surface->add_option("--step", surface_step, "grid step in period units");
    surface->add_option("--threads", surface_threads, "OpenMP threads (0 = default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_failure;
    }

    try {
        if (*run)
            return cmd_run(run_target, run_flags);
        if (*sweep)
            return cmd_sweep(sweep_target, sweep_flags, threads, serial, traces);
        if (*surface)
            return cmd_surface(surface_out, surface_step, surface_threads);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_failure;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return infeasible;
    } catch (const SimulationError& e) {
        std::cerr << "simulation failed: " << e.what() << '\n';
        return infeasible;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_failure;
    }
    return ok;
}
