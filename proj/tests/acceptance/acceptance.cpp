#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "eeafs/batch.hpp"
#include "eeafs/feedback_scheduler.hpp"
#include "eeafs/metrics.hpp"
#include "eeafs/plant.hpp"
#include "eeafs/scenario.hpp"
#include "eeafs/simulation.hpp"

using namespace eeafs;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::set<int> failed;

void report(int n, const Outcome& o)
{
    std::printf("criterion %2d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass)
        failed.insert(n);
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c, d);
    return buf;
}

struct PresetRun {
    std::string sweep;
    SweepCase c;
    RunResult r;
};

std::vector<PresetRun> run_sweep(const std::string& name)
{
    const auto sweep = make_sweep(name);
    std::vector<ScenarioConfig> cfgs;
    for (const auto& c : sweep.cases)
        cfgs.push_back(c.config);
    auto results = run_batch_parallel(cfgs);
    std::vector<PresetRun> out;
    for (std::size_t i = 0; i < results.size(); ++i)
        out.push_back({name, sweep.cases[i], std::move(results[i])});
    return out;
}

Outcome criterion1()
{
    const TaskLoad a[] = {{4, 10}, {5, 10}};
    const TaskLoad b[] = {{4, 20}, {5, 30}};
    const double ea = energy_of_periods(a);
    const double eb = energy_of_periods(b);
    // (4/10 + 5/10)^2 and (4/20 + 5/30)^2 = (11/30)^2
    const bool ok = std::abs(ea - 0.81) <= 1e-9 && std::abs(eb - 121.0 / 900.0) <= 1e-9;
    return {ok, fmt("E(10,10) = %.12f, E(20,30) = %.12f", ea, eb)};
}

Outcome criterion2(const std::vector<PresetRun>& pi)
{
    Outcome o;
    double worst_pp = 0.0;
    double worst_s = 0.0;
    for (const auto& p : pi) {
        if (p.c.config.fs.mode != Scheme::opdvs)
            continue;
        const double pp = std::abs(100.0 * p.r.summary.average_energy - 91.76);
        worst_pp = std::max(worst_pp, pp);
        worst_s = std::max(worst_s, p.r.summary.wall_seconds);
        if (pp > 0.1 || p.r.summary.wall_seconds >= 5.0)
            o.pass = false;
    }
    o.detail = fmt("max |E_AVG - 91.76%%| = %.4f pp, slowest run %.3f s", worst_pp, worst_s);
    return o;
}

Outcome criterion3()
{
    ScenarioConfig cfg;
    cfg.name = "steady";
    cfg.loops = table1_loops();
    cfg.fs.mode = Scheme::eeafs_exponential;
    cfg.duration = 2.0;
    const auto r = run_scenario(cfg);
    std::vector<LoopTiming> timing;
    for (const auto& l : cfg.loops)
        timing.push_back({l.c_nom, l.h0, l.h_max});
    const double e_min = energy_bounds(timing).e_min;
    Outcome o;
    for (const auto& row : r.trace) {
        if (row.t < 2.0 * cfg.fs.t_fs)
            continue;
        for (std::size_t i = 0; i < row.loops.size(); ++i)
            if (row.loops[i].h != cfg.loops[i].h_max)
                o.pass = false;
        if (std::abs(row.alpha - 7.0 / 30.0) > 1e-12 || std::abs(row.energy - 49.0 / 900.0) > 0.002)
            o.pass = false;
    }
    const auto& last = r.trace.back();
    if (std::abs(last.energy - e_min) > 1e-12)
        o.pass = false;
    o.detail = fmt("alpha = %.12f, E = %.4f%%, bound E_min = %.4f%%", last.alpha, 100.0 * last.energy,
                   100.0 * e_min);
    return o;
}

bool active_at(const LoopConfig& l, double t) { return l.activation <= t; }

double bound_violation(const ScenarioConfig& cfg, const TraceRecord& row)
{
    auto violation = [&](bool include_boundary) {
        std::vector<LoopTiming> timing;
        for (const auto& l : cfg.loops)
            if (include_boundary ? active_at(l, row.t) : l.activation < row.t)
                timing.push_back({l.c_nom, l.h0, l.h_max});
        if (timing.empty())
            return 0.0;
        auto b = energy_bounds(timing);
        const double floor = cfg.fs.alpha_min * cfg.fs.alpha_min;
        b.e_min = std::max(b.e_min, floor);
        b.e_max = std::max(b.e_max, floor);
        return std::max({0.0, b.e_min - row.energy, row.energy - b.e_max});
    };
    // At an activation instant either loop set is a valid reading.
    return std::min(violation(true), violation(false));
}

Outcome criterion4(const std::vector<PresetRun>& all)
{
    double worst = 0.0;
    std::size_t rows = 0;
    for (const auto& p : all) {
        if (p.c.config.fs.mode == Scheme::opdvs)
            continue;
        for (const auto& row : p.r.trace) {
            worst = std::max(worst, bound_violation(p.c.config, row));
            ++rows;
        }
        worst = std::max(worst, p.r.summary.max_bound_violation);
    }
    return {worst <= 1e-12, fmt("%.0f EEAFS trace rows, max violation %.3g", static_cast<double>(rows), worst)};
}

Outcome criterion5(const std::vector<PresetRun>& all)
{
    std::size_t misses = 0;
    double util = 0.0;
    double applied = 0.0;
    for (const auto& p : all) {
        misses += p.r.summary.deadline_misses;
        util = std::max(util, p.r.summary.max_fs_utilization_error);
        applied = std::max(applied, p.r.summary.max_demand_excess);
    }
    return {misses == 0 && util <= 1e-12,
            fmt("%.0f misses over %.0f runs, max scheduler-decision utilization error %.3g "
                "(applied speed up to %.3g above it)",
                static_cast<double>(misses), static_cast<double>(all.size()), util, applied)};
}

Outcome criterion6(const std::vector<PresetRun>& runs)
{
    const auto& base = runs.at(0).r.summary;
    const auto& e1 = runs.at(1).r.summary;
    const auto& e2 = runs.at(2).r.summary;
    const double d1 = percentage_point_decrease(base.average_energy, e1.average_energy);
    const double d2 = percentage_point_decrease(base.average_energy, e2.average_energy);
    const double j1 = relative_change_percent(base.j_sum, e1.j_sum);
    const double j2 = relative_change_percent(base.j_sum, e2.j_sum);
    const bool ok = d1 >= 35.0 && d2 >= 35.0 && j1 <= 15.0 && j2 <= 15.0 &&
                    e2.average_energy <= e1.average_energy;
    return {ok, fmt("decrease %.1f / %.1f pp, J_SUM increase %+.1f%% / %+.1f%%", d1, d2, j1, j2)};
}

Outcome criterion7(const std::vector<PresetRun>& runs)
{
    Outcome o;
    const auto& base = runs.at(0).r.summary;
    std::vector<const RunSummary*> beta_runs;
    for (std::size_t i = 1; i < runs.size(); ++i)
        beta_runs.push_back(&runs[i].r.summary);
    bool monotone = true;
    for (std::size_t i = 1; i < beta_runs.size(); ++i)
        if (beta_runs[i]->average_energy < beta_runs[i - 1]->average_energy)
            monotone = false;
    const double inf_dec = percentage_point_decrease(base.average_energy, beta_runs.back()->average_energy);
    double spread = 0.0;
    std::size_t worst_loop = 0;
    for (std::size_t l = 0; l < base.loop_costs.size(); ++l) {
        double lo = INFINITY;
        double hi = 0.0;
        for (const auto* r : beta_runs) {
            lo = std::min(lo, r->loop_costs[l]);
            hi = std::max(hi, r->loop_costs[l]);
        }
        const double s = 100.0 * (hi - lo) / lo;
        if (s > spread) {
            spread = s;
            worst_loop = l + 1;
        }
    }
    o.pass = monotone && inf_dec >= 30.0 && spread <= 15.0;
    o.detail = fmt("energy %.1f%% .. %.1f%%, beta=inf decrease %.1f pp, max per-loop cost spread %.1f%%",
                   100.0 * beta_runs.front()->average_energy, 100.0 * beta_runs.back()->average_energy, inf_dec,
                   spread) +
               " (loop " + std::to_string(worst_loop) + (monotone ? ", energy monotone)" : ", energy NOT monotone)");
    return o;
}

Outcome criterion8(const std::vector<PresetRun>& runs)
{
    const double target[] = {43.8, 65.8, 75.9, 80.1};
    Outcome o;
    double prev = INFINITY;
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) {
        const auto& base = runs[i].r.summary;
        const auto& ad = runs[i + 1].r.summary;
        const double dec = percentage_point_decrease(base.average_energy, ad.average_energy);
        const double inc = relative_change_percent(base.j_sum, ad.j_sum);
        if (!(ad.average_energy < prev) || std::abs(dec - target[i / 2]) > 10.0 || inc > 10.0)
            o.pass = false;
        prev = ad.average_energy;
        o.detail += fmt("PI %g: %.1f pp, %+.1f%%; ", runs[i].c.parameter, dec, inc);
    }
    return o;
}

Outcome criterion9()
{
    Outcome o;
    int checks = 0;
    auto expect = [&](bool ok) {
        ++checks;
        if (!ok)
            o.pass = false;
    };
    const double r = 4.0;
    auto cfg = [](double beta) {
        FsConfig c;
        c.beta = beta;
        return c;
    };
    const std::vector<double> betas{1, 10, 20, 40, 60, 80, kBetaInfinity};
    for (double b : {1.0, 10.0, 40.0, 80.0}) {
        expect(std::abs(eta_exponential(0.02 + 1e-9, cfg(b), r) - r) < 1e-6);
        expect(std::abs(eta_exponential(0.2 - 1e-9, cfg(b), r) - 1.0) < 1e-6);
    }
    expect(std::abs(eta_linear(0.02 + 1e-9, FsConfig{}, r) - r) < 1e-6);
    expect(std::abs(eta_linear(0.2 - 1e-9, FsConfig{}, r) - 1.0) < 1e-6);
    for (double b : betas) {
        double prev_e = r;
        double prev_l = r;
        for (int i = 0; i <= 300; ++i) {
            const double ind = 0.3 * i / 300.0;
            const double e = eta_exponential(ind, cfg(b), r);
            const double l = eta_linear(ind, cfg(b), r);
            expect(e >= 1.0 && e <= r && l >= 1.0 && l <= r);
            expect(e <= prev_e && l <= prev_l);
            prev_e = e;
            prev_l = l;
        }
    }
    for (int i = 0; i <= 100; ++i) {
        const double ind = 0.02 + 0.18 * i / 100.0;
        for (std::size_t k = 1; k < betas.size(); ++k)
            expect(eta_exponential(ind, cfg(betas[k]), r) <= eta_exponential(ind, cfg(betas[k - 1]), r));
        expect(std::abs(eta_exponential(ind, cfg(1e6), r) - eta_exponential(ind, cfg(kBetaInfinity), r)) < 1e-6);
    }
    for (double rr : {4.0, 30.0 / 7.0, 5.0})
        expect(std::abs(eta_linear(0.11, FsConfig{}, rr) - (rr + 1.0) / 2.0) < 1e-12);
    auto s = make_loop_state(0.010, 0.040, 0.1);
    for (int k = 1; k <= 30; ++k) {
        s = update_ind(s, 0.5, 0.3);
        expect(std::abs(s.ind - 0.5 * (1.0 - std::pow(0.3, k))) < 1e-13);
    }
    o.detail = std::to_string(checks) + " property checks";
    return o;
}

double exact_step(const TransferFunction& tf, double t)
{
    const auto m = tf_to_ss(tf);
    const auto n = static_cast<Eigen::Index>(m.n);
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            big(i, j) = m.a[static_cast<std::size_t>(i * n + j)];
        big(i, n) = m.b[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd e = (big * t).exp();
    double y = m.d;
    for (Eigen::Index i = 0; i < n; ++i)
        y += m.c[static_cast<std::size_t>(i)] * e(i, n);
    return y;
}

Outcome criterion10()
{
    Outcome o;
    double worst_rel = 0.0;
    for (const auto& l : table1_loops()) {
        const auto m = tf_to_ss(l.plant);
        for (double t : {0.1, 0.5, 1.0}) {
            auto s = rest_state(m);
            s.u_held = 1.0;
            const double y = integrate(m, s, t).y;
            const double want = exact_step(l.plant, t);
            worst_rel = std::max(worst_rel, std::abs(y - want) / std::abs(want));
        }
    }
    auto cfg = section_5a(Scheme::eeafs_exponential);
    const auto coarse = run_scenario(cfg);
    cfg.plant_substep = kDefaultPlantSubstep / 2.0;
    const auto fine = run_scenario(cfg);
    double worst_dy = 0.0;
    if (coarse.trace.size() != fine.trace.size()) {
        worst_dy = INFINITY;
    } else {
        for (std::size_t k = 0; k < coarse.trace.size(); ++k)
            for (std::size_t i = 0; i < coarse.trace[k].loops.size(); ++i)
                worst_dy = std::max(worst_dy, std::abs(coarse.trace[k].loops[i].y - fine.trace[k].loops[i].y));
    }
    o.pass = worst_rel <= 1e-8 && worst_dy < 1e-9;
    o.detail = fmt("max relative step-response error %.3g, max traced output change on halving %.3g", worst_rel,
                   worst_dy);
    return o;
}

} // namespace

// --expect-fail N (repeatable) makes the exit status 0 only when exactly the
// listed criteria fail. Without it, any failure gives exit status 1.
int main(int argc, char** argv)
{
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
            expected.insert(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--expect-fail N]...\n", argv[0]);
            return 2;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const auto schemes = run_sweep("section-5a");
    const auto beta = run_sweep("beta-sweep");
    const auto pi = run_sweep("pi-sweep");
    const auto ex2 = run_sweep("example2");
    std::vector<PresetRun> all;
    for (const auto* v : {&schemes, &beta, &pi, &ex2})
        all.insert(all.end(), v->begin(), v->end());

    report(1, criterion1());
    report(2, criterion2(pi));
    report(3, criterion3());
    report(4, criterion4(all));
    report(5, criterion5(all));
    report(6, criterion6(schemes));
    report(7, criterion7(beta));
    report(8, criterion8(pi));
    report(9, criterion9());
    report(10, criterion10());

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%zu of 10 criteria pass (%.1f s)\n", 10 - failed.size(), secs);
    if (expected.empty())
        return failed.empty() ? 0 : 1;
    if (failed == expected) {
        std::printf("failing set matches --expect-fail\n");
        return 0;
    }
    std::printf("failing set differs from --expect-fail\n");
    return 1;
}
