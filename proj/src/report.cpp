#include "eeafs/report.hpp"

#include "eeafs/errors.hpp"
#include "eeafs/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace eeafs {

namespace {

void put_double(std::ostream& out, double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, ptr - buf);
}

double get_double(std::string_view field, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw IoError("trace line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw IoError("write failed for " + path.string());
}

std::string pct(double fraction)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * fraction);
    return buf;
}

std::string pp(double points)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f pp", points);
    return buf;
}

std::string fixed(double v, int digits)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string signed_pct(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.1f%%", v);
    return buf;
}

std::string beta_label(double b)
{
    return std::isinf(b) ? std::string("inf") : fixed(b, 0);
}

} // namespace

std::string trace_header(std::size_t loops)
{
    std::string h = "t";
    for (std::size_t i = 1; i <= loops; ++i) {
        const auto n = std::to_string(i);
        h += ",h" + n + ",y" + n + ",r" + n + ",e" + n + ",ind" + n;
    }
    h += ",alpha,E";
    for (std::size_t i = 1; i <= loops; ++i)
        h += ",J" + std::to_string(i);
    h += ",J_SUM,misses";
    return h;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> trace)
{
    const std::size_t loops = trace.empty() ? 0 : trace.front().loops.size();
    out << trace_header(loops) << '\n';
    for (const auto& rec : trace) {
        put_double(out, rec.t);
        for (const auto& s : rec.loops) {
            for (double v : {s.h, s.y, s.r, s.e, s.ind}) {
                out << ',';
                put_double(out, v);
            }
        }
        out << ',';
        put_double(out, rec.alpha);
        out << ',';
        put_double(out, rec.energy);
        for (const auto& s : rec.loops) {
            out << ',';
            put_double(out, s.j);
        }
        out << ',';
        put_double(out, rec.j_sum);
        out << ',' << rec.misses << '\n';
    }
}

std::vector<TraceRecord> parse_trace(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw IoError("trace is empty");
    const auto header = split_csv(line);
    // 1 + 5n + 2 + n + 2 columns
    if (header.size() < 5 || (header.size() - 5) % 6 != 0)
        throw IoError("trace header has an unexpected column count");
    const std::size_t loops = (header.size() - 5) / 6;
    if (line != trace_header(loops))
        throw IoError("trace header does not match the expected columns");

    std::vector<TraceRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split_csv(line);
        if (f.size() != header.size())
            throw IoError("trace line " + std::to_string(lineno) + ": wrong column count");
        TraceRecord rec;
        std::size_t k = 0;
        rec.t = get_double(f[k++], lineno);
        rec.loops.resize(loops);
        for (auto& s : rec.loops) {
            s.h = get_double(f[k++], lineno);
            s.y = get_double(f[k++], lineno);
            s.r = get_double(f[k++], lineno);
            s.e = get_double(f[k++], lineno);
            s.ind = get_double(f[k++], lineno);
        }
        rec.alpha = get_double(f[k++], lineno);
        rec.energy = get_double(f[k++], lineno);
        for (auto& s : rec.loops)
            s.j = get_double(f[k++], lineno);
        rec.j_sum = get_double(f[k++], lineno);
        const auto m = f[k++];
        auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), rec.misses);
        if (ec != std::errc{} || ptr != m.data() + m.size())
            throw IoError("trace line " + std::to_string(lineno) + ": bad miss count");
        out.push_back(std::move(rec));
    }
    return out;
}

void emit_trace(const std::filesystem::path& path, std::span<const TraceRecord> trace)
{
    auto out = open_out(path);
    write_trace(out, trace);
    close_checked(out, path);
}

std::string format_summary(const RunSummary& s)
{
    std::ostringstream os;
    os << "scenario: " << s.name << '\n'
       << "scheme: " << to_string(s.scheme);
    if (s.scheme == Scheme::eeafs_exponential)
        os << " (beta = " << beta_label(s.beta) << ')';
    os << '\n'
       << "duration: " << s.duration << " s\n"
       << "average energy E_AVG: " << pct(s.average_energy) << '\n'
       << "energy range over run: [" << pct(s.min_energy) << ", " << pct(s.max_energy) << "]\n";
    for (std::size_t i = 0; i < s.loop_costs.size(); ++i)
        os << "J" << i + 1 << ": " << fixed(s.loop_costs[i], 4) << '\n';
    os << "J_SUM: " << fixed(s.j_sum, 4) << '\n'
       << "deadline misses: " << s.deadline_misses << '\n'
       << "feedback scheduler invocations: " << s.timer_invocations << " timer, " << s.event_invocations
       << " event\n"
       << "max energy-bound violation: " << s.max_bound_violation << '\n'
       << "max utilization error of scheduler decisions: " << s.max_fs_utilization_error << '\n'
       << "max post-invocation utilization error: " << s.max_utilization_error << '\n'
       << "max speed above reserved workload: " << s.max_demand_excess << '\n';
    return os.str();
}

std::string format_sweep_report(const Sweep& sweep, std::span<const RunSummary> results)
{
    if (results.size() != sweep.cases.size())
        throw std::invalid_argument("format_sweep_report: one result per case required");
    std::ostringstream os;
    os << "# " << sweep.name << "\n\n";
    if (sweep.kind != SweepKind::example2)
        os << "Decrease = opDVS E_AVG minus scheme E_AVG in percentage points. "
          "Relative saving = decrease / opDVS E_AVG. Increase = relative change of J_SUM against opDVS.\n\n";

    switch (sweep.kind) {
    case SweepKind::perturbation_interval: {
        os << "| PI (s) | E_AVG opDVS | E_AVG EEAFS | Decrease | Relative saving | J_SUM opDVS | J_SUM EEAFS | "
              "Increase |\n"
           << "|---|---|---|---|---|---|---|---|\n";
        for (std::size_t i = 0; i + 1 < results.size(); i += 2) {
            const auto& base = results[i];
            const auto& ad = results[i + 1];
            const double dec = percentage_point_decrease(base.average_energy, ad.average_energy);
            os << "| " << sweep.cases[i].parameter << " | " << pct(base.average_energy) << " | "
               << pct(ad.average_energy) << " | " << pp(dec) << " | "
               << fixed(dec / base.average_energy, 1) << "% | " << fixed(base.j_sum, 3)
               << " | " << fixed(ad.j_sum, 3) << " | "
               << signed_pct(relative_change_percent(base.j_sum, ad.j_sum)) << " |\n";
        }
        break;
    }
    case SweepKind::schemes:
    case SweepKind::beta: {
        const RunSummary& base = results.front();
        const std::size_t loops = base.loop_costs.size();
        os << "| " << (sweep.kind == SweepKind::beta ? "Run" : "Scheme")
           << " | E_AVG | Decrease | Relative saving | J_SUM | Increase |";
        for (std::size_t l = 0; l < loops; ++l)
            os << " J" << l + 1 << " |";
        os << "\n|---|---|---|---|---|---|";
        for (std::size_t l = 0; l < loops; ++l)
            os << "---|";
        os << '\n';
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            const double dec = percentage_point_decrease(base.average_energy, r.average_energy);
            os << "| " << sweep.cases[i].label << " | " << pct(r.average_energy) << " | " << pp(dec) << " | "
               << fixed(dec / base.average_energy, 1) << "% | " << fixed(r.j_sum, 3) << " | "
               << signed_pct(relative_change_percent(base.j_sum, r.j_sum)) << " |";
            for (double j : r.loop_costs)
                os << ' ' << fixed(j, 4) << " |";
            os << '\n';
        }
        break;
    }
    case SweepKind::example2: {
        os << "| Case | Final period (ms) | J | E_AVG |\n|---|---|---|---|\n";
        for (std::size_t i = 0; i < results.size(); ++i)
            os << "| " << sweep.cases[i].label << " | " << fixed(1000.0 * sweep.cases[i].parameter, 0) << " | "
               << fixed(results[i].j_sum, 5) << " | " << pct(results[i].average_energy) << " |\n";
        break;
    }
    }

    std::size_t misses = 0;
    for (const auto& r : results)
        misses += r.deadline_misses;
    os << "\nDeadline misses across all runs: " << misses << '\n';
    return os.str();
}

void emit_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_out(path);
    out << text;
    close_checked(out, path);
}

void write_surface(std::ostream& out, std::span<const SurfacePoint> points)
{
    out << "h1,h2,E\n";
    for (const auto& p : points) {
        put_double(out, p.h1);
        out << ',';
        put_double(out, p.h2);
        out << ',';
        put_double(out, p.energy);
        out << '\n';
    }
}

void emit_surface(const std::filesystem::path& path, std::span<const SurfacePoint> points)
{
    auto out = open_out(path);
    write_surface(out, points);
    close_checked(out, path);
}

} // namespace eeafs
