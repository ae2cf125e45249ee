#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>

#include "eeafs/errors.hpp"
#include "eeafs/report.hpp"
#include "eeafs/scenario.hpp"
#include "eeafs/simulation.hpp"

using namespace eeafs;

namespace {

RunSummary summary(Scheme s, double e, double j)
{
    RunSummary r;
    r.scheme = s;
    r.average_energy = e;
    r.j_sum = j;
    r.loop_costs = {j};
    return r;
}

} // namespace

TEST_CASE("trace header lists every column")
{
    CHECK(trace_header(1) == "t,h1,y1,r1,e1,ind1,alpha,E,J1,J_SUM,misses");
    const auto h = trace_header(4);
    CHECK(std::count(h.begin(), h.end(), ',') + 1 == 29);
}

TEST_CASE("trace round trips exactly")
{
    const auto r = run_scenario(section_5a(Scheme::eeafs_exponential));
    std::stringstream ss;
    write_trace(ss, r.trace);
    const auto back = parse_trace(ss);
    CHECK(back == r.trace);
}

TEST_CASE("malformed traces are rejected")
{
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_trace(empty), IoError);
    std::istringstream bad_header("t,x\n");
    CHECK_THROWS_AS(parse_trace(bad_header), IoError);
    std::istringstream bad_row(trace_header(1) + "\n0,1,2,3,4,5,6,7,8,9\n");
    CHECK_THROWS_AS(parse_trace(bad_row), IoError);
    std::istringstream bad_number(trace_header(1) + "\n0,1,2,3,4,x,6,7,8,9,0\n");
    CHECK_THROWS_AS(parse_trace(bad_number), IoError);
}

TEST_CASE("summary lines")
{
    auto s = summary(Scheme::eeafs_exponential, 0.25, 1.5);
    s.beta = kBetaInfinity;
    s.name = "demo";
    const auto text = format_summary(s);
    CHECK(text.find("scenario: demo") != std::string::npos);
    CHECK(text.find("beta = inf") != std::string::npos);
    CHECK(text.find("average energy E_AVG: 25.0%") != std::string::npos);
    CHECK(text.find("J_SUM: 1.5000") != std::string::npos);
    CHECK(text.find("deadline misses: 0") != std::string::npos);
}

TEST_CASE("scheme report columns")
{
    const auto sweep = make_sweep("section-5a");
    const RunSummary rows[] = {summary(Scheme::opdvs, 0.6, 1.0), summary(Scheme::eeafs_exponential, 0.1, 1.05),
                               summary(Scheme::eeafs_linear, 0.3, 1.2)};
    const auto text = format_sweep_report(sweep, rows);
    CHECK(text.find("| E_AVG | Decrease | Relative saving | J_SUM | Increase |") != std::string::npos);
    CHECK(text.find("| 10.0% | 50.0 pp | 83.3% | 1.050 | +5.0% |") != std::string::npos);
    CHECK(text.find("| 30.0% | 30.0 pp | 50.0% | 1.200 | +20.0% |") != std::string::npos);
    CHECK(text.find("Deadline misses across all runs: 0") != std::string::npos);
    CHECK_THROWS(format_sweep_report(sweep, std::span<const RunSummary>(rows, 2)));
}

TEST_CASE("perturbation interval report pairs rows")
{
    const auto sweep = make_sweep("pi-sweep");
    std::vector<RunSummary> rows;
    for (std::size_t i = 0; i < sweep.cases.size(); i += 2) {
        rows.push_back(summary(Scheme::opdvs, 0.9, 2.0));
        rows.push_back(summary(Scheme::eeafs_exponential, 0.45, 2.1));
    }
    const auto text = format_sweep_report(sweep, rows);
    CHECK(text.find("| 1 | 90.0% | 45.0% | 45.0 pp | 50.0% | 2.000 | 2.100 | +5.0% |") != std::string::npos);
    CHECK(text.find("| 6 |") != std::string::npos);
}

TEST_CASE("surface csv")
{
    const SurfacePoint pts[] = {{10, 10, 0.81}, {20, 30, 0.5}};
    std::ostringstream os;
    write_surface(os, pts);
    CHECK(os.str() == "h1,h2,E\n10,10,0.81\n20,30,0.5\n");
}

TEST_CASE("unwritable output is an I/O error")
{
    CHECK_THROWS_AS(emit_text("/nonexistent/dir/summary.txt", "x"), IoError);
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "eeafs_report_test.txt";
    emit_text(path, "ok\n");
    CHECK(std::filesystem::file_size(path) == 3);
    std::filesystem::remove(path);
}
