#include <doctest.h>

#include <vector>

#include "eeafs/batch.hpp"
#include "eeafs/errors.hpp"
#include "eeafs/scenario.hpp"

using namespace eeafs;

namespace {

void check_same(const RunSummary& a, const RunSummary& b)
{
    CHECK(a.average_energy == b.average_energy);
    CHECK(a.min_energy == b.min_energy);
    CHECK(a.max_energy == b.max_energy);
    CHECK(a.loop_costs == b.loop_costs);
    CHECK(a.j_sum == b.j_sum);
    CHECK(a.deadline_misses == b.deadline_misses);
    CHECK(a.timer_invocations == b.timer_invocations);
    CHECK(a.event_invocations == b.event_invocations);
    CHECK(a.max_bound_violation == b.max_bound_violation);
}

} // namespace

TEST_CASE("parallel batch matches the serial reference")
{
    std::vector<ScenarioConfig> configs;
    for (const auto& c : make_sweep("beta-sweep").cases)
        configs.push_back(c.config);
    const auto serial = run_batch_serial(configs);
    for (int threads : {1, 3, 0}) {
        const auto parallel = run_batch_parallel(configs, {}, threads);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].trace == serial[i].trace);
            check_same(parallel[i].summary, serial[i].summary);
        }
    }
}

TEST_CASE("parallel batch reports a bad config")
{
    std::vector<ScenarioConfig> configs{section_5a(Scheme::opdvs), section_5a(Scheme::opdvs)};
    configs[1].duration = -1.0;
    CHECK_THROWS_AS(run_batch_parallel(configs), ConfigError);
}

TEST_CASE("energy surface")
{
    const SurfaceSpec spec;
    const auto serial = energy_surface_serial(spec);
    REQUIRE(serial.size() == 11 * 21);
    CHECK(serial.front().h1 == 10.0);
    CHECK(serial.front().h2 == 10.0);
    CHECK(serial.front().energy == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(serial.back().h1 == 20.0);
    CHECK(serial.back().h2 == 30.0);
    CHECK(serial.back().energy == doctest::Approx(121.0 / 900.0).epsilon(1e-12));
    for (const auto& p : serial) {
        const double u = spec.c1 / p.h1 + spec.c2 / p.h2;
        CHECK(p.energy == doctest::Approx(u * u).epsilon(1e-12));
    }
    for (int threads : {1, 4}) {
        const auto parallel = energy_surface_parallel(spec, threads);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].h1 == serial[i].h1);
            CHECK(parallel[i].h2 == serial[i].h2);
            CHECK(parallel[i].energy == serial[i].energy);
        }
    }
    SurfaceSpec bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(energy_surface_serial(bad), ConfigError);
    CHECK_THROWS_AS(energy_surface_parallel(bad), ConfigError);
}
