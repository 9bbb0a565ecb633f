#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <supersched/engine.hpp>
#include <supersched/error.hpp>
#include <supersched/scenario.hpp>
#include <supersched/taskgen.hpp>

using namespace supersched;

namespace {

TaskSpec periodic(int id, Duration e, Duration p) {
    TaskSpec t;
    t.id = id;
    t.label = "T" + std::to_string(id);
    t.kind = TaskKind::Periodic;
    t.execution_time = e;
    t.period = p;
    t.deadline = p;
    return t;
}

void check_generated(const TaskSet& ts, int n, const std::vector<Duration>& pool) {
    CHECK(ts.size() == static_cast<std::size_t>(n));
    CHECK(validate_taskset(ts).empty());
    CHECK(utilization(ts) <= Rational(1));
    for (const auto& t : ts.tasks) {
        CHECK(t.kind == TaskKind::Periodic);
        REQUIRE(t.period);
        CHECK(t.deadline == *t.period);
        CHECK(std::find(pool.begin(), pool.end(), *t.period) != pool.end());
        CHECK(t.execution_time >= 1);
        CHECK(t.execution_time <= *t.period);
    }
}

} // namespace

TEST_CASE("generate: the documented example") {
    GenSpec spec;
    spec.n = 5;
    spec.total_utilization = Rational(3, 4);
    spec.seed = 1;
    const TaskSet ts = generate(spec);
    check_generated(ts, 5, spec.period_pool);
    // rounding to whole ticks moves the total by at most half a tick per task
    double slack = 0.0;
    for (const auto& t : ts.tasks) slack += 0.5 / static_cast<double>(*t.period);
    CHECK(boost::rational_cast<double>(utilization(ts)) <= 0.75 + slack + 1e-12);
    CHECK(verify_edf_feasible(ts));
}

TEST_CASE("generate: argument checks") {
    GenSpec spec;
    spec.n = 4;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.n = 5;
    spec.total_utilization = Rational(0);
    CHECK_THROWS_AS(generate(spec), Error);
    spec.total_utilization = Rational(11, 10);
    CHECK_THROWS_AS(generate(spec), Error);
    spec.total_utilization = Rational(1, 2);
    spec.period_pool = {};
    CHECK_THROWS_AS(generate(spec), Error);
    spec.period_pool = {10, 0};
    CHECK_THROWS_AS(generate(spec), Error);
    spec.period_pool = {2};
    spec.n = 5;
    spec.total_utilization = Rational(1);
    CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("generate: full utilization with a single period") {
    GenSpec spec;
    spec.n = 6;
    spec.total_utilization = Rational(1);
    spec.period_pool = {100};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        spec.seed = seed;
        const TaskSet ts = generate(spec);
        check_generated(ts, 6, spec.period_pool);
        Duration sum = 0;
        for (const auto& t : ts.tasks) sum += t.execution_time;
        CHECK(sum <= 100);
    }
}

TEST_CASE("generate is a pure function of the spec") {
    GenSpec spec;
    spec.n = 9;
    spec.total_utilization = Rational(4, 5);
    spec.seed = 77;
    CHECK(generate(spec) == generate(spec));
    GenSpec other = spec;
    other.seed = 78;
    CHECK(generate(spec) != generate(other));
}

TEST_CASE("generated sets satisfy every post-condition") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenSpec spec;
        spec.n = 5 + static_cast<int>(seed % 10);
        spec.total_utilization = Rational(static_cast<std::int64_t>(1 + seed % 10), 10);
        spec.seed = seed;
        const TaskSet ts = generate(spec);
        check_generated(ts, spec.n, spec.period_pool);
        CHECK(verify_edf_feasible(ts));
    }
}

TEST_CASE("verify_edf_feasible") {
    CHECK_FALSE(verify_edf_feasible(TaskSet{"over", {periodic(1, 11, 10)}}));
    const TaskSet full{"full", {periodic(1, 3, 4), periodic(2, 2, 8)}};
    CHECK(utilization(full) == Rational(1));
    CHECK(verify_edf_feasible(full));
    CHECK(oracle::misses(oracle::simulate(oracle::expand(full, 8), 8, oracle::Mode::Edf), 8) == 0);
    CHECK_FALSE(verify_edf_feasible(TaskSet{"x", {periodic(1, 3, 4), periodic(2, 3, 8)}}));
}

TEST_CASE("inject_catastrophe") {
    const TaskSet base = without_catastrophes(medium_scenario()).tasks;
    const TaskSet with = inject_catastrophe(base, CatastropheParams{60, 60, 120}, 0);
    REQUIRE(with.size() == 5);
    const TaskSpec& ct = with.tasks.back();
    CHECK(ct.kind == TaskKind::Catastrophe);
    CHECK(ct.id == 5);
    CHECK(ct.label == "CT");
    CHECK(ct.execution_time == 60);
    CHECK(ct.release == 60);
    CHECK(ct.deadline == 120);
    CHECK(with.tasks.back() == medium_scenario().tasks.tasks.back());

    CHECK_THROWS_AS(inject_catastrophe(base, CatastropheParams{0, 10, 20}, 0), Error);
    CHECK_THROWS_AS(inject_catastrophe(base, CatastropheParams{30, 10, 20}, 0), Error);

    const TaskSet twice = inject_catastrophe(with, CatastropheParams{5, 0, 10}, 0);
    CHECK(twice.tasks.back().label == "CT2");
    CHECK(twice.tasks.back().id == 6);
}

TEST_CASE("random catastrophe draws") {
    GenSpec spec;
    spec.n = 6;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        spec.seed = seed;
        const TaskSet ts = generate(spec);
        const Duration h = hyperperiod(ts);
        Duration max_e = 0;
        for (const auto& t : ts.tasks) max_e = std::max(max_e, t.execution_time);
        const TaskSet with = inject_catastrophe(ts, std::nullopt, seed);
        const TaskSpec& ct = with.tasks.back();
        CHECK(ct.kind == TaskKind::Catastrophe);
        CHECK(ct.release >= 0);
        CHECK(ct.release <= h / 2);
        CHECK(ct.execution_time >= max_e);
        CHECK(ct.execution_time <= 2 * max_e);
        CHECK(ct.deadline == ct.release + 2 * ct.execution_time);
        CHECK(per_task_feasible(ct));
        CHECK(inject_catastrophe(ts, std::nullopt, seed) == with);
    }
}
