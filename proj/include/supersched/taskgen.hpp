#pragma once

#include <supersched/model.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace supersched {

inline const std::vector<Duration> kDefaultPeriodPool{10, 20, 40, 80, 160};

struct GenSpec {
    int n = 5;
    Rational total_utilization{3, 4};
    std::vector<Duration> period_pool = kDefaultPeriodPool;
    std::uint64_t seed = 0;
};

/// `n` periodic tasks with d = P, periods drawn from the pool and utilizations
/// from a seeded stick-breaking split of the target. Execution times are
/// rounded and then shrunk (largest first) until the exact utilization is at
/// most 1. Throws InvalidArgument for n < 5, a target outside (0, 1], a bad
/// pool, or when even e = 1 everywhere overloads the processor.
TaskSet generate(const GenSpec& spec);

/// Exact utilization test for implicit-deadline periodic sets, cross-checked by
/// simulating one hyperperiod when it is at most `simulation_limit` ticks.
bool verify_edf_feasible(const TaskSet& ts, Duration simulation_limit = 1'000'000);

struct CatastropheParams {
    Duration execution_time = 0;
    TimePoint release = 0;
    TimePoint deadline = 0;
};

/// Appends one catastrophe task. Without explicit parameters the release is
/// uniform in [0, H/2], the execution time uniform in [max e, 2 max e] and the
/// deadline r + 2e. Throws InvalidArgument if the task would be infeasible on
/// its own.
TaskSet inject_catastrophe(const TaskSet& ts, std::optional<CatastropheParams> params, std::uint64_t seed);

} // namespace supersched
