#pragma once

#include <supersched/metrics.hpp>
#include <supersched/scenario.hpp>
#include <supersched/trace.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace supersched {

struct Comparison {
    std::string scenario;
    Trace baseline_trace;
    Trace super_trace;
    MetricsReport baseline;
    MetricsReport super;
    bool dominance_holds = true; // misses(super) <= misses(baseline)
};

/// Runs the scenario under baseline EDF and under the super scheduler.
Comparison compare(const Scenario& sc);
std::string render_comparison(const Comparison& c);

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    std::string summary;
    bool findings_ok = true;
};

/// One of "medium", "large", "sweep" or "dispersion". Throws InvalidArgument
/// for an unknown name and Io when `out_dir` cannot be written.
ExperimentResult run_experiment(std::string_view which, const std::filesystem::path& out_dir);

struct SweepPoint {
    int n = 0;
    int catastrophes = 0;
    std::uint64_t seed = 0;
    std::size_t baseline_missed = 0;
    std::size_t super_missed = 0;
    Rational super_success{1};
};

/// Seeded random catastrophe scenario: a generated periodic set with
/// `catastrophes` injected catastrophe tasks, and a horizon covering the
/// catastrophes plus one hyperperiod.
Scenario random_catastrophe_scenario(int n, const Rational& utilization, int catastrophes, std::uint64_t seed);

/// Runs every (n, catastrophes, seed) combination, in parallel when possible.
/// The result is ordered by the input grid regardless of worker scheduling.
std::vector<SweepPoint> run_sweep(const std::vector<int>& ns, const std::vector<int>& loads,
                                  std::size_t seeds_per_point, std::uint64_t base_seed);

} // namespace supersched
