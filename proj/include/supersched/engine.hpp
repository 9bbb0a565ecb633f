#pragma once

#include <supersched/dispatch.hpp>
#include <supersched/model.hpp>
#include <supersched/super_scheduler.hpp>
#include <supersched/trace.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace supersched {

struct FailurePlan {
    int processor = 0;
    TimePoint time = 0;
    /// Backup processor per task, parallel to the task list.
    std::vector<int> backup;
};

struct SimConfig {
    Policy policy = Policy::Edf;
    int processors = 1;
    TimePoint horizon = 0;
    std::uint64_t seed = 0;
    /// Processor per task, parallel to the task list. Empty means round-robin
    /// in list order.
    std::vector<int> assignment;
    std::optional<FailurePlan> failure;
};

/// Deterministic, partitioned, preemptive, event-driven simulation.
///
/// Scheduling decisions are taken at release, completion, discard, mode
/// switch and failure instants only. Baseline policies never discard; a late
/// job runs to completion. Throws InvalidArgument on structural task set
/// violations, a non-positive horizon or processor count, or RM with a task
/// that has no rate.
Trace simulate(const TaskSet& ts, const SimConfig& config);
Trace simulate(const TaskSet& ts, Policy policy, int processors, TimePoint horizon,
               std::uint64_t seed = 0);

/// Restore, prune and dispatch step for one processor at `now`. Returns the
/// jobs discarded by the step.
std::vector<Job> reschedule(ProcessorState& state, Policy policy, TimePoint now,
                            std::vector<Event>& events);

/// Run length used when none is given: the last release plus one hyperperiod
/// for purely periodic sets, otherwise the latest deadline plus the total
/// execution time of the set.
TimePoint default_horizon(const TaskSet& ts);

} // namespace supersched
