#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace supersched {

// One tick is one time unit of a scenario.
using Tick = std::int64_t;
using TimePoint = Tick;
using Duration = Tick;

using Rational = boost::rational<std::int64_t>;

enum class TaskKind { Periodic, Sporadic, OneShot, Catastrophe };
enum class Criticality { Hard, Soft, Optional };

std::string_view to_string(TaskKind kind);
std::string_view to_string(Criticality crit);
std::optional<TaskKind> parse_task_kind(std::string_view text);
std::optional<Criticality> parse_criticality(std::string_view text);

/// Static description of a task.
///
/// `deadline` is relative to each release for periodic and sporadic tasks and
/// absolute for one-shot and catastrophe tasks. `base_priority` only matters
/// to fixed-priority dispatch (lower value is more urgent).
struct TaskSpec {
    int id = 0;
    std::string label;
    TaskKind kind = TaskKind::Periodic;
    Criticality criticality = Criticality::Hard;
    Duration execution_time = 0;
    TimePoint release = 0;
    Tick deadline = 0;
    std::optional<Duration> period;
    std::optional<Duration> min_interarrival;
    int base_priority = 0;

    bool has_absolute_deadline() const noexcept {
        return kind == TaskKind::OneShot || kind == TaskKind::Catastrophe;
    }
    /// Period for periodic tasks, minimum interarrival for sporadic ones.
    std::optional<Duration> rate() const noexcept {
        if (kind == TaskKind::Periodic) return period;
        if (kind == TaskKind::Sporadic) return min_interarrival;
        return std::nullopt;
    }

    bool operator==(const TaskSpec&) const = default;
};

/// Ordered task list; list order is the deterministic tie-break order.
struct TaskSet {
    std::string name;
    std::vector<TaskSpec> tasks;

    const TaskSpec* find(int id) const;
    bool empty() const noexcept { return tasks.empty(); }
    std::size_t size() const noexcept { return tasks.size(); }

    bool operator==(const TaskSet&) const = default;
};

struct JobId {
    int task_id = 0;
    int instance = 0;

    auto operator<=>(const JobId&) const = default;
};

enum class JobState { Pending, Ready, Running, Preempted, Completed, Discarded };

std::string_view to_string(JobState state);

struct Job {
    JobId id;
    TaskKind kind = TaskKind::OneShot;
    Criticality criticality = Criticality::Hard;
    TimePoint abs_release = 0;
    TimePoint abs_deadline = 0;
    Duration execution_time = 0;
    Duration remaining = 0;
    std::optional<Duration> rate;
    JobState state = JobState::Pending;
    std::optional<TimePoint> completion;

    bool is_catastrophe() const noexcept { return kind == TaskKind::Catastrophe; }
    bool is_terminal() const noexcept {
        return state == JobState::Completed || state == JobState::Discarded;
    }
    // Completing exactly on the deadline counts as met.
    bool met_deadline() const noexcept { return completion && *completion <= abs_deadline; }
    bool feasible_at(TimePoint now) const noexcept { return now + remaining <= abs_deadline; }

    bool operator==(const Job&) const = default;
};

/// r + e <= d for tasks with absolute deadlines, e <= d for the relative form.
bool per_task_feasible(const TaskSpec& task);

/// Sum of e/P over the set. Throws InvalidArgument if a task has no rate.
Rational utilization(const TaskSet& ts);

/// e / min(d, P) for recurring tasks, e / (d - r) for one-shot ones.
Rational density(const TaskSpec& task);

/// Least common multiple of all periods; Overflow if it does not fit in a Tick.
Duration hyperperiod(const TaskSet& ts);

struct Violation {
    int task_id = 0;
    std::string rule;
    std::string message;
};

/// Violations that make a set unusable for simulation (bad ids, non-positive
/// execution times or periods, negative times).
std::vector<Violation> structural_violations(const TaskSet& ts);

/// Structural violations plus per-task infeasibility of absolute-deadline tasks.
std::vector<Violation> validate_taskset(const TaskSet& ts);

} // namespace supersched
