#include <supersched/model.hpp>

#include <supersched/error.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace supersched {

std::string_view to_string(TaskKind kind) {
    switch (kind) {
    case TaskKind::Periodic: return "periodic";
    case TaskKind::Sporadic: return "sporadic";
    case TaskKind::OneShot: return "one_shot";
    case TaskKind::Catastrophe: return "catastrophe";
    }
    return "?";
}

std::string_view to_string(Criticality crit) {
    switch (crit) {
    case Criticality::Hard: return "hard";
    case Criticality::Soft: return "soft";
    case Criticality::Optional: return "optional";
    }
    return "?";
}

std::string_view to_string(JobState state) {
    switch (state) {
    case JobState::Pending: return "pending";
    case JobState::Ready: return "ready";
    case JobState::Running: return "running";
    case JobState::Preempted: return "preempted";
    case JobState::Completed: return "completed";
    case JobState::Discarded: return "discarded";
    }
    return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
    for (auto k : {TaskKind::Periodic, TaskKind::Sporadic, TaskKind::OneShot, TaskKind::Catastrophe})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

std::optional<Criticality> parse_criticality(std::string_view text) {
    for (auto c : {Criticality::Hard, Criticality::Soft, Criticality::Optional})
        if (to_string(c) == text) return c;
    return std::nullopt;
}

const TaskSpec* TaskSet::find(int id) const {
    auto it = std::find_if(tasks.begin(), tasks.end(), [id](const TaskSpec& t) { return t.id == id; });
    return it == tasks.end() ? nullptr : &*it;
}

bool per_task_feasible(const TaskSpec& task) {
    if (task.has_absolute_deadline()) return task.release + task.execution_time <= task.deadline;
    return task.execution_time <= task.deadline;
}

Rational utilization(const TaskSet& ts) {
    Rational total{0};
    for (const auto& task : ts.tasks) {
        auto rate = task.rate();
        if (!rate || *rate <= 0)
            fail(ErrorCode::InvalidArgument,
                 "utilization: task " + std::to_string(task.id) + " has no period or interarrival");
        total += Rational(task.execution_time, *rate);
    }
    return total;
}

Rational density(const TaskSpec& task) {
    Tick denominator = 0;
    if (task.has_absolute_deadline()) {
        denominator = task.deadline - task.release;
    } else {
        denominator = task.deadline;
        if (auto rate = task.rate()) denominator = std::min(denominator, *rate);
    }
    if (denominator <= 0)
        fail(ErrorCode::InvalidArgument,
             "density: task " + std::to_string(task.id) + " has a non-positive window");
    return Rational(task.execution_time, denominator);
}

Duration hyperperiod(const TaskSet& ts) {
    Duration h = 1;
    for (const auto& task : ts.tasks) {
        if (task.kind != TaskKind::Periodic || !task.period || *task.period <= 0)
            fail(ErrorCode::InvalidArgument,
                 "hyperperiod: task " + std::to_string(task.id) + " is not periodic");
        const Duration p = *task.period;
        const Duration g = std::gcd(h, p);
        Duration next = 0;
        if (__builtin_mul_overflow(h / g, p, &next))
            fail(ErrorCode::Overflow, "hyperperiod: least common multiple exceeds the time range");
        h = next;
    }
    return h;
}

std::vector<Violation> structural_violations(const TaskSet& ts) {
    std::vector<Violation> out;
    std::set<int> seen;
    for (const auto& t : ts.tasks) {
        auto add = [&](std::string rule, std::string msg) {
            out.push_back({t.id, std::move(rule), std::move(msg)});
        };
        if (!seen.insert(t.id).second) add("duplicate_id", "task id appears more than once");
        if (t.execution_time <= 0) add("execution_time", "execution time must be positive");
        if (t.release < 0) add("release", "release must be non-negative");
        switch (t.kind) {
        case TaskKind::Periodic:
            if (!t.period || *t.period <= 0) add("period", "periodic task needs a positive period");
            if (t.deadline <= 0) add("deadline", "relative deadline must be positive");
            break;
        case TaskKind::Sporadic:
            if (!t.min_interarrival || *t.min_interarrival <= 0)
                add("min_interarrival", "sporadic task needs a positive minimum interarrival");
            if (t.deadline <= 0) add("deadline", "relative deadline must be positive");
            break;
        case TaskKind::OneShot:
        case TaskKind::Catastrophe:
            if (t.deadline < 0) add("deadline", "absolute deadline must be non-negative");
            break;
        }
    }
    return out;
}

std::vector<Violation> validate_taskset(const TaskSet& ts) {
    auto out = structural_violations(ts);
    for (const auto& t : ts.tasks) {
        if (t.has_absolute_deadline() && t.execution_time > 0 && !per_task_feasible(t))
            out.push_back({t.id, "infeasible", "release + execution time exceeds the deadline"});
    }
    return out;
}

} // namespace supersched
