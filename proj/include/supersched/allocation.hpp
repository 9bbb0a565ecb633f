#pragma once

#include <supersched/model.hpp>
#include <supersched/trace.hpp>

#include <vector>

namespace supersched {

struct Assignment {
    int task_id = 0;
    int primary = 0;
    int backup = 0;

    bool operator==(const Assignment&) const = default;
};

/// Primary and backup replica of every task on identical processors. Backups
/// are cold and reserve their full utilization on the backup processor.
struct Placement {
    int processors = 0;
    std::vector<Assignment> assignments; // in task list order
    std::vector<Rational> load;          // committed utilization per processor

    const Assignment* find(int task_id) const;

    bool operator==(const Placement&) const = default;
};

/// First-fit decreasing by utilization: each primary goes to the first
/// processor with room, then its backup to the first different processor with
/// room, opening processors as needed. Throws InvalidArgument for tasks
/// without a rate, with d != P, or with e > P.
Placement allocate_primary_backup(const TaskSet& ts);

/// max(ceil(2 * total utilization), 2) for a non-empty set, 0 otherwise.
int min_processor_lower_bound(const TaskSet& ts);

std::vector<Violation> validate_placement(const Placement& pl, const TaskSet& ts);

/// Partitioned EDF run of the primaries in which `failed_proc` stops at
/// `t_fail`. Jobs in flight there are lost; each affected task continues on
/// its backup from its first release at or after `t_fail`. Throws
/// InvalidArgument for an unknown processor.
Trace inject_failure(const Placement& pl, const TaskSet& ts, int failed_proc, TimePoint t_fail,
                     TimePoint horizon);

} // namespace supersched
