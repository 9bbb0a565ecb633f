#pragma once

#include <supersched/model.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace supersched {

// Declaration order is the canonical order of events sharing a timestamp.
enum class EventKind {
    ProcessorFail,
    BackupActivate,
    Release,
    ModeSwitch,
    Discard,
    Preempt,
    Dispatch,
    Complete,
};

std::string_view to_string(EventKind kind);

struct Event {
    TimePoint time = 0;
    EventKind kind = EventKind::Release;
    std::optional<JobId> job;
    std::optional<int> processor;
    std::string reason;

    bool operator==(const Event&) const = default;
};

/// Sorts by (time, kind, processor); emission order is kept otherwise.
void sort_canonical(std::vector<Event>& events);

/// Final state of one released job.
struct JobRecord {
    Job job;
    int processor = 0;
    std::optional<TimePoint> first_dispatch;
    std::optional<TimePoint> discarded_at;
    std::string discard_reason;

    bool completed_late() const noexcept {
        return job.state == JobState::Completed && !job.met_deadline();
    }

    bool operator==(const JobRecord&) const = default;
};

/// One push onto a processor's preemption stack and its eventual outcome.
struct StackRecord {
    JobId job;
    int processor = 0;
    Duration saved_remaining = 0;
    TimePoint saved_at = 0;
    std::optional<TimePoint> restored_at;
    std::optional<Duration> restored_remaining;

    bool operator==(const StackRecord&) const = default;
};

/// Complete record of one simulation run.
struct Trace {
    std::string policy;
    std::uint64_t seed = 0;
    TimePoint horizon = 0;
    int processors = 1;
    std::vector<Event> events;
    std::vector<JobRecord> jobs; // in release order
    std::vector<StackRecord> stack_log;
    std::vector<std::pair<int, std::string>> labels;

    std::string label_of(int task_id) const;
    std::string job_name(JobId id) const;
    const JobRecord* find(JobId id) const;

    std::size_t released() const noexcept { return jobs.size(); }
    std::size_t completed() const;
    std::size_t discarded() const;
    std::size_t active() const;

    bool operator==(const Trace&) const = default;
};

struct Segment {
    JobId job;
    int processor = 0;
    TimePoint begin = 0;
    TimePoint end = 0;
};

/// Execution intervals reconstructed from the dispatch/preempt/complete/discard
/// events. A job still running at the horizon gets a segment ending there.
std::vector<Segment> execution_segments(const Trace& tr);

/// Sum of remaining work at `t` over jobs released no later than `t1`, not
/// terminal by `t`, with deadline <= t1. Jobs released after `t` contribute
/// their full execution time. With `processor` set only that processor's jobs
/// count.
Duration demand_in_interval(const Trace& tr, TimePoint t, TimePoint t1,
                            std::optional<int> processor = std::nullopt);

/// Per-segment counts over [t0, t), [t, t1) and [t1, horizon].
struct PartitionCounts {
    std::array<std::size_t, 3> scheduled{};        // released into the scheduler (CS)
    std::array<std::size_t, 3> executed{};         // completed (CE)
    std::array<std::size_t, 3> first_dispatched{}; // first given a processor

    std::size_t total_scheduled() const { return scheduled[0] + scheduled[1] + scheduled[2]; }
    std::size_t total_executed() const { return executed[0] + executed[1] + executed[2]; }
    std::size_t total_first_dispatched() const {
        return first_dispatched[0] + first_dispatched[1] + first_dispatched[2];
    }
};

/// Throws InvalidArgument unless t0 <= t <= t1 <= horizon.
PartitionCounts count_partition(const Trace& tr, std::array<TimePoint, 3> cuts);

/// Structural trace invariants: canonical order, timestamps in [0, horizon],
/// one terminal event per terminal job, release/terminal conservation, one
/// running job per processor, and executed time equal to the execution time
/// of every completed job. Returns a description of each failure.
std::vector<std::string> check_trace(const Trace& tr);

} // namespace supersched
