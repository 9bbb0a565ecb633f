#include <supersched/trace.hpp>

#include <supersched/error.hpp>

#include <algorithm>
#include <map>
#include <tuple>

namespace supersched {

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::ProcessorFail: return "processor_fail";
    case EventKind::BackupActivate: return "backup_activate";
    case EventKind::Release: return "release";
    case EventKind::ModeSwitch: return "mode_switch";
    case EventKind::Discard: return "discard";
    case EventKind::Preempt: return "preempt";
    case EventKind::Dispatch: return "dispatch";
    case EventKind::Complete: return "complete";
    }
    return "?";
}

void sort_canonical(std::vector<Event>& events) {
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.processor.value_or(-1) < b.processor.value_or(-1);
    });
}

std::string Trace::label_of(int task_id) const {
    for (const auto& [id, label] : labels)
        if (id == task_id) return label;
    return "T" + std::to_string(task_id);
}

std::string Trace::job_name(JobId id) const {
    return label_of(id.task_id) + "#" + std::to_string(id.instance);
}

const JobRecord* Trace::find(JobId id) const {
    auto it = std::find_if(jobs.begin(), jobs.end(), [&](const JobRecord& r) { return r.job.id == id; });
    return it == jobs.end() ? nullptr : &*it;
}

std::size_t Trace::completed() const {
    return std::count_if(jobs.begin(), jobs.end(),
                         [](const JobRecord& r) { return r.job.state == JobState::Completed; });
}

std::size_t Trace::discarded() const {
    return std::count_if(jobs.begin(), jobs.end(),
                         [](const JobRecord& r) { return r.job.state == JobState::Discarded; });
}

std::size_t Trace::active() const { return released() - completed() - discarded(); }

std::vector<Segment> execution_segments(const Trace& tr) {
    std::vector<Segment> out;
    std::map<JobId, Segment> open;
    for (const auto& ev : tr.events) {
        if (!ev.job) continue;
        switch (ev.kind) {
        case EventKind::Dispatch:
            open[*ev.job] = Segment{*ev.job, ev.processor.value_or(0), ev.time, ev.time};
            break;
        case EventKind::Preempt:
        case EventKind::Complete:
        case EventKind::Discard:
            if (auto it = open.find(*ev.job); it != open.end()) {
                it->second.end = ev.time;
                out.push_back(it->second);
                open.erase(it);
            }
            break;
        default:
            break;
        }
    }
    for (auto& [id, seg] : open) {
        seg.end = tr.horizon;
        out.push_back(seg);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
    return out;
}

Duration demand_in_interval(const Trace& tr, TimePoint t, TimePoint t1, std::optional<int> processor) {
    std::map<JobId, Duration> executed_before;
    for (const auto& seg : execution_segments(tr)) {
        if (seg.begin >= t) continue;
        executed_before[seg.job] += std::min(seg.end, t) - seg.begin;
    }
    Duration demand = 0;
    for (const auto& rec : tr.jobs) {
        const Job& job = rec.job;
        if (processor && rec.processor != *processor) continue;
        if (job.abs_release > t1 || job.abs_deadline > t1) continue;
        if (job.completion && *job.completion <= t) continue;
        if (rec.discarded_at && *rec.discarded_at <= t) continue;
        auto it = executed_before.find(job.id);
        const Duration done = it == executed_before.end() ? 0 : it->second;
        demand += job.execution_time - done;
    }
    return demand;
}

PartitionCounts count_partition(const Trace& tr, std::array<TimePoint, 3> cuts) {
    const auto [t0, t, t1] = cuts;
    if (!(t0 <= t && t <= t1 && t1 <= tr.horizon) || t0 < 0)
        fail(ErrorCode::InvalidArgument, "count_partition: cuts must satisfy 0 <= t0 <= t <= t1 <= horizon");
    auto segment_of = [&](TimePoint x) -> int {
        if (x < t0) return -1;
        if (x < t) return 0;
        if (x < t1) return 1;
        return 2;
    };
    PartitionCounts pc;
    for (const auto& rec : tr.jobs) {
        if (int s = segment_of(rec.job.abs_release); s >= 0) ++pc.scheduled[s];
        if (rec.job.state == JobState::Completed)
            if (int s = segment_of(*rec.job.completion); s >= 0) ++pc.executed[s];
        if (rec.first_dispatch)
            if (int s = segment_of(*rec.first_dispatch); s >= 0) ++pc.first_dispatched[s];
    }
    return pc;
}

std::vector<std::string> check_trace(const Trace& tr) {
    std::vector<std::string> out;
    auto order = [](const Event& e) { return std::tuple(e.time, e.kind, e.processor.value_or(-1)); };
    for (std::size_t i = 1; i < tr.events.size(); ++i)
        if (order(tr.events[i]) < order(tr.events[i - 1]))
            out.push_back("event " + std::to_string(i) + " is out of canonical order");
    for (const auto& ev : tr.events)
        if (ev.time < 0 || ev.time > tr.horizon)
            out.push_back("event at " + std::to_string(ev.time) + " lies outside [0, horizon]");

    std::map<JobId, int> releases, terminals;
    for (const auto& ev : tr.events) {
        if (!ev.job) continue;
        if (ev.kind == EventKind::Release) ++releases[*ev.job];
        if (ev.kind == EventKind::Complete || ev.kind == EventKind::Discard) ++terminals[*ev.job];
    }
    for (const auto& rec : tr.jobs) {
        const int terms = terminals.count(rec.job.id) ? terminals.at(rec.job.id) : 0;
        if (releases[rec.job.id] != 1) out.push_back(tr.job_name(rec.job.id) + " is not released exactly once");
        if (rec.job.is_terminal() != (terms == 1) || terms > 1)
            out.push_back(tr.job_name(rec.job.id) + " has " + std::to_string(terms) + " terminal events");
        if (rec.job.remaining < 0 || rec.job.remaining > rec.job.execution_time)
            out.push_back(tr.job_name(rec.job.id) + " has remaining work outside [0, e]");
        if ((rec.job.state == JobState::Completed) != (rec.job.remaining == 0))
            out.push_back(tr.job_name(rec.job.id) + " has remaining == 0 without completing");
    }
    if (tr.released() != tr.completed() + tr.discarded() + tr.active())
        out.push_back("released jobs are not conserved");
    if (releases.size() != tr.jobs.size()) out.push_back("release events do not match the job table");

    const auto segments = execution_segments(tr);
    std::map<JobId, Duration> executed;
    std::map<int, std::vector<std::pair<TimePoint, TimePoint>>> busy;
    for (const auto& s : segments) {
        executed[s.job] += s.end - s.begin;
        busy[s.processor].emplace_back(s.begin, s.end);
    }
    for (auto& [p, spans] : busy) {
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first < spans[i - 1].second)
                out.push_back("processor " + std::to_string(p) + " runs two jobs at " + std::to_string(spans[i].first));
    }
    for (const auto& rec : tr.jobs) {
        const Duration done = executed.count(rec.job.id) ? executed.at(rec.job.id) : 0;
        if (done != rec.job.execution_time - rec.job.remaining)
            out.push_back(tr.job_name(rec.job.id) + " executed " + std::to_string(done) + " ticks but consumed " +
                          std::to_string(rec.job.execution_time - rec.job.remaining));
    }
    return out;
}

} // namespace supersched
