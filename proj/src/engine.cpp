#include <supersched/engine.hpp>

#include <supersched/error.hpp>
#include <supersched/random.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace supersched {

namespace {

struct PlannedRelease {
    TimePoint time = 0;
    std::size_t task = 0;
    int instance = 0;
};

std::vector<PlannedRelease> plan_releases(const TaskSet& ts, TimePoint horizon, std::uint64_t seed) {
    std::vector<PlannedRelease> plan;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        const TaskSpec& task = ts.tasks[i];
        switch (task.kind) {
        case TaskKind::Periodic: {
            int k = 0;
            for (TimePoint t = task.release; t < horizon; t += *task.period) plan.push_back({t, i, k++});
            break;
        }
        case TaskKind::Sporadic: {
            // Interarrival uniform in [min, 2 min], one stream per task id.
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(task.id)));
            const Duration gap = *task.min_interarrival;
            int k = 0;
            for (TimePoint t = task.release; t < horizon; t += rng.uniform_int(gap, 2 * gap))
                plan.push_back({t, i, k++});
            break;
        }
        case TaskKind::OneShot:
        case TaskKind::Catastrophe:
            if (task.release < horizon) plan.push_back({task.release, i, 0});
            break;
        }
    }
    std::stable_sort(plan.begin(), plan.end(), [](const PlannedRelease& a, const PlannedRelease& b) {
        return a.time != b.time ? a.time < b.time : a.task < b.task;
    });
    return plan;
}

Job make_job(const TaskSpec& task, TimePoint at, int instance) {
    Job job;
    job.id = {task.id, instance};
    job.kind = task.kind;
    job.criticality = task.criticality;
    job.abs_release = at;
    job.abs_deadline = task.has_absolute_deadline() ? task.deadline : at + task.deadline;
    job.execution_time = task.execution_time;
    job.remaining = task.execution_time;
    job.rate = task.rate();
    job.state = JobState::Ready;
    return job;
}

void check_config(const TaskSet& ts, const SimConfig& cfg) {
    if (auto v = structural_violations(ts); !v.empty()) {
        std::ostringstream os;
        os << "simulate: invalid task set:";
        for (const auto& x : v) os << " [task " << x.task_id << ": " << x.rule << "]";
        fail(ErrorCode::InvalidArgument, os.str());
    }
    if (cfg.horizon <= 0) fail(ErrorCode::InvalidArgument, "simulate: horizon must be positive");
    if (cfg.processors < 1) fail(ErrorCode::InvalidArgument, "simulate: need at least one processor");
    if (cfg.policy == Policy::Rm)
        for (const auto& t : ts.tasks)
            if (!t.rate())
                fail(ErrorCode::InvalidArgument,
                     "simulate: rm needs a period for every task; task " + std::to_string(t.id) + " has none");
    auto in_range = [&](int p) { return p >= 0 && p < cfg.processors; };
    if (!cfg.assignment.empty()) {
        if (cfg.assignment.size() != ts.tasks.size())
            fail(ErrorCode::InvalidArgument, "simulate: assignment size does not match the task list");
        for (int p : cfg.assignment)
            if (!in_range(p)) fail(ErrorCode::InvalidArgument, "simulate: assignment names an unknown processor");
    }
    if (cfg.failure) {
        if (!in_range(cfg.failure->processor))
            fail(ErrorCode::InvalidArgument, "simulate: failure names an unknown processor");
        if (cfg.failure->backup.size() != ts.tasks.size())
            fail(ErrorCode::InvalidArgument, "simulate: backup list size does not match the task list");
        for (int p : cfg.failure->backup)
            if (!in_range(p)) fail(ErrorCode::InvalidArgument, "simulate: backup names an unknown processor");
    }
}

const Job* pick_next(const ProcessorState& state, Policy policy, TimePoint now) {
    std::vector<const Job*> candidates;
    candidates.reserve(state.ready.size() + 1);
    if (state.running) candidates.push_back(&*state.running);
    for (const auto& j : state.ready) candidates.push_back(&j);
    if (candidates.empty()) return nullptr;
    switch (policy) {
    case Policy::Edf: return edf_pick(candidates, now);
    case Policy::Rm: return rm_pick(candidates, now);
    case Policy::Super:
        if (state.mode == SchedulerMode::SuperCatastrophe) {
            std::vector<const Job*> catastrophes;
            for (const Job* j : candidates)
                if (j->is_catastrophe()) catastrophes.push_back(j);
            if (!catastrophes.empty()) return edf_pick(catastrophes, now);
        }
        return edf_pick(candidates, now);
    }
    return nullptr;
}

} // namespace

std::vector<Job> reschedule(ProcessorState& state, Policy policy, TimePoint now, std::vector<Event>& events) {
    std::vector<Job> discarded;
    if (state.failed) return discarded;
    if (policy == Policy::Super) {
        if (state.mode == SchedulerMode::SuperCatastrophe && state.has_active_catastrophe())
            discarded = prune_state(state, now, events);
        // the prune above may have dropped the last catastrophe job
        if (state.mode == SchedulerMode::SuperCatastrophe && !state.has_active_catastrophe()) {
            auto more = restore_contexts(state, now, events);
            discarded.insert(discarded.end(), more.begin(), more.end());
        } else if (state.mode == SchedulerMode::HybridNormal && state.pruning_armed()) {
            discarded = prune_state(state, now, events);
        }
    }

    const Job* next = pick_next(state, policy, now);
    if (next && !(state.running && &*state.running == next)) {
        const JobId chosen = next->id;
        if (state.running) {
            Job displaced = std::move(*state.running);
            state.running.reset();
            displaced.state = JobState::Preempted;
            events.push_back({now, EventKind::Preempt, displaced.id, state.id, "preempted"});
            state.ready.push_back(std::move(displaced));
        }
        auto it = std::find_if(state.ready.begin(), state.ready.end(),
                               [&](const Job& j) { return j.id == chosen; });
        Job job = std::move(*it);
        state.ready.erase(it);
        const bool fresh = job.remaining == job.execution_time;
        job.state = JobState::Running;
        events.push_back({now, EventKind::Dispatch, job.id, state.id, fresh ? "start" : "resume"});
        state.running = std::move(job);
    }

    if (state.recovering && state.mode == SchedulerMode::HybridNormal && !state.running && state.ready.empty())
        state.recovering = false;
    return discarded;
}

Trace simulate(const TaskSet& ts, Policy policy, int processors, TimePoint horizon, std::uint64_t seed) {
    SimConfig cfg;
    cfg.policy = policy;
    cfg.processors = processors;
    cfg.horizon = horizon;
    cfg.seed = seed;
    return simulate(ts, cfg);
}

Trace simulate(const TaskSet& ts, const SimConfig& cfg) {
    check_config(ts, cfg);

    Trace tr;
    tr.policy = std::string(to_string(cfg.policy));
    tr.seed = cfg.seed;
    tr.horizon = cfg.horizon;
    tr.processors = cfg.processors;
    for (const auto& t : ts.tasks) tr.labels.emplace_back(t.id, t.label.empty() ? "T" + std::to_string(t.id) : t.label);

    std::vector<int> proc_of = cfg.assignment;
    if (proc_of.empty())
        for (std::size_t i = 0; i < ts.tasks.size(); ++i) proc_of.push_back(static_cast<int>(i) % cfg.processors);

    std::vector<ProcessorState> procs(static_cast<std::size_t>(cfg.processors));
    for (int p = 0; p < cfg.processors; ++p) procs[p].id = p;

    const auto plan = plan_releases(ts, cfg.horizon, cfg.seed);
    std::size_t cursor = 0;

    std::map<JobId, JobRecord> records;
    std::vector<JobId> release_order;
    std::vector<bool> awaiting_backup(ts.tasks.size(), false);
    bool failure_applied = false;
    std::vector<Event> events;

    auto finish = [&](const Job& job, TimePoint at, const char* reason) {
        JobRecord& rec = records.at(job.id);
        rec.job = job;
        if (job.state == JobState::Discarded) {
            rec.discarded_at = at;
            rec.discard_reason = reason;
        }
    };

    TimePoint now = 0;
    while (true) {
        for (auto& ps : procs) {
            if (ps.running && ps.running->remaining == 0) {
                Job job = std::move(*ps.running);
                ps.running.reset();
                job.state = JobState::Completed;
                job.completion = now;
                events.push_back({now, EventKind::Complete, job.id, ps.id, job.met_deadline() ? "met" : "late"});
                finish(job, now, "");
            }
        }
        if (now >= cfg.horizon) break;

        if (cfg.failure && !failure_applied && now == cfg.failure->time) {
            failure_applied = true;
            ProcessorState& ps = procs[cfg.failure->processor];
            ps.failed = true;
            events.push_back({now, EventKind::ProcessorFail, std::nullopt, ps.id, "failed"});
            std::vector<Job> lost = std::move(ps.ready);
            ps.ready.clear();
            if (ps.running) lost.push_back(std::move(*ps.running));
            ps.running.reset();
            while (!ps.stack.empty()) lost.push_back(ps.stack.pop().job);
            ps.mode = SchedulerMode::HybridNormal;
            ps.recovering = false;
            for (auto& job : lost) {
                job.state = JobState::Discarded;
                events.push_back({now, EventKind::Discard, job.id, ps.id, "processor_failed"});
                finish(job, now, "processor_failed");
            }
            for (std::size_t i = 0; i < ts.tasks.size(); ++i)
                if (proc_of[i] == ps.id) awaiting_backup[i] = true;
        }

        std::vector<std::vector<Job>> arrivals(procs.size());
        for (; cursor < plan.size() && plan[cursor].time == now; ++cursor) {
            const auto& rel = plan[cursor];
            const TaskSpec& task = ts.tasks[rel.task];
            Job job = make_job(task, now, rel.instance);
            if (awaiting_backup[rel.task]) {
                awaiting_backup[rel.task] = false;
                const int from = proc_of[rel.task];
                proc_of[rel.task] = cfg.failure->backup[rel.task];
                events.push_back({now, EventKind::BackupActivate, job.id, proc_of[rel.task],
                                  "primary=" + std::to_string(from)});
            }
            const int p = proc_of[rel.task];
            events.push_back({now, EventKind::Release, job.id, p, "deadline=" + std::to_string(job.abs_deadline)});
            records[job.id] = JobRecord{job, p, std::nullopt, std::nullopt, ""};
            release_order.push_back(job.id);
            if (cfg.policy == Policy::Super && job.is_catastrophe()) arrivals[p].push_back(std::move(job));
            else procs[p].ready.push_back(std::move(job));
        }
        for (auto& ps : procs)
            for (auto& ct : arrivals[ps.id]) on_catastrophe_arrival(ps, std::move(ct), now, events);

        for (auto& ps : procs)
            for (const auto& job : reschedule(ps, cfg.policy, now, events)) finish(job, now, "infeasible");

        TimePoint next = cfg.horizon;
        if (cursor < plan.size()) next = std::min(next, plan[cursor].time);
        if (cfg.failure && !failure_applied && cfg.failure->time > now) next = std::min(next, cfg.failure->time);
        for (const auto& ps : procs)
            if (ps.running) next = std::min(next, now + ps.running->remaining);
        for (auto& ps : procs)
            if (ps.running) ps.running->remaining -= next - now;
        now = next;
    }

    // Jobs still active at the horizon keep their last state.
    for (auto& ps : procs) {
        if (ps.running) records.at(ps.running->id).job = *ps.running;
        for (const auto& j : ps.ready) records.at(j.id).job = j;
        for (const auto& c : ps.stack.items()) records.at(c.job.id).job = c.job;
        tr.stack_log.insert(tr.stack_log.end(), ps.stack_log.begin(), ps.stack_log.end());
    }
    for (const auto& ev : events)
        if (ev.kind == EventKind::Dispatch && ev.job) {
            auto& rec = records.at(*ev.job);
            if (!rec.first_dispatch) rec.first_dispatch = ev.time;
        }
    tr.jobs.reserve(release_order.size());
    for (const auto& id : release_order) tr.jobs.push_back(records.at(id));
    std::stable_sort(tr.stack_log.begin(), tr.stack_log.end(),
                     [](const StackRecord& a, const StackRecord& b) { return a.saved_at < b.saved_at; });
    sort_canonical(events);
    tr.events = std::move(events);
    return tr;
}

TimePoint default_horizon(const TaskSet& ts) {
    if (ts.empty()) return 1;
    TimePoint last_release = 0;
    bool all_periodic = true;
    for (const auto& t : ts.tasks) {
        last_release = std::max(last_release, t.release);
        all_periodic = all_periodic && t.kind == TaskKind::Periodic;
    }
    if (all_periodic) {
        try {
            return last_release + hyperperiod(ts);
        } catch (const Error&) {
        }
    }
    TimePoint end = last_release;
    Duration work = 0;
    for (const auto& t : ts.tasks) {
        end = std::max(end, t.has_absolute_deadline() ? t.deadline : t.release + t.deadline);
        work += t.execution_time;
    }
    return std::max<TimePoint>(1, end + work);
}

} // namespace supersched
