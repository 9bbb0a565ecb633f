#include <supersched/super_scheduler.hpp>

#include <supersched/engine.hpp>
#include <supersched/error.hpp>
#include <supersched/metrics.hpp>
#include <supersched/random.hpp>

#include <algorithm>
#include <cmath>

namespace supersched {

std::string_view to_string(SchedulerMode mode) {
    return mode == SchedulerMode::SuperCatastrophe ? "super_catastrophe" : "hybrid_normal";
}

void PreemptionStack::push(Job job, TimePoint now) {
    if (contains(job.id)) fail(ErrorCode::Invariant, "preemption stack: job pushed twice");
    items_.push_back({std::move(job), now});
}

SavedContext PreemptionStack::pop() {
    if (items_.empty()) fail(ErrorCode::Invariant, "preemption stack: pop on empty stack");
    SavedContext top = std::move(items_.back());
    items_.pop_back();
    return top;
}

bool PreemptionStack::contains(JobId id) const {
    return std::any_of(items_.begin(), items_.end(),
                       [&](const SavedContext& c) { return c.job.id == id; });
}

namespace {

int sacrifice_rank(Criticality c) {
    switch (c) {
    case Criticality::Optional: return 0;
    case Criticality::Soft: return 1;
    case Criticality::Hard: return 2;
    }
    return 2;
}

} // namespace

bool DiscardPolicy::victim_before(const Job& a, const Job& b) const noexcept {
    const int ra = sacrifice_rank(a.criticality);
    const int rb = sacrifice_rank(b.criticality);
    if (ra != rb) return ra < rb;
    if (a.abs_deadline != b.abs_deadline) return a.abs_deadline > b.abs_deadline;
    return b.id < a.id;
}

bool ProcessorState::has_active_catastrophe() const {
    if (running && running->is_catastrophe()) return true;
    return std::any_of(ready.begin(), ready.end(), [](const Job& j) { return j.is_catastrophe(); });
}

void on_catastrophe_arrival(ProcessorState& state, Job ct_job, TimePoint now, std::vector<Event>& events) {
    if (state.mode == SchedulerMode::HybridNormal) {
        state.mode = SchedulerMode::SuperCatastrophe;
        state.recovering = false;
        events.push_back({now, EventKind::ModeSwitch, ct_job.id, state.id,
                          std::string(to_string(SchedulerMode::SuperCatastrophe))});
    }
    if (state.running && !state.running->is_catastrophe()) {
        Job displaced = std::move(*state.running);
        state.running.reset();
        displaced.state = JobState::Preempted;
        events.push_back({now, EventKind::Preempt, displaced.id, state.id, "stacked"});
        state.stack_log.push_back({displaced.id, state.id, displaced.remaining, now, {}, {}});
        state.stack.push(std::move(displaced), now);
    }
    state.last_catastrophe = ct_job.id;
    ct_job.state = JobState::Ready;
    state.ready.push_back(std::move(ct_job));
}

std::vector<JobId> alter_priorities(std::span<const Job> ready, SchedulerMode mode) {
    std::vector<const Job*> order;
    order.reserve(ready.size());
    for (const auto& j : ready) order.push_back(&j);
    const bool dominant = mode == SchedulerMode::SuperCatastrophe;
    std::sort(order.begin(), order.end(), [dominant](const Job* a, const Job* b) {
        if (dominant && a->is_catastrophe() != b->is_catastrophe()) return a->is_catastrophe();
        return edf_before(*a, *b);
    });
    std::vector<JobId> ids;
    ids.reserve(order.size());
    for (const Job* j : order) ids.push_back(j->id);
    return ids;
}

PruneResult prune_infeasible(std::span<const Job> ready, TimePoint now, const DiscardPolicy& policy) {
    PruneResult out;
    for (const auto& job : ready) {
        if (job.feasible_at(now)) out.kept.push_back(job);
        else out.discarded.push_back(job);
    }
    std::stable_sort(out.discarded.begin(), out.discarded.end(),
                     [&](const Job& a, const Job& b) { return policy.victim_before(a, b); });
    return out;
}

std::vector<Job> prune_state(ProcessorState& state, TimePoint now, std::vector<Event>& events,
                             const DiscardPolicy& policy) {
    std::vector<Job> candidates = std::move(state.ready);
    state.ready.clear();
    const bool had_running = state.running.has_value();
    if (had_running) {
        candidates.push_back(std::move(*state.running));
        state.running.reset();
    }
    auto result = prune_infeasible(candidates, now, policy);
    for (auto& job : result.kept) {
        if (had_running && job.state == JobState::Running) state.running = std::move(job);
        else state.ready.push_back(std::move(job));
    }
    for (auto& job : result.discarded) {
        job.state = JobState::Discarded;
        events.push_back({now, EventKind::Discard, job.id, state.id, "infeasible"});
    }
    return std::move(result.discarded);
}

std::vector<Job> restore_contexts(ProcessorState& state, TimePoint now, std::vector<Event>& events) {
    if (state.has_active_catastrophe())
        fail(ErrorCode::Invariant, "restore_contexts: a catastrophe job is still active");
    if (state.mode == SchedulerMode::SuperCatastrophe) {
        std::optional<JobId> cause = state.last_catastrophe;
        events.push_back({now, EventKind::ModeSwitch, cause, state.id,
                          std::string(to_string(SchedulerMode::HybridNormal))});
    }
    state.mode = SchedulerMode::HybridNormal;
    while (!state.stack.empty()) {
        SavedContext ctx = state.stack.pop();
        for (auto it = state.stack_log.rbegin(); it != state.stack_log.rend(); ++it) {
            if (it->job == ctx.job.id && !it->restored_at) {
                it->restored_at = now;
                it->restored_remaining = ctx.job.remaining;
                break;
            }
        }
        state.ready.push_back(std::move(ctx.job));
    }
    state.recovering = true;
    return prune_state(state, now, events);
}

DispersionReport dispersion_experiment(const TaskSet& base, double spread, std::size_t trials,
                                       std::uint64_t seed, Policy policy) {
    if (!(spread >= 0.0 && spread <= 1.0))
        fail(ErrorCode::InvalidArgument, "dispersion_experiment: spread must lie in [0, 1]");
    DispersionReport report;
    report.spread = spread;
    report.trials = trials;
    if (trials == 0) return report;

    double success_sum = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, trial));
        TaskSet perturbed = base;
        for (auto& task : perturbed.tasks) {
            const double de = rng.uniform_real(-spread, spread) * static_cast<double>(task.execution_time);
            const double dr = rng.uniform_real(-spread, spread) * static_cast<double>(task.release);
            task.execution_time = std::max<Duration>(1, task.execution_time + std::llround(de));
            task.release = std::max<TimePoint>(0, task.release + std::llround(dr));
        }
        const Trace tr = simulate(perturbed, policy, 1, default_horizon(perturbed), seed);
        const MetricsReport m = compute_metrics(tr);
        if (m.n_missed > 0) ++report.trials_with_miss;
        success_sum = success_sum + boost::rational_cast<double>(m.n_success);
    }
    report.miss_fraction = static_cast<double>(report.trials_with_miss) / static_cast<double>(trials);
    report.mean_n_success = success_sum / static_cast<double>(trials);
    return report;
}

} // namespace supersched
