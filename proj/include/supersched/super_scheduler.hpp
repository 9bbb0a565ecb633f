#pragma once

#include <supersched/dispatch.hpp>
#include <supersched/model.hpp>
#include <supersched/trace.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace supersched {

enum class SchedulerMode { HybridNormal, SuperCatastrophe };

std::string_view to_string(SchedulerMode mode);

struct SavedContext {
    Job job; // the job's remaining work is the whole saved context
    TimePoint saved_at = 0;
};

/// LIFO store of jobs displaced by a catastrophe job.
class PreemptionStack {
public:
    /// Throws Invariant if the job is already on the stack.
    void push(Job job, TimePoint now);
    SavedContext pop();

    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    bool contains(JobId id) const;
    std::span<const SavedContext> items() const noexcept { return items_; }

private:
    std::vector<SavedContext> items_;
};

/// Victim order for discards: optional before soft before hard, and within a
/// class the latest deadline first.
struct DiscardPolicy {
    bool victim_before(const Job& a, const Job& b) const noexcept;
};

/// Scheduler state of one processor. The hybrid scheduler is plain EDF; the
/// super mode is entered while a catastrophe job is active.
struct ProcessorState {
    int id = 0;
    std::optional<Job> running;
    std::vector<Job> ready;
    SchedulerMode mode = SchedulerMode::HybridNormal;
    PreemptionStack stack;
    // Pruning stays armed after the catastrophe ends until the backlog drains.
    bool recovering = false;
    bool failed = false;
    std::optional<JobId> last_catastrophe;
    std::vector<StackRecord> stack_log;

    bool pruning_armed() const noexcept {
        return mode == SchedulerMode::SuperCatastrophe || recovering;
    }
    bool has_active_catastrophe() const;
};

/// Switches to super mode on a catastrophe release: traces the mode switch,
/// pushes a running non-catastrophe job onto the stack and enqueues the
/// catastrophe job. The following dispatch step runs it.
void on_catastrophe_arrival(ProcessorState& state, Job ct_job, TimePoint now,
                            std::vector<Event>& events);

/// Dispatch order of `ready` in `mode`: in super mode every catastrophe job
/// precedes every other job; EDF order within each class.
std::vector<JobId> alter_priorities(std::span<const Job> ready, SchedulerMode mode);

struct PruneResult {
    std::vector<Job> kept;
    std::vector<Job> discarded; // in victim order
};

/// Splits `ready` into jobs that can still meet their deadline from `now` and
/// those that cannot.
PruneResult prune_infeasible(std::span<const Job> ready, TimePoint now,
                             const DiscardPolicy& policy = {});

/// Discards the infeasible jobs of `state` (ready queue and running job) and
/// traces them. Returns the discarded jobs.
std::vector<Job> prune_state(ProcessorState& state, TimePoint now, std::vector<Event>& events,
                             const DiscardPolicy& policy = {});

/// Leaves super mode once no catastrophe job is active: stacked jobs return to
/// the ready queue with their saved remaining work and an immediate prune
/// runs. Returns the jobs that prune discarded.
std::vector<Job> restore_contexts(ProcessorState& state, TimePoint now, std::vector<Event>& events);

struct DispersionReport {
    double spread = 0.0;
    std::size_t trials = 0;
    std::size_t trials_with_miss = 0;
    double miss_fraction = 0.0;
    double mean_n_success = 0.0;
};

/// Monte-Carlo run of the base set with execution times and releases each
/// perturbed uniformly by up to +/- spread * value. Throws InvalidArgument if
/// spread is outside [0, 1].
DispersionReport dispersion_experiment(const TaskSet& base, double spread, std::size_t trials,
                                       std::uint64_t seed, Policy policy = Policy::Edf);

} // namespace supersched
