#include <supersched/taskgen.hpp>

#include <supersched/engine.hpp>
#include <supersched/error.hpp>
#include <supersched/metrics.hpp>
#include <supersched/random.hpp>

#include <algorithm>
#include <cmath>

namespace supersched {

TaskSet generate(const GenSpec& spec) {
    if (spec.n < 5) fail(ErrorCode::InvalidArgument, "generate: need more than 4 tasks");
    if (spec.total_utilization <= 0 || spec.total_utilization > 1)
        fail(ErrorCode::InvalidArgument, "generate: total utilization must lie in (0, 1]");
    if (spec.period_pool.empty()) fail(ErrorCode::InvalidArgument, "generate: period pool is empty");
    for (Duration p : spec.period_pool)
        if (p <= 0) fail(ErrorCode::InvalidArgument, "generate: periods must be positive");

    Rng rng(spec.seed);
    const double target = boost::rational_cast<double>(spec.total_utilization);

    // Stick-breaking (UUniFast) split of the target utilization.
    std::vector<double> shares(static_cast<std::size_t>(spec.n));
    double rest = target;
    for (int i = 0; i < spec.n - 1; ++i) {
        const double next = rest * std::pow(rng.uniform01(), 1.0 / static_cast<double>(spec.n - 1 - i));
        shares[i] = rest - next;
        rest = next;
    }
    shares.back() = rest;
    double sum = 0.0;
    for (double s : shares) sum += s;
    for (double& s : shares) s = sum > 0.0 ? s * target / sum : target / spec.n;

    TaskSet ts;
    ts.name = "generated-n" + std::to_string(spec.n) + "-seed" + std::to_string(spec.seed);
    for (int i = 0; i < spec.n; ++i) {
        const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(spec.period_pool.size()) - 1);
        const Duration period = spec.period_pool[static_cast<std::size_t>(pick)];
        TaskSpec t;
        t.id = i + 1;
        t.label = "T" + std::to_string(i + 1);
        t.kind = TaskKind::Periodic;
        t.criticality = Criticality::Hard;
        t.period = period;
        t.deadline = period;
        t.execution_time = std::max<Duration>(1, std::llround(shares[i] * static_cast<double>(period)));
        t.execution_time = std::min(t.execution_time, period);
        t.base_priority = i + 1;
        ts.tasks.push_back(std::move(t));
    }

    while (utilization(ts) > 1) {
        auto largest = std::max_element(ts.tasks.begin(), ts.tasks.end(), [](const TaskSpec& a, const TaskSpec& b) {
            return a.execution_time < b.execution_time;
        });
        if (largest->execution_time <= 1)
            fail(ErrorCode::InvalidArgument, "generate: periods too short for one tick per task");
        --largest->execution_time;
    }
    return ts;
}

bool verify_edf_feasible(const TaskSet& ts, Duration simulation_limit) {
    if (utilization(ts) > 1) return false;
    Duration h = 0;
    try {
        h = hyperperiod(ts);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Overflow) return true;
        throw;
    }
    if (h > simulation_limit || ts.empty()) return true;
    TimePoint last_release = 0;
    for (const auto& t : ts.tasks) last_release = std::max(last_release, t.release);
    const Trace tr = simulate(ts, Policy::Edf, 1, last_release + h);
    return compute_metrics(tr).n_missed == 0;
}

TaskSet inject_catastrophe(const TaskSet& ts, std::optional<CatastropheParams> params, std::uint64_t seed) {
    CatastropheParams p;
    if (params) {
        p = *params;
    } else {
        Rng rng(seed);
        Duration max_e = 1;
        for (const auto& t : ts.tasks) max_e = std::max(max_e, t.execution_time);
        TaskSet periodic;
        for (const auto& t : ts.tasks)
            if (t.kind == TaskKind::Periodic) periodic.tasks.push_back(t);
        Duration h = 0;
        try {
            h = periodic.empty() ? 0 : hyperperiod(periodic);
        } catch (const Error&) {
            h = 0;
            for (const auto& t : periodic.tasks) h = std::max(h, *t.period);
        }
        p.release = rng.uniform_int(0, h / 2);
        p.execution_time = rng.uniform_int(max_e, 2 * max_e);
        p.deadline = p.release + 2 * p.execution_time;
    }
    if (p.execution_time <= 0) fail(ErrorCode::InvalidArgument, "inject_catastrophe: execution time must be positive");

    TaskSpec ct;
    int max_id = 0;
    int existing = 0;
    for (const auto& t : ts.tasks) {
        max_id = std::max(max_id, t.id);
        if (t.kind == TaskKind::Catastrophe) ++existing;
    }
    ct.id = max_id + 1;
    ct.label = existing == 0 ? "CT" : "CT" + std::to_string(existing + 1);
    ct.kind = TaskKind::Catastrophe;
    ct.criticality = Criticality::Hard;
    ct.execution_time = p.execution_time;
    ct.release = p.release;
    ct.deadline = p.deadline;
    if (p.release < 0 || !per_task_feasible(ct))
        fail(ErrorCode::InvalidArgument, "inject_catastrophe: release + execution time exceeds the deadline");

    TaskSet out = ts;
    out.tasks.push_back(std::move(ct));
    return out;
}

} // namespace supersched
