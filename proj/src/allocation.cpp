#include <supersched/allocation.hpp>

#include <supersched/engine.hpp>
#include <supersched/error.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace supersched {

namespace {

Rational task_utilization(const TaskSpec& t) {
    auto rate = t.rate();
    if (!rate || *rate <= 0)
        fail(ErrorCode::InvalidArgument, "allocation: task " + std::to_string(t.id) + " has no period");
    return Rational(t.execution_time, *rate);
}

} // namespace

const Assignment* Placement::find(int task_id) const {
    auto it = std::find_if(assignments.begin(), assignments.end(),
                           [&](const Assignment& a) { return a.task_id == task_id; });
    return it == assignments.end() ? nullptr : &*it;
}

Placement allocate_primary_backup(const TaskSet& ts) {
    std::vector<Rational> util;
    for (const auto& t : ts.tasks) {
        util.push_back(task_utilization(t));
        if (t.deadline != *t.rate())
            fail(ErrorCode::InvalidArgument,
                 "allocation: task " + std::to_string(t.id) + " must have its deadline equal to its period");
        if (util.back() > 1)
            fail(ErrorCode::InvalidArgument,
                 "allocation: task " + std::to_string(t.id) + " has e > P and fits on no processor");
    }
    std::vector<std::size_t> order(ts.tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return util[a] > util[b]; });

    Placement pl;
    pl.assignments.resize(ts.tasks.size());
    auto first_fit = [&](const Rational& u, int exclude) {
        for (int p = 0; p < pl.processors; ++p)
            if (p != exclude && pl.load[p] + u <= 1) return p;
        pl.load.emplace_back(0);
        return pl.processors++;
    };
    for (std::size_t i : order) {
        const Rational& u = util[i];
        const int primary = first_fit(u, -1);
        pl.load[primary] += u;
        const int backup = first_fit(u, primary);
        pl.load[backup] += u;
        pl.assignments[i] = {ts.tasks[i].id, primary, backup};
    }
    return pl;
}

int min_processor_lower_bound(const TaskSet& ts) {
    if (ts.empty()) return 0;
    Rational total{0};
    for (const auto& t : ts.tasks) total += task_utilization(t);
    const Rational doubled = total * 2;
    const auto ceiling = (doubled.numerator() + doubled.denominator() - 1) / doubled.denominator();
    return static_cast<int>(std::max<std::int64_t>(ceiling, 2));
}

std::vector<Violation> validate_placement(const Placement& pl, const TaskSet& ts) {
    std::vector<Violation> out;
    std::vector<Rational> load(static_cast<std::size_t>(std::max(pl.processors, 0)), Rational{0});
    std::set<int> placed;
    for (const auto& a : pl.assignments) {
        if (!ts.find(a.task_id)) out.push_back({a.task_id, "unknown_task", "placement names a task not in the set"});
        if (!placed.insert(a.task_id).second) out.push_back({a.task_id, "duplicate", "task placed more than once"});
        if (a.primary == a.backup) out.push_back({a.task_id, "same_processor", "primary and backup share a processor"});
        for (int p : {a.primary, a.backup})
            if (p < 0 || p >= pl.processors) out.push_back({a.task_id, "processor_range", "processor id out of range"});
    }
    for (const auto& t : ts.tasks) {
        const Assignment* a = pl.find(t.id);
        if (!a) {
            out.push_back({t.id, "unplaced", "task has no placement"});
            continue;
        }
        auto rate = t.rate();
        if (!rate || *rate <= 0) {
            out.push_back({t.id, "period", "placed task has no period"});
            continue;
        }
        const Rational u(t.execution_time, *rate);
        for (int p : {a->primary, a->backup})
            if (p >= 0 && p < pl.processors) load[p] += u;
    }
    for (int p = 0; p < pl.processors; ++p) {
        if (load[p] > 1) out.push_back({-1, "overload", "processor " + std::to_string(p) + " utilization exceeds 1"});
        if (static_cast<std::size_t>(p) < pl.load.size() && pl.load[p] != load[p])
            out.push_back({-1, "load_mismatch", "recorded load of processor " + std::to_string(p) + " is wrong"});
    }
    if (pl.load.size() != load.size()) out.push_back({-1, "load_mismatch", "load table size differs from processor count"});
    return out;
}

Trace inject_failure(const Placement& pl, const TaskSet& ts, int failed_proc, TimePoint t_fail, TimePoint horizon) {
    if (failed_proc < 0 || failed_proc >= pl.processors)
        fail(ErrorCode::InvalidArgument, "inject_failure: processor " + std::to_string(failed_proc) + " does not exist");
    SimConfig cfg;
    cfg.policy = Policy::Edf;
    cfg.processors = pl.processors;
    cfg.horizon = horizon;
    FailurePlan plan{failed_proc, t_fail, {}};
    for (const auto& t : ts.tasks) {
        const Assignment* a = pl.find(t.id);
        if (!a) fail(ErrorCode::InvalidArgument, "inject_failure: task " + std::to_string(t.id) + " is not placed");
        cfg.assignment.push_back(a->primary);
        plan.backup.push_back(a->backup);
    }
    if (t_fail < horizon) cfg.failure = std::move(plan);
    return simulate(ts, cfg);
}

} // namespace supersched
