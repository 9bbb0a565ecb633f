#include <supersched/dispatch.hpp>

#include <supersched/error.hpp>

#include <tuple>

namespace supersched {

std::string_view to_string(Policy policy) {
    switch (policy) {
    case Policy::Edf: return "edf";
    case Policy::Rm: return "rm";
    case Policy::Super: return "super";
    }
    return "?";
}

std::optional<Policy> parse_policy(std::string_view text) {
    for (auto p : {Policy::Edf, Policy::Rm, Policy::Super})
        if (to_string(p) == text) return p;
    return std::nullopt;
}

bool edf_before(const Job& a, const Job& b) noexcept {
    return std::tie(a.abs_deadline, a.id.task_id, a.id.instance) <
           std::tie(b.abs_deadline, b.id.task_id, b.id.instance);
}

bool rm_before(const Job& a, const Job& b) noexcept {
    return std::tuple(*a.rate, a.id.task_id, a.id.instance) <
           std::tuple(*b.rate, b.id.task_id, b.id.instance);
}

const Job* edf_pick(std::span<const Job* const> ready, TimePoint /*now*/) {
    const Job* best = nullptr;
    for (const Job* job : ready)
        if (!best || edf_before(*job, *best)) best = job;
    return best;
}

const Job* rm_pick(std::span<const Job* const> ready, TimePoint /*now*/) {
    const Job* best = nullptr;
    for (const Job* job : ready) {
        if (!job->rate)
            fail(ErrorCode::InvalidArgument,
                 "rm: task " + std::to_string(job->id.task_id) + " has no period");
        if (!best || rm_before(*job, *best)) best = job;
    }
    return best;
}

} // namespace supersched
