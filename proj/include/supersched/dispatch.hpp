#pragma once

#include <supersched/model.hpp>

#include <optional>
#include <span>
#include <string_view>

namespace supersched {

enum class Policy { Edf, Rm, Super };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

/// Strict EDF order: earlier absolute deadline, then lower task id, then lower instance.
bool edf_before(const Job& a, const Job& b) noexcept;

/// Rate-monotonic order; both jobs must have a rate.
bool rm_before(const Job& a, const Job& b) noexcept;

/// Earliest absolute deadline among `ready`, or nullptr when empty.
const Job* edf_pick(std::span<const Job* const> ready, TimePoint now);

/// Shortest period (or minimum interarrival) among `ready`, or nullptr when
/// empty. Throws InvalidArgument if a job's task has no rate.
const Job* rm_pick(std::span<const Job* const> ready, TimePoint now);

} // namespace supersched
