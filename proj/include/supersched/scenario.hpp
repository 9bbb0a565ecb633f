#pragma once

#include <supersched/allocation.hpp>
#include <supersched/dispatch.hpp>
#include <supersched/model.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace supersched {

/// A runnable scenario. Catastrophe tasks live in the task list with kind
/// catastrophe; the file format also accepts them in a separate list.
struct Scenario {
    std::string name;
    int processors = 1;
    Policy policy = Policy::Edf;
    TimePoint horizon = 0;
    std::uint64_t seed = 0;
    TaskSet tasks;
    std::optional<Placement> placement;

    bool operator==(const Scenario&) const = default;
};

/// Parses the JSON scenario format. Throws Parse with the line and column of
/// syntax errors, or the path of the offending entry for field errors, and
/// Invariant when the loaded scenario violates a task set or placement rule.
Scenario parse_scenario_text(std::string_view text, const std::string& source = "<scenario>");
Scenario parse_scenario(const std::filesystem::path& path);

std::string write_scenario_text(const Scenario& sc);
void save_scenario(const Scenario& sc, const std::filesystem::path& path);

/// Four hard one-shot tasks and one catastrophe task on one processor.
Scenario medium_scenario();
/// Ten hard one-shot tasks and one catastrophe task on one processor.
Scenario large_scenario();

/// The scenario with its catastrophe tasks removed.
Scenario without_catastrophes(Scenario sc);

} // namespace supersched
