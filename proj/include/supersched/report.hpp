#pragma once

#include <supersched/allocation.hpp>
#include <supersched/metrics.hpp>
#include <supersched/trace.hpp>

#include <filesystem>
#include <string>

namespace supersched {

inline constexpr std::string_view kTraceCsvHeader = "time,kind,job,processor,detail";
inline constexpr std::string_view kMetricsCsvHeader = "policy,released,missed,n_success,n_success_value,late,stable";

/// Trace as CSV, one event per row in canonical order, '\n' line endings.
std::string trace_csv(const Trace& tr);
void write_trace(const Trace& tr, const std::filesystem::path& path);

/// Text chart with one row per task and one column per tick bucket.
/// '#' running, '.' waiting, 's' on the preemption stack, 'X' discarded.
std::string render_gantt(const Trace& tr, int max_columns = 100);

std::string metrics_csv_row(const MetricsReport& m);
std::string render_metrics(const MetricsReport& m);
std::string render_placement(const Placement& pl, const TaskSet& ts);

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace supersched
