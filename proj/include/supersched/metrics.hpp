#pragma once

#include <supersched/model.hpp>
#include <supersched/trace.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace supersched {

inline const Rational kStabilityThreshold{7, 10};
inline constexpr Duration kMissWindow = 25;

struct WindowStat {
    std::size_t index = 0;
    TimePoint begin = 0;
    std::size_t misses = 0;
    double running_average = 0.0; // misses per window over windows 0..index
};

struct MetricsReport {
    std::string policy;
    std::size_t released = 0;  // N
    std::size_t n_missed = 0;  // n_M
    Rational n_success{1};
    std::size_t n_late = 0;
    bool stable = true;
    std::vector<WindowStat> windows;
};

/// Hard or soft job that completed late, was discarded, or is still active at
/// the horizon past its deadline. Optional jobs never count.
bool counts_as_miss(const JobRecord& rec, TimePoint horizon);

/// (N - n_M) / N, or 1 for a trace without jobs.
Rational n_success(const Trace& tr);

/// Hard and soft jobs that ran to completion after their deadline. Discarded
/// jobs are not late; optional ones are never counted, as in n_M.
std::size_t n_late(const Trace& tr);

/// Miss events (late completions and non-optional discards) per half-open
/// window [k*w, (k+1)*w) over [0, horizon). Events at the horizon land in the
/// last window.
std::vector<WindowStat> avg_miss_per_window(const Trace& tr, Duration window = kMissWindow);

bool stability_check(const Rational& rate);

MetricsReport compute_metrics(const Trace& tr, Duration window = kMissWindow);

/// Degree-4 polynomial, coefficients highest degree first.
struct PolyModel {
    std::array<double, 5> coefficients{};
};

/// Miss curve reported for the super scheduler.
inline constexpr PolyModel kReportedMissCurve{{-0.0001, 0.0044, -0.0558, 0.4663, -0.2284}};

double poly_eval(const PolyModel& m, double x);

struct PolyFit {
    PolyModel model;
    double rms_residual = 0.0;
    double max_abs_residual = 0.0;
};

/// Least-squares fit of a polynomial of `degree` (at most 4) through normal
/// equations solved with partial pivoting. Throws InvalidArgument when fewer
/// than degree + 1 distinct abscissae are given.
PolyFit poly_fit(std::span<const std::pair<double, double>> points, int degree = 4);

} // namespace supersched
