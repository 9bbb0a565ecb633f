#include <supersched/metrics.hpp>

#include <supersched/error.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace supersched {

bool counts_as_miss(const JobRecord& rec, TimePoint horizon) {
    const Job& job = rec.job;
    if (job.criticality == Criticality::Optional) return false;
    switch (job.state) {
    case JobState::Completed: return !job.met_deadline();
    case JobState::Discarded: return true;
    default: return job.abs_deadline < horizon;
    }
}

Rational n_success(const Trace& tr) {
    const auto n = static_cast<std::int64_t>(tr.released());
    if (n == 0) return Rational{1};
    const auto missed = std::count_if(tr.jobs.begin(), tr.jobs.end(),
                                      [&](const JobRecord& r) { return counts_as_miss(r, tr.horizon); });
    return Rational(n - missed, n);
}

std::size_t n_late(const Trace& tr) {
    return std::count_if(tr.jobs.begin(), tr.jobs.end(), [](const JobRecord& r) {
        return r.completed_late() && r.job.criticality != Criticality::Optional;
    });
}

std::vector<WindowStat> avg_miss_per_window(const Trace& tr, Duration window) {
    if (window <= 0) fail(ErrorCode::InvalidArgument, "avg_miss_per_window: window must be positive");
    const auto count = static_cast<std::size_t>(std::max<Tick>(1, (tr.horizon + window - 1) / window));
    std::vector<WindowStat> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k].index = k;
        out[k].begin = static_cast<TimePoint>(k) * window;
    }
    auto bucket = [&](TimePoint t) {
        return std::min(count - 1, static_cast<std::size_t>(std::max<Tick>(0, t) / window));
    };
    for (const auto& rec : tr.jobs) {
        if (rec.job.criticality == Criticality::Optional) continue;
        if (rec.completed_late()) ++out[bucket(*rec.job.completion)].misses;
        else if (rec.job.state == JobState::Discarded) ++out[bucket(*rec.discarded_at)].misses;
    }
    std::size_t cumulative = 0;
    for (auto& w : out) {
        cumulative += w.misses;
        w.running_average = static_cast<double>(cumulative) / static_cast<double>(w.index + 1);
    }
    return out;
}

bool stability_check(const Rational& rate) { return rate >= kStabilityThreshold; }

MetricsReport compute_metrics(const Trace& tr, Duration window) {
    MetricsReport m;
    m.policy = tr.policy;
    m.released = tr.released();
    m.n_missed = static_cast<std::size_t>(std::count_if(
        tr.jobs.begin(), tr.jobs.end(), [&](const JobRecord& r) { return counts_as_miss(r, tr.horizon); }));
    m.n_success = n_success(tr);
    m.n_late = n_late(tr);
    m.stable = stability_check(m.n_success);
    m.windows = avg_miss_per_window(tr, window);
    return m;
}

double poly_eval(const PolyModel& m, double x) {
    double acc = 0.0;
    for (double c : m.coefficients) acc = acc * x + c;
    return acc;
}

namespace {

// Solves a * x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12)
            fail(ErrorCode::InvalidArgument, "poly_fit: singular normal equations");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

} // namespace

PolyFit poly_fit(std::span<const std::pair<double, double>> points, int degree) {
    if (degree < 0 || degree > 4) fail(ErrorCode::InvalidArgument, "poly_fit: degree must be in [0, 4]");
    std::set<double> distinct;
    for (const auto& [x, y] : points) distinct.insert(x);
    const auto terms = static_cast<std::size_t>(degree) + 1;
    if (distinct.size() < terms)
        fail(ErrorCode::InvalidArgument, "poly_fit: need at least " + std::to_string(terms) +
                                             " distinct x values, got " + std::to_string(distinct.size()));

    // Fit in a centred and scaled variable u = (x - c) / s to keep the normal
    // equations well conditioned, then expand back to powers of x.
    double c = 0.0;
    for (const auto& p : points) c += p.first;
    c /= static_cast<double>(points.size());
    double s = 0.0;
    for (const auto& p : points) s = std::max(s, std::abs(p.first - c));
    if (s == 0.0) s = 1.0;

    std::vector<std::vector<double>> ata(terms, std::vector<double>(terms, 0.0));
    std::vector<double> aty(terms, 0.0);
    for (const auto& [x, y] : points) {
        const double u = (x - c) / s;
        std::vector<double> pow(terms, 1.0);
        for (std::size_t k = 1; k < terms; ++k) pow[k] = pow[k - 1] * u;
        for (std::size_t i = 0; i < terms; ++i) {
            aty[i] += pow[i] * y;
            for (std::size_t j = 0; j < terms; ++j) ata[i][j] += pow[i] * pow[j];
        }
    }
    const std::vector<double> a = solve(std::move(ata), std::move(aty));

    // p(x) = sum_k a_k s^-k (x - c)^k
    std::vector<double> ascending(terms, 0.0);
    for (std::size_t k = 0; k < terms; ++k) {
        const double scale = a[k] / std::pow(s, static_cast<double>(k));
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            ascending[j] += scale * binom * std::pow(-c, static_cast<double>(k - j));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }
    PolyFit fit;
    for (std::size_t j = 0; j < terms; ++j) fit.model.coefficients[4 - j] = ascending[j];

    double sq = 0.0;
    for (const auto& [x, y] : points) {
        const double r = poly_eval(fit.model, x) - y;
        sq += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    fit.rms_residual = std::sqrt(sq / static_cast<double>(points.size()));
    return fit;
}

} // namespace supersched
