#include <supersched/report.hpp>

#include <supersched/error.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace supersched {

std::string trace_csv(const Trace& tr) {
    std::ostringstream os;
    os << kTraceCsvHeader << '\n';
    for (const auto& ev : tr.events) {
        os << ev.time << ',' << to_string(ev.kind) << ',';
        if (ev.job) os << tr.job_name(*ev.job);
        os << ',';
        if (ev.processor) os << *ev.processor;
        os << ',' << ev.reason << '\n';
    }
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

void write_trace(const Trace& tr, const std::filesystem::path& path) { write_text_file(path, trace_csv(tr)); }

namespace {

Duration nice_bucket(TimePoint horizon, int max_columns) {
    const Duration need = (horizon + max_columns - 1) / max_columns;
    for (Duration scale = 1;; scale *= 10)
        for (Duration step : {1, 2, 5})
            if (step * scale >= need) return step * scale;
}

// Higher value wins when several states share a bucket.
enum Glyph : char { kIdle = ' ', kWait = '.', kStacked = 's', kDiscard = 'X', kRun = '#' };

int rank(char g) {
    switch (g) {
    case kRun: return 4;
    case kDiscard: return 3;
    case kStacked: return 2;
    case kWait: return 1;
    default: return 0;
    }
}

} // namespace

std::string render_gantt(const Trace& tr, int max_columns) {
    if (tr.jobs.empty() || tr.horizon <= 0) return {};
    max_columns = std::max(max_columns, 1);
    const Duration bucket = nice_bucket(tr.horizon, max_columns);
    const auto columns = static_cast<std::size_t>((tr.horizon + bucket - 1) / bucket);

    std::map<int, std::string> rows;
    for (const auto& [id, label] : tr.labels) rows[id] = std::string(columns, kIdle);
    auto paint = [&](int task, TimePoint begin, TimePoint end, char glyph) {
        auto it = rows.find(task);
        if (it == rows.end() || end <= begin) return;
        const auto first = static_cast<std::size_t>(begin / bucket);
        const auto last = std::min(columns - 1, static_cast<std::size_t>((end - 1) / bucket));
        for (std::size_t c = first; c <= last; ++c)
            if (rank(glyph) > rank(it->second[c])) it->second[c] = glyph;
    };
    auto mark = [&](int task, TimePoint at, char glyph) {
        const auto c = std::min(columns - 1, static_cast<std::size_t>(at / bucket));
        auto it = rows.find(task);
        if (it != rows.end() && rank(glyph) > rank(it->second[c])) it->second[c] = glyph;
    };

    for (const auto& rec : tr.jobs) {
        TimePoint end = tr.horizon;
        if (rec.job.completion) end = *rec.job.completion;
        if (rec.discarded_at) end = *rec.discarded_at;
        paint(rec.job.id.task_id, rec.job.abs_release, end, kWait);
        if (rec.discarded_at) mark(rec.job.id.task_id, *rec.discarded_at, kDiscard);
    }
    for (const auto& s : tr.stack_log) {
        TimePoint end = s.restored_at.value_or(tr.horizon);
        if (const JobRecord* rec = tr.find(s.job); rec && !s.restored_at && rec->discarded_at) end = *rec->discarded_at;
        paint(s.job.task_id, s.saved_at, end, kStacked);
    }
    for (const auto& seg : execution_segments(tr)) paint(seg.job.task_id, seg.begin, seg.end, kRun);

    std::string mode_row(columns, ' ');
    std::map<int, TimePoint> super_since;
    for (const auto& ev : tr.events) {
        if (ev.kind != EventKind::ModeSwitch || !ev.processor) continue;
        if (ev.reason == "super_catastrophe") {
            super_since[*ev.processor] = ev.time;
        } else if (auto it = super_since.find(*ev.processor); it != super_since.end()) {
            for (TimePoint t = it->second; t < ev.time; t += bucket)
                mode_row[std::min(columns - 1, static_cast<std::size_t>(t / bucket))] = 'S';
            super_since.erase(it);
        }
    }
    for (const auto& [p, since] : super_since)
        for (TimePoint t = since; t < tr.horizon; t += bucket)
            mode_row[std::min(columns - 1, static_cast<std::size_t>(t / bucket))] = 'S';

    std::size_t width = 4;
    for (const auto& [id, label] : tr.labels) width = std::max(width, label.size());

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "tick" << " |";
    std::string axis(columns, ' ');
    for (std::size_t c = 0; c < columns; c += 10) {
        const std::string stamp = std::to_string(static_cast<TimePoint>(c) * bucket);
        for (std::size_t k = 0; k < stamp.size() && c + k < columns; ++k) axis[c + k] = stamp[k];
    }
    os << axis << "|\n";
    for (const auto& [id, label] : tr.labels)
        os << std::left << std::setw(static_cast<int>(width)) << label << " |" << rows[id] << "|\n";
    os << std::left << std::setw(static_cast<int>(width)) << "mode" << " |" << mode_row << "|\n";
    os << "bucket=" << bucket << " ticks; # run, . waiting, s stacked, X discarded, S super mode\n";
    return os.str();
}

std::string metrics_csv_row(const MetricsReport& m) {
    std::ostringstream os;
    os << m.policy << ',' << m.released << ',' << m.n_missed << ',' << m.n_success.numerator() << '/'
       << m.n_success.denominator() << ',' << std::fixed << std::setprecision(6)
       << boost::rational_cast<double>(m.n_success) << ',' << m.n_late << ',' << (m.stable ? "true" : "false");
    return os.str();
}

std::string render_metrics(const MetricsReport& m) {
    std::ostringstream os;
    os << "policy:    " << m.policy << '\n'
       << "released:  " << m.released << '\n'
       << "missed:    " << m.n_missed << '\n'
       << "late:      " << m.n_late << '\n'
       << "N_success: " << m.n_success.numerator() << '/' << m.n_success.denominator() << " (" << std::fixed
       << std::setprecision(4) << boost::rational_cast<double>(m.n_success) << ")\n"
       << "stable:    " << (m.stable ? "yes" : "no") << " (threshold 7/10)\n";
    os << "misses per " << kMissWindow << "-tick window:";
    for (const auto& w : m.windows) os << ' ' << w.misses;
    os << '\n';
    return os.str();
}

std::string render_placement(const Placement& pl, const TaskSet& ts) {
    std::ostringstream os;
    os << "processors: " << pl.processors << '\n';
    for (int p = 0; p < pl.processors; ++p) {
        os << "P" << p << " load " << pl.load[p].numerator() << '/' << pl.load[p].denominator() << ":";
        for (const auto& a : pl.assignments) {
            const TaskSpec* t = ts.find(a.task_id);
            const std::string label = t ? t->label : "T" + std::to_string(a.task_id);
            if (a.primary == p) os << ' ' << label << "(primary)";
            if (a.backup == p) os << ' ' << label << "(backup)";
        }
        os << '\n';
    }
    return os.str();
}

} // namespace supersched
