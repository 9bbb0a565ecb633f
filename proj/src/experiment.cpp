#include <supersched/experiment.hpp>

#include <supersched/engine.hpp>
#include <supersched/error.hpp>
#include <supersched/random.hpp>
#include <supersched/report.hpp>
#include <supersched/super_scheduler.hpp>
#include <supersched/taskgen.hpp>

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace supersched {

namespace {

SimConfig config_for(const Scenario& sc, Policy policy) {
    SimConfig cfg;
    cfg.policy = policy;
    cfg.processors = sc.processors;
    cfg.horizon = sc.horizon;
    cfg.seed = sc.seed;
    if (sc.placement) {
        for (const auto& t : sc.tasks.tasks) {
            const Assignment* a = sc.placement->find(t.id);
            cfg.assignment.push_back(a ? a->primary : 0);
        }
        cfg.processors = std::max(cfg.processors, sc.placement->processors);
    }
    return cfg;
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        fail(ErrorCode::Io, "cannot create output directory " + dir.string());
    return dir;
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

ExperimentResult golden_experiment(const Scenario& sc, const std::filesystem::path& dir) {
    ExperimentResult res;
    const Comparison c = compare(sc);
    auto emit = [&](const std::string& name, const std::string& body) {
        write_text_file(dir / name, body);
        res.files.push_back(dir / name);
    };
    emit(sc.name + ".scenario", write_scenario_text(sc));
    emit(sc.name + "_edf.csv", trace_csv(c.baseline_trace));
    emit(sc.name + "_super.csv", trace_csv(c.super_trace));
    emit(sc.name + "_metrics.csv", std::string(kMetricsCsvHeader) + "\n" + metrics_csv_row(c.baseline) + "\n" +
                                       metrics_csv_row(c.super) + "\n");
    emit(sc.name + "_comparison.txt", render_comparison(c));
    emit(sc.name + "_gantt.txt", "baseline edf\n" + render_gantt(c.baseline_trace) + "\nsuper\n" +
                                     render_gantt(c.super_trace));
    res.summary = render_comparison(c);
    res.findings_ok = c.dominance_holds && c.super.stable;
    return res;
}

ExperimentResult sweep_experiment(const std::filesystem::path& dir) {
    const std::vector<int> ns{5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    const std::vector<int> loads{1, 2, 3};
    const auto points = run_sweep(ns, loads, 20, 2024);

    std::ostringstream rows;
    rows << "n,catastrophes,seed,baseline_missed,super_missed,super_n_success\n";
    std::map<int, std::pair<double, double>> sums;
    std::map<int, std::size_t> counts;
    std::size_t violations = 0;
    for (const auto& p : points) {
        rows << p.n << ',' << p.catastrophes << ',' << p.seed << ',' << p.baseline_missed << ',' << p.super_missed
             << ',' << p.super_success.numerator() << '/' << p.super_success.denominator() << '\n';
        sums[p.n].first += static_cast<double>(p.baseline_missed);
        sums[p.n].second += static_cast<double>(p.super_missed);
        ++counts[p.n];
        if (p.super_missed > p.baseline_missed) ++violations;
    }
    std::ostringstream summary;
    summary << "n,mean_baseline_missed,mean_super_missed\n";
    std::vector<std::pair<double, double>> curve;
    for (const auto& [n, s] : sums) {
        const double k = static_cast<double>(counts[n]);
        summary << n << ',' << fixed(s.first / k) << ',' << fixed(s.second / k) << '\n';
        curve.emplace_back(static_cast<double>(n), s.second / k);
    }
    const PolyFit fit = poly_fit(curve, 4);
    std::ostringstream poly;
    poly << "# least-squares degree-4 fit of mean super-scheduler misses against task count\n"
         << "# X = number of periodic tasks, Y = mean misses per run (U = 4/5, 1-3 catastrophes, 20 seeds)\n";
    poly << "coefficients (X^4..X^0):";
    for (double c : fit.model.coefficients) poly << ' ' << std::setprecision(10) << c;
    poly << "\nrms_residual: " << fit.rms_residual << "\nmax_abs_residual: " << fit.max_abs_residual << '\n';
    poly << "runs: " << points.size() << ", runs with more super misses than baseline: " << violations << '\n';

    ExperimentResult res;
    for (const auto& [name, body] : {std::pair<std::string, std::string>{"sweep.csv", rows.str()},
                                     {"sweep_summary.csv", summary.str()},
                                     {"sweep_poly.txt", poly.str()}}) {
        write_text_file(dir / name, body);
        res.files.push_back(dir / name);
    }
    res.summary = summary.str() + poly.str();
    res.findings_ok = violations == 0;
    return res;
}

ExperimentResult dispersion_run(const std::filesystem::path& dir) {
    const TaskSet base = without_catastrophes(medium_scenario()).tasks;
    std::ostringstream csv;
    csv << "spread,trials,trials_with_miss,miss_fraction,mean_n_success\n";
    bool monotone = true;
    double previous = 0.0;
    for (int step = 0; step <= 10; ++step) {
        const double spread = step / 10.0;
        const DispersionReport r = dispersion_experiment(base, spread, 1000, 7);
        csv << fixed(spread, 1) << ',' << r.trials << ',' << r.trials_with_miss << ',' << fixed(r.miss_fraction)
            << ',' << fixed(r.mean_n_success) << '\n';
        if (r.miss_fraction < previous) monotone = false;
        previous = r.miss_fraction;
    }
    ExperimentResult res;
    write_text_file(dir / "dispersion.csv", csv.str());
    res.files.push_back(dir / "dispersion.csv");
    res.summary = csv.str() + (monotone ? "miss fraction is non-decreasing in spread\n"
                                        : "miss fraction decreases somewhere on the grid\n");
    res.findings_ok = monotone;
    return res;
}

} // namespace

Comparison compare(const Scenario& sc) {
    Comparison c;
    c.scenario = sc.name;
    c.baseline_trace = simulate(sc.tasks, config_for(sc, Policy::Edf));
    c.super_trace = simulate(sc.tasks, config_for(sc, Policy::Super));
    c.baseline = compute_metrics(c.baseline_trace);
    c.super = compute_metrics(c.super_trace);
    c.dominance_holds = c.super.n_missed <= c.baseline.n_missed;
    return c;
}

std::string render_comparison(const Comparison& c) {
    std::ostringstream os;
    auto ratio = [](const Rational& r) {
        return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
    };
    os << "scenario " << c.scenario << '\n';
    os << std::left << std::setw(10) << "policy" << std::setw(10) << "released" << std::setw(8) << "missed"
       << std::setw(6) << "late" << std::setw(12) << "N_success" << "stable\n";
    for (const MetricsReport* m : {&c.baseline, &c.super})
        os << std::left << std::setw(10) << m->policy << std::setw(10) << m->released << std::setw(8) << m->n_missed
           << std::setw(6) << m->n_late << std::setw(12) << ratio(m->n_success) << (m->stable ? "yes" : "no") << '\n';
    os << "missed jobs (super):";
    for (const auto& rec : c.super_trace.jobs)
        if (counts_as_miss(rec, c.super_trace.horizon)) os << ' ' << c.super_trace.job_name(rec.job.id);
    os << '\n';
    os << (c.dominance_holds ? "super misses <= baseline misses\n"
                             : "FINDING: super scheduler missed more jobs than baseline EDF\n");
    return os.str();
}

Scenario random_catastrophe_scenario(int n, const Rational& utilization, int catastrophes, std::uint64_t seed) {
    GenSpec spec;
    spec.n = n;
    spec.total_utilization = utilization;
    spec.seed = mix_seed(seed, 0);
    TaskSet ts = generate(spec);
    const Duration h = hyperperiod(ts);
    for (int k = 1; k <= catastrophes; ++k)
        ts = inject_catastrophe(ts, std::nullopt, mix_seed(seed, static_cast<std::uint64_t>(k)));
    TimePoint end = h;
    for (const auto& t : ts.tasks)
        if (t.kind == TaskKind::Catastrophe) end = std::max(end, t.deadline);

    Scenario sc;
    sc.name = "random-n" + std::to_string(n) + "-ct" + std::to_string(catastrophes) + "-seed" + std::to_string(seed);
    sc.policy = Policy::Super;
    sc.horizon = end + h;
    sc.seed = seed;
    ts.name = sc.name;
    sc.tasks = std::move(ts);
    return sc;
}

std::vector<SweepPoint> run_sweep(const std::vector<int>& ns, const std::vector<int>& loads,
                                  std::size_t seeds_per_point, std::uint64_t base_seed) {
    std::vector<SweepPoint> grid;
    for (int n : ns)
        for (int load : loads)
            for (std::size_t s = 0; s < seeds_per_point; ++s)
                grid.push_back({n, load, mix_seed(base_seed, grid.size()), 0, 0, Rational{1}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            SweepPoint& p = grid[i];
            const Scenario sc = random_catastrophe_scenario(p.n, Rational{4, 5}, p.catastrophes, p.seed);
            const Comparison c = compare(sc);
            p.baseline_missed = c.baseline.n_missed;
            p.super_missed = c.super.n_missed;
            p.super_success = c.super.n_success;
        }
    };
    const unsigned threads = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return grid;
}

ExperimentResult run_experiment(std::string_view which, const std::filesystem::path& out_dir) {
    if (which != "medium" && which != "large" && which != "sweep" && which != "dispersion")
        fail(ErrorCode::InvalidArgument, "unknown experiment \"" + std::string(which) + "\"");
    const auto dir = prepare_dir(out_dir);
    if (which == "medium") return golden_experiment(medium_scenario(), dir);
    if (which == "large") return golden_experiment(large_scenario(), dir);
    if (which == "sweep") return sweep_experiment(dir);
    return dispersion_run(dir);
}

} // namespace supersched
