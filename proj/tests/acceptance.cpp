// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. `--expect-fail ACn` (repeatable) flips that for the
// named criteria: the exit is zero only when exactly those fail.
#include "oracles.hpp"

#include <supersched/allocation.hpp>
#include <supersched/engine.hpp>
#include <supersched/experiment.hpp>
#include <supersched/metrics.hpp>
#include <supersched/random.hpp>
#include <supersched/report.hpp>
#include <supersched/scenario.hpp>
#include <supersched/supersched.h>
#include <supersched/taskgen.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace supersched;
namespace fs = std::filesystem;

namespace {

// Collects failures for one criterion; the first few are printed.
struct Check {
    std::vector<std::string> failures;
    std::string note;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::set<std::string> failed;

void criterion(const char* id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) {
        std::ostringstream os;
        os << "runtime " << secs << " s exceeds " << limit_s << " s";
        c.failures.push_back(os.str());
    }
    const bool ok = c.failures.empty();
    if (!ok) failed.insert(id);
    std::printf("%s %s: %s [%.3f s", ok ? "PASS" : "FAIL", id, title, secs);
    if (limit_s > 0) std::printf(", limit %.0f s", limit_s);
    std::printf("]%s%s\n", c.note.empty() ? "" : " ", c.note.c_str());
    for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) std::printf("    - %s\n", c.failures[i].c_str());
    if (c.failures.size() > 5) std::printf("    - ... %zu more\n", c.failures.size() - 5);
    std::fflush(stdout);
}

const JobRecord* by_label(const Trace& tr, const std::string& label) {
    for (const auto& rec : tr.jobs)
        if (tr.label_of(rec.job.id.task_id) == label) return &rec;
    return nullptr;
}

// Jobs the oracle reports as missed, by task id.
std::set<int> oracle_victims(const TaskSet& ts, TimePoint horizon) {
    const auto jobs = oracle::simulate(oracle::expand(ts, horizon), horizon, oracle::Mode::Super);
    std::set<int> out;
    for (const auto& j : jobs)
        if (j.discarded || (j.completed && *j.completed > j.deadline) || (!j.completed && j.deadline < horizon))
            out.insert(j.task);
    return out;
}

std::set<int> engine_victims(const Trace& tr) {
    std::set<int> out;
    for (const auto& rec : tr.jobs)
        if (counts_as_miss(rec, tr.horizon)) out.insert(rec.job.id.task_id);
    return out;
}

bool physically_missed(const JobRecord& rec) { return !(rec.job.completion && rec.job.met_deadline()); }

TaskSpec shot(int id, Duration e, TimePoint r, TimePoint d, Criticality c, TaskKind k) {
    TaskSpec t;
    t.id = id;
    t.label = (k == TaskKind::Catastrophe ? "CT" : "T") + std::to_string(id);
    t.kind = k;
    t.criticality = c;
    t.execution_time = e;
    t.release = r;
    t.deadline = d;
    return t;
}

TaskSpec periodic(int id, Duration e, Duration p) {
    TaskSpec t;
    t.id = id;
    t.label = "T" + std::to_string(id);
    t.kind = TaskKind::Periodic;
    t.execution_time = e;
    t.period = p;
    t.deadline = p;
    return t;
}

// Random one-shot mix (with the odd catastrophe) whose static demand already
// exceeds some window [0, d].
TaskSet overload_set(Rng& rng) {
    for (;;) {
        TaskSet ts;
        ts.name = "overload";
        const int n = static_cast<int>(rng.uniform_int(3, 10));
        for (int i = 1; i <= n; ++i) {
            const TimePoint r = rng.uniform_int(0, 60);
            const Duration e = rng.uniform_int(5, 40);
            const auto kind = rng.uniform_int(0, 5) == 0 ? TaskKind::Catastrophe : TaskKind::OneShot;
            const auto crit = static_cast<Criticality>(rng.uniform_int(0, 2));
            ts.tasks.push_back(shot(i, e, r, r + e + rng.uniform_int(0, 30), crit, kind));
        }
        Duration demand_by = 0;
        std::map<TimePoint, Duration> by_deadline;
        for (const auto& t : ts.tasks) by_deadline[t.deadline] += t.execution_time;
        for (const auto& [d, e] : by_deadline) {
            demand_by += e;
            if (demand_by > d) return ts;
        }
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string capi_csv(ss_scenario* sc, ss_policy policy) {
    ss_trace* tr = nullptr;
    if (ss_simulate(sc, policy, 0, &tr) != SS_OK) return std::string("error: ") + ss_last_error();
    char* csv = nullptr;
    const ss_status st = ss_trace_csv(tr, &csv);
    ss_trace_free(tr);
    if (st != SS_OK) return std::string("error: ") + ss_last_error();
    std::string out = csv;
    ss_string_free(csv);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::set<std::string> expected;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc) {
            expected.insert(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--expect-fail ACn]...\n", argv[0]);
            return 2;
        }
    }
    const Scenario medium = medium_scenario();
    const Scenario large = large_scenario();

    criterion("AC1", "medium scenario under super, horizon 250, exactly T3 missed", 1.0, [&](Check& c) {
        const Trace tr = simulate(medium.tasks, Policy::Super, 1, 250, 0);
        c.expect(engine_victims(tr) == std::set<int>{3}, "victims differ from {T3}");
        c.expect(oracle_victims(medium.tasks, 250) == std::set<int>{3}, "oracle victims differ from {T3}");
        c.expect(compute_metrics(tr).n_missed == 1, "n_M != 1");
        const JobRecord* t3 = by_label(tr, "T3");
        c.expect(t3 && t3->job.state == JobState::Discarded && t3->discarded_at == TimePoint{180},
                 "T3 not discarded at 180");
        c.expect(t3 && t3->job.remaining == 60 && t3->job.abs_deadline == 200,
                 "T3 remaining/deadline not 60/200 at discard");
        const std::map<std::string, TimePoint> expected{{"T2", 50}, {"CT", 120}, {"T1", 130}, {"T4", 180}};
        for (const auto& [label, at] : expected) {
            const JobRecord* r = by_label(tr, label);
            c.expect(r && r->job.completion == at && r->job.met_deadline(),
                     label + " did not complete on time at " + std::to_string(at));
        }
        c.expect(check_trace(tr).empty(), "trace invariants fail");
        c.note = "(exact)";
    });

    criterion("AC2", "large scenario under super, exactly T6 and T7 missed", 1.0, [&](Check& c) {
        const Trace tr = simulate(large.tasks, Policy::Super, 1, large.horizon, 0);
        c.expect(engine_victims(tr) == std::set<int>{6, 7}, "victims differ from {T6, T7}");
        c.expect(oracle_victims(large.tasks, large.horizon) == std::set<int>{6, 7}, "oracle victims differ");
        c.expect(compute_metrics(tr).n_missed == 2, "n_M != 2");
        for (const char* label : {"T6", "T7"}) {
            const JobRecord* r = by_label(tr, label);
            c.expect(r && r->discarded_at == TimePoint{120}, std::string(label) + " not pruned at 120");
        }
        std::size_t on_time = 0;
        for (const auto& rec : tr.jobs) on_time += rec.job.state == JobState::Completed && rec.job.met_deadline();
        c.expect(on_time == 9, "on-time completions " + std::to_string(on_time) + " != 9");
        c.expect(check_trace(tr).empty(), "trace invariants fail");
        c.note = "(exact)";
    });

    criterion("AC3", "N_success 4/5 and 9/11, both stable at 7/10", 0, [&](Check& c) {
        const MetricsReport m1 = compute_metrics(simulate(medium.tasks, Policy::Super, 1, 250, 0));
        const MetricsReport m2 = compute_metrics(simulate(large.tasks, Policy::Super, 1, large.horizon, 0));
        c.expect(m1.n_success == Rational(4, 5), "medium N_success != 4/5");
        c.expect(m2.n_success == Rational(9, 11), "large N_success != 9/11");
        c.expect(stability_check(m1.n_success) && m1.stable, "medium not stable");
        c.expect(stability_check(m2.n_success) && m2.stable, "large not stable");
        c.expect(stability_check(Rational(7, 10)) && !stability_check(Rational(69, 100)), "threshold not 7/10");
        c.note = "(exact rationals)";
    });

    criterion("AC4", "misses(super) <= misses(EDF) on medium, large and 500 random catastrophe scenarios", 30.0,
              [&](Check& c) {
                  const Comparison t1 = compare(medium);
                  const Comparison t2 = compare(large);
                  c.expect(t1.super.n_missed <= t1.baseline.n_missed, "medium dominance");
                  c.expect(t2.super.n_missed == 2 && t2.baseline.n_missed == 9, "large is not 2 vs 9");
                  // smallest case: a CT holding the processor starves a tight periodic job
                  // that EDF would interleave
                  TaskSet tiny{"tiny", {periodic(1, 1, 10), shot(2, 20, 0, 40, Criticality::Hard,
                                                                 TaskKind::Catastrophe)}};
                  const std::size_t tiny_edf = compute_metrics(simulate(tiny, Policy::Edf, 1, 40, 0)).n_missed;
                  const std::size_t tiny_super = compute_metrics(simulate(tiny, Policy::Super, 1, 40, 0)).n_missed;
                  c.expect(tiny_super <= tiny_edf, "one periodic (e=1, P=10) plus CT (e=20, d=40): super " +
                                                       std::to_string(tiny_super) + " > edf " +
                                                       std::to_string(tiny_edf));
                  std::size_t base_total = 0, super_total = 0, strict = 0, worse = 0;
                  for (std::uint64_t seed = 0; seed < 500; ++seed) {
                      const int n = 5 + static_cast<int>(seed % 8);
                      const Rational u(static_cast<std::int64_t>(5 + seed % 5), 10);
                      const int cts = 1 + static_cast<int>(seed % 3);
                      const Comparison r = compare(random_catastrophe_scenario(n, u, cts, 1000 + seed));
                      base_total += r.baseline.n_missed;
                      super_total += r.super.n_missed;
                      strict += r.super.n_missed < r.baseline.n_missed;
                      worse += r.super.n_missed > r.baseline.n_missed;
                      c.expect(r.super.n_missed <= r.baseline.n_missed,
                               r.scenario + ": super " + std::to_string(r.super.n_missed) + " > edf " +
                                   std::to_string(r.baseline.n_missed));
                  }
                  c.note = "(zero counterexamples required; random: " + std::to_string(worse) +
                           " counterexamples, super fewer in " + std::to_string(strict) + ", total misses edf " +
                           std::to_string(base_total) + " super " + std::to_string(super_total) + ")";
              });

    criterion("AC5", "medium and large without CT have zero EDF misses", 0, [&](Check& c) {
        for (const Scenario& sc : {medium, large}) {
            const Scenario calm = without_catastrophes(sc);
            const Trace tr = simulate(calm.tasks, Policy::Edf, 1, calm.horizon, 0);
            c.expect(compute_metrics(tr).n_missed == 0, sc.name + ": misses under EDF");
            const auto jobs = oracle::simulate(oracle::expand(calm.tasks, calm.horizon), calm.horizon,
                                               oracle::Mode::Edf);
            c.expect(oracle::misses(jobs, calm.horizon) == 0, sc.name + ": oracle misses");
            for (const auto& j : jobs) {
                const JobRecord* rec = tr.find({j.task, j.instance});
                c.expect(rec && rec->job.completion == j.completed, sc.name + ": completion differs from oracle");
            }
        }
        const Trace tr = simulate(without_catastrophes(medium).tasks, Policy::Edf, 1, 250, 0);
        std::multiset<TimePoint> done;
        for (const auto& rec : tr.jobs)
            if (rec.job.completion) done.insert(*rec.job.completion);
        c.expect(done == std::multiset<TimePoint>{50, 70, 120, 180}, "medium completions not 50/70/120/180");
        c.note = "(exact)";
    });

    criterion("AC6", "500 generated periodic sets, one hyperperiod each, zero EDF misses", 60.0, [&](Check& c) {
        std::size_t jobs = 0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            GenSpec spec;
            spec.n = 5 + static_cast<int>(seed % 11);
            spec.total_utilization = Rational(static_cast<std::int64_t>(6 + seed % 15), 20);
            spec.period_pool = {10, 20, 40, 80, 160};
            spec.seed = seed;
            const TaskSet ts = generate(spec);
            c.expect(utilization(ts) <= Rational(1), "U > 1 for seed " + std::to_string(seed));
            const Trace tr = simulate(ts, Policy::Edf, 1, hyperperiod(ts), seed);
            jobs += tr.released();
            c.expect(compute_metrics(tr).n_missed == 0, "misses for seed " + std::to_string(seed));
        }
        c.note = "(zero tolerance; " + std::to_string(jobs) + " jobs)";
    });

    criterion("AC7", "200 overload scenarios: demand > length implies a miss with deadline <= t1", 0, [&](Check& c) {
        Rng rng(2024);
        std::size_t overloaded_intervals = 0;
        for (int round = 0; round < 200; ++round) {
            const TaskSet ts = overload_set(rng);
            TimePoint horizon = 0;
            for (const auto& t : ts.tasks) horizon = std::max(horizon, t.deadline + 1);
            std::set<TimePoint> ends;
            for (const auto& t : ts.tasks) ends.insert(t.deadline);
            // rm needs rates, so one-shot sets run under the other two
            for (Policy p : {Policy::Edf, Policy::Super}) {
                const Trace tr = simulate(ts, p, 1, horizon, 0);
                bool found_overload = false;
                for (TimePoint t = 0; t < horizon; ++t) {
                    for (TimePoint t1 : ends) {
                        if (t1 <= t) continue;
                        if (demand_in_interval(tr, t, t1) <= t1 - t) continue;
                        found_overload = true;
                        ++overloaded_intervals;
                        bool witnessed = false;
                        for (const auto& rec : tr.jobs)
                            witnessed |= rec.job.abs_deadline <= t1 && physically_missed(rec);
                        c.expect(witnessed, "round " + std::to_string(round) + " " + std::string(to_string(p)) +
                                                ": no miss for [" + std::to_string(t) + ", " +
                                                std::to_string(t1) + "]");
                    }
                }
                c.expect(found_overload, "round " + std::to_string(round) + " has no overloaded interval");
            }
        }
        c.note = "(zero counterexamples over " + std::to_string(overloaded_intervals) + " overloaded intervals)";
    });

    criterion("AC8", "poly_eval anchors within 1e-9, poly_fit round-trip within 1e-6", 0, [&](Check& c) {
        c.expect(std::abs(poly_eval(kReportedMissCurve, 0.0) - (-0.2284)) <= 1e-9, "value at 0");
        c.expect(std::abs(poly_eval(kReportedMissCurve, 10.0) - 2.2546) <= 1e-9, "value at 10");
        Rng rng(8);
        double worst = 0.0;
        for (int round = 0; round < 500; ++round) {
            const int degree = static_cast<int>(rng.uniform_int(0, 4));
            PolyModel truth;
            for (int k = 4 - degree; k < 5; ++k) truth.coefficients[k] = rng.uniform_real(-5.0, 5.0);
            std::vector<std::pair<double, double>> pts;
            const int count = static_cast<int>(rng.uniform_int(5, 25));
            for (int i = 0; i < count; ++i) {
                const double x = static_cast<double>(i) * 0.5 + rng.uniform_real(0.0, 0.25);
                // plain power sum so the samples do not depend on poly_eval
                double y = 0.0;
                for (int k = 0; k < 5; ++k) y += truth.coefficients[k] * std::pow(x, 4 - k);
                pts.emplace_back(x, y);
            }
            const PolyFit fit = poly_fit(pts, 4);
            for (int k = 0; k < 5; ++k)
                worst = std::max(worst, std::abs(fit.model.coefficients[k] - truth.coefficients[k]));
        }
        c.expect(worst <= 1e-6, "coefficient error " + std::to_string(worst));
        std::ostringstream os;
        os << "(worst coefficient error " << worst << ")";
        c.note = os.str();
    });

    criterion("AC9", "allocation: example on 2 processors, property instances, post-failure run", 0, [&](Check& c) {
        const TaskSet halves{"halves", {periodic(1, 5, 10), periodic(2, 10, 20)}};
        const Placement pl = allocate_primary_backup(halves);
        c.expect(pl.processors == 2, "example uses " + std::to_string(pl.processors) + " processors");
        c.expect(oracle::optimal_processors({Rational(1, 2), Rational(1, 2)}) == 2, "oracle disagrees");
        c.expect(validate_placement(pl, halves).empty(), "example placement invalid");
        const Duration h = hyperperiod(halves);
        for (int proc = 0; proc < pl.processors; ++proc) {
            const Trace tr = inject_failure(pl, halves, proc, 0, h);
            c.expect(compute_metrics(tr).n_missed == 0, "misses after failing P" + std::to_string(proc));
        }
        static const Duration pool[] = {4, 5, 8, 10, 20, 40};
        Rng rng(99);
        int gap = 0;
        for (int round = 0; round < 500; ++round) {
            TaskSet ts;
            const int n = static_cast<int>(rng.uniform_int(1, 6));
            std::vector<Rational> shares;
            for (int i = 1; i <= n; ++i) {
                const Duration p = pool[rng.uniform_int(0, 5)];
                ts.tasks.push_back(periodic(i, rng.uniform_int(1, p), p));
                shares.emplace_back(ts.tasks.back().execution_time, p);
            }
            const Placement got = allocate_primary_backup(ts);
            c.expect(got.processors >= min_processor_lower_bound(ts), "below lower bound");
            c.expect(validate_placement(got, ts).empty(), "invalid placement in round " + std::to_string(round));
            gap = std::max(gap, got.processors - oracle::optimal_processors(shares));
        }
        c.note = "(largest gap to the exhaustive optimum " + std::to_string(gap) + ")";
    });

    criterion("AC10", "identical inputs give byte-identical trace CSVs", 0, [&](Check& c) {
        std::vector<std::pair<ss_scenario*, bool>> scenarios; // scenario, has rates
        for (const char* name : {"medium", "large"}) {
            ss_scenario* sc = nullptr;
            c.expect(ss_scenario_builtin(name, &sc) == SS_OK, name);
            if (sc) scenarios.emplace_back(sc, false);
        }
        for (std::uint64_t seed : {1u, 7u, 42u}) {
            ss_scenario* sc = nullptr;
            c.expect(ss_generate(8, 4, 5, seed, &sc) == SS_OK, "generate");
            if (sc) scenarios.emplace_back(sc, true);
        }
        const std::string sporadic = R"({"seed": 5, "horizon": 400, "tasks": [
            {"id": 1, "kind": "sporadic", "execution_time": 3, "min_interarrival": 20, "deadline": 20},
            {"id": 2, "kind": "periodic", "execution_time": 5, "period": 25, "deadline": 25}]})";
        ss_scenario* sp = nullptr;
        c.expect(ss_scenario_parse(sporadic.c_str(), &sp) == SS_OK, std::string("sporadic: ") + ss_last_error());
        if (sp) scenarios.emplace_back(sp, true);
        std::size_t runs = 0;
        for (auto [sc, rates] : scenarios) {
            for (ss_policy p : {SS_POLICY_EDF, SS_POLICY_RM, SS_POLICY_SUPER}) {
                if (p == SS_POLICY_RM && !rates) continue;
                const std::string a = capi_csv(sc, p);
                const std::string b = capi_csv(sc, p);
                c.expect(a.rfind("error", 0) != 0, a);
                c.expect(a == b, "run differs");
                ++runs;
            }
            ss_scenario_free(sc);
        }
        const fs::path root = fs::temp_directory_path() / "supersched_acceptance";
        fs::remove_all(root);
        for (const char* which : {"medium", "large"}) {
            const ExperimentResult x = run_experiment(which, root / "a");
            const ExperimentResult y = run_experiment(which, root / "b");
            for (std::size_t i = 0; i < x.files.size(); ++i)
                c.expect(slurp(x.files[i]) == slurp(y.files[i]), x.files[i].filename().string() + " differs");
        }
        fs::remove_all(root);
        c.note = "(" + std::to_string(runs) + " paired C API runs plus experiment outputs)";
    });

    std::printf("%zu of 10 criteria failed", failed.size());
    for (const auto& id : failed) std::printf(" %s", id.c_str());
    std::printf("\n");
    if (expected.empty()) return failed.empty() ? 0 : 1;
    std::printf("expected to fail:");
    for (const auto& id : expected) std::printf(" %s", id.c_str());
    std::printf("\n");
    return failed == expected ? 0 : 1;
}
