#include <supersched/supersched.h>

#include <supersched/allocation.hpp>
#include <supersched/engine.hpp>
#include <supersched/error.hpp>
#include <supersched/experiment.hpp>
#include <supersched/metrics.hpp>
#include <supersched/report.hpp>
#include <supersched/scenario.hpp>
#include <supersched/taskgen.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

using namespace supersched;

struct ss_scenario {
    Scenario sc;
};

struct ss_trace {
    Trace tr;
    // storage behind the char pointers handed out by ss_trace_event
    std::vector<std::string> kinds, jobs;
};

struct ss_placement {
    Placement pl;
    TaskSet tasks;
};

namespace {

thread_local std::string g_last_error;

ss_status set_error(ss_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

ss_status from_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return SS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return SS_ERR_PARSE;
    case ErrorCode::Invariant: return SS_ERR_INVARIANT;
    case ErrorCode::Io: return SS_ERR_IO;
    case ErrorCode::Overflow: return SS_ERR_OVERFLOW;
    case ErrorCode::Unsupported: return SS_ERR_UNSUPPORTED;
    }
    return SS_ERR_INTERNAL;
}

template <class F>
ss_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return SS_OK;
    } catch (const Error& e) {
        return set_error(from_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SS_ERR_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.data(), s.size() + 1);
    return p;
}

void need(const void* p, const char* what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

ss_trace* wrap(Trace tr) {
    auto* out = new ss_trace{std::move(tr), {}, {}};
    out->kinds.reserve(out->tr.events.size());
    out->jobs.reserve(out->tr.events.size());
    for (const auto& ev : out->tr.events) {
        out->kinds.emplace_back(to_string(ev.kind));
        out->jobs.push_back(ev.job ? out->tr.job_name(*ev.job) : std::string());
    }
    return out;
}

Policy to_policy(ss_policy p, const Scenario& sc) {
    switch (p) {
    case SS_POLICY_EDF: return Policy::Edf;
    case SS_POLICY_RM: return Policy::Rm;
    case SS_POLICY_SUPER: return Policy::Super;
    case SS_POLICY_SCENARIO: return sc.policy;
    }
    fail(ErrorCode::InvalidArgument, "unknown policy " + std::to_string(static_cast<int>(p)));
}

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

} // namespace

extern "C" {

const char* ss_version(void) { return "1.0.0"; }

const char* ss_last_error(void) { return g_last_error.c_str(); }

const char* ss_status_name(ss_status status) {
    switch (status) {
    case SS_OK: return "ok";
    case SS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SS_ERR_PARSE: return "parse error";
    case SS_ERR_INVARIANT: return "invariant violated";
    case SS_ERR_IO: return "i/o error";
    case SS_ERR_OVERFLOW: return "overflow";
    case SS_ERR_UNSUPPORTED: return "unsupported";
    case SS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void ss_string_free(char* s) { std::free(s); }

ss_status ss_scenario_load(const char* path, ss_scenario** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new ss_scenario{parse_scenario(path)};
    });
}

ss_status ss_scenario_parse(const char* text, ss_scenario** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new ss_scenario{parse_scenario_text(text)};
    });
}

ss_status ss_scenario_builtin(const char* name, ss_scenario** out) {
    return guard([&] {
        need(name, "name");
        need(out, "out");
        const std::string n = name;
        if (n == "medium")
            *out = new ss_scenario{medium_scenario()};
        else if (n == "large")
            *out = new ss_scenario{large_scenario()};
        else
            fail(ErrorCode::InvalidArgument, "unknown builtin scenario \"" + n + "\"");
    });
}

ss_status ss_scenario_save(const ss_scenario* sc, const char* path) {
    return guard([&] {
        need(sc, "scenario");
        need(path, "path");
        save_scenario(sc->sc, path);
    });
}

ss_status ss_scenario_to_json(const ss_scenario* sc, char** out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        *out = dup(write_scenario_text(sc->sc));
    });
}

ss_status ss_scenario_policy(const ss_scenario* sc, ss_policy* out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        switch (sc->sc.policy) {
        case Policy::Edf: *out = SS_POLICY_EDF; break;
        case Policy::Rm: *out = SS_POLICY_RM; break;
        case Policy::Super: *out = SS_POLICY_SUPER; break;
        }
    });
}

ss_status ss_scenario_horizon(const ss_scenario* sc, int64_t* out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        *out = sc->sc.horizon;
    });
}

ss_status ss_scenario_task_count(const ss_scenario* sc, size_t* out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        *out = sc->sc.tasks.size();
    });
}

void ss_scenario_free(ss_scenario* sc) { delete sc; }

ss_status ss_generate(int32_t n, int64_t util_num, int64_t util_den, uint64_t seed, ss_scenario** out) {
    return guard([&] {
        need(out, "out");
        if (util_den <= 0) fail(ErrorCode::InvalidArgument, "utilization denominator must be positive");
        GenSpec spec;
        spec.n = n;
        spec.total_utilization = Rational{util_num, util_den};
        spec.seed = seed;
        Scenario sc;
        sc.tasks = generate(spec);
        sc.name = sc.tasks.name;
        sc.policy = Policy::Edf;
        sc.seed = seed;
        sc.horizon = hyperperiod(sc.tasks);
        *out = new ss_scenario{std::move(sc)};
    });
}

ss_status ss_simulate(const ss_scenario* sc, ss_policy policy, int64_t horizon, ss_trace** out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        Scenario copy = sc->sc;
        copy.policy = to_policy(policy, sc->sc);
        if (horizon > 0) copy.horizon = horizon;
        SimConfig cfg;
        cfg.policy = copy.policy;
        cfg.processors = copy.processors;
        cfg.horizon = copy.horizon;
        cfg.seed = copy.seed;
        if (copy.placement) {
            for (const auto& t : copy.tasks.tasks) {
                const Assignment* a = copy.placement->find(t.id);
                cfg.assignment.push_back(a ? a->primary : 0);
            }
            cfg.processors = std::max(cfg.processors, copy.placement->processors);
        }
        *out = wrap(simulate(copy.tasks, cfg));
    });
}

void ss_trace_free(ss_trace* tr) { delete tr; }

ss_status ss_trace_event_count(const ss_trace* tr, size_t* out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        *out = tr->tr.events.size();
    });
}

ss_status ss_trace_event(const ss_trace* tr, size_t index, ss_event* out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        if (index >= tr->tr.events.size())
            fail(ErrorCode::InvalidArgument, "event index " + std::to_string(index) + " out of range");
        const Event& ev = tr->tr.events[index];
        out->time = ev.time;
        out->kind = tr->kinds[index].c_str();
        out->job = tr->jobs[index].c_str();
        out->processor = ev.processor ? *ev.processor : -1;
        out->detail = ev.reason.c_str();
    });
}

ss_status ss_trace_csv(const ss_trace* tr, char** out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        *out = dup(trace_csv(tr->tr));
    });
}

ss_status ss_trace_write_csv(const ss_trace* tr, const char* path) {
    return guard([&] {
        need(tr, "trace");
        need(path, "path");
        write_trace(tr->tr, path);
    });
}

ss_status ss_trace_gantt(const ss_trace* tr, char** out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        *out = dup(render_gantt(tr->tr));
    });
}

ss_status ss_trace_metrics(const ss_trace* tr, ss_metrics* out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        const MetricsReport m = compute_metrics(tr->tr);
        out->released = m.released;
        out->missed = m.n_missed;
        out->late = m.n_late;
        out->success_num = m.n_success.numerator();
        out->success_den = m.n_success.denominator();
        out->stable = m.stable ? 1 : 0;
    });
}

ss_status ss_trace_metrics_text(const ss_trace* tr, char** out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        *out = dup(render_metrics(compute_metrics(tr->tr)));
    });
}

ss_status ss_trace_metrics_row(const ss_trace* tr, char** out) {
    return guard([&] {
        need(tr, "trace");
        need(out, "out");
        *out = dup(metrics_csv_row(compute_metrics(tr->tr)));
    });
}

ss_status ss_trace_check(const ss_trace* tr, char** findings) {
    std::vector<std::string> found;
    const ss_status st = guard([&] {
        need(tr, "trace");
        found = check_trace(tr->tr);
        if (findings) *findings = found.empty() ? nullptr : dup(join(found));
    });
    if (st != SS_OK) return st;
    if (!found.empty()) return set_error(SS_ERR_INVARIANT, found.front());
    return SS_OK;
}

ss_status ss_compare(const ss_scenario* sc, char** report, int* dominance_holds) {
    return guard([&] {
        need(sc, "scenario");
        const Comparison c = compare(sc->sc);
        if (report) *report = dup(render_comparison(c));
        if (dominance_holds) *dominance_holds = c.dominance_holds ? 1 : 0;
    });
}

ss_status ss_allocate(const ss_scenario* sc, ss_placement** out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        TaskSet ts = without_catastrophes(sc->sc).tasks;
        Placement pl = allocate_primary_backup(ts);
        *out = new ss_placement{std::move(pl), std::move(ts)};
    });
}

void ss_placement_free(ss_placement* pl) { delete pl; }

ss_status ss_placement_processors(const ss_placement* pl, int32_t* out) {
    return guard([&] {
        need(pl, "placement");
        need(out, "out");
        *out = pl->pl.processors;
    });
}

ss_status ss_placement_lower_bound(const ss_placement* pl, int32_t* out) {
    return guard([&] {
        need(pl, "placement");
        need(out, "out");
        *out = min_processor_lower_bound(pl->tasks);
    });
}

ss_status ss_placement_text(const ss_placement* pl, char** out) {
    return guard([&] {
        need(pl, "placement");
        need(out, "out");
        *out = dup(render_placement(pl->pl, pl->tasks));
    });
}

ss_status ss_placement_validate(const ss_placement* pl, char** findings) {
    std::vector<std::string> found;
    const ss_status st = guard([&] {
        need(pl, "placement");
        for (const auto& v : validate_placement(pl->pl, pl->tasks)) found.push_back(v.rule + ": " + v.message);
        if (findings) *findings = found.empty() ? nullptr : dup(join(found));
    });
    if (st != SS_OK) return st;
    if (!found.empty()) return set_error(SS_ERR_INVARIANT, found.front());
    return SS_OK;
}

ss_status ss_inject_failure(const ss_placement* pl, int32_t processor, int64_t t_fail, int64_t horizon,
                            ss_trace** out) {
    return guard([&] {
        need(pl, "placement");
        need(out, "out");
        *out = wrap(inject_failure(pl->pl, pl->tasks, processor, t_fail, horizon));
    });
}

ss_status ss_experiment(const char* which, const char* out_dir, char** summary, int* findings_ok) {
    return guard([&] {
        need(which, "which");
        need(out_dir, "out_dir");
        const ExperimentResult r = run_experiment(which, out_dir);
        if (summary) *summary = dup(r.summary);
        if (findings_ok) *findings_ok = r.findings_ok ? 1 : 0;
    });
}

} // extern "C"
