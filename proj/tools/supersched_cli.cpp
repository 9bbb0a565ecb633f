// Command line front end. Talks to the simulator only through supersched.h.
#include <supersched/supersched.h>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFinding = 2;

struct CallError {
    ss_status status;
    std::string message;
};

void check(ss_status st) {
    if (st != SS_OK) throw CallError{st, ss_last_error()};
}

struct StringDeleter {
    void operator()(char* s) const { ss_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ScenarioDeleter {
    void operator()(ss_scenario* p) const { ss_scenario_free(p); }
};
struct TraceDeleter {
    void operator()(ss_trace* p) const { ss_trace_free(p); }
};
struct PlacementDeleter {
    void operator()(ss_placement* p) const { ss_placement_free(p); }
};
using Scenario = std::unique_ptr<ss_scenario, ScenarioDeleter>;
using Trace = std::unique_ptr<ss_trace, TraceDeleter>;
using Placement = std::unique_ptr<ss_placement, PlacementDeleter>;

Scenario load(const std::string& path) {
    ss_scenario* sc = nullptr;
    // a file that fails validation is bad input, not a finding
    if (ss_status st = ss_scenario_load(path.c_str(), &sc); st != SS_OK)
        throw CallError{st == SS_ERR_INVARIANT ? SS_ERR_PARSE : st, ss_last_error()};
    return Scenario(sc);
}

std::string take(char* s) {
    OwnedString owned(s);
    return s ? std::string(s) : std::string();
}

// Runs the trace invariants; returns true when they hold.
bool trace_ok(const ss_trace* tr) {
    char* findings = nullptr;
    const ss_status st = ss_trace_check(tr, &findings);
    const std::string text = take(findings);
    if (st == SS_ERR_INVARIANT) {
        std::cerr << "finding: trace invariant violated\n" << text;
        return false;
    }
    check(st);
    return true;
}

// "0.75", "3/4" or "1" into an exact fraction.
std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& text) {
    auto bad = [&] { throw CLI::ValidationError("--util", "not a decimal or fraction: " + text); };
    auto digits = [](const std::string& s) {
        return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos && s.size() <= 15;
    };
    std::int64_t num = 0, den = 1;
    if (auto slash = text.find('/'); slash != std::string::npos) {
        const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        if (!digits(a) || !digits(b)) bad();
        num = std::stoll(a);
        den = std::stoll(b);
    } else if (auto dot = text.find('.'); dot != std::string::npos) {
        std::string a = text.substr(0, dot), b = text.substr(dot + 1);
        if (a.empty()) a = "0";
        if (!digits(a) || !digits(b)) bad();
        den = 1;
        for (std::size_t i = 0; i < b.size(); ++i) den *= 10;
        num = std::stoll(a) * den + std::stoll(b);
    } else {
        if (!digits(text)) bad();
        num = std::stoll(text);
    }
    if (den == 0) bad();
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

ss_policy parse_policy(const std::string& s) {
    if (s == "edf") return SS_POLICY_EDF;
    if (s == "rm") return SS_POLICY_RM;
    return SS_POLICY_SUPER;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partitioned real-time scheduling simulator with a catastrophe-aware super scheduler"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ss_version()));

    std::string scenario_path, policy = "super", trace_out, out_path, out_dir, which, fail_spec, util = "3/4";
    std::int64_t horizon = 0;
    std::int32_t tasks = 5;
    std::uint64_t seed = 0;
    bool gantt = false;

    auto* sim = app.add_subcommand("simulate", "run one policy and print its metrics");
    sim->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--policy", policy, "edf, rm or super")->check(CLI::IsMember({"edf", "rm", "super"}));
    sim->add_option("--horizon", horizon, "override the scenario horizon")->check(CLI::PositiveNumber);
    sim->add_option("--trace", trace_out, "write the event trace CSV here");
    sim->add_flag("--gantt", gantt, "print a text Gantt chart");

    auto* cmp = app.add_subcommand("compare", "baseline EDF against the super scheduler");
    cmp->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);

    auto* gen = app.add_subcommand("generate", "write a random implicit-deadline periodic task set");
    gen->add_option("--tasks", tasks, "number of tasks (>= 5)")->required();
    gen->add_option("--util", util, "total utilization, e.g. 0.75 or 3/4")->required();
    gen->add_option("--seed", seed, "random seed")->required();
    gen->add_option("--out", out_path, "output scenario file")->required();

    auto* alloc = app.add_subcommand("allocate", "primary/backup placement with optional failure");
    alloc->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    alloc->add_option("--fail", fail_spec, "fail processor PROC at tick T, written PROC@T");
    alloc->add_option("--trace", trace_out, "write the failure run trace CSV here");

    auto* exp = app.add_subcommand("experiment", "canned experiments");
    exp->add_option("--which", which, "medium, large, sweep or dispersion")
        ->required()
        ->check(CLI::IsMember({"medium", "large", "sweep", "dispersion"}));
    exp->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sim) {
            Scenario sc = load(scenario_path);
            ss_trace* raw = nullptr;
            check(ss_simulate(sc.get(), parse_policy(policy), horizon, &raw));
            Trace tr(raw);
            if (!trace_out.empty()) check(ss_trace_write_csv(tr.get(), trace_out.c_str()));
            char* text = nullptr;
            check(ss_trace_metrics_text(tr.get(), &text));
            std::cout << take(text);
            if (gantt) {
                char* chart = nullptr;
                check(ss_trace_gantt(tr.get(), &chart));
                std::cout << '\n' << take(chart);
            }
            return trace_ok(tr.get()) ? kExitOk : kExitFinding;
        }
        if (*cmp) {
            Scenario sc = load(scenario_path);
            char* report = nullptr;
            int holds = 0;
            check(ss_compare(sc.get(), &report, &holds));
            std::cout << take(report);
            return holds ? kExitOk : kExitFinding;
        }
        if (*gen) {
            const auto [num, den] = parse_fraction(util);
            ss_scenario* raw = nullptr;
            check(ss_generate(tasks, num, den, seed, &raw));
            Scenario sc(raw);
            check(ss_scenario_save(sc.get(), out_path.c_str()));
            std::size_t n = 0;
            check(ss_scenario_task_count(sc.get(), &n));
            std::cout << "wrote " << n << " tasks to " << out_path << '\n';
            return kExitOk;
        }
        if (*alloc) {
            Scenario sc = load(scenario_path);
            ss_placement* raw = nullptr;
            check(ss_allocate(sc.get(), &raw));
            Placement pl(raw);
            char* text = nullptr;
            check(ss_placement_text(pl.get(), &text));
            std::int32_t lb = 0;
            check(ss_placement_lower_bound(pl.get(), &lb));
            std::cout << take(text) << "lower bound: " << lb << '\n';

            char* findings = nullptr;
            const ss_status st = ss_placement_validate(pl.get(), &findings);
            const std::string found = take(findings);
            if (st == SS_ERR_INVARIANT) {
                std::cerr << "finding: invalid placement\n" << found;
                return kExitFinding;
            }
            check(st);
            if (fail_spec.empty()) return kExitOk;

            const auto at = fail_spec.find('@');
            std::int32_t proc = 0;
            std::int64_t t_fail = 0;
            try {
                if (at == std::string::npos) throw std::invalid_argument("missing @");
                std::size_t used = 0;
                proc = std::stoi(fail_spec.substr(0, at), &used);
                if (used != at) throw std::invalid_argument("processor");
                t_fail = std::stoll(fail_spec.substr(at + 1), &used);
                if (used != fail_spec.size() - at - 1) throw std::invalid_argument("time");
            } catch (const std::logic_error&) {
                std::cerr << "error: --fail expects PROC@T, got \"" << fail_spec << "\"\n";
                return kExitUsage;
            }
            std::int64_t h = 0;
            check(ss_scenario_horizon(sc.get(), &h));
            ss_trace* traw = nullptr;
            check(ss_inject_failure(pl.get(), proc, t_fail, h, &traw));
            Trace tr(traw);
            if (!trace_out.empty()) check(ss_trace_write_csv(tr.get(), trace_out.c_str()));
            char* mtext = nullptr;
            check(ss_trace_metrics_text(tr.get(), &mtext));
            std::cout << "\nafter failure of P" << proc << " at " << t_fail << ":\n" << take(mtext);
            return trace_ok(tr.get()) ? kExitOk : kExitFinding;
        }
        if (*exp) {
            char* summary = nullptr;
            int ok = 0;
            check(ss_experiment(which.c_str(), out_dir.c_str(), &summary, &ok));
            std::cout << take(summary);
            return ok ? kExitOk : kExitFinding;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CallError& e) {
        std::cerr << "error: " << ss_status_name(e.status) << ": " << e.message << '\n';
        return e.status == SS_ERR_INVARIANT ? kExitFinding : kExitUsage;
    }
    return kExitUsage;
}
