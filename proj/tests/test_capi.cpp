#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <supersched/supersched.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kSource = SS_SOURCE_DIR;
const fs::path kBinary = SS_BINARY_DIR;

std::string take(char* s) {
    std::string out = s ? s : "";
    ss_string_free(s);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Scn {
    ss_scenario* p = nullptr;
    ~Scn() { ss_scenario_free(p); }
};
struct Trc {
    ss_trace* p = nullptr;
    ~Trc() { ss_trace_free(p); }
};
struct Plc {
    ss_placement* p = nullptr;
    ~Plc() { ss_placement_free(p); }
};

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(ss_version()) == "1.0.0");
    CHECK(std::string(ss_status_name(SS_OK)) == "ok");
    CHECK(std::string(ss_status_name(SS_ERR_PARSE)) == "parse error");
    CHECK(ss_status_name(static_cast<ss_status>(42)) != nullptr);
    ss_string_free(nullptr);
    ss_scenario_free(nullptr);
    ss_trace_free(nullptr);
    ss_placement_free(nullptr);
}

TEST_CASE("null arguments are rejected") {
    ss_scenario* sc = nullptr;
    CHECK(ss_scenario_load(nullptr, &sc) == SS_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(ss_last_error()) > 0);
    CHECK(ss_scenario_parse("{}", nullptr) == SS_ERR_INVALID_ARGUMENT);
    CHECK(ss_scenario_builtin(nullptr, &sc) == SS_ERR_INVALID_ARGUMENT);
    ss_trace* tr = nullptr;
    CHECK(ss_simulate(nullptr, SS_POLICY_EDF, 0, &tr) == SS_ERR_INVALID_ARGUMENT);
    CHECK(tr == nullptr);
    size_t n = 0;
    CHECK(ss_trace_event_count(nullptr, &n) == SS_ERR_INVALID_ARGUMENT);
    char* text = nullptr;
    CHECK(ss_trace_csv(nullptr, &text) == SS_ERR_INVALID_ARGUMENT);
    CHECK(ss_compare(nullptr, &text, nullptr) == SS_ERR_INVALID_ARGUMENT);
    CHECK(ss_experiment(nullptr, "x", &text, nullptr) == SS_ERR_INVALID_ARGUMENT);
    CHECK(text == nullptr);
}

TEST_CASE("scenario load, parse and errors") {
    Scn m;
    REQUIRE(ss_scenario_load((kSource / "scenarios" / "medium.scenario").c_str(), &m.p) == SS_OK);
    size_t count = 0;
    CHECK(ss_scenario_task_count(m.p, &count) == SS_OK);
    CHECK(count == 5);
    int64_t h = 0;
    CHECK(ss_scenario_horizon(m.p, &h) == SS_OK);
    CHECK(h > 180);
    ss_policy pol = SS_POLICY_RM;
    CHECK(ss_scenario_policy(m.p, &pol) == SS_OK);

    Scn b;
    REQUIRE(ss_scenario_builtin("medium", &b.p) == SS_OK);
    char* a_json = nullptr;
    char* b_json = nullptr;
    REQUIRE(ss_scenario_to_json(m.p, &a_json) == SS_OK);
    REQUIRE(ss_scenario_to_json(b.p, &b_json) == SS_OK);
    CHECK(take(a_json) == take(b_json));

    Scn bad;
    CHECK(ss_scenario_builtin("huge", &bad.p) == SS_ERR_INVALID_ARGUMENT);
    CHECK(bad.p == nullptr);
    CHECK(ss_scenario_load("/definitely/not/here.scenario", &bad.p) == SS_ERR_IO);
    CHECK(std::string(ss_last_error()).find("not/here") != std::string::npos);
    CHECK(ss_scenario_parse("{\"tasks\": [", &bad.p) == SS_ERR_PARSE);
    CHECK(ss_scenario_parse(R"({"tasks": [{"id": 1, "kind": "one_shot", "deadline": 4}]})", &bad.p) == SS_ERR_PARSE);
    CHECK(std::string(ss_last_error()).find("execution_time") != std::string::npos);
    CHECK(ss_scenario_parse(R"({"tasks": [{"id": 1, "kind": "one_shot", "execution_time": 9, "deadline": 4}]})",
                            &bad.p) == SS_ERR_INVARIANT);
    CHECK(bad.p == nullptr);

    const fs::path dir = kBinary / "scratch" / "capi";
    fs::create_directories(dir);
    CHECK(ss_scenario_save(m.p, (dir / "m.json").c_str()) == SS_OK);
    Scn again;
    REQUIRE(ss_scenario_load((dir / "m.json").c_str(), &again.p) == SS_OK);
    char* c_json = nullptr;
    REQUIRE(ss_scenario_to_json(again.p, &c_json) == SS_OK);
    REQUIRE(ss_scenario_to_json(m.p, &a_json) == SS_OK);
    CHECK(take(c_json) == take(a_json));
    CHECK(ss_scenario_save(m.p, (dir / "no" / "m.json").c_str()) == SS_ERR_IO);
}

TEST_CASE("simulate and inspect a trace") {
    Scn m;
    REQUIRE(ss_scenario_builtin("medium", &m.p) == SS_OK);
    Trc t;
    REQUIRE(ss_simulate(m.p, SS_POLICY_SUPER, 0, &t.p) == SS_OK);

    char* csv = nullptr;
    REQUIRE(ss_trace_csv(t.p, &csv) == SS_OK);
    CHECK(take(csv) == slurp(kSource / "tests" / "golden" / "medium_super.csv"));

    size_t n = 0;
    REQUIRE(ss_trace_event_count(t.p, &n) == SS_OK);
    REQUIRE(n > 0);
    bool saw_switch = false;
    for (size_t i = 0; i < n; ++i) {
        ss_event ev{};
        REQUIRE(ss_trace_event(t.p, i, &ev) == SS_OK);
        if (std::string(ev.kind) == "mode_switch" && std::string(ev.detail) == "super_catastrophe") {
            saw_switch = true;
            CHECK(ev.time == 60);
            CHECK(ev.processor == 0);
            CHECK(std::string(ev.job) == "CT#0");
        }
    }
    CHECK(saw_switch);
    ss_event ev{};
    CHECK(ss_trace_event(t.p, n, &ev) == SS_ERR_INVALID_ARGUMENT);

    ss_metrics mt{};
    REQUIRE(ss_trace_metrics(t.p, &mt) == SS_OK);
    CHECK(mt.released == 5);
    CHECK(mt.missed == 1);
    CHECK(mt.late == 0);
    CHECK(mt.success_num == 4);
    CHECK(mt.success_den == 5);
    CHECK(mt.stable == 1);

    char* row = nullptr;
    REQUIRE(ss_trace_metrics_row(t.p, &row) == SS_OK);
    CHECK(take(row) == "super,5,1,4/5,0.800000,0,true");
    char* text = nullptr;
    REQUIRE(ss_trace_metrics_text(t.p, &text) == SS_OK);
    CHECK(take(text).find("N_success") != std::string::npos);
    char* gantt = nullptr;
    REQUIRE(ss_trace_gantt(t.p, &gantt) == SS_OK);
    CHECK(take(gantt).find("CT") != std::string::npos);

    char* findings = nullptr;
    CHECK(ss_trace_check(t.p, &findings) == SS_OK);
    CHECK(take(findings).empty());

    const fs::path dir = kBinary / "scratch" / "capi";
    fs::create_directories(dir);
    CHECK(ss_trace_write_csv(t.p, (dir / "t.csv").c_str()) == SS_OK);
    CHECK(slurp(dir / "t.csv") == slurp(kSource / "tests" / "golden" / "medium_super.csv"));
    CHECK(ss_trace_write_csv(t.p, (dir / "no" / "t.csv").c_str()) == SS_ERR_IO);

    Trc cut;
    REQUIRE(ss_simulate(m.p, SS_POLICY_EDF, 50, &cut.p) == SS_OK);
    size_t cut_n = 0;
    REQUIRE(ss_trace_event_count(cut.p, &cut_n) == SS_OK);
    for (size_t i = 0; i < cut_n; ++i) {
        REQUIRE(ss_trace_event(cut.p, i, &ev) == SS_OK);
        CHECK(ev.time <= 50);
    }
    Trc bad;
    CHECK(ss_simulate(m.p, static_cast<ss_policy>(9), 0, &bad.p) == SS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("compare through the C API") {
    Scn l;
    REQUIRE(ss_scenario_builtin("large", &l.p) == SS_OK);
    char* report = nullptr;
    int holds = -1;
    REQUIRE(ss_compare(l.p, &report, &holds) == SS_OK);
    CHECK(holds == 1);
    const std::string text = take(report);
    CHECK(text.find("9/11") != std::string::npos);
}

TEST_CASE("generate") {
    Scn g;
    REQUIRE(ss_generate(5, 3, 4, 1, &g.p) == SS_OK);
    size_t count = 0;
    CHECK(ss_scenario_task_count(g.p, &count) == SS_OK);
    CHECK(count == 5);
    Trc t;
    REQUIRE(ss_simulate(g.p, SS_POLICY_SCENARIO, 0, &t.p) == SS_OK);
    ss_metrics mt{};
    REQUIRE(ss_trace_metrics(t.p, &mt) == SS_OK);
    CHECK(mt.missed == 0);

    Scn bad;
    CHECK(ss_generate(4, 1, 2, 0, &bad.p) == SS_ERR_INVALID_ARGUMENT);
    CHECK(ss_generate(5, 3, 2, 0, &bad.p) == SS_ERR_INVALID_ARGUMENT);
    CHECK(ss_generate(5, 1, 0, 0, &bad.p) == SS_ERR_INVALID_ARGUMENT);
    CHECK(bad.p == nullptr);
}

TEST_CASE("allocation and failure injection") {
    const char* halves = R"({"tasks": [
        {"id": 1, "kind": "periodic", "execution_time": 5, "period": 10, "deadline": 10},
        {"id": 2, "kind": "periodic", "execution_time": 10, "period": 20, "deadline": 20}]})";
    Scn s;
    REQUIRE(ss_scenario_parse(halves, &s.p) == SS_OK);
    Plc p;
    REQUIRE(ss_allocate(s.p, &p.p) == SS_OK);
    int32_t procs = 0, bound = 0;
    CHECK(ss_placement_processors(p.p, &procs) == SS_OK);
    CHECK(procs == 2);
    CHECK(ss_placement_lower_bound(p.p, &bound) == SS_OK);
    CHECK(bound == 2);
    char* findings = nullptr;
    CHECK(ss_placement_validate(p.p, &findings) == SS_OK);
    CHECK(take(findings).empty());
    char* text = nullptr;
    REQUIRE(ss_placement_text(p.p, &text) == SS_OK);
    CHECK_FALSE(take(text).empty());

    for (int32_t proc = 0; proc < procs; ++proc) {
        Trc t;
        REQUIRE(ss_inject_failure(p.p, proc, 0, 20, &t.p) == SS_OK);
        ss_metrics mt{};
        REQUIRE(ss_trace_metrics(t.p, &mt) == SS_OK);
        CHECK(mt.missed == 0);
        char* f = nullptr;
        CHECK(ss_trace_check(t.p, &f) == SS_OK);
        ss_string_free(f);
    }
    Trc bad;
    CHECK(ss_inject_failure(p.p, 5, 0, 20, &bad.p) == SS_ERR_INVALID_ARGUMENT);

    Scn one_shot;
    REQUIRE(ss_scenario_builtin("medium", &one_shot.p) == SS_OK);
    Plc none;
    CHECK(ss_allocate(one_shot.p, &none.p) != SS_OK);
    CHECK(none.p == nullptr);
}

TEST_CASE("experiments") {
    const fs::path dir = kBinary / "scratch" / "capi_exp";
    fs::remove_all(dir);
    char* summary = nullptr;
    int ok = 0;
    REQUIRE(ss_experiment("medium", dir.c_str(), &summary, &ok) == SS_OK);
    CHECK(ok == 1);
    CHECK_FALSE(take(summary).empty());
    CHECK(fs::exists(dir / "medium_super.csv"));
    summary = nullptr;
    CHECK(ss_experiment("nope", dir.c_str(), &summary, &ok) == SS_ERR_INVALID_ARGUMENT);
    CHECK(summary == nullptr);
}
