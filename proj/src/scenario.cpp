#include <supersched/scenario.hpp>

#include <supersched/engine.hpp>
#include <supersched/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace supersched {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& source, const std::string& where, const std::string& what) {
    fail(ErrorCode::Parse, source + ": " + where + ": " + what);
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& source, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            parse_fail(source, where, "unknown key \"" + key + "\"");
}

std::int64_t get_int(const json& obj, const char* key, const std::string& source, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(source, where, std::string("missing \"") + key + "\"");
    if (!it->is_number_integer())
        parse_fail(source, where, std::string("\"") + key + "\" must be an integer");
    return it->get<std::int64_t>();
}

std::optional<std::int64_t> get_opt_int(const json& obj, const char* key, const std::string& source,
                                        const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    return get_int(obj, key, source, where);
}

std::string get_string(const json& obj, const char* key, const std::string& source, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(source, where, std::string("missing \"") + key + "\"");
    if (!it->is_string()) parse_fail(source, where, std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
}

TaskSpec parse_task(const json& entry, const std::string& source, const std::string& slot, bool catastrophe_list) {
    if (!entry.is_object()) parse_fail(source, slot, "task entry must be an object");
    std::string where = slot;
    if (auto it = entry.find("label"); it != entry.end() && it->is_string())
        where += " (" + it->get<std::string>() + ")";
    else if (auto id = entry.find("id"); id != entry.end() && id->is_number_integer())
        where += " (id " + std::to_string(id->get<std::int64_t>()) + ")";

    reject_unknown_keys(entry,
                        {"id", "label", "kind", "criticality", "execution_time", "release", "deadline", "period",
                         "min_interarrival", "base_priority"},
                        source, where);
    TaskSpec t;
    t.id = static_cast<int>(get_int(entry, "id", source, where));
    t.label = entry.contains("label") ? get_string(entry, "label", source, where) : "T" + std::to_string(t.id);
    if (entry.contains("kind")) {
        const auto kind = get_string(entry, "kind", source, where);
        auto parsed = parse_task_kind(kind);
        if (!parsed) parse_fail(source, where, "unknown kind \"" + kind + "\"");
        t.kind = *parsed;
    } else {
        t.kind = catastrophe_list ? TaskKind::Catastrophe : TaskKind::Periodic;
    }
    if (catastrophe_list && t.kind != TaskKind::Catastrophe)
        parse_fail(source, where, "entries of \"catastrophes\" must have kind catastrophe");
    if (entry.contains("criticality")) {
        const auto crit = get_string(entry, "criticality", source, where);
        auto parsed = parse_criticality(crit);
        if (!parsed) parse_fail(source, where, "unknown criticality \"" + crit + "\"");
        t.criticality = *parsed;
    }
    t.execution_time = get_int(entry, "execution_time", source, where);
    t.release = get_opt_int(entry, "release", source, where).value_or(0);
    t.period = get_opt_int(entry, "period", source, where);
    t.min_interarrival = get_opt_int(entry, "min_interarrival", source, where);
    // Implicit deadlines default to the period.
    if (auto d = get_opt_int(entry, "deadline", source, where)) t.deadline = *d;
    else if (t.kind == TaskKind::Periodic && t.period) t.deadline = *t.period;
    else parse_fail(source, where, "missing \"deadline\"");
    t.base_priority = static_cast<int>(get_opt_int(entry, "base_priority", source, where).value_or(0));
    return t;
}

json task_json(const TaskSpec& t) {
    json j;
    j["id"] = t.id;
    j["label"] = t.label;
    j["kind"] = std::string(to_string(t.kind));
    j["criticality"] = std::string(to_string(t.criticality));
    j["execution_time"] = t.execution_time;
    j["release"] = t.release;
    j["deadline"] = t.deadline;
    if (t.period) j["period"] = *t.period;
    if (t.min_interarrival) j["min_interarrival"] = *t.min_interarrival;
    j["base_priority"] = t.base_priority;
    return j;
}

TaskSpec one_shot(int id, Duration e, TimePoint r, TimePoint d) {
    TaskSpec t;
    t.id = id;
    t.label = "T" + std::to_string(id);
    t.kind = TaskKind::OneShot;
    t.criticality = Criticality::Hard;
    t.execution_time = e;
    t.release = r;
    t.deadline = d;
    t.base_priority = id;
    return t;
}

TaskSpec catastrophe(int id, Duration e, TimePoint r, TimePoint d) {
    TaskSpec t = one_shot(id, e, r, d);
    t.label = "CT";
    t.kind = TaskKind::Catastrophe;
    t.base_priority = 0;
    return t;
}

} // namespace

Scenario parse_scenario_text(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // The library message already carries "line L, column C".
        fail(ErrorCode::Parse, source + ": " + e.what());
    }
    if (!doc.is_object()) parse_fail(source, "document", "top level must be an object");
    reject_unknown_keys(doc, {"name", "processors", "policy", "horizon", "seed", "tasks", "catastrophes", "placement"},
                        source, "document");

    Scenario sc;
    sc.name = doc.contains("name") ? get_string(doc, "name", source, "document") : "scenario";
    sc.processors = static_cast<int>(get_opt_int(doc, "processors", source, "document").value_or(1));
    if (doc.contains("policy")) {
        const auto name = get_string(doc, "policy", source, "document");
        auto p = parse_policy(name);
        if (!p) parse_fail(source, "policy", "unknown policy \"" + name + "\"");
        sc.policy = *p;
    }
    if (auto seed = get_opt_int(doc, "seed", source, "document")) {
        if (*seed < 0) parse_fail(source, "seed", "must be non-negative");
        sc.seed = static_cast<std::uint64_t>(*seed);
    }
    sc.tasks.name = sc.name;

    for (const char* list : {"tasks", "catastrophes"}) {
        if (!doc.contains(list)) continue;
        const json& arr = doc[list];
        if (!arr.is_array()) parse_fail(source, list, "must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            sc.tasks.tasks.push_back(parse_task(arr[i], source, std::string(list) + "[" + std::to_string(i) + "]",
                                                std::string_view(list) == "catastrophes"));
    }

    if (auto violations = validate_taskset(sc.tasks); !violations.empty()) {
        std::ostringstream os;
        os << source << ": invalid task set:";
        for (const auto& v : violations) os << " [task " << v.task_id << " " << v.rule << ": " << v.message << "]";
        fail(ErrorCode::Invariant, os.str());
    }
    if (sc.processors < 1) parse_fail(source, "processors", "must be at least 1");

    TimePoint max_release = 0;
    for (const auto& t : sc.tasks.tasks) max_release = std::max(max_release, t.release);
    if (auto h = get_opt_int(doc, "horizon", source, "document")) sc.horizon = *h;
    else sc.horizon = std::max(default_horizon(sc.tasks), max_release + 1);
    if (sc.horizon <= max_release)
        fail(ErrorCode::Invariant, source + ": horizon " + std::to_string(sc.horizon) +
                                       " must exceed the latest release " + std::to_string(max_release));

    if (doc.contains("placement")) {
        const json& pj = doc["placement"];
        if (!pj.is_object()) parse_fail(source, "placement", "must be an object");
        reject_unknown_keys(pj, {"processors", "assignments"}, source, "placement");
        Placement pl;
        pl.processors = static_cast<int>(get_int(pj, "processors", source, "placement"));
        if (pl.processors < 1) parse_fail(source, "placement", "\"processors\" must be at least 1");
        if (!pj.contains("assignments") || !pj["assignments"].is_array())
            parse_fail(source, "placement", "missing \"assignments\" array");
        const json& arr = pj["assignments"];
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "placement.assignments[" + std::to_string(i) + "]";
            if (!arr[i].is_object()) parse_fail(source, where, "must be an object");
            reject_unknown_keys(arr[i], {"task", "primary", "backup"}, source, where);
            pl.assignments.push_back({static_cast<int>(get_int(arr[i], "task", source, where)),
                                      static_cast<int>(get_int(arr[i], "primary", source, where)),
                                      static_cast<int>(get_int(arr[i], "backup", source, where))});
        }
        pl.load.assign(static_cast<std::size_t>(pl.processors), Rational{0});
        for (const auto& a : pl.assignments) {
            const TaskSpec* t = sc.tasks.find(a.task_id);
            if (!t || !t->rate() || *t->rate() <= 0) continue;
            const Rational u(t->execution_time, *t->rate());
            for (int p : {a.primary, a.backup})
                if (p >= 0 && p < pl.processors) pl.load[p] += u;
        }
        if (auto violations = validate_placement(pl, sc.tasks); !violations.empty()) {
            std::ostringstream os;
            os << source << ": invalid placement:";
            for (const auto& v : violations) os << " [task " << v.task_id << " " << v.rule << ": " << v.message << "]";
            fail(ErrorCode::Invariant, os.str());
        }
        sc.placement = std::move(pl);
    }
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open scenario " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path.string());
}

std::string write_scenario_text(const Scenario& sc) {
    json doc;
    doc["name"] = sc.name;
    doc["processors"] = sc.processors;
    doc["policy"] = std::string(to_string(sc.policy));
    doc["horizon"] = sc.horizon;
    doc["seed"] = sc.seed;
    json tasks = json::array();
    for (const auto& t : sc.tasks.tasks) tasks.push_back(task_json(t));
    doc["tasks"] = std::move(tasks);
    if (sc.placement) {
        json pj;
        pj["processors"] = sc.placement->processors;
        json arr = json::array();
        for (const auto& a : sc.placement->assignments)
            arr.push_back(json{{"task", a.task_id}, {"primary", a.primary}, {"backup", a.backup}});
        pj["assignments"] = std::move(arr);
        doc["placement"] = std::move(pj);
    }
    return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& sc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write scenario " + path.string());
    out << write_scenario_text(sc);
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

Scenario medium_scenario() {
    Scenario sc;
    sc.name = "medium";
    sc.policy = Policy::Super;
    sc.horizon = 250;
    sc.tasks.name = sc.name;
    sc.tasks.tasks = {one_shot(1, 20, 25, 150), one_shot(2, 40, 10, 50), one_shot(3, 60, 50, 200),
                      one_shot(4, 50, 30, 180), catastrophe(5, 60, 60, 120)};
    return sc;
}

Scenario large_scenario() {
    Scenario sc;
    sc.name = "large";
    sc.policy = Policy::Super;
    sc.horizon = 400;
    sc.tasks.name = sc.name;
    sc.tasks.tasks = {one_shot(1, 20, 25, 190),  one_shot(2, 40, 10, 50),   one_shot(3, 60, 50, 350),
                      one_shot(4, 50, 30, 280),  one_shot(5, 30, 20, 210),  one_shot(6, 40, 25, 125),
                      one_shot(7, 25, 35, 135),  one_shot(8, 35, 43, 200),  one_shot(9, 10, 12, 260),
                      one_shot(10, 15, 28, 380), catastrophe(11, 60, 60, 120)};
    return sc;
}

Scenario without_catastrophes(Scenario sc) {
    auto& v = sc.tasks.tasks;
    v.erase(std::remove_if(v.begin(), v.end(), [](const TaskSpec& t) { return t.kind == TaskKind::Catastrophe; }),
            v.end());
    return sc;
}

} // namespace supersched
