#include "dislofix/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "dislofix/errors.hpp"

namespace dislofix {

namespace {

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ParseError(path.empty() ? "document" : path, msg);
}

const Json& require_field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing");
    return *it;
}

std::string require_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Rat require_rational(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a rational as a \"p/q\" string");
    const std::string text = j.get<std::string>();
    std::optional<Rat> parsed = parse_rational(text);
    if (!parsed.has_value()) fail(path, "not a valid rational: \"" + text + "\"");
    return *std::move(parsed);
}

std::size_t require_index(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

bool require_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

void require_array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
}

DislocatedSpace parse_space(const Json& root) {
    const Json& space = require_field(root, "space", "");
    const std::string path = "space";

    const Json& points_json = require_field(space, "points", path);
    require_array(points_json, join(path, "points"));
    std::vector<PointId> points;
    points.reserve(points_json.size());
    for (std::size_t i = 0; i < points_json.size(); ++i) {
        const std::string ppath = at(join(path, "points"), i);
        const Json& entry = points_json[i];
        if (!entry.is_object()) fail(ppath, "expected an object");
        PointId p;
        p.index = i;
        if (entry.contains("label")) p.label = require_string(entry["label"], join(ppath, "label"));
        if (entry.contains("value")) p.value = require_rational(entry["value"], join(ppath, "value"));
        points.push_back(std::move(p));
    }

    const Json& metric = require_field(space, "metric", path);
    const std::string mpath = join(path, "metric");
    const std::string kind = require_string(require_field(metric, "kind", mpath), join(mpath, "kind"));

    const std::string apath = join(path, "arithmetic");
    const std::string arithmetic =
        require_string(require_field(space, "arithmetic", path), apath);
    ArithmeticMode mode;
    if (arithmetic == "exact") {
        mode = ArithmeticMode::Exact;
    } else if (arithmetic == "float") {
        mode = ArithmeticMode::Float;
    } else {
        fail(apath, "expected \"exact\" or \"float\"");
    }

    try {
        if (kind == "table") {
            const Json& table_json = require_field(metric, "table", mpath);
            const std::string tpath = join(mpath, "table");
            require_array(table_json, tpath);
            std::vector<std::vector<Rat>> table;
            table.reserve(table_json.size());
            for (std::size_t r = 0; r < table_json.size(); ++r) {
                const Json& row = table_json[r];
                require_array(row, at(tpath, r));
                std::vector<Rat> values;
                values.reserve(row.size());
                for (std::size_t c = 0; c < row.size(); ++c) {
                    values.push_back(require_rational(row[c], at(at(tpath, r), c)));
                }
                table.push_back(std::move(values));
            }
            return DislocatedSpace::from_table(std::move(points), std::move(table), mode);
        }
        if (kind == "max" || kind == "max_plus_discrete") {
            if (metric.contains("table")) {
                fail(join(mpath, "table"), "not allowed for a formula metric");
            }
            const MetricKind mk = kind == "max" ? MetricKind::Max : MetricKind::MaxPlusDiscrete;
            return DislocatedSpace::from_formula(std::move(points), mk, mode);
        }
        fail(join(mpath, "kind"), "expected \"table\", \"max\", or \"max_plus_discrete\"");
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

std::vector<std::vector<std::size_t>> parse_family_section(const Json& j) {
    require_array(j, "family");
    std::vector<std::vector<std::size_t>> subsets;
    subsets.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& entry = j[i];
        require_array(entry, at("family", i));
        std::vector<std::size_t> members;
        members.reserve(entry.size());
        for (std::size_t k = 0; k < entry.size(); ++k) {
            members.push_back(require_index(entry[k], at(at("family", i), k)));
        }
        subsets.push_back(std::move(members));
    }
    return subsets;
}

ComparisonFunction parse_phi_section(const Json& j) {
    const std::string path = "phi";
    const std::string kind = require_string(require_field(j, "kind", path), join(path, "kind"));
    if (kind == "linear") {
        return ComparisonFunction::linear(
            require_rational(require_field(j, "lambda", path), join(path, "lambda")));
    }
    if (kind == "rational_shrink") {
        return ComparisonFunction::rational_shrink();
    }
    if (kind == "table") {
        const Json& table = require_field(j, "table", path);
        const std::string tpath = join(path, "table");
        require_array(table, tpath);
        std::vector<std::pair<Rat, Rat>> breakpoints;
        breakpoints.reserve(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            const Json& entry = table[i];
            require_array(entry, at(tpath, i));
            if (entry.size() != 2) fail(at(tpath, i), "expected a [t, phi(t)] pair");
            Rat t = require_rational(entry[0], at(tpath, i));
            Rat v = require_rational(entry[1], at(tpath, i));
            breakpoints.emplace_back(std::move(t), std::move(v));
        }
        return ComparisonFunction::user_table(std::move(breakpoints));
    }
    fail(join(path, "kind"), "expected \"linear\", \"rational_shrink\", or \"table\"");
}

const char* mode_name(PreservationMode mode) {
    return mode == PreservationMode::Edge ? "edge" : "path";
}

const char* functional_name(Functional f) { return f == Functional::MT ? "mt" : "ns"; }

Json rational_array(const std::vector<Rat>& values) {
    Json out = Json::array();
    for (const Rat& v : values) out.push_back(rational_to_string(v));
    return out;
}

}  // namespace

ParsedInstance parse_instance_text(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("document", e.what());
    }
    if (!root.is_object()) fail("document", "expected a JSON object");
    const std::string version =
        require_string(require_field(root, "version", ""), "version");
    if (version != "1") fail("version", "unsupported version \"" + version + "\"");

    ParsedInstance out{parse_space(root), {}, {}, {}, {}};

    if (root.contains("family")) {
        auto subsets = parse_family_section(root["family"]);
        try {
            out.family.emplace(out.space, std::move(subsets));
        } catch (const Error& e) {
            fail("family", e.what());
        }
    }
    if (root.contains("map")) {
        if (!out.family.has_value()) fail("map", "requires a family section");
        const Json& m = root["map"];
        require_array(m, "map");
        std::vector<std::size_t> image;
        image.reserve(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            image.push_back(require_index(m[i], at("map", i)));
        }
        try {
            out.map.emplace(*out.family, std::move(image));
        } catch (const Error& e) {
            fail("map", e.what());
        }
    }
    if (root.contains("graph")) {
        if (!out.family.has_value()) fail("graph", "requires a family section");
        const Json& g = root["graph"];
        const Json& edges_json = require_field(g, "edges", "graph");
        require_array(edges_json, "graph.edges");
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        edges.reserve(edges_json.size());
        for (std::size_t i = 0; i < edges_json.size(); ++i) {
            const Json& e = edges_json[i];
            require_array(e, at("graph.edges", i));
            if (e.size() != 2) fail(at("graph.edges", i), "expected an [i, j] pair");
            edges.emplace_back(require_index(e[0], at("graph.edges", i)),
                               require_index(e[1], at("graph.edges", i)));
        }
        const bool diagonal =
            require_bool(require_field(g, "diagonal", "graph"), "graph.diagonal");
        try {
            out.graph.emplace(*out.family, std::move(edges), diagonal);
        } catch (const Error& e) {
            fail("graph", e.what());
        }
    }
    if (root.contains("phi")) {
        out.phi = parse_phi_section(root["phi"]);
    }
    return out;
}

ParsedInstance parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance_text(buffer.str());
}

Json serialize_instance(const DislocatedSpace& space, const SetFamily* family, const SetMap* map,
                        const SetGraph* graph, const ComparisonFunction* phi) {
    Json j;
    j["version"] = "1";

    Json points = Json::array();
    for (const PointId& p : space.points()) {
        Json entry = Json::object();
        if (p.label.has_value()) entry["label"] = *p.label;
        if (p.value.has_value()) entry["value"] = rational_to_string(*p.value);
        points.push_back(std::move(entry));
    }
    Json metric;
    switch (space.metric_kind()) {
        case MetricKind::Table: {
            metric["kind"] = "table";
            Json table = Json::array();
            for (std::size_t r = 0; r < space.size(); ++r) {
                Json row = Json::array();
                for (std::size_t s = 0; s < space.size(); ++s) {
                    row.push_back(rational_to_string(space.distance(r, s)));
                }
                table.push_back(std::move(row));
            }
            metric["table"] = std::move(table);
            break;
        }
        case MetricKind::Max:
            metric["kind"] = "max";
            break;
        case MetricKind::MaxPlusDiscrete:
            metric["kind"] = "max_plus_discrete";
            break;
    }
    j["space"] = {{"points", std::move(points)},
                  {"metric", std::move(metric)},
                  {"arithmetic", space.mode() == ArithmeticMode::Exact ? "exact" : "float"}};

    if (family != nullptr) {
        Json fam = Json::array();
        for (const FiniteSubset& subset : family->subsets()) fam.push_back(subset.members);
        j["family"] = std::move(fam);
    }
    if (map != nullptr) j["map"] = map->image();
    if (graph != nullptr) {
        Json edges = Json::array();
        for (const auto& [from, to] : graph->edges()) {
            edges.push_back(Json::array({from, to}));
        }
        j["graph"] = {{"edges", std::move(edges)}, {"diagonal", graph->include_diagonal()}};
    }
    if (phi != nullptr) {
        Json p;
        switch (phi->kind()) {
            case PhiKind::Linear:
                p = {{"kind", "linear"}, {"lambda", rational_to_string(phi->lambda())}};
                break;
            case PhiKind::RationalShrink:
                p = {{"kind", "rational_shrink"}};
                break;
            case PhiKind::UserTable: {
                Json table = Json::array();
                for (const auto& [t, v] : phi->breakpoints()) {
                    table.push_back(Json::array({rational_to_string(t), rational_to_string(v)}));
                }
                p = {{"kind", "table"}, {"table", std::move(table)}};
                break;
            }
        }
        j["phi"] = std::move(p);
    }
    return j;
}

Json serialize_instance(const GeneratedInstance& inst) {
    return serialize_instance(inst.space, &inst.family, &inst.map, &inst.graph, &inst.phi);
}

Json axiom_report_json(const AxiomReport& report) {
    auto status = [](const AxiomStatus& s) {
        return Json{{"passed", s.passed}, {"witness", s.witness}};
    };
    return Json{{"identity", status(report.identity)},
                {"symmetry", status(report.symmetry)},
                {"triangle", status(report.triangle)},
                {"warnings", report.warnings},
                {"all_passed", report.all_passed()}};
}

Json preservation_report_json(const PreservationReport& report) {
    Json violations = Json::array();
    for (const PreservationViolation& v : report.violations) {
        violations.push_back({{"from", v.from},
                              {"to", v.to},
                              {"image_from", v.image_from},
                              {"image_to", v.image_to}});
    }
    return Json{{"mode", mode_name(report.mode)},
                {"edges_checked", report.edges_checked},
                {"preserved", report.preserved()},
                {"violations", std::move(violations)}};
}

Json certificate_json(const ContractionCertificate& cert) {
    Json violations = Json::array();
    for (const ContractionViolation& v : cert.violations) {
        violations.push_back({{"from", v.from},
                              {"to", v.to},
                              {"lhs", rational_to_string(v.lhs)},
                              {"functional_value", rational_to_string(v.functional_value)},
                              {"phi_value", rational_to_string(v.phi_value)}});
    }
    return Json{{"functional", functional_name(cert.functional)},
                {"preservation", preservation_report_json(cert.preservation)},
                {"edges_checked", cert.edges_checked},
                {"violations", std::move(violations)},
                {"verdict", cert.certified() ? "certified" : "refuted"}};
}

Json trace_json(const DislocatedSpace& space, const IterationTrace& trace) {
    Json terminated;
    switch (trace.terminated.kind) {
        case TerminationKind::FixedPoint:
            terminated = {{"kind", "fixed_point"}, {"fixed_point", trace.terminated.fixed_point}};
            break;
        case TerminationKind::CycleDetected:
            terminated = {{"kind", "cycle"}, {"period", trace.terminated.period}};
            break;
        case TerminationKind::MaxIters:
            terminated = {{"kind", "max_iters"}};
            break;
    }
    return Json{{"start", trace.start},
                {"states", trace.states},
                {"step_weights", rational_array(trace.step_weights)},
                {"bound_values", rational_array(trace.bound_values)},
                {"bounds_hold", trace_bounds_hold(space, trace)},
                {"terminated", std::move(terminated)}};
}

Json fixed_point_report_json(const FixedPointReport& report) {
    Json weights = Json::array();
    for (const auto& row : report.pairwise_weights) weights.push_back(rational_array(row));
    Json wellposed;
    if (report.wellposed.has_value()) {
        const WellposednessReport& w = *report.wellposed;
        Json approximate = Json::array();
        for (const ApproximateFixedPoint& a : w.approximate) {
            approximate.push_back(
                {{"index", a.index},
                 {"self_weight", rational_to_string(a.self_weight)},
                 {"nearest", a.nearest},
                 {"distance_to_nearest", rational_to_string(a.distance_to_nearest)},
                 {"flagged", a.flagged}});
        }
        wellposed = {{"tolerance", rational_to_string(w.tolerance)},
                     {"displacement_bound", rational_to_string(w.displacement_bound)},
                     {"allowed_distance", rational_to_string(w.allowed_distance)},
                     {"approximate", std::move(approximate)},
                     {"all_within", w.all_within()}};
    }
    return Json{{"by_weight", report.sets.by_weight},
                {"by_index", report.sets.by_index},
                {"pairwise_weights", std::move(weights)},
                {"singleton", report.singleton},
                {"wellposed", std::move(wellposed)}};
}

Json gen_config_json(const GenConfig& cfg) {
    return Json{{"seed", cfg.rng_seed},
                {"trials", cfg.trials},
                {"n_points", Json::array({cfg.n_points.lo, cfg.n_points.hi})},
                {"family_size", Json::array({cfg.family_size.lo, cfg.family_size.hi})},
                {"value_scale", rational_to_string(cfg.value_scale)},
                {"diagonal_mode",
                 cfg.diagonal_mode == DiagonalMode::ZeroDiag ? "zero" : "random"},
                {"map_mode", cfg.map_mode == MapMode::Random ? "random" : "contraction_biased"},
                {"bias_lambda", rational_to_string(cfg.bias_lambda)}};
}

Json campaign_report_json(const CampaignReport& report) {
    auto tally = [](const ConclusionTally& t) {
        return Json{{"checked", t.checked}, {"failed", t.failed}};
    };
    auto tallies = [&](const CampaignTallies& t) {
        return Json{{"adjacent_pair_weights_zero", tally(t.adjacent_pair_weights_zero)},
                    {"fixed_points_imply_starts", tally(t.fixed_points_imply_starts)},
                    {"orbits_reach_fixed_points", tally(t.orbits_reach_fixed_points)},
                    {"singleton_on_complete_graph", tally(t.singleton_on_complete_graph)},
                    {"traces_run", t.traces_run},
                    {"trace_bound_failures", t.trace_bound_failures},
                    {"wellposed_checked", t.wellposed_checked},
                    {"wellposed_flagged", t.wellposed_flagged}};
    };
    Json counterexamples = Json::array();
    for (const Counterexample& c : report.counterexamples) {
        const char* kind = "conclusion";
        if (c.kind == CounterexampleKind::TraceBound) kind = "trace_bound";
        if (c.kind == CounterexampleKind::Wellposedness) kind = "wellposedness";
        Json traces = Json::array();
        for (const IterationTrace& t : c.traces) {
            traces.push_back(trace_json(c.instance.space, t));
        }
        counterexamples.push_back({{"trial_index", c.trial_index},
                                   {"kind", kind},
                                   {"detail", c.detail},
                                   {"functional", functional_name(c.instance.functional)},
                                   {"instance", serialize_instance(c.instance)},
                                   {"traces", std::move(traces)}});
    }
    return Json{{"config", gen_config_json(report.config)},
                {"trials_run", report.trials_run},
                {"certified_count", report.certified_count},
                {"refuted_count", report.refuted_count},
                {"tallies", Json{{"mt", tallies(report.mt)}, {"ns", tallies(report.ns)}}},
                {"counterexample_count", report.counterexamples.size()},
                {"counterexamples", std::move(counterexamples)}};
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dislofix
