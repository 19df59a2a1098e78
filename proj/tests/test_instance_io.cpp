#include <doctest.h>

#include <string>

#include "dislofix/errors.hpp"
#include "dislofix/instance_gen.hpp"
#include "dislofix/instance_io.hpp"
#include "helpers.hpp"

using namespace dislofix;
using testutil::fixture;

namespace {

const char* kMinimal = R"({
  "version": "1",
  "space": {
    "points": [{"value": "0"}, {"value": "1"}],
    "metric": {"kind": "max"},
    "arithmetic": "exact"
  }
})";

std::string full_instance() {
    return R"({
  "version": "1",
  "space": {
    "points": [{"label": "a", "value": "0"}, {"value": "1"}, {"value": "2"}],
    "metric": {"kind": "max_plus_discrete"},
    "arithmetic": "exact"
  },
  "family": [[0], [1], [0, 1, 2]],
  "map": [0, 0, 1],
  "graph": {"edges": [[0, 1], [1, 2]], "diagonal": true},
  "phi": {"kind": "linear", "lambda": "1/2"}
})";
}

}  // namespace

TEST_CASE("minimal instances parse to a bare space") {
    ParsedInstance inst = parse_instance_text(kMinimal);
    CHECK(inst.space.size() == 2);
    CHECK(inst.space.metric_kind() == MetricKind::Max);
    CHECK(inst.space.mode() == ArithmeticMode::Exact);
    CHECK_FALSE(inst.family.has_value());
    CHECK_FALSE(inst.map.has_value());
    CHECK_FALSE(inst.graph.has_value());
    CHECK_FALSE(inst.phi.has_value());
}

TEST_CASE("complete instances parse every section") {
    ParsedInstance inst = parse_instance_text(full_instance());
    REQUIRE(inst.family.has_value());
    REQUIRE(inst.map.has_value());
    REQUIRE(inst.graph.has_value());
    REQUIRE(inst.phi.has_value());
    CHECK(inst.family->size() == 3);
    CHECK(inst.map->apply(2) == 1);
    CHECK(inst.graph->has_edge(1, 2));
    CHECK(inst.graph->has_edge(2, 2));
    CHECK(inst.phi->kind() == PhiKind::Linear);
    CHECK(inst.phi->lambda() == Rat(1, 2));
    CHECK(inst.space.points()[0].label == std::string("a"));
}

TEST_CASE("serialization round-trips byte for byte") {
    ParsedInstance inst = parse_instance_text(full_instance());
    Json first = serialize_instance(inst.space, &*inst.family, &*inst.map, &*inst.graph,
                                    &*inst.phi);
    ParsedInstance again = parse_instance_text(render_json(first));
    Json second = serialize_instance(again.space, &*again.family, &*again.map, &*again.graph,
                                     &*again.phi);
    CHECK(render_json(first) == render_json(second));
}

TEST_CASE("table metrics serialize their rows") {
    ParsedInstance inst = parse_instance_text(R"({
      "version": "1",
      "space": {
        "points": [{}, {}],
        "metric": {"kind": "table", "table": [["0", "1/2"], ["1/2", "0"]]},
        "arithmetic": "float"
      }
    })");
    CHECK(inst.space.metric_kind() == MetricKind::Table);
    CHECK(inst.space.mode() == ArithmeticMode::Float);
    CHECK(inst.space.distance(0, 1) == Rat(1, 2));
    Json out = serialize_instance(inst.space, nullptr, nullptr, nullptr, nullptr);
    CHECK(out["space"]["metric"]["table"][0][1] == "1/2");
    CHECK(out["space"]["arithmetic"] == "float");
}

TEST_CASE("parse failures carry field paths") {
    auto message_of = [](const std::string& text) {
        try {
            (void)parse_instance_text(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message_of("{").find("document") != std::string::npos);
    CHECK(message_of("[]").find("document") != std::string::npos);
    CHECK(message_of("{}").find("version") != std::string::npos);
    CHECK(message_of(R"({"version": "2"})").find("version") != std::string::npos);
    CHECK(message_of(R"({"version": "1"})").find("space") != std::string::npos);

    // malformed rational inside the table
    std::string bad_rat = R"({
      "version": "1",
      "space": {
        "points": [{}],
        "metric": {"kind": "table", "table": [["3/0"]]},
        "arithmetic": "exact"
      }
    })";
    CHECK(message_of(bad_rat).find("table") != std::string::npos);

    std::string bad_kind = R"({
      "version": "1",
      "space": {"points": [{"value": "1"}], "metric": {"kind": "euclid"}, "arithmetic": "exact"}
    })";
    CHECK(message_of(bad_kind).find("kind") != std::string::npos);

    std::string formula_with_table = R"({
      "version": "1",
      "space": {
        "points": [{"value": "1"}],
        "metric": {"kind": "max", "table": [["0"]]},
        "arithmetic": "exact"
      }
    })";
    CHECK(message_of(formula_with_table).find("table") != std::string::npos);

    std::string missing_arithmetic = R"({
      "version": "1",
      "space": {"points": [{"value": "1"}], "metric": {"kind": "max"}}
    })";
    CHECK(message_of(missing_arithmetic).find("arithmetic") != std::string::npos);

    std::string map_without_family = R"({
      "version": "1",
      "space": {"points": [{"value": "1"}], "metric": {"kind": "max"}, "arithmetic": "exact"},
      "map": [0]
    })";
    CHECK(message_of(map_without_family).find("map") != std::string::npos);
}

TEST_CASE("invalid comparison functions surface as their own error") {
    std::string bad_phi = R"({
      "version": "1",
      "space": {"points": [{"value": "1"}], "metric": {"kind": "max"}, "arithmetic": "exact"},
      "family": [[0]],
      "phi": {"kind": "linear", "lambda": "1"}
    })";
    CHECK_THROWS_AS((void)parse_instance_text(bad_phi), InvalidPhi);
}

TEST_CASE("fixture files parse cleanly") {
    CHECK_NOTHROW((void)parse_instance_file(fixture("example1_formula.json")));
    CHECK_NOTHROW((void)parse_instance_file(fixture("triangle_violation.json")));
    CHECK_NOTHROW((void)parse_instance_file(fixture("constant_map.json")));
    CHECK_NOTHROW((void)parse_instance_file(fixture("identity_map.json")));
    CHECK_NOTHROW((void)parse_instance_file(fixture("linear_half_chain.json")));
    CHECK_NOTHROW((void)parse_instance_file(fixture("split_components.json")));
    CHECK_THROWS_AS((void)parse_instance_file(fixture("malformed_rational.json")), ParseError);
    CHECK_THROWS_AS((void)parse_instance_file(fixture("no_such_file.json")), ParseError);
}

TEST_CASE("generated instances serialize and reparse identically") {
    GenConfig cfg;
    cfg.rng_seed = 5;
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        GeneratedInstance inst = draw_instance(cfg, trial);
        Json first = serialize_instance(inst);
        ParsedInstance back = parse_instance_text(render_json(first));
        REQUIRE(back.family.has_value());
        REQUIRE(back.map.has_value());
        REQUIRE(back.graph.has_value());
        REQUIRE(back.phi.has_value());
        Json second = serialize_instance(back.space, &*back.family, &*back.map, &*back.graph,
                                         &*back.phi);
        CHECK(render_json(first) == render_json(second));
    }
}

TEST_CASE("rendered reports are stable and newline-terminated") {
    Json j;
    j["a"] = 1;
    j["b"] = "x";
    std::string text = render_json(j);
    CHECK(text.back() == '\n');
    CHECK(text == render_json(j));
    CHECK(text.find("\"a\": 1") != std::string::npos);
}

TEST_CASE("report serializers keep their key layout") {
    auto space = testutil::usual_space({Rat(0), Rat(1)});
    auto report = check_axioms(space);
    Json j = axiom_report_json(report);
    CHECK(j.contains("identity"));
    CHECK(j.contains("symmetry"));
    CHECK(j.contains("triangle"));
    CHECK(j.contains("all_passed"));
    CHECK(j["all_passed"] == true);

    GenConfig cfg;
    Json cj = gen_config_json(cfg);
    CHECK(cj["seed"] == 1);
    CHECK(cj["trials"] == 1);
    CHECK(cj["n_points"][0] == 2);
    CHECK(cj["n_points"][1] == 8);
    CHECK(cj["value_scale"] == "8");
}
