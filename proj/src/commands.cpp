#include "dislofix/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dislofix/errors.hpp"
#include "dislofix/instance_io.hpp"

namespace dislofix {

namespace {

std::string rat(const Rat& value) { return rational_to_string(value); }

void write_json_file(const std::string& path, const Json& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << render_json(payload);
}

// The command and file echo lead the report; payload keys follow in their
// builder order.
Json wrap_report(const std::string& command, const std::string& file, Json payload) {
    Json report;
    report["command"] = command;
    if (!file.empty()) report["file"] = file;
    for (auto& [key, value] : payload.items()) report[key] = std::move(value);
    return report;
}

const SetFamily& need_family(const ParsedInstance& inst) {
    if (!inst.family.has_value()) throw ParseError("family", "required by this command");
    return *inst.family;
}

const SetMap& need_map(const ParsedInstance& inst) {
    if (!inst.map.has_value()) throw ParseError("map", "required by this command");
    return *inst.map;
}

const SetGraph& need_graph(const ParsedInstance& inst) {
    if (!inst.graph.has_value()) throw ParseError("graph", "required by this command");
    return *inst.graph;
}

const ComparisonFunction& need_phi(const ParsedInstance& inst) {
    if (!inst.phi.has_value()) throw ParseError("phi", "required by this command");
    return *inst.phi;
}

std::string axiom_line(const char* name, const AxiomStatus& status) {
    std::string line = "  ";
    line += name;
    line += ": ";
    if (status.passed) {
        line += "ok";
    } else {
        line += "VIOLATED at (";
        for (std::size_t i = 0; i < status.witness.size(); ++i) {
            if (i > 0) line += ", ";
            line += std::to_string(status.witness[i]);
        }
        line += ")";
    }
    return line;
}

int cmd_check(const std::string& file, const std::string& json_path) {
    ParsedInstance inst = parse_instance_file(file);
    AxiomReport report = check_axioms(inst.space);

    std::cout << "check: " << inst.space.size() << " points, "
              << (inst.space.mode() == ArithmeticMode::Exact ? "exact" : "float")
              << " arithmetic\n";
    std::cout << axiom_line("identity", report.identity) << "\n";
    std::cout << axiom_line("symmetry", report.symmetry) << "\n";
    std::cout << axiom_line("triangle", report.triangle) << "\n";
    for (const std::string& w : report.warnings) std::cout << "  warning: " << w << "\n";
    std::cout << (report.all_passed() ? "verdict: dislocated metric axioms hold"
                                      : "verdict: axioms violated")
              << "\n";

    if (!json_path.empty()) {
        write_json_file(json_path, wrap_report("check", file, axiom_report_json(report)));
    }
    return report.all_passed() ? 0 : 1;
}

int cmd_hausdorff(const std::string& file, std::size_t i, std::size_t j,
                  const std::string& json_path) {
    ParsedInstance inst = parse_instance_file(file);
    const SetFamily& family = need_family(inst);
    if (i >= family.size() || j >= family.size()) {
        throw ParseError("family", "subset index out of range");
    }
    const Rat forward = excess(inst.space, family.subset(i), family.subset(j));
    const Rat backward = excess(inst.space, family.subset(j), family.subset(i));
    const Rat h = forward > backward ? forward : backward;

    std::cout << "hausdorff: subsets " << i << " and " << j << "\n";
    std::cout << "  excess(" << i << ", " << j << ") = " << rat(forward) << "\n";
    std::cout << "  excess(" << j << ", " << i << ") = " << rat(backward) << "\n";
    std::cout << "  H = " << rat(h) << "\n";

    if (!json_path.empty()) {
        write_json_file(json_path, wrap_report("hausdorff", file,
                                               Json{{"i", i},
                                                    {"j", j},
                                                    {"excess_ij", rat(forward)},
                                                    {"excess_ji", rat(backward)},
                                                    {"hausdorff", rat(h)}}));
    }
    return 0;
}

int cmd_verify(const std::string& file, const std::string& functional_name,
               const std::string& mode_name, const std::string& json_path) {
    ParsedInstance inst = parse_instance_file(file);
    const SetFamily& family = need_family(inst);
    const SetMap& map = need_map(inst);
    const SetGraph& graph = need_graph(inst);
    const ComparisonFunction& phi = need_phi(inst);
    const Functional functional = functional_name == "ns" ? Functional::NS : Functional::MT;
    const PreservationMode mode =
        mode_name == "path" ? PreservationMode::Path : PreservationMode::Edge;

    FamilyMetrics metrics(inst.space, family);
    ContractionCertificate cert = certify(metrics, map, graph, phi, functional, mode);

    std::cout << "verify: functional " << functional_name << ", mode " << mode_name << "\n";
    std::cout << "  preservation: "
              << (cert.preservation.preserved() ? "ok" : "violated") << " ("
              << cert.preservation.edges_checked << " edges)\n";
    for (const PreservationViolation& v : cert.preservation.violations) {
        std::cout << "    edge (" << v.from << ", " << v.to << ") maps to (" << v.image_from
                  << ", " << v.image_to << ") with no edge between the images\n";
    }
    std::cout << "  inequality: " << cert.violations.size() << " violation"
              << (cert.violations.size() == 1 ? "" : "s") << "\n";
    for (const ContractionViolation& v : cert.violations) {
        std::cout << "    edge (" << v.from << ", " << v.to << "): H(images) = " << rat(v.lhs)
                  << " > phi = " << rat(v.phi_value) << " (functional " << rat(v.functional_value)
                  << ")\n";
    }
    std::cout << "verdict: " << (cert.certified() ? "certified" : "refuted") << "\n";

    if (!json_path.empty()) {
        write_json_file(json_path, wrap_report("verify", file, certificate_json(cert)));
    }
    return cert.certified() ? 0 : 1;
}

int cmd_iterate(const std::string& file, std::size_t start, std::size_t max_iters,
                const std::string& json_path) {
    ParsedInstance inst = parse_instance_file(file);
    const SetFamily& family = need_family(inst);
    const SetMap& map = need_map(inst);
    const ComparisonFunction& phi = need_phi(inst);
    if (start >= family.size()) throw ParseError("start", "subset index out of range");

    FamilyMetrics metrics(inst.space, family);
    IterationTrace trace = iterate(metrics, map, phi, start, max_iters);

    std::cout << "iterate: start " << start << ", cap " << max_iters << "\n";
    std::cout << "  n  state  weight  bound  ok\n";
    for (std::size_t n = 0; n < trace.step_weights.size(); ++n) {
        const bool ok = inst.space.leq(trace.step_weights[n], trace.bound_values[n]);
        std::cout << "  " << n << "  " << trace.states[n] << " -> " << trace.states[n + 1] << "  "
                  << rat(trace.step_weights[n]) << "  " << rat(trace.bound_values[n]) << "  "
                  << (ok ? "yes" : "NO") << "\n";
    }
    switch (trace.terminated.kind) {
        case TerminationKind::FixedPoint:
            std::cout << "terminated: fixed point at subset " << trace.terminated.fixed_point
                      << "\n";
            break;
        case TerminationKind::CycleDetected:
            std::cout << "terminated: cycle of period " << trace.terminated.period << "\n";
            break;
        case TerminationKind::MaxIters:
            std::cout << "terminated: iteration cap reached\n";
            break;
    }

    if (!json_path.empty()) {
        write_json_file(json_path, wrap_report("iterate", file, trace_json(inst.space, trace)));
    }
    return 0;
}

int cmd_fixed_points(const std::string& file, const std::string& json_path) {
    ParsedInstance inst = parse_instance_file(file);
    const SetFamily& family = need_family(inst);
    const SetMap& map = need_map(inst);

    FamilyMetrics metrics(inst.space, family);
    FixedPointReport report = fixed_point_report(metrics, map);

    auto list = [](const std::vector<std::size_t>& xs) {
        std::string out = "{";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0) out += ", ";
            out += std::to_string(xs[i]);
        }
        return out + "}";
    };
    std::cout << "fixed points by weight criterion: " << list(report.sets.by_weight) << "\n";
    std::cout << "fixed points by index criterion: " << list(report.sets.by_index) << "\n";
    if (!report.sets.by_weight.empty()) {
        std::cout << "pairwise weights over the weight-criterion set:\n";
        for (std::size_t a = 0; a < report.sets.by_weight.size(); ++a) {
            std::cout << " ";
            for (std::size_t b = 0; b < report.sets.by_weight.size(); ++b) {
                std::cout << " " << rat(report.pairwise_weights[a][b]);
            }
            std::cout << "\n";
        }
    }
    std::cout << "singleton: " << (report.singleton ? "yes" : "no") << "\n";
    if (report.wellposed.has_value()) {
        std::cout << "wellposedness: " << report.wellposed->approximate.size()
                  << " approximate fixed point"
                  << (report.wellposed->approximate.size() == 1 ? "" : "s") << ", "
                  << (report.wellposed->all_within() ? "all within bound" : "BOUND EXCEEDED")
                  << "\n";
    }

    if (!json_path.empty()) {
        write_json_file(json_path,
                        wrap_report("fixed-points", file, fixed_point_report_json(report)));
    }
    return 0;
}

IndexRange parse_range(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned()) {
        throw ParseError(path, "expected [lo, hi]");
    }
    return IndexRange{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

GenConfig load_gen_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open config file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, e.what());
    }
    if (!j.is_object()) throw ParseError(path, "expected a JSON object");

    GenConfig cfg;
    auto rational_field = [&](const char* key, Rat& into) {
        if (!j.contains(key)) return;
        if (!j[key].is_string()) throw ParseError(key, "expected a rational string");
        auto parsed = parse_rational(j[key].get<std::string>());
        if (!parsed.has_value()) throw ParseError(key, "not a valid rational");
        into = *parsed;
    };
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ParseError("seed", "expected an integer");
        cfg.rng_seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("trials")) {
        if (!j["trials"].is_number_unsigned()) throw ParseError("trials", "expected an integer");
        cfg.trials = j["trials"].get<std::size_t>();
    }
    if (j.contains("n_points")) cfg.n_points = parse_range(j["n_points"], "n_points");
    if (j.contains("family_size")) cfg.family_size = parse_range(j["family_size"], "family_size");
    rational_field("value_scale", cfg.value_scale);
    rational_field("bias_lambda", cfg.bias_lambda);
    if (j.contains("diagonal_mode")) {
        const std::string v = j["diagonal_mode"].is_string()
                                  ? j["diagonal_mode"].get<std::string>()
                                  : std::string();
        if (v == "zero") {
            cfg.diagonal_mode = DiagonalMode::ZeroDiag;
        } else if (v == "random") {
            cfg.diagonal_mode = DiagonalMode::RandomDiag;
        } else {
            throw ParseError("diagonal_mode", "expected \"zero\" or \"random\"");
        }
    }
    if (j.contains("map_mode")) {
        const std::string v =
            j["map_mode"].is_string() ? j["map_mode"].get<std::string>() : std::string();
        if (v == "random") {
            cfg.map_mode = MapMode::Random;
        } else if (v == "contraction_biased") {
            cfg.map_mode = MapMode::ContractionBiased;
        } else {
            throw ParseError("map_mode", "expected \"random\" or \"contraction_biased\"");
        }
    }
    return cfg;
}

int cmd_fuzz(std::uint64_t seed, std::size_t trials, bool seed_set, bool trials_set,
             const std::string& config_path, const std::string& json_path,
             const std::string& dump_dir) {
    GenConfig cfg;
    cfg.trials = 10000;
    if (!config_path.empty()) cfg = load_gen_config(config_path);
    if (seed_set) cfg.rng_seed = seed;
    if (trials_set) cfg.trials = trials;
    try {
        validate_config(cfg);
    } catch (const Error& e) {
        throw ParseError("config", e.what());
    }

    CampaignReport report = run_campaign(cfg);

    std::cout << "fuzz: seed " << cfg.rng_seed << ", trials " << report.trials_run << "\n";
    std::cout << "  certified: " << report.certified_count
              << ", refuted: " << report.refuted_count << "\n";
    auto tally_line = [](const char* name, const CampaignTallies& t) {
        std::cout << "  " << name << ": traces " << t.traces_run << ", conclusion checks "
                  << (t.adjacent_pair_weights_zero.checked + t.fixed_points_imply_starts.checked +
                      t.orbits_reach_fixed_points.checked +
                      t.singleton_on_complete_graph.checked)
                  << ", failures "
                  << (t.adjacent_pair_weights_zero.failed + t.fixed_points_imply_starts.failed +
                      t.orbits_reach_fixed_points.failed + t.singleton_on_complete_graph.failed +
                      t.trace_bound_failures + t.wellposed_flagged)
                  << "\n";
    };
    tally_line("first functional", report.mt);
    tally_line("second functional", report.ns);
    std::cout << "  counterexamples: " << report.counterexamples.size() << "\n";
    std::cout << "  wall time: " << report.wall_time_ms << " ms\n";
    std::cout << (report.counterexamples.empty()
                      ? "verdict: conclusions held on every certified instance"
                      : "verdict: COUNTEREXAMPLES FOUND")
              << "\n";

    if (!json_path.empty()) {
        write_json_file(json_path, wrap_report("fuzz", "", campaign_report_json(report)));
    }
    if (!dump_dir.empty() && !report.counterexamples.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (std::size_t k = 0; k < report.counterexamples.size(); ++k) {
            const Counterexample& c = report.counterexamples[k];
            Json dump = serialize_instance(c.instance);
            Json traces = Json::array();
            for (const IterationTrace& t : c.traces) {
                traces.push_back(trace_json(c.instance.space, t));
            }
            dump["counterexample"] = {{"trial_index", c.trial_index},
                                      {"detail", c.detail},
                                      {"functional", c.instance.functional == Functional::MT
                                                         ? "mt"
                                                         : "ns"},
                                      {"traces", std::move(traces)}};
            const std::string name = dump_dir + "/counterexample_" +
                                     std::to_string(c.trial_index) + "_" + std::to_string(k) +
                                     ".json";
            write_json_file(name, dump);
        }
    }
    return report.counterexamples.empty() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"finite dislocated-metric set-contraction workbench"};
    app.require_subcommand(1);

    std::string file;
    std::string json_path;

    auto* check = app.add_subcommand("check", "validate the metric axioms of an instance");
    check->add_option("file", file, "instance file")->required();
    check->add_option("--json", json_path, "write a JSON report here");

    std::size_t h_i = 0;
    std::size_t h_j = 0;
    auto* hausdorff_cmd =
        app.add_subcommand("hausdorff", "set distance between two family members");
    hausdorff_cmd->add_option("file", file, "instance file")->required();
    hausdorff_cmd->add_option("i", h_i, "first subset index")->required();
    hausdorff_cmd->add_option("j", h_j, "second subset index")->required();
    hausdorff_cmd->add_option("--json", json_path, "write a JSON report here");

    std::string functional = "mt";
    std::string mode = "edge";
    auto* verify = app.add_subcommand("verify", "decide the graph set-contraction conditions");
    verify->add_option("file", file, "instance file")->required();
    verify->add_option("--functional", functional, "mt or ns")
        ->check(CLI::IsMember({"mt", "ns"}));
    verify->add_option("--mode", mode, "edge or path preservation")
        ->check(CLI::IsMember({"edge", "path"}));
    verify->add_option("--json", json_path, "write a JSON report here");

    std::size_t start = 0;
    std::size_t max_iters = 64;
    auto* iterate_cmd = app.add_subcommand("iterate", "run the orbit from a start subset");
    iterate_cmd->add_option("file", file, "instance file")->required();
    iterate_cmd->add_option("--start", start, "start subset index")->required();
    iterate_cmd->add_option("--max-iters", max_iters, "iteration cap")
        ->check(CLI::PositiveNumber);
    iterate_cmd->add_option("--json", json_path, "write a JSON report here");

    auto* fixed = app.add_subcommand("fixed-points", "report both fixed-point criteria");
    fixed->add_option("file", file, "instance file")->required();
    fixed->add_option("--json", json_path, "write a JSON report here");

    std::uint64_t seed = 1;
    std::size_t trials = 10000;
    std::string config_path;
    std::string dump_dir;
    auto* fuzz = app.add_subcommand("fuzz", "randomized conclusion-checking campaign");
    auto* seed_opt = fuzz->add_option("--seed", seed, "campaign seed");
    auto* trials_opt =
        fuzz->add_option("--trials", trials, "trial count")->check(CLI::PositiveNumber);
    fuzz->add_option("--config", config_path, "generator config JSON");
    fuzz->add_option("--json", json_path, "write a JSON report here");
    fuzz->add_option("--dump-dir", dump_dir, "directory for counterexample dumps");

    try {
        app.parse(argc, argv);
        if (check->parsed()) return cmd_check(file, json_path);
        if (hausdorff_cmd->parsed()) return cmd_hausdorff(file, h_i, h_j, json_path);
        if (verify->parsed()) return cmd_verify(file, functional, mode, json_path);
        if (iterate_cmd->parsed()) return cmd_iterate(file, start, max_iters, json_path);
        if (fixed->parsed()) return cmd_fixed_points(file, json_path);
        if (fuzz->parsed()) {
            return cmd_fuzz(seed, trials, seed_opt->count() > 0, trials_opt->count() > 0,
                            config_path, json_path, dump_dir);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InvalidPhi& e) {
        std::cerr << "invalid comparison function: " << e.what() << " (witness t = "
                  << rational_to_string(e.witness) << ")\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dislofix
