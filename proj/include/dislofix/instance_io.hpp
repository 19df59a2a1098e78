#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dislofix/contraction.hpp"
#include "dislofix/core_metric.hpp"
#include "dislofix/fixed_point.hpp"
#include "dislofix/graph_layer.hpp"
#include "dislofix/hausdorff.hpp"
#include "dislofix/instance_gen.hpp"

namespace dislofix {

// Ordered keys keep serialized reports byte-stable across runs.
using Json = nlohmann::ordered_json;

// In-memory form of an instance file. The space is always present; the
// other sections are optional in the schema and commands demand the ones
// they need. Rationals travel as "p/q" strings so exact mode survives the
// round trip.
struct ParsedInstance {
    DislocatedSpace space;
    std::optional<SetFamily> family;
    std::optional<SetMap> map;
    std::optional<SetGraph> graph;
    std::optional<ComparisonFunction> phi;
};

// Throws ParseError with a dotted field path on any schema violation;
// construction failures inside a section surface under that section's
// path. InvalidPhi from the phi section propagates as itself.
ParsedInstance parse_instance_text(const std::string& text);
ParsedInstance parse_instance_file(const std::string& path);

// Inverse of parsing; optional sections are emitted when present.
Json serialize_instance(const DislocatedSpace& space, const SetFamily* family, const SetMap* map,
                        const SetGraph* graph, const ComparisonFunction* phi);
Json serialize_instance(const GeneratedInstance& inst);

Json axiom_report_json(const AxiomReport& report);
Json preservation_report_json(const PreservationReport& report);
Json certificate_json(const ContractionCertificate& cert);
Json trace_json(const DislocatedSpace& space, const IterationTrace& trace);
Json fixed_point_report_json(const FixedPointReport& report);
Json gen_config_json(const GenConfig& cfg);
// Campaign serialization deliberately omits wall time; equal inputs must
// produce equal bytes.
Json campaign_report_json(const CampaignReport& report);

// Canonical file rendering: two-space indent plus trailing newline.
std::string render_json(const Json& j);

}  // namespace dislofix
