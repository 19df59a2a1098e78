#include "dislofix/fixed_point.hpp"

#include <algorithm>
#include <map>

#include "dislofix/errors.hpp"

namespace dislofix {

namespace {

void require_family_match(const FamilyMetrics& metrics, const SetMap& map) {
    if (metrics.family().id() != map.family_ref()) {
        throw MixedSpaces("metrics and map bound to different families");
    }
}

}  // namespace

IterationTrace iterate(const FamilyMetrics& metrics, const SetMap& map,
                       const ComparisonFunction& phi, std::size_t start, std::size_t max_iters) {
    require_family_match(metrics, map);
    if (start >= metrics.family().size()) throw UnknownPoint("iteration start out of range");
    if (max_iters == 0) throw Error("iteration needs max_iters >= 1");

    const DislocatedSpace& space = metrics.space();
    IterationTrace trace;
    trace.start = start;
    trace.states.push_back(start);
    std::map<std::size_t, std::size_t> last_seen{{start, 0}};

    for (std::size_t n = 0; n < max_iters; ++n) {
        const std::size_t u = trace.states.back();
        const std::size_t w = map.apply(u);
        const Rat& h = metrics.pair(u, w);
        trace.states.push_back(w);
        trace.step_weights.push_back(h);
        trace.bound_values.push_back(n == 0 ? h : phi.apply(trace.bound_values.back()));

        if (space.is_zero(h)) {
            trace.terminated = {TerminationKind::FixedPoint, w, 0};
            return trace;
        }
        const std::size_t pos = trace.states.size() - 1;
        auto [it, inserted] = last_seen.try_emplace(w, pos);
        if (!inserted) {
            const std::size_t period = pos - it->second;
            it->second = pos;
            if (period >= 2) {
                trace.terminated = {TerminationKind::CycleDetected, 0, period};
                return trace;
            }
        }
    }
    trace.terminated = {TerminationKind::MaxIters, 0, 0};
    return trace;
}

IterationTrace iterate(const DislocatedSpace& space, const SetFamily& family, const SetMap& map,
                       const ComparisonFunction& phi, std::size_t start, std::size_t max_iters) {
    FamilyMetrics metrics(space, family);
    return iterate(metrics, map, phi, start, max_iters);
}

bool trace_bounds_hold(const DislocatedSpace& space, const IterationTrace& trace) {
    for (std::size_t n = 0; n < trace.step_weights.size(); ++n) {
        if (!space.leq(trace.step_weights[n], trace.bound_values[n])) return false;
    }
    return true;
}

bool trace_telescoping_holds(const FamilyMetrics& metrics, const IterationTrace& trace) {
    const DislocatedSpace& space = metrics.space();
    for (std::size_t n = 0; n + 1 < trace.states.size(); ++n) {
        Rat sum(0);
        for (std::size_t m = n + 1; m < trace.states.size(); ++m) {
            sum += trace.step_weights[m - 1];
            if (!space.leq(metrics.pair(trace.states[n], trace.states[m]), sum)) return false;
        }
    }
    return true;
}

FixedPointSets fixed_point_set(const FamilyMetrics& metrics, const SetMap& map) {
    require_family_match(metrics, map);
    const DislocatedSpace& space = metrics.space();
    FixedPointSets sets;
    for (std::size_t u = 0; u < metrics.family().size(); ++u) {
        const std::size_t w = map.apply(u);
        if (space.is_zero(metrics.pair(w, u))) sets.by_weight.push_back(u);
        if (w == u) sets.by_index.push_back(u);
    }
    return sets;
}

WellposednessReport wellposedness_diagnostic(const FamilyMetrics& metrics, const SetMap& map,
                                             const Rat& tolerance) {
    require_family_match(metrics, map);
    if (tolerance < 0) throw Error("wellposedness tolerance must be nonnegative");
    const DislocatedSpace& space = metrics.space();
    const std::vector<std::size_t> fixed = fixed_point_set(metrics, map).by_weight;
    if (fixed.empty()) throw NoFixedPoint("wellposedness needs at least one fixed point");

    WellposednessReport report;
    report.tolerance = tolerance;
    report.displacement_bound = 0;
    for (std::size_t u = 0; u < metrics.family().size(); ++u) {
        const Rat& step = metrics.pair(u, map.apply(u));
        if (step > report.displacement_bound) report.displacement_bound = step;
    }
    report.allowed_distance = Rat(tolerance * (1 + report.displacement_bound));

    for (std::size_t u = 0; u < metrics.family().size(); ++u) {
        const Rat& self = metrics.pair(map.apply(u), u);
        if (!space.leq(self, tolerance)) continue;
        ApproximateFixedPoint entry;
        entry.index = u;
        entry.self_weight = self;
        entry.nearest = fixed.front();
        entry.distance_to_nearest = metrics.pair(u, fixed.front());
        for (std::size_t f : fixed) {
            const Rat& d = metrics.pair(u, f);
            if (d < entry.distance_to_nearest) {
                entry.distance_to_nearest = d;
                entry.nearest = f;
            }
        }
        entry.flagged = !space.leq(entry.distance_to_nearest, report.allowed_distance);
        report.approximate.push_back(std::move(entry));
    }
    return report;
}

FixedPointReport fixed_point_report(const FamilyMetrics& metrics, const SetMap& map) {
    const DislocatedSpace& space = metrics.space();
    const Rat tolerance = space.mode() == ArithmeticMode::Exact ? Rat(0) : space.epsilon();
    return fixed_point_report(metrics, map, tolerance);
}

FixedPointReport fixed_point_report(const FamilyMetrics& metrics, const SetMap& map,
                                    const Rat& tolerance) {
    require_family_match(metrics, map);
    FixedPointReport report;
    report.sets = fixed_point_set(metrics, map);
    const auto& fixed = report.sets.by_weight;
    report.pairwise_weights.assign(fixed.size(), std::vector<Rat>(fixed.size()));
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        for (std::size_t j = 0; j < fixed.size(); ++j) {
            report.pairwise_weights[i][j] = metrics.pair(fixed[i], fixed[j]);
        }
    }
    report.singleton = fixed.size() == 1;
    if (!fixed.empty()) {
        report.wellposed = wellposedness_diagnostic(metrics, map, tolerance);
    }
    return report;
}

ConclusionVerdict check_theorem_conclusions(const ContractionCertificate& certificate,
                                            const FixedPointReport& report,
                                            const std::vector<IterationTrace>& traces,
                                            const SetGraph& g, const SetMap& map,
                                            const FamilyMetrics& metrics) {
    if (!certificate.certified()) {
        throw NotCertified("theorem conclusions are only claimed for certified instances");
    }
    if (g.family_ref() != map.family_ref() || g.family_ref() != metrics.family().id()) {
        throw MixedSpaces("graph, map, and metrics must share one family");
    }

    const DislocatedSpace& space = metrics.space();
    const SetGraph undirected = symmetrize(g);
    const auto& fixed = report.sets.by_weight;

    ConclusionVerdict verdict;
    verdict.diagonal_enforced = g.include_diagonal();
    verdict.graph_complete = true;
    for (std::size_t i = 0; i < g.vertex_count() && verdict.graph_complete; ++i) {
        for (std::size_t j = 0; j < g.vertex_count(); ++j) {
            if (!g.has_edge(i, j)) {
                verdict.graph_complete = false;
                break;
            }
        }
    }

    verdict.adjacent_pair_weights_zero.checked = true;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        for (std::size_t j = 0; j < fixed.size(); ++j) {
            if (!undirected.has_edge(fixed[i], fixed[j])) continue;
            if (!space.is_zero(report.pairwise_weights[i][j])) {
                verdict.adjacent_pair_weights_zero.holds = false;
                verdict.adjacent_pair_weights_zero.detail =
                    "positive weight between adjacent fixed points " + std::to_string(fixed[i]) +
                    " and " + std::to_string(fixed[j]);
            }
        }
    }

    const std::vector<std::size_t> starts = compute_YT(g, map);
    verdict.fixed_points_imply_starts.checked = true;
    if (!fixed.empty() && starts.empty()) {
        verdict.fixed_points_imply_starts.holds = false;
        verdict.fixed_points_imply_starts.detail =
            "fixed points exist but the start set is empty";
    }

    verdict.orbits_reach_fixed_points.checked = true;
    for (const IterationTrace& trace : traces) {
        if (std::find(starts.begin(), starts.end(), trace.start) == starts.end()) continue;
        if (trace.states.empty()) continue;
        if (!check_property_Pstar(g, trace.states, trace.states.back())) continue;
        if (trace.terminated.kind != TerminationKind::FixedPoint) {
            verdict.orbits_reach_fixed_points.holds = false;
            verdict.orbits_reach_fixed_points.detail =
                "orbit from start " + std::to_string(trace.start) +
                " satisfies the subsequence condition but did not reach a fixed point";
        }
    }

    if (verdict.graph_complete) {
        verdict.singleton_on_complete_graph.checked = true;
        if (fixed.size() > 1) {
            verdict.singleton_on_complete_graph.holds = false;
            verdict.singleton_on_complete_graph.detail =
                std::to_string(fixed.size()) + " weight-criterion fixed points on a complete graph";
        }
    }

    return verdict;
}

}  // namespace dislofix
