#include "dislofix/contraction.hpp"

#include <algorithm>

#include "dislofix/errors.hpp"

namespace dislofix {

namespace {

const Rat& max_of(const Rat& a, const Rat& b) { return a > b ? a : b; }

}  // namespace

ComparisonFunction ComparisonFunction::linear(Rat lambda) {
    if (lambda < 0 || lambda >= 1) {
        throw InvalidPhi("linear coefficient must lie in [0, 1)", std::move(lambda));
    }
    ComparisonFunction phi;
    phi.kind_ = PhiKind::Linear;
    phi.lambda_ = std::move(lambda);
    return phi;
}

ComparisonFunction ComparisonFunction::rational_shrink() {
    ComparisonFunction phi;
    phi.kind_ = PhiKind::RationalShrink;
    return phi;
}

ComparisonFunction ComparisonFunction::user_table(std::vector<std::pair<Rat, Rat>> breakpoints) {
    if (breakpoints.empty()) throw InvalidPhi("table has no breakpoints", Rat(0));
    std::sort(breakpoints.begin(), breakpoints.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const auto& [t, v] = breakpoints[i];
        if (t < 0) throw InvalidPhi("breakpoint at negative argument", t);
        if (v < 0) throw InvalidPhi("negative value at breakpoint", t);
        if (t == 0 && v != 0) throw InvalidPhi("phi(0) must be 0", t);
        if (t > 0 && v >= t) throw InvalidPhi("phi(t) < t fails at breakpoint", t);
        if (i > 0) {
            const auto& [pt, pv] = breakpoints[i - 1];
            if (t == pt && v != pv) throw InvalidPhi("conflicting values at breakpoint", t);
            if (v < pv) throw InvalidPhi("values decrease at breakpoint", t);
        }
    }
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (breakpoints.empty() || breakpoints.front().first != 0) {
        breakpoints.insert(breakpoints.begin(), {Rat(0), Rat(0)});
    }
    ComparisonFunction phi;
    phi.kind_ = PhiKind::UserTable;
    phi.breakpoints_ = std::move(breakpoints);
    return phi;
}

Rat ComparisonFunction::apply(const Rat& t) const {
    if (t < 0) throw Error("comparison function applied to a negative argument");
    switch (kind_) {
        case PhiKind::Linear:
            return Rat(lambda_ * t);
        case PhiKind::RationalShrink:
            return Rat(t / (1 + t));
        case PhiKind::UserTable:
            break;
    }
    if (t >= breakpoints_.back().first) return breakpoints_.back().second;
    std::size_t hi = 1;
    while (breakpoints_[hi].first < t) ++hi;
    const auto& [t0, v0] = breakpoints_[hi - 1];
    const auto& [t1, v1] = breakpoints_[hi];
    return Rat(v0 + (v1 - v0) * (t - t0) / (t1 - t0));
}

void ComparisonFunction::validate_on_grid(const Rat& max_value) const {
    if (max_value < 0) throw Error("grid upper end must be nonnegative");
    Rat zero_image = apply(Rat(0));
    if (zero_image != 0) throw InvalidPhi("phi(0) must be 0", Rat(0));
    if (max_value == 0) return;
    Rat prev_v(0);
    for (int k = 1; k < 1000; ++k) {
        Rat t(max_value * k / 999);
        Rat v = apply(t);
        if (v >= t) throw InvalidPhi("phi(t) < t fails on the sampling grid", std::move(t));
        if (v < prev_v) throw InvalidPhi("phi decreases on the sampling grid", std::move(t));
        prev_v = std::move(v);
    }
}

Rat eval_MT(const FamilyMetrics& m, const SetMap& t, std::size_t U, std::size_t V) {
    const std::size_t W = t.apply(U);
    const std::size_t X = t.apply(V);
    const std::size_t W2 = t.apply(W);
    Rat best = m.pair(U, V);
    best = max_of(best, m.pair(U, W));
    best = max_of(best, m.pair(V, X));
    best = max_of(best, m.pair(W, X));
    best = max_of(best, m.pair(W2, V));
    best = max_of(best, m.pair(W2, X));
    Rat averaged((m.pair(V, W) + m.pair(U, X)) / 3);
    return max_of(best, averaged);
}

Rat eval_MT(const DislocatedSpace& space, const SetFamily& family, const SetMap& t,
            std::size_t U, std::size_t V) {
    return eval_MT(FamilyMetrics(space, family), t, U, V);
}

Rat eval_NS(const FamilyMetrics& m, const SetMap& s, std::size_t U, std::size_t V) {
    const std::size_t W = s.apply(U);
    const std::size_t X = s.apply(V);
    const Rat scale = 1 + m.pair(U, W);
    const Rat denom = 1 + m.pair(U, V);
    Rat best(m.pair(U, X) * scale / (2 * denom));
    best = max_of(best, Rat(m.pair(V, X) * scale / denom));
    best = max_of(best, Rat(m.pair(V, W) * scale / denom));
    return best;
}

Rat eval_NS(const DislocatedSpace& space, const SetFamily& family, const SetMap& s,
            std::size_t U, std::size_t V) {
    return eval_NS(FamilyMetrics(space, family), s, U, V);
}

ContractionCertificate certify(const FamilyMetrics& metrics, const SetMap& map,
                               const SetGraph& g, const ComparisonFunction& phi,
                               Functional functional, PreservationMode mode) {
    if (metrics.family().id() != map.family_ref() || metrics.family().id() != g.family_ref()) {
        throw MixedSpaces("metrics, map, and graph must share one family");
    }
    phi.validate_on_grid(metrics.max_value());

    ContractionCertificate cert;
    cert.functional = functional;
    cert.preservation_mode = mode;
    cert.preservation = check_edge_preservation(g, map, mode);

    const DislocatedSpace& space = metrics.space();
    for (const auto& [from, to] : g.edges()) {
        ++cert.edges_checked;
        const Rat& lhs = metrics.pair(map.apply(from), map.apply(to));
        Rat functional_value = functional == Functional::MT ? eval_MT(metrics, map, from, to)
                                                            : eval_NS(metrics, map, from, to);
        Rat phi_value = phi.apply(functional_value);
        if (functional_value > 0 && phi_value >= functional_value) {
            throw InvalidPhi("phi(t) < t fails at an evaluated functional value",
                             std::move(functional_value));
        }
        if (!space.leq(lhs, phi_value)) {
            cert.violations.push_back(
                {from, to, lhs, std::move(functional_value), std::move(phi_value)});
        }
    }
    cert.verdict = cert.preservation.preserved() && cert.violations.empty() ? Verdict::Certified
                                                                            : Verdict::Refuted;
    return cert;
}

ContractionCertificate certify(const DislocatedSpace& space, const SetFamily& family,
                               const SetMap& map, const SetGraph& g,
                               const ComparisonFunction& phi, Functional functional,
                               PreservationMode mode) {
    FamilyMetrics metrics(space, family);
    return certify(metrics, map, g, phi, functional, mode);
}

}  // namespace dislofix
