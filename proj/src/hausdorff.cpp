#include "dislofix/hausdorff.hpp"

#include <algorithm>
#include <atomic>

namespace dislofix {

namespace {

std::atomic<std::uint64_t> g_next_family_id{1};

void require_same_space(const DislocatedSpace& space, const FiniteSubset& subset) {
    if (subset.space_ref != space.id()) {
        throw MixedSpaces("subset belongs to space " + std::to_string(subset.space_ref) +
                          ", expected " + std::to_string(space.id()));
    }
}

}  // namespace

FiniteSubset FiniteSubset::of(const DislocatedSpace& space, std::vector<std::size_t> members) {
    if (members.empty()) throw EmptySubset("finite subset must be nonempty");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.back() >= space.size()) {
        throw UnknownPoint("subset member " + std::to_string(members.back()) + " out of range");
    }
    FiniteSubset subset;
    subset.space_ref = space.id();
    subset.members = std::move(members);
    return subset;
}

SetFamily::SetFamily(const DislocatedSpace& space,
                     std::vector<std::vector<std::size_t>> subsets) {
    if (subsets.empty()) throw EmptySubset("set family must be nonempty");
    space_ref_ = space.id();
    id_ = g_next_family_id.fetch_add(1);
    subsets_.reserve(subsets.size());
    for (auto& members : subsets) {
        FiniteSubset subset = FiniteSubset::of(space, std::move(members));
        for (const FiniteSubset& seen : subsets_) {
            if (seen.members == subset.members) {
                throw Error("duplicate subset in family");
            }
        }
        subsets_.push_back(std::move(subset));
    }
}

const FiniteSubset& SetFamily::subset(std::size_t i) const {
    if (i >= subsets_.size()) throw Error("subset index out of range");
    return subsets_[i];
}

Rat point_to_set(const DislocatedSpace& space, std::size_t a, const FiniteSubset& B) {
    require_same_space(space, B);
    if (B.members.empty()) throw EmptySubset("point_to_set over an empty subset");
    Rat best = space.distance(a, B.members.front());
    for (std::size_t k = 1; k < B.members.size(); ++k) {
        const Rat& d = space.distance(a, B.members[k]);
        if (d < best) best = d;
    }
    return best;
}

Rat excess(const DislocatedSpace& space, const FiniteSubset& A, const FiniteSubset& B) {
    require_same_space(space, A);
    require_same_space(space, B);
    if (A.members.empty() || B.members.empty()) throw EmptySubset("excess over an empty subset");
    Rat worst = point_to_set(space, A.members.front(), B);
    for (std::size_t k = 1; k < A.members.size(); ++k) {
        Rat d = point_to_set(space, A.members[k], B);
        if (d > worst) worst = std::move(d);
    }
    return worst;
}

Rat hausdorff(const DislocatedSpace& space, const FiniteSubset& U, const FiniteSubset& V) {
    Rat forward = excess(space, U, V);
    Rat backward = excess(space, V, U);
    return forward > backward ? forward : backward;
}

FamilyMetrics::FamilyMetrics(const DislocatedSpace& space, const SetFamily& family)
    : space_(&space), family_(&family) {
    if (family.space_ref() != space.id()) {
        throw MixedSpaces("family bound to a different space");
    }
    const std::size_t n = family.size();
    table_.assign(n, std::vector<Rat>(n));
    max_value_ = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Rat h = hausdorff(space, family.subset(i), family.subset(j));
            if (h > max_value_) max_value_ = h;
            table_[j][i] = h;
            table_[i][j] = std::move(h);
        }
    }
}

const Rat& FamilyMetrics::pair(std::size_t i, std::size_t j) const {
    if (i >= table_.size() || j >= table_.size()) throw Error("family index out of range");
    return table_[i][j];
}

PointSetLimitDiagnostic point_set_limit_diagnostic(const DislocatedSpace& space,
                                                   const std::vector<std::size_t>& seq,
                                                   std::size_t candidate_limit,
                                                   const FiniteSubset& U) {
    if (seq.empty()) throw Error("point_set_limit_diagnostic requires a nonempty sequence");
    PointSetLimitDiagnostic diag;
    diag.limit_self_distance = space.distance(candidate_limit, candidate_limit);
    const Rat at_limit = point_to_set(space, candidate_limit, U);
    const std::size_t window = tail_window_length(seq.size());
    diag.stabilizes_at_self_distance = true;
    diag.stabilizes_at_zero = true;
    for (std::size_t n = seq.size() - window; n < seq.size(); ++n) {
        Rat gap = rat_abs(Rat(point_to_set(space, seq[n], U) - at_limit));
        if (!space.equal(gap, diag.limit_self_distance)) diag.stabilizes_at_self_distance = false;
        if (!space.is_zero(gap)) diag.stabilizes_at_zero = false;
        diag.tail_gaps.push_back(std::move(gap));
    }
    return diag;
}

}  // namespace dislofix
