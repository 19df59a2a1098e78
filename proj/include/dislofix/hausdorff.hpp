#pragma once

#include <cstdint>
#include <vector>

#include "dislofix/core_metric.hpp"

namespace dislofix {

// Nonempty subset of a space's ground set. Every subset of a finite space
// is closed and bounded, so these are exactly the admissible operands of
// the set metric below.
struct FiniteSubset {
    std::uint64_t space_ref = 0;
    std::vector<std::size_t> members;  // sorted, distinct, nonempty

    static FiniteSubset of(const DislocatedSpace& space, std::vector<std::size_t> members);
    bool operator==(const FiniteSubset& other) const {
        return space_ref == other.space_ref && members == other.members;
    }
};

// The vertex universe for graphs and set maps: an ordered list of distinct
// nonempty subsets of one space.
class SetFamily {
  public:
    SetFamily(const DislocatedSpace& space, std::vector<std::vector<std::size_t>> subsets);

    std::size_t size() const { return subsets_.size(); }
    const FiniteSubset& subset(std::size_t i) const;
    const std::vector<FiniteSubset>& subsets() const { return subsets_; }
    std::uint64_t space_ref() const { return space_ref_; }
    std::uint64_t id() const { return id_; }

  private:
    std::uint64_t space_ref_ = 0;
    std::uint64_t id_ = 0;
    std::vector<FiniteSubset> subsets_;
};

// xi(a, B) = min over b in B of xi(a, b).
Rat point_to_set(const DislocatedSpace& space, std::size_t a, const FiniteSubset& B);

// One-sided excess D(A, B) = max over a in A of xi(a, B). Not symmetric.
Rat excess(const DislocatedSpace& space, const FiniteSubset& A, const FiniteSubset& B);

// Pompeiu-Hausdorff distance H(U, V) = max{D(U,V), D(V,U)}.
Rat hausdorff(const DislocatedSpace& space, const FiniteSubset& U, const FiniteSubset& V);

// Eagerly computed pairwise H table over one family. Contraction checking
// and iteration evaluate many repeated pairs; this keeps each evaluation a
// lookup while staying on the same exact arithmetic as the direct path.
class FamilyMetrics {
  public:
    FamilyMetrics(const DislocatedSpace& space, const SetFamily& family);

    const Rat& pair(std::size_t i, std::size_t j) const;
    const DislocatedSpace& space() const { return *space_; }
    const SetFamily& family() const { return *family_; }
    // Largest pairwise H value; zero for a single-subset family with a
    // zero self-weight. Used to size phi validation grids.
    const Rat& max_value() const { return max_value_; }

  private:
    const DislocatedSpace* space_;
    const SetFamily* family_;
    std::vector<std::vector<Rat>> table_;
    Rat max_value_;
};

// Tail-window diagnostic for the interchange of limits with point-to-set
// distance. Reports |xi(y_n, U) - xi(y, U)| over the final window and
// whether it stabilizes at xi(y,y) (the literal reading) and at 0 (the
// corrected reading); both are logged side by side.
struct PointSetLimitDiagnostic {
    std::vector<Rat> tail_gaps;
    Rat limit_self_distance;
    bool stabilizes_at_self_distance = false;
    bool stabilizes_at_zero = false;
};

PointSetLimitDiagnostic point_set_limit_diagnostic(const DislocatedSpace& space,
                                                   const std::vector<std::size_t>& seq,
                                                   std::size_t candidate_limit,
                                                   const FiniteSubset& U);

}  // namespace dislofix
