#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "dislofix/hausdorff.hpp"

namespace dislofix {

// Directed graph whose vertices are the subsets of one SetFamily, addressed
// by family index. When include_diagonal is set the constructor inserts
// every loop (i,i), so the diagonal is enforced rather than trusted.
class SetGraph {
  public:
    SetGraph(const SetFamily& family,
             std::vector<std::pair<std::size_t, std::size_t>> edges,
             bool include_diagonal);

    std::uint64_t family_ref() const { return family_ref_; }
    std::size_t vertex_count() const { return vertex_count_; }
    bool include_diagonal() const { return include_diagonal_; }
    const std::set<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    bool has_edge(std::size_t from, std::size_t to) const {
        return edges_.count({from, to}) != 0;
    }

    friend SetGraph symmetrize(const SetGraph& g);

  private:
    SetGraph() = default;

    std::uint64_t family_ref_ = 0;
    std::size_t vertex_count_ = 0;
    bool include_diagonal_ = false;
    std::set<std::pair<std::size_t, std::size_t>> edges_;
};

// Total self-map of a family: image[i] is the family index of the image of
// subset i, so the family is closed under the map by construction.
class SetMap {
  public:
    SetMap(const SetFamily& family, std::vector<std::size_t> image);

    std::uint64_t family_ref() const { return family_ref_; }
    std::size_t size() const { return image_.size(); }
    std::size_t apply(std::size_t i) const;
    const std::vector<std::size_t>& image() const { return image_; }

  private:
    std::uint64_t family_ref_ = 0;
    std::vector<std::size_t> image_;
};

// Undirected companion: edges plus their reversals. Idempotent.
SetGraph symmetrize(const SetGraph& g);

struct PathResult {
    bool reachable = false;
    // Vertex sequence of a shortest witness, ties broken lexicographically.
    // Self-reachability needs a closed walk of length >= 1; a loop edge is
    // witnessed by the single-vertex sequence [v], a longer cycle by
    // [v, ..., v]. Without any cycle through v, has_path(v, v) is false.
    std::vector<std::size_t> path;
};

PathResult has_path(const SetGraph& g, std::size_t from, std::size_t to);

enum class PreservationMode { Edge, Path };

struct PreservationViolation {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t image_from = 0;
    std::size_t image_to = 0;
};

struct PreservationReport {
    PreservationMode mode = PreservationMode::Edge;
    std::size_t edges_checked = 0;
    std::vector<PreservationViolation> violations;  // in edge-set order
    bool preserved() const { return violations.empty(); }
};

// For every edge (U,V) of g, require an edge (Edge mode) or a directed path
// in g itself (Path mode) between the images. All violations are listed.
PreservationReport check_edge_preservation(const SetGraph& g, const SetMap& t,
                                           PreservationMode mode);

// Indices U with (U, t(U)) an edge of g. Sorted ascending.
std::vector<std::size_t> compute_YT(const SetGraph& g, const SetMap& t);

// Finite-scale subsequence-edge condition: some element of the stabilized
// tail window of the trajectory is adjacent to the limit in the
// symmetrized graph. This realization is a reported decision, not a quote.
bool check_property_Pstar(const SetGraph& g, const std::vector<std::size_t>& trajectory,
                          std::size_t limit);

}  // namespace dislofix
