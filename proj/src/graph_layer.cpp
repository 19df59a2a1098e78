#include "dislofix/graph_layer.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "dislofix/errors.hpp"

namespace dislofix {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::vector<std::size_t>> adjacency(const SetGraph& g, bool reversed) {
    std::vector<std::vector<std::size_t>> adj(g.vertex_count());
    for (const auto& [from, to] : g.edges()) {
        if (reversed) {
            adj[to].push_back(from);
        } else {
            adj[from].push_back(to);
        }
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

std::vector<std::size_t> bfs_distances(const std::vector<std::vector<std::size_t>>& adj,
                                       std::size_t source) {
    std::vector<std::size_t> dist(adj.size(), kUnreached);
    std::queue<std::size_t> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        std::size_t v = frontier.front();
        frontier.pop();
        for (std::size_t w : adj[v]) {
            if (dist[w] == kUnreached) {
                dist[w] = dist[v] + 1;
                frontier.push(w);
            }
        }
    }
    return dist;
}

// Walks from `from` toward `to` along a shortest path, always taking the
// smallest-index next vertex that stays on some shortest path. dist_to
// holds distances to `to` in the forward graph (computed on the reverse).
std::vector<std::size_t> greedy_shortest_path(const std::vector<std::vector<std::size_t>>& adj,
                                              const std::vector<std::size_t>& dist_to,
                                              std::size_t from) {
    std::vector<std::size_t> path{from};
    std::size_t cur = from;
    while (dist_to[cur] != 0) {
        for (std::size_t w : adj[cur]) {
            if (dist_to[w] != kUnreached && dist_to[w] + 1 == dist_to[cur]) {
                path.push_back(w);
                cur = w;
                break;
            }
        }
    }
    return path;
}

void require_vertex(const SetGraph& g, std::size_t v, const char* what) {
    if (v >= g.vertex_count()) {
        throw UnknownPoint(std::string(what) + " index " + std::to_string(v) +
                           " outside family of size " + std::to_string(g.vertex_count()));
    }
}

}  // namespace

SetGraph::SetGraph(const SetFamily& family,
                   std::vector<std::pair<std::size_t, std::size_t>> edges,
                   bool include_diagonal) {
    family_ref_ = family.id();
    vertex_count_ = family.size();
    include_diagonal_ = include_diagonal;
    for (const auto& [from, to] : edges) {
        if (from >= vertex_count_ || to >= vertex_count_) {
            throw UnknownPoint("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                               ") outside family of size " + std::to_string(vertex_count_));
        }
        edges_.insert({from, to});
    }
    if (include_diagonal_) {
        for (std::size_t v = 0; v < vertex_count_; ++v) edges_.insert({v, v});
    }
}

SetMap::SetMap(const SetFamily& family, std::vector<std::size_t> image) {
    if (image.size() != family.size()) {
        throw Error("map image has " + std::to_string(image.size()) + " entries for a family of " +
                    std::to_string(family.size()));
    }
    for (std::size_t v : image) {
        if (v >= family.size()) {
            throw UnknownPoint("map image index " + std::to_string(v) +
                               " outside family of size " + std::to_string(family.size()));
        }
    }
    family_ref_ = family.id();
    image_ = std::move(image);
}

std::size_t SetMap::apply(std::size_t i) const {
    if (i >= image_.size()) throw UnknownPoint("map argument index out of range");
    return image_[i];
}

SetGraph symmetrize(const SetGraph& g) {
    SetGraph out;
    out.family_ref_ = g.family_ref_;
    out.vertex_count_ = g.vertex_count_;
    out.include_diagonal_ = g.include_diagonal_;
    out.edges_ = g.edges_;
    for (const auto& [from, to] : g.edges_) out.edges_.insert({to, from});
    return out;
}

PathResult has_path(const SetGraph& g, std::size_t from, std::size_t to) {
    require_vertex(g, from, "path source");
    require_vertex(g, to, "path target");
    PathResult result;
    const auto adj = adjacency(g, false);
    const auto dist_to = bfs_distances(adjacency(g, true), to);

    if (from != to) {
        if (dist_to[from] == kUnreached) return result;
        result.reachable = true;
        result.path = greedy_shortest_path(adj, dist_to, from);
        return result;
    }

    // Self-reachability asks for a closed walk of length >= 1, not the
    // empty walk. A loop edge is the shortest and is witnessed by [v].
    if (g.has_edge(from, from)) {
        result.reachable = true;
        result.path = {from};
        return result;
    }
    std::size_t best_len = kUnreached;
    std::size_t best_start = kUnreached;
    for (std::size_t w : adj[from]) {
        if (dist_to[w] == kUnreached) continue;
        const std::size_t len = 1 + dist_to[w];
        if (len < best_len) {
            best_len = len;
            best_start = w;
        }
    }
    if (best_start == kUnreached) return result;
    result.reachable = true;
    result.path = greedy_shortest_path(adj, dist_to, best_start);
    result.path.insert(result.path.begin(), from);
    return result;
}

PreservationReport check_edge_preservation(const SetGraph& g, const SetMap& t,
                                           PreservationMode mode) {
    if (g.family_ref() != t.family_ref()) {
        throw MixedSpaces("graph and map bound to different families");
    }
    PreservationReport report;
    report.mode = mode;
    for (const auto& [from, to] : g.edges()) {
        ++report.edges_checked;
        const std::size_t image_from = t.apply(from);
        const std::size_t image_to = t.apply(to);
        // Path mode reuses has_path as is, so coincident images need a
        // closed walk; with the diagonal enforced the loop provides one.
        const bool ok = mode == PreservationMode::Edge
                            ? g.has_edge(image_from, image_to)
                            : has_path(g, image_from, image_to).reachable;
        if (!ok) report.violations.push_back({from, to, image_from, image_to});
    }
    return report;
}

std::vector<std::size_t> compute_YT(const SetGraph& g, const SetMap& t) {
    if (g.family_ref() != t.family_ref()) {
        throw MixedSpaces("graph and map bound to different families");
    }
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (g.has_edge(v, t.apply(v))) members.push_back(v);
    }
    return members;
}

bool check_property_Pstar(const SetGraph& g, const std::vector<std::size_t>& trajectory,
                          std::size_t limit) {
    if (trajectory.empty()) throw Error("property check requires a nonempty trajectory");
    require_vertex(g, limit, "limit");
    for (std::size_t v : trajectory) require_vertex(g, v, "trajectory");
    const std::size_t window = tail_window_length(trajectory.size());
    for (std::size_t n = trajectory.size() - window; n < trajectory.size(); ++n) {
        const std::size_t v = trajectory[n];
        if (g.has_edge(v, limit) || g.has_edge(limit, v)) return true;
    }
    return false;
}

}  // namespace dislofix
