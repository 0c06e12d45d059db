#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "orientable/graph.hpp"

namespace orientable {

// Per-vertex out-degree budget. Generalizes the constant k of k-orientation;
// the le1 decision needs per-vertex residual budgets.
struct CapacityMap {
    std::map<VertexId, unsigned> cap;

    static CapacityMap uniform(const VertexSet& vertices, unsigned k) {
        CapacityMap c;
        for (VertexId v : vertices) c.cap[v] = k;
        return c;
    }

    unsigned at(VertexId v) const {
        auto it = cap.find(v);
        if (it == cap.end()) {
            throw std::invalid_argument("capacity missing for vertex " + std::to_string(v));
        }
        return it->second;
    }

    void require_covers(const VertexSet& vertices) const {
        for (VertexId v : vertices) (void)at(v);
    }
};

// Success carries an orientation; failure carries a vertex subset certifying
// impossibility (|E(B)| > sum of caps, or every degree in B above its cap).
struct OrientationResult {
    std::optional<OrientedGraph> oriented;
    VertexSet witness;

    bool ok() const { return oriented.has_value(); }
};

namespace detail {

struct CompactGraph {
    std::vector<VertexId> ids;
    std::map<VertexId, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::vector<std::size_t>> incident;  // vertex -> edge indices

    explicit CompactGraph(const Graph& g) {
        ids.assign(g.vertices().begin(), g.vertices().end());
        for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
        incident.resize(ids.size());
        for (const auto& [a, b] : g.edges()) {
            std::size_t e = edges.size();
            edges.push_back({index[a], index[b]});
            incident[index[a]].push_back(e);
            incident[index[b]].push_back(e);
        }
    }
};

}  // namespace detail

// Orientation with out-degree(v) <= cap(v), by excess-path reversal: while a
// vertex exceeds its budget, walk current arcs to a vertex with slack and
// reverse the path. If the search saturates, the reached set is a witness
// with more induced edges than total capacity.
inline OrientationResult find_orientation(const Graph& g, const CapacityMap& cap) {
    cap.require_covers(g.vertices());
    detail::CompactGraph cg(g);
    const std::size_t n = cg.ids.size();
    const std::size_t m = cg.edges.size();

    // head[e] = endpoint the arc points away from (the "source")
    std::vector<std::size_t> source(m);
    std::vector<long> outdeg(n, 0);
    for (std::size_t e = 0; e < m; ++e) {
        source[e] = cg.edges[e].first;
        ++outdeg[source[e]];
    }
    std::vector<long> budget(n);
    for (std::size_t i = 0; i < n; ++i) budget[i] = cap.at(cg.ids[i]);

    auto other_end = [&](std::size_t e, std::size_t v) {
        return cg.edges[e].first == v ? cg.edges[e].second : cg.edges[e].first;
    };

    for (std::size_t start = 0; start < n; ++start) {
        while (outdeg[start] > budget[start]) {
            // BFS along current arcs for any vertex below budget
            std::vector<long> via_edge(n, -1);
            std::vector<char> seen(n, 0);
            std::deque<std::size_t> queue{start};
            seen[start] = 1;
            std::optional<std::size_t> sink;
            while (!queue.empty() && !sink) {
                std::size_t v = queue.front();
                queue.pop_front();
                for (std::size_t e : cg.incident[v]) {
                    if (source[e] != v) continue;
                    std::size_t w = other_end(e, v);
                    if (seen[w]) continue;
                    seen[w] = 1;
                    via_edge[w] = static_cast<long>(e);
                    if (outdeg[w] < budget[w]) {
                        sink = w;
                        break;
                    }
                    queue.push_back(w);
                }
            }
            if (!sink) {
                VertexSet witness;
                for (std::size_t v = 0; v < n; ++v) {
                    if (seen[v]) witness.insert(cg.ids[v]);
                }
                return OrientationResult{std::nullopt, witness};
            }
            // reverse the path back from the slack vertex
            std::size_t v = *sink;
            while (v != start) {
                std::size_t e = static_cast<std::size_t>(via_edge[v]);
                std::size_t from = source[e];
                source[e] = v;
                v = from;
            }
            --outdeg[start];
            ++outdeg[*sink];
        }
    }

    OrientedGraph oriented;
    for (VertexId v : g.vertices()) oriented.add_vertex(v);
    for (std::size_t e = 0; e < m; ++e) {
        std::size_t from = source[e];
        std::size_t to = other_end(e, from);
        oriented.add_arc(cg.ids[from], cg.ids[to]);
    }
    return OrientationResult{oriented, {}};
}

// Acyclic orientation within capacities by peeling: repeatedly remove the
// lowest-id vertex whose remaining degree fits its budget, orienting its
// remaining edges outward. Arcs run from earlier-removed to later-removed
// vertices, so the result is acyclic. When stuck, the remaining set is a
// witness (every member has remaining degree above its cap).
inline OrientationResult find_acyclic_orientation(const Graph& g, const CapacityMap& cap) {
    cap.require_covers(g.vertices());
    detail::CompactGraph cg(g);
    const std::size_t n = cg.ids.size();

    std::vector<char> removed(n, 0);
    std::vector<long> degree(n, 0);
    for (const auto& [a, b] : cg.edges) {
        ++degree[a];
        ++degree[b];
    }

    std::vector<std::size_t> removal_rank(n, 0);
    std::set<std::size_t> eligible;
    for (std::size_t v = 0; v < n; ++v) {
        if (degree[v] <= static_cast<long>(cap.at(cg.ids[v]))) eligible.insert(v);
    }
    std::size_t removed_count = 0;
    while (!eligible.empty()) {
        std::size_t v = *eligible.begin();  // lowest id first: deterministic
        eligible.erase(eligible.begin());
        if (removed[v]) continue;
        removed[v] = 1;
        removal_rank[v] = removed_count++;
        for (std::size_t e : cg.incident[v]) {
            std::size_t w = cg.edges[e].first == v ? cg.edges[e].second : cg.edges[e].first;
            if (removed[w]) continue;
            if (--degree[w] <= static_cast<long>(cap.at(cg.ids[w]))) eligible.insert(w);
        }
    }

    if (removed_count < n) {
        VertexSet witness;
        for (std::size_t v = 0; v < n; ++v) {
            if (!removed[v]) witness.insert(cg.ids[v]);
        }
        return OrientationResult{std::nullopt, witness};
    }

    OrientedGraph oriented;
    for (VertexId v : g.vertices()) oriented.add_vertex(v);
    for (const auto& [a, b] : cg.edges) {
        if (removal_rank[a] < removal_rank[b]) {
            oriented.add_arc(cg.ids[a], cg.ids[b]);
        } else {
            oriented.add_arc(cg.ids[b], cg.ids[a]);
        }
    }
    return OrientationResult{oriented, {}};
}

// |E(B)| <= k|B| for every subgraph B; decided via the orientation
// equivalence (a graph is k-sparse iff it is k-orientable).
inline bool is_k_sparse(const Graph& g, unsigned k) {
    return find_orientation(g, CapacityMap::uniform(g.vertices(), k)).ok();
}

enum class StructureClass { C0, C1, D0, D1 };

inline std::string to_string(StructureClass c) {
    switch (c) {
        case StructureClass::C0: return "C0";
        case StructureClass::C1: return "C1";
        case StructureClass::D0: return "D0";
        case StructureClass::D1: return "D1";
    }
    return "?";
}

inline std::set<StructureClass> class_membership(const Graph& g) {
    std::set<StructureClass> out;
    if (is_k_sparse(g, 2)) out.insert(StructureClass::C0);
    if (find_acyclic_orientation(g, CapacityMap::uniform(g.vertices(), 2)).ok()) {
        out.insert(StructureClass::C1);
    }
    return out;
}

inline std::set<StructureClass> class_membership(const OrientedGraph& d) {
    std::set<StructureClass> out;
    bool bounded = true;
    for (VertexId v : d.vertices()) {
        if (d.out_degree(v) > 2) {
            bounded = false;
            break;
        }
    }
    if (bounded) {
        out.insert(StructureClass::D0);
        if (is_acyclic(d)) out.insert(StructureClass::D1);
    }
    return out;
}

inline bool in_d1(const OrientedGraph& d) {
    return class_membership(d).count(StructureClass::D1) != 0;
}

inline bool in_c1(const Graph& g) {
    return find_acyclic_orientation(g, CapacityMap::uniform(g.vertices(), 2)).ok();
}

}  // namespace orientable
