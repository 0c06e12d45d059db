#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "orientable/canonical.hpp"
#include "orientable/closure.hpp"
#include "orientable/graph.hpp"

namespace orientable {

// Inductive vertex ranks: sinks have level 0, otherwise one more than the
// maximum level over the vertex's proper closure.
struct LevelAssignment {
    std::map<VertexId, unsigned> level;

    unsigned at(VertexId v) const { return level.at(v); }

    std::set<VertexId> level_set(unsigned n) const {
        std::set<VertexId> out;
        for (const auto& [v, l] : level) {
            if (l == n) out.insert(v);
        }
        return out;
    }
};

// Levels are only well-defined without directed cycles; cyclic input throws.
inline LevelAssignment levels(const OrientedGraph& d) {
    if (!is_acyclic(d)) {
        throw std::invalid_argument("levels: directed cycle present");
    }
    // process in reverse topological order so successors are done first
    std::map<VertexId, std::size_t> pending;
    for (VertexId v : d.vertices()) pending[v] = d.out_degree(v);
    std::vector<VertexId> ready;
    for (const auto& [v, deg] : pending) {
        if (deg == 0) ready.push_back(v);
    }
    LevelAssignment out;
    while (!ready.empty()) {
        VertexId v = ready.back();
        ready.pop_back();
        unsigned lvl = 0;
        for (VertexId w : d.out_neighbors(v)) {
            lvl = std::max(lvl, out.level.at(w) + 1);
        }
        out.level[v] = lvl;
        for (VertexId u : d.in_neighbors(v)) {
            if (--pending[u] == 0) ready.push_back(u);
        }
    }
    return out;
}

// Partition of the vertex set into homology classes: u and v share a cone
// iff u° = v° and some isomorphism scl(u) -> scl(v) fixes u° pointwise.
struct ConePartition {
    std::vector<VertexSet> cones;

    const VertexSet& cone_of(VertexId v) const {
        for (const auto& c : cones) {
            if (c.count(v)) return c;
        }
        throw std::invalid_argument("unknown vertex id " + std::to_string(v));
    }
};

inline ConePartition cones(const OrientedGraph& d) {
    if (!is_acyclic(d)) {
        throw std::invalid_argument("cones: directed cycle present");
    }
    // Pinning: color each base vertex with its own id, so canonical keys are
    // equal exactly when some isomorphism fixes the base pointwise.
    std::map<std::pair<std::vector<VertexId>, CanonicalForm>, VertexSet> groups;
    for (VertexId v : d.vertices()) {
        VertexSet closure = scl(d, v);
        std::vector<VertexId> base;
        for (VertexId b : closure) {
            if (b != v) base.push_back(b);
        }
        std::map<VertexId, std::uint32_t> colors;
        for (VertexId b : base) colors[b] = b + 1;  // 0 is the unpinned color
        CanonicalForm key =
            canonical_form_colored(induced_substructure(d, closure), colors, closure.size());
        groups[{base, key}].insert(v);
    }
    ConePartition out;
    for (auto& [sig, members] : groups) out.cones.push_back(members);
    return out;
}

// Closure data for a single vertex: scl(a), head, and whether the induced
// structure is a closure-extension with that head (true by construction).
struct ClosureResult {
    VertexSet closed_set;
    bool is_closure_extension = false;
    std::optional<VertexId> head;

    VertexSet base() const {  // a° = scl(a) ∖ {a}
        VertexSet b = closed_set;
        if (head) b.erase(*head);
        return b;
    }
};

inline ClosureResult closure_extension_of(const OrientedGraph& d, VertexId a) {
    d.require_vertex(a);
    return ClosureResult{scl(d, a), true, a};
}

// Head of a closure-extension: the unique vertex whose closure is the whole
// structure. In an acyclic digraph there is at most one such vertex.
inline std::optional<VertexId> closure_head(const OrientedGraph& d) {
    for (VertexId v : d.vertices()) {
        if (scl(d, v) == d.vertices()) return v;
    }
    return std::nullopt;
}

inline bool is_closure_extension(const OrientedGraph& d) {
    return closure_head(d).has_value();
}

}  // namespace orientable
