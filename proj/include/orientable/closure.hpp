#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "orientable/graph.hpp"
#include "orientable/orientation.hpp"

namespace orientable {

// Successor-closure: least superset of B closed under out-neighbors.
inline VertexSet scl(const OrientedGraph& d, const VertexSet& b) {
    std::vector<VertexId> stack;
    VertexSet closed;
    for (VertexId v : b) {
        d.require_vertex(v);
        if (closed.insert(v).second) stack.push_back(v);
    }
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : d.out_neighbors(v)) {
            if (closed.insert(w).second) stack.push_back(w);
        }
    }
    return closed;
}

inline VertexSet scl(const OrientedGraph& d, VertexId v) { return scl(d, VertexSet{v}); }

inline bool is_successor_closed(const OrientedGraph& d, const VertexSet& a) {
    for (VertexId v : a) {
        d.require_vertex(v);
        for (VertexId w : d.out_neighbors(v)) {
            if (!a.count(w)) return false;
        }
    }
    return true;
}

// Decision data for A <=_1 B: on success the witness is an acyclic
// 2-orientation of B in which A is successor-closed.
struct Le1Result {
    bool ok = false;
    std::optional<OrientedGraph> witness;
};

// A <=_1 B iff some acyclic 2-orientation of B has A successor-closed.
// Decided by decomposition: A successor-closed forces every A-(B∖A) edge to
// point into A, so A's induced graph must peel with cap 2 on its own, and
// B∖A must peel within the residual budgets 2 - #(edges into A).
inline Le1Result is_le1(const VertexSet& a, const Graph& b) {
    for (VertexId v : a) b.require_vertex(v);

    Graph inner = induced_substructure(b, a);
    auto inner_res = find_acyclic_orientation(inner, CapacityMap::uniform(a, 2));
    if (!inner_res.ok()) return {};

    VertexSet rest;
    for (VertexId v : b.vertices()) {
        if (!a.count(v)) rest.insert(v);
    }
    CapacityMap residual;
    for (VertexId v : rest) {
        unsigned into_a = 0;
        for (VertexId w : b.neighbors(v)) {
            if (a.count(w)) ++into_a;
        }
        if (into_a > 2) return {};  // forced cross arcs already exceed the cap
        residual.cap[v] = 2 - into_a;
    }
    Graph outer = induced_substructure(b, rest);
    auto outer_res = find_acyclic_orientation(outer, residual);
    if (!outer_res.ok()) return {};

    OrientedGraph witness;
    for (VertexId v : b.vertices()) witness.add_vertex(v);
    for (const auto& [x, y] : inner_res.oriented->arcs()) witness.add_arc(x, y);
    for (const auto& [x, y] : outer_res.oriented->arcs()) witness.add_arc(x, y);
    for (const auto& [x, y] : b.edges()) {
        bool xa = a.count(x) != 0, ya = a.count(y) != 0;
        if (xa && !ya) witness.add_arc(y, x);
        if (!xa && ya) witness.add_arc(x, y);
    }
    return {true, witness};
}

// Linear order on an acyclic 2-oriented B extending the reachability order
// (anything with an out-path from b' lands before b') and an optional given
// order on a successor-closed part. Remaining ties break by vertex id, so
// the output is deterministic. Under tau = {(x,y) in E : y < x} the order
// induces exactly B's orientation.
inline OrderedGraph order_from_orientation(const OrientedGraph& b,
                                           const std::optional<OrderedGraph>& partial = {}) {
    if (!in_d1(b)) {
        throw std::invalid_argument("order_from_orientation: input not an acyclic 2-orientation");
    }

    // precedence constraints u -> v meaning "u before v"
    std::map<VertexId, VertexSet> succ;
    std::map<VertexId, std::size_t> pending;
    for (VertexId v : b.vertices()) {
        succ[v];
        pending[v] = 0;
    }
    auto add_constraint = [&](VertexId before, VertexId after) {
        if (succ[before].insert(after).second) ++pending[after];
    };
    for (const auto& [x, y] : b.arcs()) add_constraint(y, x);

    if (partial) {
        VertexSet domain(partial->order().begin(), partial->order().end());
        for (VertexId v : domain) b.require_vertex(v);
        if (!is_successor_closed(b, domain)) {
            throw std::invalid_argument("order_from_orientation: partial domain not successor-closed");
        }
        // the partial order must induce B's orientation on its domain
        Graph expected = induced_substructure(b, domain).reduct();
        if (partial->graph() != expected) {
            throw std::invalid_argument("order_from_orientation: partial disagrees with B on its domain");
        }
        auto rank = partial->ranks();
        for (const auto& [x, y] : expected.edges()) {
            VertexId lo = rank[x] < rank[y] ? x : y;
            VertexId hi = lo == x ? y : x;
            if (!b.has_arc(hi, lo)) {
                throw std::invalid_argument(
                    "order_from_orientation: partial order inconsistent with the orientation");
            }
        }
        const auto& seq = partial->order();
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) add_constraint(seq[i], seq[i + 1]);
    }

    std::set<VertexId> ready;
    for (const auto& [v, deg] : pending) {
        if (deg == 0) ready.insert(v);
    }
    std::vector<VertexId> order;
    while (!ready.empty()) {
        VertexId v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (VertexId w : succ[v]) {
            if (--pending[w] == 0) ready.insert(w);
        }
    }
    if (order.size() != b.vertex_count()) {
        throw std::invalid_argument("order_from_orientation: partial inconsistent with reachability");
    }
    return OrderedGraph(induced_substructure(b, b.vertices()).reduct(), order);
}

struct OrientationFromOrderResult {
    bool ok = false;
    std::optional<OrientedGraph> oriented;
    std::optional<VertexId> offender;  // first vertex exceeding out-degree 2
};

// tau_A = {(x,y) in E : y < x}: orient every edge from its later endpoint to
// its earlier endpoint. Succeeds iff all out-degrees are <= 2; the result is
// automatically acyclic since arcs strictly decrease rank.
inline OrientationFromOrderResult orientation_from_order(const OrderedGraph& a) {
    auto rank = a.ranks();
    OrientedGraph oriented;
    for (VertexId v : a.graph().vertices()) oriented.add_vertex(v);
    for (const auto& [x, y] : a.graph().edges()) {
        if (rank[x] < rank[y]) {
            oriented.add_arc(y, x);
        } else {
            oriented.add_arc(x, y);
        }
    }
    for (VertexId v : a.order()) {
        if (oriented.out_degree(v) > 2) return {false, std::nullopt, v};
    }
    return {true, oriented, std::nullopt};
}

// --- embedding validation ----------------------------------------------------

namespace detail {

template <typename S>
bool plain_embedding_valid(const Embedding& e, const S& dom, const S& cod);

inline bool preserves_reflects(const Embedding& e, const Graph& dom, const Graph& cod) {
    for (VertexId u : dom.vertices()) {
        for (VertexId v : dom.vertices()) {
            if (u >= v) continue;
            if (dom.has_edge(u, v) != cod.has_edge(e.map.at(u), e.map.at(v))) return false;
        }
    }
    return true;
}

inline bool preserves_reflects(const Embedding& e, const OrientedGraph& dom,
                               const OrientedGraph& cod) {
    for (VertexId u : dom.vertices()) {
        for (VertexId v : dom.vertices()) {
            if (u == v) continue;
            if (dom.has_arc(u, v) != cod.has_arc(e.map.at(u), e.map.at(v))) return false;
        }
    }
    return true;
}

template <typename S>
bool embedding_basics(const Embedding& e, const S& dom, const S& cod) {
    if (e.map.size() != dom.vertex_count()) return false;
    for (const auto& [from, to] : e.map) {
        if (!dom.has_vertex(from) || !cod.has_vertex(to)) return false;
    }
    return e.injective();
}

}  // namespace detail

inline bool embedding_valid(const Embedding& e, const Graph& dom, const Graph& cod) {
    if (!detail::embedding_basics(e, dom, cod)) return false;
    if (!detail::preserves_reflects(e, dom, cod)) return false;
    switch (e.strength) {
        case EmbeddingStrength::plain:
            return true;
        case EmbeddingStrength::le1:
            return is_le1(e.image(), cod).ok;
        default:
            return false;  // closure/order strengths need oriented or ordered carriers
    }
}

inline bool embedding_valid(const Embedding& e, const OrientedGraph& dom,
                            const OrientedGraph& cod) {
    if (!detail::embedding_basics(e, dom, cod)) return false;
    if (!detail::preserves_reflects(e, dom, cod)) return false;
    switch (e.strength) {
        case EmbeddingStrength::plain:
            return true;
        case EmbeddingStrength::successor_closed:
            return is_successor_closed(cod, e.image());
        case EmbeddingStrength::le1:
            return is_le1(e.image(), cod.reduct()).ok;
        default:
            return false;
    }
}

inline bool embedding_valid(const Embedding& e, const OrderedGraph& dom,
                            const OrderedGraph& cod) {
    if (!detail::embedding_basics(e, dom.graph(), cod.graph())) return false;
    if (!detail::preserves_reflects(e, dom.graph(), cod.graph())) return false;
    auto dr = dom.ranks();
    auto cr = cod.ranks();
    for (const auto& [u, fu] : e.map) {
        for (const auto& [v, fv] : e.map) {
            if ((dr.at(u) < dr.at(v)) != (cr.at(fu) < cr.at(fv))) return false;
        }
    }
    if (e.strength == EmbeddingStrength::le1 || e.strength == EmbeddingStrength::ordered) {
        if (e.strength == EmbeddingStrength::le1 && !is_le1(e.image(), cod.graph()).ok) {
            return false;
        }
        return true;
    }
    return e.strength == EmbeddingStrength::plain;
}

}  // namespace orientable
