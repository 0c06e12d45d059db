#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orientable {

using VertexId = std::uint32_t;
using VertexSet = std::set<VertexId>;
using VertexPair = std::pair<VertexId, VertexId>;

inline VertexPair make_edge_key(VertexId u, VertexId v) {
    return u < v ? VertexPair{u, v} : VertexPair{v, u};
}

// Finite simple undirected graph with an explicit vertex set. Vertex ids are
// arbitrary non-negative integers and are preserved by every operation, so
// overlaps between structures can be expressed by shared ids.
class Graph {
public:
    Graph() = default;

    void add_vertex(VertexId v) { vertices_.insert(v); }

    void add_edge(VertexId u, VertexId v) {
        if (u == v) {
            throw std::invalid_argument("loop edge at vertex " + std::to_string(u));
        }
        if (!has_vertex(u) || !has_vertex(v)) {
            throw std::invalid_argument("edge endpoint not in vertex set");
        }
        edges_.insert(make_edge_key(u, v));
    }

    bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }

    bool has_edge(VertexId u, VertexId v) const {
        return edges_.count(make_edge_key(u, v)) != 0;
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const VertexSet& vertices() const { return vertices_; }
    const std::set<VertexPair>& edges() const { return edges_; }

    std::vector<VertexId> neighbors(VertexId v) const {
        require_vertex(v);
        std::vector<VertexId> out;
        for (const auto& [a, b] : edges_) {
            if (a == v) out.push_back(b);
            else if (b == v) out.push_back(a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t degree(VertexId v) const { return neighbors(v).size(); }

    void require_vertex(VertexId v) const {
        if (!has_vertex(v)) {
            throw std::invalid_argument("unknown vertex id " + std::to_string(v));
        }
    }

    bool operator==(const Graph&) const = default;

private:
    VertexSet vertices_;
    std::set<VertexPair> edges_;  // normalized: first < second
};

// Oriented graph: every unordered pair carries at most one arc and there are
// no loops, so the reduct (forgetting direction) is always a valid Graph.
class OrientedGraph {
public:
    OrientedGraph() = default;

    void add_vertex(VertexId v) { vertices_.insert(v); }

    void add_arc(VertexId from, VertexId to) {
        if (from == to) {
            throw std::invalid_argument("loop arc at vertex " + std::to_string(from));
        }
        if (!has_vertex(from) || !has_vertex(to)) {
            throw std::invalid_argument("arc endpoint not in vertex set");
        }
        if (arcs_.count({to, from}) != 0) {
            throw std::invalid_argument("antiparallel arc between " + std::to_string(from) +
                                        " and " + std::to_string(to));
        }
        arcs_.insert({from, to});
    }

    bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
    bool has_arc(VertexId from, VertexId to) const { return arcs_.count({from, to}) != 0; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    const VertexSet& vertices() const { return vertices_; }
    const std::set<VertexPair>& arcs() const { return arcs_; }

    std::vector<VertexId> out_neighbors(VertexId v) const {
        require_vertex(v);
        std::vector<VertexId> out;
        for (auto it = arcs_.lower_bound({v, 0}); it != arcs_.end() && it->first == v; ++it) {
            out.push_back(it->second);
        }
        return out;
    }

    std::vector<VertexId> in_neighbors(VertexId v) const {
        require_vertex(v);
        std::vector<VertexId> in;
        for (const auto& [a, b] : arcs_) {
            if (b == v) in.push_back(a);
        }
        return in;
    }

    std::size_t out_degree(VertexId v) const { return out_neighbors(v).size(); }
    std::size_t in_degree(VertexId v) const { return in_neighbors(v).size(); }

    Graph reduct() const {
        Graph g;
        for (VertexId v : vertices_) g.add_vertex(v);
        for (const auto& [a, b] : arcs_) g.add_edge(a, b);
        return g;
    }

    void require_vertex(VertexId v) const {
        if (!has_vertex(v)) {
            throw std::invalid_argument("unknown vertex id " + std::to_string(v));
        }
    }

    bool operator==(const OrientedGraph&) const = default;

private:
    VertexSet vertices_;
    std::set<VertexPair> arcs_;
};

namespace detail {

inline void check_permutation(const VertexSet& vertices, const std::vector<VertexId>& order) {
    if (order.size() != vertices.size()) {
        throw std::invalid_argument("order does not list every vertex exactly once");
    }
    VertexSet seen(order.begin(), order.end());
    if (seen != vertices) {
        throw std::invalid_argument("order is not a permutation of the vertex set");
    }
}

}  // namespace detail

// Graph with a total order on its vertices; position in `order` is the rank.
class OrderedGraph {
public:
    OrderedGraph() = default;

    OrderedGraph(Graph graph, std::vector<VertexId> order)
        : graph_(std::move(graph)), order_(std::move(order)) {
        detail::check_permutation(graph_.vertices(), order_);
    }

    const Graph& graph() const { return graph_; }
    const std::vector<VertexId>& order() const { return order_; }

    std::size_t rank_of(VertexId v) const {
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (order_[i] == v) return i;
        }
        throw std::invalid_argument("unknown vertex id " + std::to_string(v));
    }

    std::map<VertexId, std::size_t> ranks() const {
        std::map<VertexId, std::size_t> r;
        for (std::size_t i = 0; i < order_.size(); ++i) r[order_[i]] = i;
        return r;
    }

    bool precedes(VertexId u, VertexId v) const { return rank_of(u) < rank_of(v); }

    bool operator==(const OrderedGraph&) const = default;

private:
    Graph graph_;
    std::vector<VertexId> order_;
};

// Oriented graph with a total order; the carrier for admissibility checks.
class OrderedOrientedGraph {
public:
    OrderedOrientedGraph() = default;

    OrderedOrientedGraph(OrientedGraph digraph, std::vector<VertexId> order)
        : digraph_(std::move(digraph)), order_(std::move(order)) {
        detail::check_permutation(digraph_.vertices(), order_);
    }

    const OrientedGraph& digraph() const { return digraph_; }
    const std::vector<VertexId>& order() const { return order_; }

    std::map<VertexId, std::size_t> ranks() const {
        std::map<VertexId, std::size_t> r;
        for (std::size_t i = 0; i < order_.size(); ++i) r[order_[i]] = i;
        return r;
    }

    bool operator==(const OrderedOrientedGraph&) const = default;

private:
    OrientedGraph digraph_;
    std::vector<VertexId> order_;
};

// Kahn's algorithm; true iff the digraph has no directed cycle.
inline bool is_acyclic(const OrientedGraph& d) {
    std::map<VertexId, std::size_t> in_degree;
    for (VertexId v : d.vertices()) in_degree[v] = 0;
    for (const auto& [a, b] : d.arcs()) ++in_degree[b];

    std::vector<VertexId> stack;
    for (const auto& [v, deg] : in_degree) {
        if (deg == 0) stack.push_back(v);
    }
    std::size_t removed = 0;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        ++removed;
        for (VertexId w : d.out_neighbors(v)) {
            if (--in_degree[w] == 0) stack.push_back(w);
        }
    }
    return removed == d.vertex_count();
}

inline VertexId fresh_vertex_id(const VertexSet& used) {
    return used.empty() ? 0 : *used.rbegin() + 1;
}

// --- induced substructures -------------------------------------------------

inline Graph induced_substructure(const Graph& g, const VertexSet& keep) {
    Graph out;
    for (VertexId v : keep) {
        g.require_vertex(v);
        out.add_vertex(v);
    }
    for (const auto& [a, b] : g.edges()) {
        if (keep.count(a) && keep.count(b)) out.add_edge(a, b);
    }
    return out;
}

inline OrientedGraph induced_substructure(const OrientedGraph& d, const VertexSet& keep) {
    OrientedGraph out;
    for (VertexId v : keep) {
        d.require_vertex(v);
        out.add_vertex(v);
    }
    for (const auto& [a, b] : d.arcs()) {
        if (keep.count(a) && keep.count(b)) out.add_arc(a, b);
    }
    return out;
}

inline std::vector<VertexId> restrict_order(const std::vector<VertexId>& order,
                                            const VertexSet& keep) {
    std::vector<VertexId> out;
    for (VertexId v : order) {
        if (keep.count(v)) out.push_back(v);
    }
    return out;
}

inline OrderedGraph induced_substructure(const OrderedGraph& s, const VertexSet& keep) {
    return OrderedGraph(induced_substructure(s.graph(), keep), restrict_order(s.order(), keep));
}

inline OrderedOrientedGraph induced_substructure(const OrderedOrientedGraph& s,
                                                 const VertexSet& keep) {
    return OrderedOrientedGraph(induced_substructure(s.digraph(), keep),
                                restrict_order(s.order(), keep));
}

// --- free amalgamation -----------------------------------------------------

namespace detail {

template <typename S>
void check_overlap(const S& b0, const S& b1, const VertexSet& a) {
    VertexSet inter;
    std::set_intersection(b0.vertices().begin(), b0.vertices().end(), b1.vertices().begin(),
                          b1.vertices().end(), std::inserter(inter, inter.begin()));
    if (inter != a) {
        throw std::invalid_argument("overlap mismatch: A is not the vertex intersection");
    }
    if (induced_substructure(b0, a) != induced_substructure(b1, a)) {
        throw std::invalid_argument("overlap mismatch: factors disagree on A");
    }
}

}  // namespace detail

// Union of the two structures over a pre-aligned overlap A = B0 ∩ B1; no
// edges are introduced between B0∖A and B1∖A.
inline Graph free_amalgam(const Graph& b0, const Graph& b1, const VertexSet& a) {
    detail::check_overlap(b0, b1, a);
    Graph out;
    for (VertexId v : b0.vertices()) out.add_vertex(v);
    for (VertexId v : b1.vertices()) out.add_vertex(v);
    for (const auto& [x, y] : b0.edges()) out.add_edge(x, y);
    for (const auto& [x, y] : b1.edges()) out.add_edge(x, y);
    return out;
}

inline OrientedGraph free_amalgam(const OrientedGraph& b0, const OrientedGraph& b1,
                                  const VertexSet& a) {
    detail::check_overlap(b0, b1, a);
    OrientedGraph out;
    for (VertexId v : b0.vertices()) out.add_vertex(v);
    for (VertexId v : b1.vertices()) out.add_vertex(v);
    for (const auto& [x, y] : b0.arcs()) out.add_arc(x, y);
    for (const auto& [x, y] : b1.arcs()) {
        if (!out.has_arc(x, y)) out.add_arc(x, y);
    }
    return out;
}

// --- relabeling ------------------------------------------------------------

inline Graph relabel(const Graph& g, const std::map<VertexId, VertexId>& pi) {
    Graph out;
    for (VertexId v : g.vertices()) out.add_vertex(pi.at(v));
    for (const auto& [a, b] : g.edges()) out.add_edge(pi.at(a), pi.at(b));
    return out;
}

inline OrientedGraph relabel(const OrientedGraph& d, const std::map<VertexId, VertexId>& pi) {
    OrientedGraph out;
    for (VertexId v : d.vertices()) out.add_vertex(pi.at(v));
    for (const auto& [a, b] : d.arcs()) out.add_arc(pi.at(a), pi.at(b));
    return out;
}

// --- embeddings ------------------------------------------------------------

enum class EmbeddingStrength { plain, successor_closed, le1, ordered };

// Injective structure map annotated with the strength notion it is claimed
// to satisfy. Validation for the closure-based strengths lives in
// closure.hpp (embedding_valid), since it needs scl and the le1 decision.
struct Embedding {
    std::map<VertexId, VertexId> map;
    EmbeddingStrength strength = EmbeddingStrength::plain;

    VertexSet image() const {
        VertexSet img;
        for (const auto& [from, to] : map) img.insert(to);
        return img;
    }

    bool injective() const { return image().size() == map.size(); }
};

}  // namespace orientable
