#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orientable/admissible.hpp"
#include "orientable/closure.hpp"
#include "orientable/graph.hpp"
#include "orientable/hierarchy.hpp"
#include "orientable/orientation.hpp"

namespace orientable {

enum class TreeKind { T0, T1 };

inline std::string to_string(TreeKind k) { return k == TreeKind::T0 ? "T0" : "T1"; }

// Out-directed binary tree of height 2q+1 (head at height 0, leaves at
// height 2q+1). The T1 variant identifies the successor-closures of two
// height-(q+2) vertices whose paths to the head meet at height q, which
// plants an undirected 4-cycle through the meeting structure.
struct TreeGadget {
    OrientedGraph digraph;
    VertexId head = 0;
    int height_param = 1;  // q
    TreeKind kind = TreeKind::T0;
    std::map<VertexId, int> height_of;

    VertexSet leaves() const {
        VertexSet out;
        for (VertexId v : digraph.vertices()) {
            if (digraph.out_degree(v) == 0) out.insert(v);
        }
        return out;
    }
};

inline TreeGadget build_tree(TreeKind kind, int q) {
    if (q < 1) throw std::invalid_argument("build_tree: q must be positive");

    const int depth = 2 * q + 1;  // arc-levels below the head
    const VertexId n = (1u << (depth + 1)) - 1;

    TreeGadget t;
    t.kind = kind;
    t.height_param = q;
    t.head = 0;
    // heap layout: children of i are 2i+1 and 2i+2
    for (VertexId v = 0; v < n; ++v) {
        t.digraph.add_vertex(v);
        int h = 0;
        for (VertexId x = v + 1; x > 1; x >>= 1) ++h;
        t.height_of[v] = h;
    }
    for (VertexId v = 0; v < n; ++v) {
        if (t.height_of[v] < depth) {
            t.digraph.add_arc(v, 2 * v + 1);
            t.digraph.add_arc(v, 2 * v + 2);
        }
    }
    if (kind == TreeKind::T0) return t;

    // T1: w = leftmost height-q vertex; identified pair = leftmost
    // height-(q+2) descendants of w's two children. Keep the left copy,
    // delete the right subtree, and re-point the right parent at the left.
    VertexId w = (1u << q) - 1;
    VertexId w_left = 2 * w + 1, w_right = 2 * w + 2;
    VertexId keep = 2 * w_left + 1;    // leftmost child of the left child
    VertexId drop = 2 * w_right + 1;   // leftmost child of the right child

    VertexSet to_drop = scl(t.digraph, drop);
    OrientedGraph merged;
    for (VertexId v : t.digraph.vertices()) {
        if (!to_drop.count(v)) merged.add_vertex(v);
    }
    for (const auto& [a, b] : t.digraph.arcs()) {
        if (!to_drop.count(a) && !to_drop.count(b)) merged.add_arc(a, b);
    }
    merged.add_arc(w_right, keep);
    for (VertexId v : to_drop) t.height_of.erase(v);
    t.digraph = std::move(merged);
    return t;
}

// For every vertex of out-degree exactly 1, add a fresh sink and an arc to
// it; afterwards all out-degrees are 0 or 2.
inline OrientedGraph pad_outdegrees(const OrientedGraph& b_plus) {
    if (!in_d1(b_plus)) {
        throw std::invalid_argument("pad_outdegrees: input not in D1");
    }
    OrientedGraph out = b_plus;
    VertexId next = fresh_vertex_id(b_plus.vertices());
    for (VertexId v : b_plus.vertices()) {
        if (b_plus.out_degree(v) == 1) {
            out.add_vertex(next);
            out.add_arc(v, next);
            ++next;
        }
    }
    return out;
}

struct TreeCopy {
    VertexId head = 0;                 // the C-sink this copy is attached at
    std::vector<VertexId> vertices;    // copy vertices in D_T ids (head included)
    std::map<VertexId, int> height;
};

// C together with a fresh tree copy hanging below every out-degree-0 vertex
// of C, head identified with that vertex.
struct AttachedComplex {
    OrientedGraph digraph;   // D_T
    VertexSet base;          // vertices of C
    VertexSet tree_region;   // Z_T: union of the attached copies
    std::vector<TreeCopy> copies;
    TreeKind kind = TreeKind::T0;
    int q = 1;

    // tree vertices that are not leaves of their copy
    std::vector<VertexId> non_leaf_tree_vertices() const {
        std::vector<VertexId> out;
        for (VertexId v : tree_region) {
            if (digraph.out_degree(v) > 0) out.push_back(v);
        }
        return out;
    }
};

inline AttachedComplex attach_trees(const OrientedGraph& c, TreeKind kind, int q) {
    if (!in_d1(c)) {
        throw std::invalid_argument("attach_trees: C not in D1");
    }
    for (VertexId v : c.vertices()) {
        std::size_t d = c.out_degree(v);
        if (d != 0 && d != 2) {
            throw std::invalid_argument("attach_trees: vertex " + std::to_string(v) +
                                        " has out-degree " + std::to_string(d));
        }
    }
    AttachedComplex x;
    x.kind = kind;
    x.q = q;
    x.base = c.vertices();
    x.digraph = c;

    TreeGadget proto = build_tree(kind, q);
    VertexId next = fresh_vertex_id(c.vertices());
    for (VertexId v : c.vertices()) {
        if (c.out_degree(v) != 0) continue;
        std::map<VertexId, VertexId> remap;
        remap[proto.head] = v;
        for (VertexId t : proto.digraph.vertices()) {
            if (t != proto.head) remap[t] = next++;
        }
        TreeCopy copy;
        copy.head = v;
        for (VertexId t : proto.digraph.vertices()) {
            VertexId nv = remap[t];
            copy.vertices.push_back(nv);
            copy.height[nv] = proto.height_of.at(t);
            if (nv != v) x.digraph.add_vertex(nv);
            x.tree_region.insert(nv);
        }
        for (const auto& [a, b] : proto.digraph.arcs()) {
            x.digraph.add_arc(remap[a], remap[b]);
        }
        x.copies.push_back(std::move(copy));
    }
    if (!in_d1(x.digraph)) {
        throw std::logic_error("attach_trees: construction left D1");
    }
    return x;
}

// Reverse every tree arc so each copy points toward its head, leaving the
// orientation on C unchanged. In the result C is successor-closed, so the
// reduct satisfies C <=_1 D_T^-.
inline OrientedGraph reorient_toward_head(const AttachedComplex& x) {
    OrientedGraph out;
    for (VertexId v : x.digraph.vertices()) out.add_vertex(v);
    for (const auto& [a, b] : x.digraph.arcs()) {
        if (x.tree_region.count(a) && x.tree_region.count(b)) {
            out.add_arc(b, a);
        } else {
            out.add_arc(a, b);
        }
    }
    if (!in_d1(out) || !is_successor_closed(out, x.base)) {
        throw std::logic_error("reorient_toward_head: internal consistency failure");
    }
    return out;
}

// Def-4.4-shaped ordered graph: the reduct of D_T plus, per non-leaf tree
// vertex v, ten graph copies of scl(v) freely amalgamated over scl(v)°, with
// the order placing five copies below v and five above.
struct WitnessOrderedGraph {
    Graph graph;                    // C_T
    std::vector<VertexId> order;    // the witness order on C_T
    AttachedComplex base_complex;   // D_T bookkeeping
    // labeled copies: slots 0..4 are v_-5..v_-1, slots 5..9 are v_1..v_5
    std::map<VertexId, std::array<VertexId, 10>> witness_map;

    OrderedGraph ordered_graph() const { return OrderedGraph(graph, order); }
};

inline WitnessOrderedGraph build_witness_shape(const AttachedComplex& x) {
    const OrientedGraph& dt = x.digraph;

    // enumerate non-leaf tree vertices level-nondecreasingly
    LevelAssignment lvl = levels(dt);
    std::vector<VertexId> targets = x.non_leaf_tree_vertices();
    std::sort(targets.begin(), targets.end(), [&](VertexId a, VertexId b) {
        if (lvl.at(a) != lvl.at(b)) return lvl.at(a) < lvl.at(b);
        return a < b;
    });

    WitnessOrderedGraph w;
    w.base_complex = x;
    w.graph = dt.reduct();

    // witness copies of scl(v) over scl(v)° add one fresh vertex each; its
    // edges mirror v's edges inside scl(v), i.e. the arcs to v's successors.
    // For the ordering we orient those edges outward from each copy.
    OrientedGraph with_witnesses = dt;
    VertexId next = fresh_vertex_id(dt.vertices());
    for (VertexId v : targets) {
        std::vector<VertexId> succs = dt.out_neighbors(v);
        std::array<VertexId, 10> labels{};
        for (int m = 0; m < 10; ++m) {
            VertexId c = next++;
            w.graph.add_vertex(c);
            with_witnesses.add_vertex(c);
            for (VertexId s : succs) {
                w.graph.add_edge(c, s);
                with_witnesses.add_arc(c, s);
            }
            labels[m] = c;
        }
        w.witness_map[v] = labels;
    }

    OrderedGraph adm = build_admissible_order(with_witnesses);
    std::vector<VertexId> order = adm.order();

    // Each v and its copies are homologous (same base, isomorphic closures),
    // so they occupy a contiguous block, sorted by id: [v, c1..c10]. Move v
    // to the middle of its block; intra-cone placement is unconstrained by
    // conditions (2)/(3), so admissibility is preserved.
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& [v, labels] : w.witness_map) {
        std::size_t lo = pos.at(v);
        for (VertexId c : labels) lo = std::min(lo, pos.at(c));
        std::vector<VertexId> block{labels.begin(), labels.begin() + 5};
        block.push_back(v);
        block.insert(block.end(), labels.begin() + 5, labels.end());
        for (std::size_t i = 0; i < block.size(); ++i) {
            order[lo + i] = block[i];
        }
        for (std::size_t i = 0; i < block.size(); ++i) pos[block[i]] = lo + i;
    }
    w.order = std::move(order);
    return w;
}

struct WitnessReport {
    bool ok = true;
    std::vector<std::string> violations;

    void fail(const std::string& why) {
        ok = false;
        violations.push_back(why);
    }
};

// Verifies the Def-4.4 bullets: copy counts and amalgamation shape, the
// C <=_1 C_T requirement (via the decision procedure on the reduct), and the
// five-below / five-above order pattern per non-leaf tree vertex.
inline WitnessReport check_witness(const WitnessOrderedGraph& w) {
    WitnessReport report;
    const OrientedGraph& dt = w.base_complex.digraph;

    // vertex inventory: D_T plus exactly the witness copies
    VertexSet expected = dt.vertices();
    std::set<VertexId> witness_ids;
    for (const auto& [v, labels] : w.witness_map) {
        for (VertexId c : labels) {
            if (!witness_ids.insert(c).second) {
                report.fail("witness vertex " + std::to_string(c) + " labeled twice");
            }
            if (dt.vertices().count(c)) {
                report.fail("witness vertex " + std::to_string(c) + " collides with D_T");
            }
            expected.insert(c);
        }
    }
    if (w.graph.vertices() != expected) {
        report.fail("vertex set is not D_T plus the labeled witness copies");
        return report;
    }

    if (induced_substructure(w.graph, dt.vertices()) != dt.reduct()) {
        report.fail("removing the witness copies does not recover D_T");
    }

    // copy bookkeeping: every non-leaf tree vertex carries exactly 10 copies
    std::vector<VertexId> targets = w.base_complex.non_leaf_tree_vertices();
    VertexSet target_set(targets.begin(), targets.end());
    for (VertexId v : targets) {
        if (!w.witness_map.count(v)) {
            report.fail("non-leaf tree vertex " + std::to_string(v) + " has no witness copies");
        }
    }
    for (const auto& [v, labels] : w.witness_map) {
        if (!target_set.count(v)) {
            report.fail("vertex " + std::to_string(v) + " has witness copies but is not a non-leaf tree vertex");
            continue;
        }
        std::vector<VertexId> succs = dt.out_neighbors(v);
        VertexSet expected_nbrs(succs.begin(), succs.end());
        for (VertexId c : labels) {
            auto nbrs = w.graph.neighbors(c);
            if (VertexSet(nbrs.begin(), nbrs.end()) != expected_nbrs) {
                report.fail("witness copy " + std::to_string(c) + " of " + std::to_string(v) +
                            " is not a free amalgam of scl(" + std::to_string(v) + ") over its base");
            }
        }
    }

    // C <=_1 C_T
    if (!is_le1(w.base_complex.base, w.graph).ok) {
        report.fail("C is not <=_1 in C_T");
    }

    // order pattern v_-5 < ... < v_-1 < v < v_1 < ... < v_5
    if (w.order.size() != w.graph.vertex_count() ||
        VertexSet(w.order.begin(), w.order.end()) != w.graph.vertices()) {
        report.fail("order is not a permutation of C_T");
        return report;
    }
    std::map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < w.order.size(); ++i) pos[w.order[i]] = i;
    for (const auto& [v, labels] : w.witness_map) {
        if (!pos.count(v)) continue;
        std::vector<std::size_t> chain;
        for (int m = 0; m < 5; ++m) chain.push_back(pos.at(labels[m]));
        chain.push_back(pos.at(v));
        for (int m = 5; m < 10; ++m) chain.push_back(pos.at(labels[m]));
        if (!std::is_sorted(chain.begin(), chain.end())) {
            report.fail("witness vertices of " + std::to_string(v) +
                        " do not straddle it five below, five above");
        }
    }
    return report;
}

// U_n: out-ball of radius n around d.
inline VertexSet reachable_set(const OrientedGraph& d, VertexId start, unsigned n) {
    d.require_vertex(start);
    VertexSet ball{start};
    std::vector<VertexId> frontier{start};
    for (unsigned i = 0; i < n && !frontier.empty(); ++i) {
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            for (VertexId w : d.out_neighbors(v)) {
                if (ball.insert(w).second) next.push_back(w);
            }
        }
        frontier = std::move(next);
    }
    return ball;
}

namespace detail {

inline bool has_undirected_cycle(const Graph& g) {
    // forest iff |E| = |V| - #components
    std::map<VertexId, VertexId> parent;
    for (VertexId v : g.vertices()) parent[v] = v;
    auto find = [&](VertexId v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& [a, b] : g.edges()) {
        VertexId ra = find(a), rb = find(b);
        if (ra == rb) return true;
        parent[ra] = rb;
    }
    return false;
}

inline bool contains_4cycle(const Graph& g) {
    // two vertices with two common neighbours span a 4-cycle
    std::vector<VertexId> ids(g.vertices().begin(), g.vertices().end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            auto ni = g.neighbors(ids[i]);
            auto nj = g.neighbors(ids[j]);
            std::vector<VertexId> common;
            std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(),
                                  std::back_inserter(common));
            if (common.size() >= 2) return true;
        }
    }
    return false;
}

}  // namespace detail

// The contradiction engine of the main argument: between heights q and 2q+1,
// T0(q) is undirected-acyclic while T1(q) contains a 4-cycle, so the two
// reachable-set shapes are incompatible.
inline bool incompatibility_check(int q) {
    if (q < 1) throw std::invalid_argument("incompatibility_check: q must be positive");
    TreeGadget t0 = build_tree(TreeKind::T0, q);
    TreeGadget t1 = build_tree(TreeKind::T1, q);

    auto annulus = [&](const TreeGadget& t) {
        VertexSet outer = reachable_set(t.digraph, t.head, 2 * q + 1);
        VertexSet inner = reachable_set(t.digraph, t.head, q - 1);
        VertexSet diff;
        std::set_difference(outer.begin(), outer.end(), inner.begin(), inner.end(),
                            std::inserter(diff, diff.begin()));
        return induced_substructure(t.digraph, diff).reduct();
    };

    bool t0_acyclic = !detail::has_undirected_cycle(annulus(t0));
    bool t1_has_square = detail::contains_4cycle(annulus(t1));
    return t0_acyclic && t1_has_square;
}

}  // namespace orientable
