#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orientable/admissible.hpp"
#include "orientable/canonical.hpp"
#include "orientable/closure.hpp"
#include "orientable/graph.hpp"
#include "orientable/orientation.hpp"

namespace orientable {

// All orientations of G that are acyclic with out-degree <= k, enumerated by
// brute force over the 2^|E| direction choices. This is the independent
// oracle against which the peeling and le1 decision procedures are checked.
inline std::vector<OrientedGraph> enumerate_acyclic_orientations(const Graph& g, unsigned k) {
    if (g.edge_count() > 20) {
        throw std::invalid_argument("enumerate_acyclic_orientations: size bound exceeded");
    }
    std::vector<VertexPair> edges(g.edges().begin(), g.edges().end());
    std::vector<OrientedGraph> found;
    for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        OrientedGraph o;
        for (VertexId v : g.vertices()) o.add_vertex(v);
        bool capped = true;
        for (std::size_t e = 0; e < edges.size() && capped; ++e) {
            VertexId from = (mask >> e) & 1u ? edges[e].second : edges[e].first;
            VertexId to = (mask >> e) & 1u ? edges[e].first : edges[e].second;
            o.add_arc(from, to);
            if (o.out_degree(from) > k) capped = false;
        }
        if (capped && is_acyclic(o)) found.push_back(std::move(o));
    }
    std::sort(found.begin(), found.end(), [](const OrientedGraph& a, const OrientedGraph& b) {
        CanonicalForm ka = canonical_form(a, a.vertex_count());
        CanonicalForm kb = canonical_form(b, b.vertex_count());
        if (ka.key != kb.key) return ka.key < kb.key;
        return a.arcs() < b.arcs();
    });
    return found;
}

// --- small-type enumeration --------------------------------------------------

namespace detail {

inline std::vector<VertexPair> pairs_on(std::size_t n) {
    std::vector<VertexPair> out;
    for (VertexId i = 0; i < n; ++i) {
        for (VertexId j = i + 1; j < n; ++j) out.push_back({i, j});
    }
    return out;
}

}  // namespace detail

// Every labeled graph on vertex ids 0..n-1.
inline std::vector<Graph> all_labeled_graphs(std::size_t n) {
    auto pairs = detail::pairs_on(n);
    std::vector<Graph> out;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
        Graph g;
        for (VertexId v = 0; v < n; ++v) g.add_vertex(v);
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            if ((mask >> e) & 1u) g.add_edge(pairs[e].first, pairs[e].second);
        }
        out.push_back(std::move(g));
    }
    return out;
}

// Every labeled oriented graph on ids 0..n-1 (pair absent / forward / back).
inline std::vector<OrientedGraph> all_labeled_oriented(std::size_t n) {
    auto pairs = detail::pairs_on(n);
    std::vector<OrientedGraph> out;
    std::size_t total = 1;
    for (std::size_t e = 0; e < pairs.size(); ++e) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        OrientedGraph d;
        for (VertexId v = 0; v < n; ++v) d.add_vertex(v);
        std::size_t c = code;
        for (const auto& [u, v] : pairs) {
            switch (c % 3) {
                case 1: d.add_arc(u, v); break;
                case 2: d.add_arc(v, u); break;
                default: break;
            }
            c /= 3;
        }
        out.push_back(std::move(d));
    }
    return out;
}

// C1 graph types with 1..max_n vertices, one representative per iso class.
inline std::vector<Graph> all_c1_types(std::size_t max_n) {
    std::vector<Graph> out;
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (Graph& g : all_labeled_graphs(n)) {
            if (!in_c1(g)) continue;
            auto key = canonical_form(g, n).key;
            if (seen.insert(key).second) out.push_back(std::move(g));
        }
    }
    return out;
}

// D1 types (acyclic, out-degree <= 2) with 1..max_n vertices, up to iso.
inline std::vector<OrientedGraph> all_d1_types(std::size_t max_n) {
    std::vector<OrientedGraph> out;
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (OrientedGraph& d : all_labeled_oriented(n)) {
            if (!in_d1(d)) continue;
            auto key = canonical_form(d, n).key;
            if (seen.insert(key).second) out.push_back(std::move(d));
        }
    }
    return out;
}

// --- class samples -----------------------------------------------------------

enum class SampleKind { c1_le1, d1_sqs, ordered_c1_le1, ordered_d1_sqs };

// Uniform runtime carrier for sample members of any kind.
struct LabStructure {
    bool directed = false;
    bool ordered = false;
    Graph graph;            // the reduct, always present
    OrientedGraph digraph;  // meaningful when directed
    std::vector<VertexId> order;  // meaningful when ordered

    static LabStructure of(const Graph& g) {
        LabStructure s;
        s.graph = g;
        return s;
    }
    static LabStructure of(const OrientedGraph& d) {
        LabStructure s;
        s.directed = true;
        s.digraph = d;
        s.graph = d.reduct();
        return s;
    }
    static LabStructure of(const OrderedGraph& g) {
        LabStructure s;
        s.ordered = true;
        s.graph = g.graph();
        s.order = g.order();
        return s;
    }
    static LabStructure of(const OrderedOrientedGraph& d) {
        LabStructure s;
        s.directed = true;
        s.ordered = true;
        s.digraph = d.digraph();
        s.graph = d.digraph().reduct();
        s.order = d.order();
        return s;
    }

    const VertexSet& vertices() const { return graph.vertices(); }
    std::size_t size() const { return graph.vertex_count(); }

    LabStructure induced(const VertexSet& keep) const {
        LabStructure s = *this;
        s.graph = induced_substructure(graph, keep);
        if (directed) s.digraph = induced_substructure(digraph, keep);
        if (ordered) s.order = restrict_order(order, keep);
        return s;
    }

    CanonicalForm iso_key() const {
        std::size_t n = size();
        if (directed && ordered) return canonical_form(digraph, order, n);
        if (directed) return canonical_form(digraph, n);
        if (ordered) return canonical_form(graph, order, n);
        return canonical_form(graph, n);
    }
};

namespace detail {

inline bool kind_directed(SampleKind k) {
    return k == SampleKind::d1_sqs || k == SampleKind::ordered_d1_sqs;
}

inline bool kind_ordered(SampleKind k) {
    return k == SampleKind::ordered_c1_le1 || k == SampleKind::ordered_d1_sqs;
}

inline bool in_sample_class(SampleKind k, const LabStructure& s) {
    if (s.directed != kind_directed(k) || s.ordered != kind_ordered(k)) return false;
    return s.directed ? in_d1(s.digraph) : in_c1(s.graph);
}

inline bool strong_subset(SampleKind k, const LabStructure& s, const VertexSet& a) {
    return kind_directed(k) ? is_successor_closed(s.digraph, a) : is_le1(a, s.graph).ok;
}

inline std::vector<VertexSet> strong_subsets(SampleKind k, const LabStructure& s) {
    std::vector<VertexId> ids(s.vertices().begin(), s.vertices().end());
    std::vector<VertexSet> out;
    for (std::uint32_t mask = 0; mask < (1u << ids.size()); ++mask) {
        VertexSet a;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if ((mask >> i) & 1u) a.insert(ids[i]);
        }
        if (strong_subset(k, s, a)) out.push_back(std::move(a));
    }
    return out;
}

// All injective maps dom -> cod that preserve and reflect the structure
// (arcs or edges, plus relative order when ordered). Strongness of the
// image is checked by the caller when required.
inline std::vector<std::map<VertexId, VertexId>> structure_embeddings(const LabStructure& dom,
                                                                      const LabStructure& cod) {
    std::vector<VertexId> dv(dom.vertices().begin(), dom.vertices().end());
    std::vector<VertexId> cv(cod.vertices().begin(), cod.vertices().end());
    std::vector<std::map<VertexId, VertexId>> out;
    if (dv.size() > cv.size()) return out;

    std::map<VertexId, std::size_t> dom_rank, cod_rank;
    if (dom.ordered) {
        for (std::size_t i = 0; i < dom.order.size(); ++i) dom_rank[dom.order[i]] = i;
        for (std::size_t i = 0; i < cod.order.size(); ++i) cod_rank[cod.order[i]] = i;
    }

    std::map<VertexId, VertexId> partial;
    std::set<VertexId> used;
    auto consistent = [&](VertexId d, VertexId c) {
        for (const auto& [pd, pc] : partial) {
            if (dom.directed) {
                if (dom.digraph.has_arc(d, pd) != cod.digraph.has_arc(c, pc)) return false;
                if (dom.digraph.has_arc(pd, d) != cod.digraph.has_arc(pc, c)) return false;
            } else {
                if (dom.graph.has_edge(d, pd) != cod.graph.has_edge(c, pc)) return false;
            }
            if (dom.ordered &&
                (dom_rank.at(d) < dom_rank.at(pd)) != (cod_rank.at(c) < cod_rank.at(pc))) {
                return false;
            }
        }
        return true;
    };
    auto search = [&](auto&& self, std::size_t i) -> void {
        if (i == dv.size()) {
            out.push_back(partial);
            return;
        }
        for (VertexId c : cv) {
            if (used.count(c)) continue;
            if (!consistent(dv[i], c)) continue;
            partial[dv[i]] = c;
            used.insert(c);
            self(self, i + 1);
            partial.erase(dv[i]);
            used.erase(c);
        }
    };
    search(search, 0);
    return out;
}

}  // namespace detail

// Extensional fragment of a strong class up to a size bound. Construction
// validates class membership of every member and closure under the declared
// strong substructures (each strong substructure's iso type must be listed).
class ClassSample {
public:
    static ClassSample custom(SampleKind kind, std::vector<LabStructure> members,
                              std::size_t bound) {
        ClassSample s;
        s.kind_ = kind;
        s.bound_ = bound;
        s.members_ = std::move(members);
        s.validate();
        return s;
    }

    static ClassSample all_c1(std::size_t bound) {
        std::vector<LabStructure> ms;
        for (const Graph& g : all_c1_types(bound)) ms.push_back(LabStructure::of(g));
        return custom(SampleKind::c1_le1, std::move(ms), bound);
    }

    static ClassSample all_d1(std::size_t bound) {
        std::vector<LabStructure> ms;
        for (const OrientedGraph& d : all_d1_types(bound)) ms.push_back(LabStructure::of(d));
        return custom(SampleKind::d1_sqs, std::move(ms), bound);
    }

    // The order expansion C1^<: every C1 type with every linear order.
    static ClassSample order_expansions_c1(std::size_t bound) {
        std::vector<LabStructure> ms;
        std::set<std::vector<std::uint8_t>> seen;
        for (const Graph& g : all_c1_types(bound)) {
            std::vector<VertexId> perm(g.vertices().begin(), g.vertices().end());
            std::sort(perm.begin(), perm.end());
            do {
                LabStructure s = LabStructure::of(OrderedGraph(g, perm));
                if (seen.insert(s.iso_key().key).second) ms.push_back(std::move(s));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return custom(SampleKind::ordered_c1_le1, std::move(ms), bound);
    }

    // The order expansion D1^<.
    static ClassSample order_expansions_d1(std::size_t bound) {
        std::vector<LabStructure> ms;
        std::set<std::vector<std::uint8_t>> seen;
        for (const OrientedGraph& d : all_d1_types(bound)) {
            std::vector<VertexId> perm(d.vertices().begin(), d.vertices().end());
            std::sort(perm.begin(), perm.end());
            do {
                LabStructure s = LabStructure::of(OrderedOrientedGraph(d, perm));
                if (seen.insert(s.iso_key().key).second) ms.push_back(std::move(s));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return custom(SampleKind::ordered_d1_sqs, std::move(ms), bound);
    }

    SampleKind kind() const { return kind_; }
    std::size_t bound() const { return bound_; }
    const std::vector<LabStructure>& members() const { return members_; }

    bool contains_type(const LabStructure& s) const {
        auto key = s.iso_key().key;
        for (const auto& m : members_) {
            if (m.size() == s.size() && m.iso_key().key == key) return true;
        }
        return false;
    }

private:
    void validate() const {
        for (const auto& m : members_) {
            if (m.size() > bound_) {
                throw std::invalid_argument("class sample: member exceeds the size bound");
            }
            if (!detail::in_sample_class(kind_, m)) {
                throw std::invalid_argument("class sample: member not in the declared class");
            }
        }
        for (const auto& m : members_) {
            for (const VertexSet& a : detail::strong_subsets(kind_, m)) {
                if (a.empty() || a.size() == m.size()) continue;
                if (!contains_type(m.induced(a))) {
                    throw std::invalid_argument(
                        "class sample: not closed under strong substructures");
                }
            }
        }
    }

    SampleKind kind_ = SampleKind::c1_le1;
    std::size_t bound_ = 0;
    std::vector<LabStructure> members_;
};

// --- amalgamation ------------------------------------------------------------

struct AmalgamationReport {
    std::size_t spans_checked = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// For every span B0 >= A <= B1 over sample members (all alignments of
// isomorphic strong substructures), checks that the free amalgam is in the
// class and that both factors sit strongly inside it.
inline AmalgamationReport check_amalgamation(const ClassSample& sample) {
    if (detail::kind_ordered(sample.kind())) {
        throw std::invalid_argument("check_amalgamation: ordered samples are not supported");
    }
    const bool directed = detail::kind_directed(sample.kind());
    AmalgamationReport report;

    for (std::size_t i = 0; i < sample.members().size(); ++i) {
        for (std::size_t j = i; j < sample.members().size(); ++j) {
            const LabStructure& b0 = sample.members()[i];
            const LabStructure& b1 = sample.members()[j];
            for (const VertexSet& a0 : detail::strong_subsets(sample.kind(), b0)) {
                LabStructure a0s = b0.induced(a0);
                for (const VertexSet& a1 : detail::strong_subsets(sample.kind(), b1)) {
                    if (a1.size() != a0.size()) continue;
                    LabStructure a1s = b1.induced(a1);
                    for (const auto& phi : detail::structure_embeddings(a1s, a0s)) {
                        // relabel B1 so the overlap lands on A0 and the rest is fresh
                        std::map<VertexId, VertexId> rho = phi;
                        VertexSet used = b0.vertices();
                        VertexId next = fresh_vertex_id(used);
                        for (VertexId v : b1.vertices()) {
                            if (!rho.count(v)) rho[v] = next++;
                        }
                        ++report.spans_checked;
                        std::ostringstream span;
                        span << "span #" << i << " >= A(" << a0.size() << ") <= #" << j;
                        if (directed) {
                            OrientedGraph b1r = relabel(b1.digraph, rho);
                            OrientedGraph amalgam = free_amalgam(b0.digraph, b1r, a0);
                            if (!in_d1(amalgam)) {
                                report.failures.push_back(span.str() + ": amalgam left D1");
                            }
                            if (!is_successor_closed(amalgam, b0.vertices()) ||
                                !is_successor_closed(amalgam, b1r.vertices())) {
                                report.failures.push_back(span.str() +
                                                          ": factor not successor-closed in amalgam");
                            }
                        } else {
                            Graph b1r = relabel(b1.graph, rho);
                            Graph amalgam = free_amalgam(b0.graph, b1r, a0);
                            if (!in_c1(amalgam)) {
                                report.failures.push_back(span.str() + ": amalgam left C1");
                            }
                            if (!is_le1(b0.vertices(), amalgam).ok ||
                                !is_le1(b1r.vertices(), amalgam).ok) {
                                report.failures.push_back(span.str() +
                                                          ": factor not <=_1 in amalgam");
                            }
                        }
                    }
                }
            }
        }
    }
    return report;
}

// --- expansion property ------------------------------------------------------

namespace detail {

// Expansions of `reduct` present in the sample, realized on reduct's own
// vertex set (one representative per expansion iso type).
inline std::vector<LabStructure> expansions_of(const LabStructure& reduct,
                                               const ClassSample& sample) {
    std::vector<LabStructure> out;
    std::set<std::vector<std::uint8_t>> seen;
    LabStructure plain = reduct;  // reduct carrier for embedding search
    for (const LabStructure& m : sample.members()) {
        if (m.size() != reduct.size()) continue;
        LabStructure m_reduct = m;
        if (kind_ordered(sample.kind())) {
            m_reduct.ordered = false;
            m_reduct.order.clear();
        } else {
            m_reduct.directed = false;  // orientation expansion of a graph class
        }
        for (const auto& psi : structure_embeddings(m_reduct, plain)) {
            LabStructure transported = m;
            // rename m's carrier onto reduct's vertex ids
            LabStructure renamed;
            renamed.directed = m.directed;
            renamed.ordered = m.ordered;
            renamed.graph = relabel(m.graph, psi);
            if (m.directed) renamed.digraph = relabel(m.digraph, psi);
            if (m.ordered) {
                for (VertexId v : m.order) renamed.order.push_back(psi.at(v));
            }
            if (seen.insert(renamed.iso_key().key).second) out.push_back(std::move(renamed));
        }
    }
    return out;
}

inline bool strong_expansion_embedding_exists(SampleKind kind, const LabStructure& ap,
                                              const LabStructure& bp) {
    for (const auto& f : structure_embeddings(ap, bp)) {
        VertexSet image;
        for (const auto& [from, to] : f) image.insert(to);
        if (strong_subset(kind, bp, image)) return true;
    }
    return false;
}

}  // namespace detail

// Expansion-property witness check: true iff every expansion of A in the
// sample admits a strong expansion-preserving embedding into every
// expansion of B.
inline bool check_expansion_witness(const LabStructure& a, const LabStructure& b,
                                    const ClassSample& expansions) {
    if (b.size() > 7) {
        throw std::invalid_argument("check_expansion_witness: size bound exceeded");
    }
    auto a_exp = detail::expansions_of(a, expansions);
    auto b_exp = detail::expansions_of(b, expansions);
    if (a_exp.empty() || b_exp.empty()) {
        throw std::invalid_argument("check_expansion_witness: no expansions present in the sample");
    }
    for (const auto& ap : a_exp) {
        for (const auto& bp : b_exp) {
            if (!detail::strong_expansion_embedding_exists(expansions.kind(), ap, bp)) {
                return false;
            }
        }
    }
    return true;
}

inline bool check_expansion_witness(const Graph& a, const Graph& b,
                                    const ClassSample& expansions) {
    return check_expansion_witness(LabStructure::of(a), LabStructure::of(b), expansions);
}

inline bool check_expansion_witness(const OrientedGraph& a, const OrientedGraph& b,
                                    const ClassSample& expansions) {
    return check_expansion_witness(LabStructure::of(a), LabStructure::of(b), expansions);
}

// --- weak amalgamation -------------------------------------------------------

struct WapBounds {
    std::size_t max_witness = 6;    // |B|
    std::size_t max_extension = 7;  // |C_i|
};

struct WapOutcome {
    enum class Status { witness, vacuous_witness, exhausted };
    Status status = Status::exhausted;
    std::optional<LabStructure> witness;

    bool found() const { return status != Status::exhausted; }
};

namespace detail {

struct Extension {
    const LabStructure* target = nullptr;
    std::map<VertexId, VertexId> embedding;  // base -> target, strong image
};

inline std::vector<Extension> one_step_extensions(const LabStructure& base,
                                                  const ClassSample& sample,
                                                  std::size_t max_extension) {
    std::vector<Extension> out;
    for (const LabStructure& c : sample.members()) {
        if (c.size() != base.size() + 1 || c.size() > max_extension) continue;
        for (auto& h : structure_embeddings(base, c)) {
            VertexSet image;
            for (const auto& [from, to] : h) image.insert(to);
            if (strong_subset(sample.kind(), c, image)) {
                out.push_back({&c, std::move(h)});
            }
        }
    }
    return out;
}

inline std::vector<std::vector<std::pair<VertexId, VertexId>>> partial_matchings(
    const std::vector<VertexId>& left, const std::vector<VertexId>& right) {
    std::vector<std::vector<std::pair<VertexId, VertexId>>> out;
    std::vector<std::pair<VertexId, VertexId>> current;
    std::set<VertexId> used;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == left.size()) {
            out.push_back(current);
            return;
        }
        self(self, i + 1);  // leave left[i] unmatched
        for (VertexId r : right) {
            if (used.count(r)) continue;
            used.insert(r);
            current.push_back({left[i], r});
            self(self, i + 1);
            current.pop_back();
            used.erase(r);
        }
    };
    rec(rec, 0);
    return out;
}

// Search for D completing the WAP square for the A-images in C0, C1: glue
// C0 and C1 along the A-identification plus any partial matching of the
// remaining vertices, and accept when some gluing has both factors strong
// and the result's iso type inside the sample fragment.
inline bool wap_pair_amalgamates(const ClassSample& sample, const LabStructure& c0,
                                 const LabStructure& c1,
                                 const std::vector<std::pair<VertexId, VertexId>>& a_pairs) {
    VertexSet pinned0, pinned1;
    for (const auto& [x0, x1] : a_pairs) {
        pinned0.insert(x0);
        pinned1.insert(x1);
    }
    std::vector<VertexId> free0, free1;
    for (VertexId v : c0.vertices()) {
        if (!pinned0.count(v)) free0.push_back(v);
    }
    for (VertexId v : c1.vertices()) {
        if (!pinned1.count(v)) free1.push_back(v);
    }

    const bool directed = kind_directed(sample.kind());
    const bool ordered = kind_ordered(sample.kind());

    for (const auto& match : partial_matchings(free0, free1)) {
        // rho maps C1 into C0-ids where identified, fresh ids otherwise
        std::map<VertexId, VertexId> rho;
        for (const auto& [x0, x1] : a_pairs) rho[x1] = x0;
        for (const auto& [x0, x1] : match) rho[x1] = x0;
        VertexSet used = c0.vertices();
        VertexId next = fresh_vertex_id(used);
        for (VertexId v : c1.vertices()) {
            if (!rho.count(v)) rho[v] = next++;
        }
        VertexSet overlap;
        for (const auto& [x1, x0] : rho) {
            if (c0.vertices().count(x0)) overlap.insert(x0);
        }

        LabStructure d;
        d.directed = directed;
        d.ordered = ordered;
        try {
            if (directed) {
                OrientedGraph c1r = relabel(c1.digraph, rho);
                d.digraph = free_amalgam(c0.digraph, c1r, overlap);
                d.graph = d.digraph.reduct();
            } else {
                Graph c1r = relabel(c1.graph, rho);
                d.graph = free_amalgam(c0.graph, c1r, overlap);
            }
        } catch (const std::invalid_argument&) {
            continue;  // factors disagree on the identified part
        }

        // embeddings must reflect structure: the gluing may not add
        // arcs/edges inside either factor image
        VertexSet img1;
        for (VertexId v : c1.vertices()) img1.insert(rho.at(v));
        if (directed) {
            if (induced_substructure(d.digraph, c0.vertices()) != c0.digraph) continue;
            if (induced_substructure(d.digraph, img1) != relabel(c1.digraph, rho)) continue;
        } else {
            if (induced_substructure(d.graph, c0.vertices()) != c0.graph) continue;
            if (induced_substructure(d.graph, img1) != relabel(c1.graph, rho)) continue;
        }

        if (!strong_subset(sample.kind(), d, c0.vertices()) ||
            !strong_subset(sample.kind(), d, img1)) {
            continue;
        }

        if (!ordered) {
            if (sample.contains_type(d)) return true;
            continue;
        }

        // ordered kinds: some linear extension of the two factor orders must
        // give a sample member
        std::vector<VertexId> ids(d.vertices().begin(), d.vertices().end());
        std::map<VertexId, std::size_t> idx;
        for (std::size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = i;
        std::vector<VertexSet> after(ids.size());
        auto add_chain = [&](const std::vector<VertexId>& ord,
                             const std::map<VertexId, VertexId>* rename) {
            for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
                VertexId u = rename ? rename->at(ord[i]) : ord[i];
                VertexId v = rename ? rename->at(ord[i + 1]) : ord[i + 1];
                after[idx[u]].insert(v);
            }
        };
        add_chain(c0.order, nullptr);
        add_chain(c1.order, &rho);

        std::vector<VertexId> perm = ids;
        bool found = false;
        do {
            std::map<VertexId, std::size_t> rank;
            for (std::size_t i = 0; i < perm.size(); ++i) rank[perm[i]] = i;
            bool respects = true;
            for (std::size_t i = 0; i < ids.size() && respects; ++i) {
                for (VertexId v : after[i]) {
                    if (rank[ids[i]] > rank[v]) {
                        respects = false;
                        break;
                    }
                }
            }
            if (!respects) continue;
            LabStructure cand = d;
            cand.order = perm;
            if (sample.contains_type(cand)) {
                found = true;
                break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (found) return true;
    }
    return false;
}

}  // namespace detail

// Bounded one-step WAP search: look for a sample member B with a strong
// copy of A such that every pair of one-step strong extensions of B (within
// bounds) amalgamates over the image of A. Exhaustion is inconclusive, not
// a refutation.
inline WapOutcome search_wap_witness(const LabStructure& a, const ClassSample& sample,
                                     const WapBounds& bounds = {}) {
    if (!detail::in_sample_class(sample.kind(), a)) {
        throw std::invalid_argument("search_wap_witness: A is not in the sample's class");
    }
    auto a_ext = detail::one_step_extensions(a, sample, bounds.max_extension);
    if (a_ext.empty()) {
        return {WapOutcome::Status::vacuous_witness, a};
    }

    std::vector<const LabStructure*> candidates;
    for (const LabStructure& m : sample.members()) {
        if (m.size() <= bounds.max_witness) candidates.push_back(&m);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const LabStructure* x, const LabStructure* y) {
                  if (x->size() != y->size()) return x->size() < y->size();
                  return x->iso_key().key < y->iso_key().key;
              });

    for (const LabStructure* b : candidates) {
        auto b_ext = detail::one_step_extensions(*b, sample, bounds.max_extension);
        if (b_ext.empty()) continue;  // boundary artifact, not a usable witness
        for (const auto& f : detail::structure_embeddings(a, *b)) {
            VertexSet image;
            for (const auto& [from, to] : f) image.insert(to);
            if (!detail::strong_subset(sample.kind(), *b, image)) continue;

            bool all_pairs_ok = true;
            for (std::size_t p = 0; p < b_ext.size() && all_pairs_ok; ++p) {
                for (std::size_t q = p; q < b_ext.size() && all_pairs_ok; ++q) {
                    std::vector<std::pair<VertexId, VertexId>> a_pairs;
                    for (const auto& [av, bv] : f) {
                        a_pairs.push_back(
                            {b_ext[p].embedding.at(bv), b_ext[q].embedding.at(bv)});
                    }
                    if (!detail::wap_pair_amalgamates(sample, *b_ext[p].target,
                                                      *b_ext[q].target, a_pairs)) {
                        all_pairs_ok = false;
                    }
                }
            }
            if (all_pairs_ok) {
                return {WapOutcome::Status::witness, *b};
            }
        }
    }
    return {WapOutcome::Status::exhausted, std::nullopt};
}

}  // namespace orientable
