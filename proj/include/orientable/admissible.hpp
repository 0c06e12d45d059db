#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orientable/canonical.hpp"
#include "orientable/closure.hpp"
#include "orientable/graph.hpp"
#include "orientable/hierarchy.hpp"
#include "orientable/orientation.hpp"

namespace orientable {

// Comparison key for ordered closure-extension types. Comparing by
// (size, canonical key) is a run-stable total order; the size-first rule
// makes smaller extensions compare strictly lower.
struct TriOrderKey {
    std::size_t size = 0;
    CanonicalForm tie_key;

    std::strong_ordering operator<=>(const TriOrderKey& o) const {
        if (size != o.size) return size <=> o.size;
        if (tie_key.key < o.tie_key.key) return std::strong_ordering::less;
        if (o.tie_key.key < tie_key.key) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const TriOrderKey&) const = default;
};

inline TriOrderKey tri_key(const OrderedOrientedGraph& x) {
    if (!closure_head(x.digraph())) {
        throw std::invalid_argument("tri_key: input is not a closure-extension");
    }
    std::size_t n = x.digraph().vertex_count();
    return TriOrderKey{n, canonical_form(x.digraph(), x.order(), n)};
}

inline std::strong_ordering tri_compare(const OrderedOrientedGraph& x,
                                        const OrderedOrientedGraph& y) {
    return tri_key(x) <=> tri_key(y);
}

namespace detail {

// Per-vertex comparison data under a fixed ambient order: the ordered
// closure's key and the base ranks sorted ascending.
struct ClosureProfile {
    std::size_t closure_size = 0;
    CanonicalForm key;
    std::vector<std::size_t> base_ranks;
};

inline ClosureProfile closure_profile(const OrientedGraph& d, VertexId v,
                                      const std::map<VertexId, std::size_t>& rank) {
    ClosureProfile p;
    VertexSet closure = scl(d, v);
    p.closure_size = closure.size();
    std::vector<VertexId> seq(closure.begin(), closure.end());
    std::sort(seq.begin(), seq.end(),
              [&](VertexId a, VertexId b) { return rank.at(a) < rank.at(b); });
    p.key = canonical_form(induced_substructure(d, closure), seq, closure.size());
    for (VertexId b : closure) {
        if (b != v) p.base_ranks.push_back(rank.at(b));
    }
    std::sort(p.base_ranks.begin(), p.base_ranks.end());
    return p;
}

// Condition (3) constraint between u and v: -1 if u must come first, +1 if
// v must, 0 if the pair is unconstrained (isomorphic closures, equal bases).
inline int required_relation(const ClosureProfile& u, const ClosureProfile& v) {
    if (u.closure_size != v.closure_size) return u.closure_size < v.closure_size ? -1 : 1;
    if (u.key.key != v.key.key) return u.key.key < v.key.key ? -1 : 1;
    if (u.base_ranks != v.base_ranks) return u.base_ranks < v.base_ranks ? -1 : 1;
    return 0;
}

}  // namespace detail

// Canonical admissible order on a D1 structure. The order sorts vertices by
// closure size, then by the tri key of the ordered closure, then by the
// base tuple (lexicographically in the order being built), and finally by
// vertex id within a cone. Every member of u° has a strictly smaller
// closure, so each size class only depends on already-placed vertices.
inline OrderedGraph build_admissible_order(const OrientedGraph& d) {
    if (!in_d1(d)) {
        throw std::invalid_argument("build_admissible_order: input not in D1");
    }

    std::map<VertexId, VertexSet> closures;
    std::map<std::size_t, std::vector<VertexId>> by_size;
    for (VertexId v : d.vertices()) {
        closures[v] = scl(d, v);
        by_size[closures[v].size()].push_back(v);
    }

    std::vector<VertexId> order;
    std::map<VertexId, std::size_t> rank;
    for (auto& [size, members] : by_size) {
        struct Entry {
            CanonicalForm key;
            std::vector<std::size_t> base_ranks;
            VertexId v;
        };
        std::vector<Entry> entries;
        for (VertexId v : members) {
            const VertexSet& closure = closures[v];
            std::vector<VertexId> seq;
            std::vector<std::size_t> base_ranks;
            for (VertexId b : closure) {
                if (b != v) {
                    seq.push_back(b);
                    base_ranks.push_back(rank.at(b));  // placed: smaller closure
                }
            }
            std::sort(seq.begin(), seq.end(),
                      [&](VertexId a, VertexId b) { return rank.at(a) < rank.at(b); });
            seq.push_back(v);  // the head has the largest closure of its own closure
            CanonicalForm key = canonical_form(induced_substructure(d, closure), seq, size);
            std::sort(base_ranks.begin(), base_ranks.end());
            entries.push_back({std::move(key), std::move(base_ranks), v});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.key.key != b.key.key) return a.key.key < b.key.key;
            if (a.base_ranks != b.base_ranks) return a.base_ranks < b.base_ranks;
            return a.v < b.v;
        });
        for (const Entry& e : entries) {
            rank[e.v] = order.size();
            order.push_back(e.v);
        }
    }
    return OrderedGraph(d.reduct(), order);
}

struct AdmissibleViolation {
    VertexId u = 0;
    VertexId v = 0;
    std::string reason;
};

struct AdmissibleReport {
    bool passes_closure_under_substructures = false;
    bool passes_condition3 = false;
    std::vector<AdmissibleViolation> violations;

    bool ok() const { return passes_closure_under_substructures && passes_condition3; }
};

// Default size up to which condition (2) is verified by enumerating every
// successor-closed subset. Condition (3) on the full structure restricts
// verbatim to closed subsets (closures and order restrict), so beyond the
// bound only the closure family {scl(v)} is re-checked explicitly.
constexpr std::size_t kSubstructureEnumBound = 12;

inline AdmissibleReport check_admissible(
    const OrderedOrientedGraph& a, std::size_t subset_enum_bound = kSubstructureEnumBound) {
    const OrientedGraph& d = a.digraph();
    if (!in_d1(d)) {
        throw std::invalid_argument("check_admissible: orientation not in D1");
    }
    auto rank = a.ranks();

    std::vector<VertexId> ids(d.vertices().begin(), d.vertices().end());
    std::map<VertexId, detail::ClosureProfile> profile;
    for (VertexId v : ids) profile[v] = detail::closure_profile(d, v, rank);

    AdmissibleReport report;
    report.passes_condition3 = true;
    report.passes_closure_under_substructures = true;

    auto check_pairs_in = [&](const std::vector<VertexId>& members, const std::string& context) {
        bool clean = true;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                VertexId u = members[i], v = members[j];
                int need = detail::required_relation(profile.at(u), profile.at(v));
                bool u_first = rank.at(u) < rank.at(v);
                if ((need == -1 && !u_first) || (need == 1 && u_first)) {
                    clean = false;
                    VertexId lo = need == -1 ? u : v;
                    VertexId hi = need == -1 ? v : u;
                    std::ostringstream os;
                    os << "vertex " << lo << " must precede " << hi << context;
                    report.violations.push_back({lo, hi, os.str()});
                }
            }
        }
        return clean;
    };

    report.passes_condition3 = check_pairs_in(ids, "");

    // Condition (2): every successor-closed restriction passes as well. scl
    // and the order restrict to closed subsets, so the cached profiles apply.
    const std::size_t n = ids.size();
    if (n <= subset_enum_bound && n < 26) {
        std::map<VertexId, std::size_t> index;
        for (std::size_t i = 0; i < n; ++i) index[ids[i]] = i;
        std::vector<std::uint32_t> outmask(n, 0);
        for (const auto& [x, y] : d.arcs()) {
            outmask[index[x]] |= (1u << index[y]);
        }
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            bool closed = true;
            for (std::size_t i = 0; i < n && closed; ++i) {
                if ((mask >> i) & 1u) closed = (outmask[i] & ~mask) == 0;
            }
            if (!closed) continue;
            std::vector<VertexId> members;
            for (std::size_t i = 0; i < n; ++i) {
                if ((mask >> i) & 1u) members.push_back(ids[i]);
            }
            if (!check_pairs_in(members, " (within a successor-closed restriction)")) {
                report.passes_closure_under_substructures = false;
            }
        }
    } else {
        for (VertexId v : ids) {
            const VertexSet& closure_set = scl(d, v);
            std::vector<VertexId> members(closure_set.begin(), closure_set.end());
            if (!check_pairs_in(members, " (within scl(" + std::to_string(v) + "))")) {
                report.passes_closure_under_substructures = false;
            }
        }
    }
    return report;
}

inline AdmissibleReport check_admissible(const OrientedGraph& d,
                                         const std::vector<VertexId>& order,
                                         std::size_t subset_enum_bound = kSubstructureEnumBound) {
    return check_admissible(OrderedOrientedGraph(d, order), subset_enum_bound);
}

// Definition-(4)-style check at brute-force scale: do the jointly ordered
// successor-closed parts extend to an admissible order on all of B?
inline bool check_extension_condition(const OrientedGraph& b,
                                      const std::vector<VertexSet>& parts,
                                      const std::vector<VertexId>& joint_order,
                                      std::size_t brute_bound = 8) {
    if (!in_d1(b)) {
        throw std::invalid_argument("check_extension_condition: B not in D1");
    }
    if (b.vertex_count() > brute_bound) {
        throw std::invalid_argument("check_extension_condition: size bound exceeded");
    }
    VertexSet joint_domain;
    for (const auto& part : parts) {
        if (!is_successor_closed(b, part)) {
            throw std::invalid_argument("check_extension_condition: part not successor-closed");
        }
        joint_domain.insert(part.begin(), part.end());
    }
    detail::check_permutation(joint_domain, joint_order);
    if (!joint_domain.empty()) {
        OrderedOrientedGraph joint(induced_substructure(b, joint_domain), joint_order);
        if (!check_admissible(joint).passes_condition3) {
            throw std::invalid_argument("check_extension_condition: joint order violates condition (3)");
        }
        std::map<VertexId, std::size_t> joint_rank;
        for (std::size_t i = 0; i < joint_order.size(); ++i) joint_rank[joint_order[i]] = i;
        for (const auto& part : parts) {
            OrderedOrientedGraph restricted(induced_substructure(b, part),
                                            restrict_order(joint_order, part));
            if (!check_admissible(restricted).ok()) {
                throw std::invalid_argument("check_extension_condition: part not admissibly ordered");
            }
        }
    }

    std::map<VertexId, std::size_t> joint_rank;
    for (std::size_t i = 0; i < joint_order.size(); ++i) joint_rank[joint_order[i]] = i;

    std::vector<VertexId> perm(b.vertices().begin(), b.vertices().end());
    std::sort(perm.begin(), perm.end());
    do {
        // must extend the joint order's relative arrangement
        std::size_t expected = 0;
        bool extends = true;
        for (VertexId v : perm) {
            if (!joint_domain.count(v)) continue;
            if (joint_rank.at(v) != expected++) {
                extends = false;
                break;
            }
        }
        if (!extends) continue;
        // condition (3) suffices for the search; (2) follows by restriction
        if (check_admissible(b, perm).passes_condition3) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace orientable
