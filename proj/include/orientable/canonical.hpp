#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orientable/graph.hpp"

namespace orientable {

// Deterministic total-order key for isomorphism types of small structures.
// Two structures of the same kind have equal keys iff they are isomorphic
// (respecting order and vertex colors when present).
struct CanonicalForm {
    std::vector<std::uint8_t> key;

    bool operator==(const CanonicalForm&) const = default;
    bool operator<(const CanonicalForm& o) const { return key < o.key; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        s.reserve(key.size() * 2);
        for (std::uint8_t b : key) {
            s.push_back(digits[b >> 4]);
            s.push_back(digits[b & 0xf]);
        }
        return s;
    }
};

constexpr std::size_t kDefaultCanonicalBound = 12;

namespace detail {

// Index-compressed adjacency used by the canonical search. adj[i][j] is 1
// when there is an arc i->j (symmetric for undirected input).
struct CanonicalProblem {
    std::size_t n = 0;
    bool directed = true;
    bool ordered = false;
    bool colored = false;
    std::vector<std::vector<std::uint8_t>> adj;
    std::vector<std::uint32_t> color;   // by index, only if colored
    std::vector<std::size_t> rank;      // by index, only if ordered
};

inline void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::vector<std::uint8_t> encode_under(const CanonicalProblem& p,
                                              const std::vector<std::size_t>& slot_to_index) {
    std::vector<std::uint8_t> out;
    out.push_back(1);  // key format version
    std::uint8_t flags = 0;
    if (p.directed) flags |= 1;
    if (p.ordered) flags |= 2;
    if (p.colored) flags |= 4;
    out.push_back(flags);
    out.push_back(static_cast<std::uint8_t>(p.n));
    if (p.colored) {
        for (std::size_t s = 0; s < p.n; ++s) append_u32(out, p.color[slot_to_index[s]]);
    }
    std::uint8_t acc = 0;
    int bits = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) {
            acc = static_cast<std::uint8_t>((acc << 1) | p.adj[slot_to_index[i]][slot_to_index[j]]);
            if (++bits == 8) {
                out.push_back(acc);
                acc = 0;
                bits = 0;
            }
        }
    }
    if (bits > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - bits)));
    return out;
}

// Iterated degree/color refinement; returns a relabeling-invariant class id
// per index, with class ids ordered by signature.
inline std::vector<std::uint32_t> refine_classes(const CanonicalProblem& p) {
    std::vector<std::string> sig(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        std::size_t outd = 0, ind = 0;
        for (std::size_t j = 0; j < p.n; ++j) {
            outd += p.adj[i][j];
            ind += p.adj[j][i];
        }
        std::ostringstream os;
        os << (p.colored ? p.color[i] : 0u) << ':' << outd << ':' << ind;
        sig[i] = os.str();
    }
    std::vector<std::uint32_t> cls(p.n, 0);
    std::size_t n_classes = 0;
    for (int round = 0; round < static_cast<int>(p.n) + 1; ++round) {
        std::map<std::string, std::uint32_t> index;
        for (std::size_t i = 0; i < p.n; ++i) index.emplace(sig[i], 0);
        std::uint32_t next = 0;
        for (auto& [k, id] : index) id = next++;
        for (std::size_t i = 0; i < p.n; ++i) cls[i] = index.at(sig[i]);
        if (index.size() == n_classes) break;
        n_classes = index.size();
        // fold sorted neighbour classes into the next signature
        std::vector<std::string> next_sig(p.n);
        for (std::size_t i = 0; i < p.n; ++i) {
            std::vector<std::uint32_t> outs, ins;
            for (std::size_t j = 0; j < p.n; ++j) {
                if (p.adj[i][j]) outs.push_back(cls[j]);
                if (p.adj[j][i]) ins.push_back(cls[j]);
            }
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            std::ostringstream os;
            os << cls[i] << "|o";
            for (auto c : outs) os << ',' << c;
            os << "|i";
            for (auto c : ins) os << ',' << c;
            next_sig[i] = os.str();
        }
        sig = std::move(next_sig);
    }
    return cls;
}

inline bool transposition_is_automorphism(const CanonicalProblem& p, std::size_t u,
                                          std::size_t v) {
    if (p.colored && p.color[u] != p.color[v]) return false;
    if (p.adj[u][v] != p.adj[v][u]) return false;
    for (std::size_t w = 0; w < p.n; ++w) {
        if (w == u || w == v) continue;
        if (p.adj[u][w] != p.adj[v][w] || p.adj[w][u] != p.adj[w][v]) return false;
    }
    return true;
}

inline std::vector<std::uint8_t> minimize_encoding(const CanonicalProblem& p) {
    if (p.ordered) {
        // The order pins the labeling: slot = rank.
        std::vector<std::size_t> slot_to_index(p.n);
        for (std::size_t i = 0; i < p.n; ++i) slot_to_index[p.rank[i]] = i;
        return encode_under(p, slot_to_index);
    }

    std::vector<std::uint32_t> cls = refine_classes(p);
    std::vector<std::uint8_t> best;
    std::vector<std::size_t> prefix;
    std::vector<bool> placed(p.n, false);

    // Row contributed by putting index u at the next slot: its refinement
    // class, color, and adjacency to the placed prefix in both directions.
    auto row_of = [&](std::size_t u) {
        std::vector<std::uint32_t> row;
        row.push_back(cls[u]);
        if (p.colored) row.push_back(p.color[u]);
        for (std::size_t s = 0; s < prefix.size(); ++s) {
            row.push_back(p.adj[u][prefix[s]]);
            row.push_back(p.adj[prefix[s]][u]);
        }
        return row;
    };

    auto dfs = [&](auto&& self) -> void {
        if (prefix.size() == p.n) {
            std::vector<std::uint8_t> enc = encode_under(p, prefix);
            if (best.empty() || enc < best) best = std::move(enc);
            return;
        }
        std::optional<std::vector<std::uint32_t>> min_row;
        std::vector<std::size_t> candidates;
        for (std::size_t u = 0; u < p.n; ++u) {
            if (placed[u]) continue;
            auto row = row_of(u);
            if (!min_row || row < *min_row) {
                min_row = std::move(row);
                candidates.assign(1, u);
            } else if (row == *min_row) {
                candidates.push_back(u);
            }
        }
        // A candidate interchangeable with an earlier one by a transposition
        // automorphism explores the same subtree; skip it.
        std::vector<std::size_t> pruned;
        for (std::size_t u : candidates) {
            bool dup = false;
            for (std::size_t v : pruned) {
                if (transposition_is_automorphism(p, v, u)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) pruned.push_back(u);
        }
        for (std::size_t u : pruned) {
            placed[u] = true;
            prefix.push_back(u);
            self(self);
            prefix.pop_back();
            placed[u] = false;
        }
    };
    dfs(dfs);
    return best;
}

inline CanonicalProblem make_problem(const OrientedGraph& d, std::size_t max_size) {
    if (d.vertex_count() > max_size) {
        throw std::invalid_argument("canonical_form: size bound exceeded");
    }
    CanonicalProblem p;
    p.n = d.vertex_count();
    p.directed = true;
    std::vector<VertexId> ids(d.vertices().begin(), d.vertices().end());
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    p.adj.assign(p.n, std::vector<std::uint8_t>(p.n, 0));
    for (const auto& [a, b] : d.arcs()) p.adj[index[a]][index[b]] = 1;
    return p;
}

inline CanonicalProblem make_problem(const Graph& g, std::size_t max_size) {
    if (g.vertex_count() > max_size) {
        throw std::invalid_argument("canonical_form: size bound exceeded");
    }
    CanonicalProblem p;
    p.n = g.vertex_count();
    p.directed = false;
    std::vector<VertexId> ids(g.vertices().begin(), g.vertices().end());
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    p.adj.assign(p.n, std::vector<std::uint8_t>(p.n, 0));
    for (const auto& [a, b] : g.edges()) {
        p.adj[index[a]][index[b]] = 1;
        p.adj[index[b]][index[a]] = 1;
    }
    return p;
}

template <typename S>
void attach_order(CanonicalProblem& p, const S& s, const std::vector<VertexId>& order) {
    detail::check_permutation(s.vertices(), order);
    std::vector<VertexId> ids(s.vertices().begin(), s.vertices().end());
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    p.ordered = true;
    p.rank.assign(p.n, 0);
    for (std::size_t r = 0; r < order.size(); ++r) p.rank[index.at(order[r])] = r;
}

template <typename S>
void attach_colors(CanonicalProblem& p, const S& s,
                   const std::map<VertexId, std::uint32_t>& colors) {
    std::vector<VertexId> ids(s.vertices().begin(), s.vertices().end());
    p.colored = true;
    p.color.assign(p.n, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = colors.find(ids[i]);
        p.color[i] = it == colors.end() ? 0 : it->second;
    }
}

}  // namespace detail

inline CanonicalForm canonical_form(const OrientedGraph& d,
                                    std::size_t max_size = kDefaultCanonicalBound) {
    auto p = detail::make_problem(d, max_size);
    return CanonicalForm{detail::minimize_encoding(p)};
}

inline CanonicalForm canonical_form(const OrientedGraph& d, const std::vector<VertexId>& order,
                                    std::size_t max_size = kDefaultCanonicalBound) {
    auto p = detail::make_problem(d, max_size);
    detail::attach_order(p, d, order);
    return CanonicalForm{detail::minimize_encoding(p)};
}

// Pinned variant: colored vertices may only map to vertices of equal color,
// so coloring a set pointwise by vertex id forces isomorphisms to fix it.
inline CanonicalForm canonical_form_colored(const OrientedGraph& d,
                                            const std::map<VertexId, std::uint32_t>& colors,
                                            std::size_t max_size = kDefaultCanonicalBound) {
    auto p = detail::make_problem(d, max_size);
    detail::attach_colors(p, d, colors);
    return CanonicalForm{detail::minimize_encoding(p)};
}

inline CanonicalForm canonical_form(const Graph& g,
                                    std::size_t max_size = kDefaultCanonicalBound) {
    auto p = detail::make_problem(g, max_size);
    return CanonicalForm{detail::minimize_encoding(p)};
}

inline CanonicalForm canonical_form(const Graph& g, const std::vector<VertexId>& order,
                                    std::size_t max_size = kDefaultCanonicalBound) {
    auto p = detail::make_problem(g, max_size);
    detail::attach_order(p, g, order);
    return CanonicalForm{detail::minimize_encoding(p)};
}

}  // namespace orientable
