#pragma once

/**
 * @file inverse_graphs.hpp
 * @brief Involutive graphs over a signed alphabet, Stallings foldings, cores,
 * subgroup bases and language inclusion.
 *
 * Labels are letters of a base alphabet of size n; an edge `s --x--> t` always
 * comes with its reverse `t --x^-1--> s`, so involutive graphs only store the
 * positive edges. The language L(G, v) of a based graph is the set of labels of
 * closed paths at v.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "words.hpp"

namespace mealyforge {

inline constexpr State kNoEdge = std::numeric_limits<State>::max();

struct PositiveEdge {
    State source;
    Letter label;  // positive letter
    State target;
    auto operator<=>(const PositiveEdge&) const = default;
};

/// A graph closed under the edge involution, described by its positive edges.
/// Several edges may share a source and label (that is what folding removes).
struct InvolutiveGraph {
    std::size_t num_vertices = 0;
    Alphabet labels;
    std::vector<PositiveEdge> edges;
    State base = 0;
    std::vector<std::string> vertex_names;  // optional

    /// Adds `s --x--> t` for a signed x, storing it as a positive edge.
    void add_edge(State s, SignedLetter x, State t) {
        if (x.inverted) {
            edges.push_back({t, x.base, s});
        } else {
            edges.push_back({s, x.base, t});
        }
    }
};

/**
 * A deterministic involutive graph with a base point. `delta[v * 2n + code]` is
 * the target of the edge leaving v with the signed label of that code, or
 * kNoEdge.
 */
class InverseAutomaton {
public:
    InverseAutomaton() = default;
    InverseAutomaton(Alphabet labels, std::size_t num_vertices, State base)
        : labels_(std::move(labels)),
          n_(labels_.size()),
          num_vertices_(num_vertices),
          base_(base),
          delta_(num_vertices * 2 * n_, kNoEdge) {}

    std::size_t num_vertices() const noexcept { return num_vertices_; }
    std::size_t num_letters() const noexcept { return n_; }
    const Alphabet& labels() const noexcept { return labels_; }
    State base() const noexcept { return base_; }

    State target(State v, SignedLetter x) const { return delta_[v * 2 * n_ + x.encode(n_)]; }
    State target_code(State v, std::uint32_t code) const { return delta_[v * 2 * n_ + code]; }

    /// Sets `s --x--> t` and its reverse. Fails if either slot holds another target.
    void set_edge(State s, SignedLetter x, State t) {
        auto& fwd = delta_[s * 2 * n_ + x.encode(n_)];
        auto& bwd = delta_[t * 2 * n_ + x.inverse().encode(n_)];
        if ((fwd != kNoEdge && fwd != t) || (bwd != kNoEdge && bwd != s)) {
            throw Error(ErrorCode::InvalidArgument, "edge would break determinism");
        }
        fwd = t;
        bwd = s;
    }

    std::optional<State> read(State v, const SignedWord& w) const {
        for (const auto& x : w) {
            v = target(v, x);
            if (v == kNoEdge) return std::nullopt;
        }
        return v;
    }

    std::size_t degree(State v) const {
        std::size_t d = 0;
        for (std::uint32_t c = 0; c < 2 * n_; ++c) d += target_code(v, c) != kNoEdge ? 1 : 0;
        return d;
    }

    std::vector<PositiveEdge> positive_edges() const {
        std::vector<PositiveEdge> out;
        for (State v = 0; v < num_vertices_; ++v) {
            for (Letter x = 0; x < n_; ++x) {
                if (const State t = target(v, pos(x)); t != kNoEdge) out.push_back({v, x, t});
            }
        }
        return out;
    }

    /// Every vertex has every signed label.
    bool is_complete() const {
        return std::find(delta_.begin(), delta_.end(), kNoEdge) == delta_.end();
    }

    const std::vector<State>& table() const noexcept { return delta_; }

    std::vector<std::string> vertex_names;  // optional, same length as vertices when set

    std::string vertex_name(State v) const {
        return v < vertex_names.size() ? vertex_names[v] : std::to_string(v);
    }

    bool operator==(const InverseAutomaton& o) const {
        return labels_ == o.labels_ && num_vertices_ == o.num_vertices_ && base_ == o.base_ && delta_ == o.delta_;
    }

private:
    Alphabet labels_;
    std::size_t n_ = 0;
    std::size_t num_vertices_ = 0;
    State base_ = 0;
    std::vector<State> delta_;
};

/// Renumbers the vertices reachable from the base by BFS (base first, signed
/// labels in code order) and drops the rest. Names follow their vertices.
inline InverseAutomaton canonical_form(const InverseAutomaton& a) {
    const std::size_t n2 = 2 * a.num_letters();
    std::vector<State> order(a.num_vertices(), kNoEdge);
    std::vector<State> visit{a.base()};
    order[a.base()] = 0;
    for (std::size_t i = 0; i < visit.size(); ++i) {
        for (std::uint32_t c = 0; c < n2; ++c) {
            const State t = a.target_code(visit[i], c);
            if (t != kNoEdge && order[t] == kNoEdge) {
                order[t] = static_cast<State>(visit.size());
                visit.push_back(t);
            }
        }
    }
    InverseAutomaton out(a.labels(), visit.size(), 0);
    for (State v : visit) {
        for (std::uint32_t c = 0; c < n2; ++c) {
            const State t = a.target_code(v, c);
            if (t != kNoEdge) out.set_edge(order[v], SignedLetter::decode(c, a.num_letters()), order[t]);
        }
    }
    if (!a.vertex_names.empty()) {
        for (State v : visit) out.vertex_names.push_back(a.vertex_names[v]);
    }
    return out;
}

/// Isomorphism of based inverse automata (reachable parts).
inline bool isomorphic(const InverseAutomaton& a, const InverseAutomaton& b) {
    return canonical_form(a) == canonical_form(b);
}

/**
 * Stallings folding: identifies the targets of equally labelled edges with a
 * common source until the graph is deterministic. The result is the component
 * of the base, canonically numbered. Passing an engine shuffles the order in
 * which edges and identifications are processed.
 */
inline InverseAutomaton fold(const InvolutiveGraph& g, std::mt19937* rng = nullptr) {
    const std::size_t nv = g.num_vertices;
    const std::size_t n = g.labels.size();
    if (g.base >= nv) throw Error(ErrorCode::InvalidArgument, "base point is not a vertex");

    std::vector<State> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::map<std::uint32_t, State>> out(nv);
    auto find = [&](State x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<std::pair<State, State>> pending;
    auto insert = [&](State s, std::uint32_t code, State t) {
        s = find(s);
        auto [it, fresh] = out[s].emplace(code, t);
        if (!fresh) pending.emplace_back(it->second, t);
    };

    std::vector<PositiveEdge> edges = g.edges;
    if (rng != nullptr) std::shuffle(edges.begin(), edges.end(), *rng);
    for (const auto& e : edges) {
        if (e.source >= nv || e.target >= nv || e.label >= n) {
            throw Error(ErrorCode::InvalidArgument, "edge endpoint or label out of range");
        }
        insert(e.source, pos(e.label).encode(n), e.target);
        insert(e.target, neg(e.label).encode(n), e.source);
        while (!pending.empty()) {
            std::size_t pick = pending.size() - 1;
            if (rng != nullptr) pick = std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(*rng);
            std::swap(pending[pick], pending.back());
            auto [x, y] = pending.back();
            pending.pop_back();
            x = find(x);
            y = find(y);
            if (x == y) continue;
            if (out[x].size() > out[y].size()) std::swap(x, y);
            parent[x] = y;
            auto moved = std::move(out[x]);
            out[x].clear();
            for (const auto& [code, t] : moved) insert(y, code, t);
        }
    }

    // Name every class after its smallest member; build the folded automaton.
    std::vector<State> cls(nv), first(nv, kNoEdge);
    std::vector<State> reps;
    for (State v = 0; v < nv; ++v) {
        const State r = find(v);
        if (first[r] == kNoEdge) {
            first[r] = static_cast<State>(reps.size());
            reps.push_back(r);
        }
        cls[v] = first[r];
    }
    InverseAutomaton folded(g.labels, reps.size(), cls[g.base]);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (const auto& [code, t] : out[reps[i]]) {
            folded.set_edge(static_cast<State>(i), SignedLetter::decode(code, n), cls[find(t)]);
        }
    }
    if (!g.vertex_names.empty()) {
        for (State v = 0; v < nv; ++v) {
            if (first[find(v)] == folded.vertex_names.size()) folded.vertex_names.push_back(g.vertex_names[v]);
        }
    }
    return canonical_form(folded);
}

/// Deterministic inverse automaton viewed as an involutive graph.
inline InvolutiveGraph to_involutive(const InverseAutomaton& a) {
    InvolutiveGraph g{a.num_vertices(), a.labels(), a.positive_edges(), a.base(), a.vertex_names};
    return g;
}

/// Removes non-base vertices of degree one until none is left.
inline InverseAutomaton core(const InverseAutomaton& a) {
    const std::size_t n = a.num_letters();
    std::vector<std::vector<State>> adj(a.num_vertices(), std::vector<State>(2 * n));
    std::vector<std::size_t> deg(a.num_vertices());
    for (State v = 0; v < a.num_vertices(); ++v) {
        for (std::uint32_t c = 0; c < 2 * n; ++c) adj[v][c] = a.target_code(v, c);
        deg[v] = a.degree(v);
    }
    std::vector<char> removed(a.num_vertices(), 0);
    std::vector<State> work;
    for (State v = 0; v < a.num_vertices(); ++v) {
        if (v != a.base() && deg[v] <= 1) work.push_back(v);
    }
    while (!work.empty()) {
        const State v = work.back();
        work.pop_back();
        if (removed[v] || v == a.base() || deg[v] > 1) continue;
        removed[v] = 1;
        for (std::uint32_t c = 0; c < 2 * n; ++c) {
            const State t = adj[v][c];
            if (t == kNoEdge) continue;
            adj[v][c] = kNoEdge;
            const auto back = SignedLetter::decode(c, n).inverse().encode(n);
            adj[t][back] = kNoEdge;
            --deg[t];
            if (t != a.base() && deg[t] <= 1) work.push_back(t);
        }
        deg[v] = 0;
    }
    InverseAutomaton pruned(a.labels(), a.num_vertices(), a.base());
    for (State v = 0; v < a.num_vertices(); ++v) {
        if (removed[v]) continue;
        for (std::uint32_t c = 0; c < 2 * n; ++c) {
            if (adj[v][c] != kNoEdge) pruned.set_edge(v, SignedLetter::decode(c, n), adj[v][c]);
        }
    }
    pruned.vertex_names = a.vertex_names;
    return canonical_form(pruned);
}

/// The core of the folded bouquet of the (reduced) generators.
inline InverseAutomaton stallings_automaton(const std::vector<SignedWord>& generators, const Alphabet& labels) {
    InvolutiveGraph g{1, labels, {}, 0, {}};
    for (const auto& raw : generators) {
        const SignedWord w = reduce(raw);
        if (w.empty()) continue;
        State prev = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            State next = 0;
            if (i + 1 < w.size()) next = static_cast<State>(g.num_vertices++);
            g.add_edge(prev, w[i], next);
            prev = next;
        }
    }
    return core(fold(g));
}

/// The reduction of w labels a closed path at the base.
inline bool membership(const InverseAutomaton& a, const SignedWord& w) {
    const auto end = a.read(a.base(), reduce(w));
    return end && *end == a.base();
}

struct GraphMorphism {
    std::vector<State> vertex_map;
    std::vector<std::size_t> edge_map;  // indices into positive_edges() of each side
};

/// The unique based morphism a1 -> a2, when one exists.
inline std::optional<GraphMorphism> morphism_exists(const InverseAutomaton& a1, const InverseAutomaton& a2) {
    if (!(a1.labels() == a2.labels())) throw Error(ErrorCode::AlphabetMismatch, "morphism between automata");
    const std::size_t n2 = 2 * a1.num_letters();
    GraphMorphism phi;
    phi.vertex_map.assign(a1.num_vertices(), kNoEdge);
    phi.vertex_map[a1.base()] = a2.base();
    std::queue<State> bfs;
    bfs.push(a1.base());
    while (!bfs.empty()) {
        const State v = bfs.front();
        bfs.pop();
        for (std::uint32_t c = 0; c < n2; ++c) {
            const State t = a1.target_code(v, c);
            if (t == kNoEdge) continue;
            const State image = a2.target_code(phi.vertex_map[v], c);
            if (image == kNoEdge) return std::nullopt;
            if (phi.vertex_map[t] == kNoEdge) {
                phi.vertex_map[t] = image;
                bfs.push(t);
            } else if (phi.vertex_map[t] != image) {
                return std::nullopt;
            }
        }
    }
    const auto e2 = a2.positive_edges();
    std::map<PositiveEdge, std::size_t> index2;
    for (std::size_t i = 0; i < e2.size(); ++i) index2[e2[i]] = i;
    for (const auto& e : a1.positive_edges()) {
        if (phi.vertex_map[e.source] == kNoEdge) {
            phi.edge_map.push_back(std::numeric_limits<std::size_t>::max());
            continue;
        }
        phi.edge_map.push_back(index2.at({phi.vertex_map[e.source], e.label, phi.vertex_map[e.target]}));
    }
    return phi;
}

/// Basis of the subgroup recognized at the base: one word per positive edge
/// outside a BFS spanning tree, `p_s x p_t^-1`.
inline std::vector<SignedWord> basis(const InverseAutomaton& a) {
    const std::size_t n = a.num_letters();
    std::vector<SignedWord> path(a.num_vertices());
    std::vector<char> seen(a.num_vertices(), 0);
    std::set<PositiveEdge> tree;
    std::queue<State> bfs;
    bfs.push(a.base());
    seen[a.base()] = 1;
    while (!bfs.empty()) {
        const State v = bfs.front();
        bfs.pop();
        for (std::uint32_t c = 0; c < 2 * n; ++c) {
            const State t = a.target_code(v, c);
            if (t == kNoEdge || seen[t]) continue;
            seen[t] = 1;
            const auto x = SignedLetter::decode(c, n);
            path[t] = path[v];
            path[t].push_back(x);
            tree.insert(x.inverted ? PositiveEdge{t, x.base, v} : PositiveEdge{v, x.base, t});
            bfs.push(t);
        }
    }
    std::vector<SignedWord> out;
    for (const auto& e : a.positive_edges()) {
        if (!seen[e.source] || tree.count(e)) continue;
        SignedWord w = path[e.source];
        w.push_back(pos(e.label));
        w = concat(w, inverse(path[e.target]));
        out.push_back(reduce(w));
    }
    return out;
}

// Inclusion for arbitrary labelled graphs ---------------------------------------------

/// A based directed graph with arbitrary (possibly repeated) labels.
struct LabeledDigraph {
    std::size_t num_vertices = 0;
    std::size_t num_labels = 0;
    std::vector<std::vector<std::pair<std::uint32_t, State>>> out;  // per vertex: (label, target)
    State base = 0;

    LabeledDigraph() = default;
    LabeledDigraph(std::size_t vertices, std::size_t labels, State b)
        : num_vertices(vertices), num_labels(labels), out(vertices), base(b) {}

    void add_edge(State s, std::uint32_t label, State t) { out[s].emplace_back(label, t); }
};

inline LabeledDigraph to_digraph(const InverseAutomaton& a) {
    LabeledDigraph g(a.num_vertices(), 2 * a.num_letters(), a.base());
    for (State v = 0; v < a.num_vertices(); ++v) {
        for (std::uint32_t c = 0; c < 2 * a.num_letters(); ++c) {
            if (const State t = a.target_code(v, c); t != kNoEdge) g.add_edge(v, c, t);
        }
    }
    return g;
}

/**
 * Decides L(g1, base1) ⊆ L(g2, base2) for closed-path languages. Explores pairs
 * (vertex of g1, set of g2 vertices reachable on the same word); inclusion fails
 * exactly when some pair has the g1 base without the g2 base.
 */
inline bool language_included(const LabeledDigraph& g1, const LabeledDigraph& g2,
                              std::size_t budget = Budget::defaults().subset_states) {
    using Subset = std::vector<State>;
    std::map<std::pair<State, Subset>, char> seen;
    std::vector<std::pair<State, Subset>> work;
    auto push = [&](State v, Subset s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto key = std::make_pair(v, std::move(s));
        if (seen.emplace(key, 1).second) {
            if (seen.size() > budget) throw BudgetExceeded("inclusion subset states", budget);
            work.push_back(std::move(key));
        }
    };
    push(g1.base, {g2.base});
    while (!work.empty()) {
        auto [v, s] = std::move(work.back());
        work.pop_back();
        if (v == g1.base && !std::binary_search(s.begin(), s.end(), g2.base)) return false;
        for (const auto& [label, t] : g1.out[v]) {
            Subset next;
            for (State u : s) {
                for (const auto& [l2, t2] : g2.out[u]) {
                    if (l2 == label) next.push_back(t2);
                }
            }
            push(t, std::move(next));
        }
    }
    return true;
}

}  // namespace mealyforge
