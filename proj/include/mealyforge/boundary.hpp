#pragma once

/**
 * @file boundary.hpp
 * @brief Boundary analytics: swapping properties, finiteness, the zeta gap
 * function, bounded Schreier graphs on the boundary, torsion and periodic points.
 *
 * Most procedures here walk the *component types* of the enriched dual
 * B = enrich(dual(m)). The type of a word u in A^k is the connected component
 * of B^k containing u, as a transducer over the signed generators, marked at u
 * and numbered canonically. The type of ua depends only on the type of u and
 * on a, so types form a finite-branching deterministic graph rooted at the
 * one-vertex identity transducer (the type of the empty word). Component sizes
 * never decrease along its edges.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "constructions.hpp"
#include "error.hpp"
#include "inverse_graphs.hpp"
#include "levels.hpp"
#include "machine.hpp"
#include "words.hpp"

namespace mealyforge {

using BigInt = boost::multiprecision::cpp_int;

// Swapping properties ------------------------------------------------------------------

/// Output projection of an enriched machine: `p --out(p,x)--> next(p,x)`.
inline LabeledDigraph output_graph(const EnrichedMachine& b, State base) {
    LabeledDigraph g(b.num_states(), b.num_letters(), base);
    for (State p = 0; p < b.num_states(); ++p) {
        for (Letter x = 0; x < b.num_letters(); ++x) g.add_edge(p, b.machine.output(p, x), b.machine.next(p, x));
    }
    return g;
}

/// Input projection of an enriched machine: `p --x--> next(p,x)`.
inline LabeledDigraph input_graph(const EnrichedMachine& b, State base) {
    LabeledDigraph g(b.num_states(), b.num_letters(), base);
    for (State p = 0; p < b.num_states(); ++p) {
        for (Letter x = 0; x < b.num_letters(); ++x) g.add_edge(p, x, b.machine.next(p, x));
    }
    return g;
}

/// Vertices of the component of q (edges are closed under reversal).
inline std::vector<State> component_of(const EnrichedMachine& b, State q) {
    std::vector<char> seen(b.num_states(), 0);
    std::vector<State> out{q};
    seen[q] = 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (Letter x = 0; x < b.num_letters(); ++x) {
            const State t = b.machine.next(out[i], x);
            if (!seen[t]) {
                seen[t] = 1;
                out.push_back(t);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// L(B_O, p1) ⊆ L(B, p2).
inline bool swapping_inclusion(const EnrichedMachine& b, State p1, State p2,
                               std::size_t budget = Budget::defaults().subset_states) {
    const auto comp = component_of(b, p1);
    if (!std::binary_search(comp.begin(), comp.end(), p2)) {
        throw Error(ErrorCode::PreconditionFailed, "vertices lie in different components");
    }
    return language_included(output_graph(b, p1), input_graph(b, p2), budget);
}

/// L(B_O, p1) = L(B, p2).
inline bool swapping_invariant(const EnrichedMachine& b, State p1, State p2,
                               std::size_t budget = Budget::defaults().subset_states) {
    return swapping_inclusion(b, p1, p2, budget) &&
           language_included(input_graph(b, p2), output_graph(b, p1), budget);
}

/// Swapping invariant for every ordered pair of vertices of the component of q.
inline bool is_supersymmetric(const EnrichedMachine& b, State q,
                              std::size_t budget = Budget::defaults().subset_states) {
    const auto comp = component_of(b, q);
    for (State p1 : comp) {
        for (State p2 : comp) {
            if (!swapping_invariant(b, p1, p2, budget)) return false;
        }
    }
    return true;
}

/**
 * The cyclic vertex sequence of the swapping lemma: from a path p1 -> p2 with
 * input h and output h', read h' from p2, and so on, until a vertex repeats.
 */
inline std::vector<State> swapping_cycle(const EnrichedMachine& b, State p1, State p2,
                                         std::size_t budget = Budget::defaults().subset_states) {
    if (!swapping_inclusion(b, p1, p2, budget)) {
        throw Error(ErrorCode::PreconditionFailed, "no swapping inclusion for this pair");
    }
    // Shortest input word leading from p1 to p2.
    std::vector<std::optional<std::pair<State, Letter>>> parent(b.num_states());
    std::vector<char> seen(b.num_states(), 0);
    std::queue<State> bfs;
    bfs.push(p1);
    seen[p1] = 1;
    while (!bfs.empty()) {
        const State v = bfs.front();
        bfs.pop();
        for (Letter x = 0; x < b.num_letters(); ++x) {
            const State t = b.machine.next(v, x);
            if (!seen[t]) {
                seen[t] = 1;
                parent[t] = {{v, x}};
                bfs.push(t);
            }
        }
    }
    Word h;
    for (State v = p2; v != p1;) {
        h.push_back(parent[v]->second);
        v = parent[v]->first;
    }
    std::reverse(h.begin(), h.end());

    auto run = [&](State from, const Word& in, Word& out) {
        out.clear();
        for (Letter x : in) {
            out.push_back(b.machine.output(from, x));
            from = b.machine.next(from, x);
        }
        return from;
    };
    std::vector<State> seq{p1};
    std::map<State, std::size_t> position{{p1, 0}};
    Word out;
    State current = run(p1, h, out);
    while (true) {
        if (auto it = position.find(current); it != position.end()) {
            return std::vector<State>(seq.begin() + static_cast<std::ptrdiff_t>(it->second), seq.end());
        }
        position[current] = seq.size();
        seq.push_back(current);
        h = out;
        current = run(current, h, out);
    }
}

// Component types --------------------------------------------------------------------------

struct ComponentType {
    std::uint32_t size = 0;
    std::vector<std::uint32_t> next;  // [v * L + code]
    std::vector<std::uint32_t> out;   // [v * L + code]
};

class TypeGraph {
public:
    explicit TypeGraph(const MealyMachine& m, std::size_t budget = Budget::defaults().power_states)
        : dual_(make_dual(m)), letters_(m.num_letters()), codes_(dual_.num_letters()), budget_(budget) {
        ComponentType root;
        root.size = 1;
        for (std::uint32_t x = 0; x < codes_; ++x) {
            root.next.push_back(0);
            root.out.push_back(x);
        }
        intern(std::move(root));
    }

    static constexpr std::uint32_t root() { return 0; }
    std::size_t letters() const noexcept { return letters_; }
    std::size_t num_types() const noexcept { return types_.size(); }
    const ComponentType& type(std::uint32_t id) const { return types_.at(id); }
    std::uint32_t size(std::uint32_t id) const { return types_.at(id).size; }
    const EnrichedMachine& enriched_dual() const noexcept { return dual_; }

    /// Type of ua given the type of u.
    std::uint32_t extend(std::uint32_t id, Letter a) {
        if (auto it = edges_.find(key(id, a)); it != edges_.end()) return it->second;
        const ComponentType& t = types_.at(id);
        std::unordered_map<std::uint64_t, std::uint32_t> index;
        std::vector<std::pair<std::uint32_t, State>> pairs{{0U, a}};
        index[pair_key(0, a)] = 0;
        ComponentType r;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto [v, b] = pairs[i];
            for (std::uint32_t x = 0; x < codes_; ++x) {
                const std::uint32_t y = t.out[v * codes_ + x];
                const std::uint32_t v2 = t.next[v * codes_ + x];
                const std::uint32_t z = dual_.machine.output(b, y);
                const State b2 = dual_.machine.next(b, y);
                auto [it, fresh] = index.emplace(pair_key(v2, b2), static_cast<std::uint32_t>(pairs.size()));
                if (fresh) {
                    if (pairs.size() >= budget_) throw BudgetExceeded("component type size", budget_);
                    pairs.emplace_back(v2, b2);
                }
                r.next.push_back(it->second);
                r.out.push_back(z);
            }
        }
        r.size = static_cast<std::uint32_t>(pairs.size());
        const std::uint32_t child = intern(std::move(r));
        edges_[key(id, a)] = child;
        return child;
    }

    /// Type of a whole word.
    std::uint32_t type_of(const Word& u) {
        std::uint32_t t = root();
        for (Letter a : u) t = extend(t, a);
        return t;
    }

private:
    static EnrichedMachine make_dual(const MealyMachine& m) {
        if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "component types need an invertible machine");
        return enrich(dual(m));
    }
    static std::uint64_t key(std::uint32_t id, Letter a) { return (std::uint64_t{id} << 32) | a; }
    static std::uint64_t pair_key(std::uint32_t v, State b) { return (std::uint64_t{v} << 32) | b; }

    std::uint32_t intern(ComponentType t) {
        std::vector<std::uint32_t> k;
        k.reserve(1 + 2 * t.next.size());
        k.push_back(t.size);
        k.insert(k.end(), t.next.begin(), t.next.end());
        k.insert(k.end(), t.out.begin(), t.out.end());
        auto [it, fresh] = ids_.emplace(std::move(k), static_cast<std::uint32_t>(types_.size()));
        if (fresh) {
            if (types_.size() >= budget_) throw BudgetExceeded("component types", budget_);
            types_.push_back(std::move(t));
        }
        return it->second;
    }

    EnrichedMachine dual_;
    std::size_t letters_;
    std::uint32_t codes_;
    std::size_t budget_;
    std::vector<ComponentType> types_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, WordHash> ids_;
    std::unordered_map<std::uint64_t, std::uint32_t> edges_;
};

// Infiniteness and finiteness ---------------------------------------------------------------

/// Two edges `q --a|b--> p` and `s --c|b--> p` with q != s: the output
/// automaton of a reversible invertible machine is not reversible.
struct InfinitenessCertificate {
    State q = 0, s = 0, target = 0;
    Letter a = 0, c = 0, b = 0;
};

inline std::optional<InfinitenessCertificate> infiniteness_certificate(const MealyMachine& m) {
    if (!is_ri(m) || is_bireversible(m)) return std::nullopt;
    for (Letter b = 0; b < m.num_letters(); ++b) {
        std::map<State, std::pair<State, Letter>> entering;
        for (State q = 0; q < m.num_states(); ++q) {
            for (Letter a = 0; a < m.num_letters(); ++a) {
                if (m.output(q, a) != b) continue;
                const State p = m.next(q, a);
                if (auto it = entering.find(p); it != entering.end()) {
                    return InfinitenessCertificate{it->second.first, q, p, it->second.second, a, b};
                }
                entering[p] = {q, a};
            }
        }
    }
    return std::nullopt;
}

/// g moves u along an orbit of length `orbit` and (g^orbit)|_u induces the same map as g.
struct PumpingWitness {
    StateWord g;
    Word u;
    std::size_t orbit = 0;
};

struct FiniteVerdict {
    std::size_t bound = 0;  // largest component size over all levels
    std::size_t closed_at = 0;
};
struct InfiniteVerdict {
    std::optional<InfinitenessCertificate> certificate;
    std::optional<PumpingWitness> pumping;
};
struct UnknownVerdict {
    std::string reason;
};
using FinitenessVerdict = std::variant<FiniteVerdict, InfiniteVerdict, UnknownVerdict>;

namespace detail {

inline std::optional<PumpingWitness> find_pumping(const MealyMachine& m, std::size_t max_word, std::size_t max_gen) {
    const std::size_t nq = m.num_states(), na = m.num_letters();
    for (std::size_t glen = 1; glen <= max_gen; ++glen) {
        for (std::size_t gi = 0; gi < checked_pow(nq, glen, 1'000'000, "pumping generators"); ++gi) {
            const Word gw = word_from_index(gi, glen, nq);
            const StateWord g = positive_word(gw);
            for (std::size_t len = 1; len <= max_word; ++len) {
                for (std::size_t ui = 0; ui < checked_pow(na, len, 1'000'000, "pumping words"); ++ui) {
                    const Word u = word_from_index(ui, len, na);
                    Word v = act_output(m, g, u);
                    std::size_t orbit = 1;
                    while (v != u && orbit <= 4096) {
                        v = act_output(m, g, v);
                        ++orbit;
                    }
                    if (v != u || orbit < 2) continue;
                    const StateWord section = act_transition(m, power(g, orbit), u);
                    if (states_equivalent(m, section, g)) return PumpingWitness{g, u, orbit};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

/**
 * Semi-decides finiteness of the group of m.
 *  - Infinite when m is reversible, invertible and not bireversible, or when a
 *    pumping witness is found among short generators and words.
 *  - Finite when the component types of level k+1 all occur at earlier levels:
 *    from then on no new type, hence no larger component, can appear.
 *  - Unknown otherwise, and for non-invertible machines.
 */
inline FinitenessVerdict finiteness_semidecision(const MealyMachine& m, std::size_t horizon,
                                                 const Budget& budget = Budget::defaults()) {
    if (auto cert = infiniteness_certificate(m)) return InfiniteVerdict{cert, std::nullopt};
    if (!is_invertible(m)) return UnknownVerdict{"machine is not invertible"};

    TypeGraph types(m, budget.power_states);
    std::set<std::uint32_t> seen{TypeGraph::root()};
    std::set<std::uint32_t> level{TypeGraph::root()};
    for (std::size_t k = 0; k < horizon; ++k) {
        std::set<std::uint32_t> next;
        for (auto t : level) {
            for (Letter a = 0; a < m.num_letters(); ++a) next.insert(types.extend(t, a));
        }
        if (std::includes(seen.begin(), seen.end(), next.begin(), next.end())) {
            std::size_t bound = 0;
            for (auto t : seen) bound = std::max<std::size_t>(bound, types.size(t));
            return FiniteVerdict{bound, k + 1};
        }
        seen.insert(next.begin(), next.end());
        level = std::move(next);
    }
    if (auto w = detail::find_pumping(m, 3, 2)) return InfiniteVerdict{std::nullopt, w};
    return UnknownVerdict{"no closure and no witness within horizon " + std::to_string(horizon)};
}

// The zeta gap function ----------------------------------------------------------------------

struct ZetaValue {
    BigInt value = 0;
    bool below_threshold = false;  // no y >= 1 qualifies; value is 0
    bool unbounded = false;        // c = 1: the defining set has no maximum
};

/// Threshold T(y) = N^(N^2) * sum_{j=1..y} c^(N^2 j) - y(y+1)/2, N = |A|.
inline BigInt zeta_threshold(std::size_t alphabet, std::size_t c, std::size_t y) {
    const auto n2 = static_cast<unsigned>(alphabet * alphabet);
    const BigInt lead = boost::multiprecision::pow(BigInt(alphabet), n2);
    const BigInt step = boost::multiprecision::pow(BigInt(c), n2);
    BigInt sum = 0, term = 1;
    for (std::size_t j = 1; j <= y; ++j) {
        term *= step;
        sum += term;
    }
    return lead * sum - BigInt(y) * BigInt(y + 1) / 2;
}

/// zeta(n) = max{ y >= 1 : n >= T(y) } with c = ||dual(m)||.
inline ZetaValue zeta(std::size_t alphabet, std::size_t c, const BigInt& n) {
    ZetaValue z;
    if (c <= 1) {
        z.unbounded = true;
        return z;
    }
    // T is strictly increasing for c >= 2.
    std::size_t y = 0;
    while (zeta_threshold(alphabet, c, y + 1) <= n) ++y;
    z.value = y;
    z.below_threshold = y == 0;
    return z;
}

inline ZetaValue zeta(const MealyMachine& m, const BigInt& n) {
    if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "zeta needs an invertible machine");
    return zeta(m.num_letters(), norm(dual(m)), n);
}

/// m + (|A| c^m)^(|A|^2): the completion horizon of the bounded-graph procedure.
inline BigInt completion_horizon(std::size_t alphabet, std::size_t c, std::size_t m) {
    const BigInt base = BigInt(alphabet) * boost::multiprecision::pow(BigInt(c), static_cast<unsigned>(m));
    return BigInt(m) + boost::multiprecision::pow(base, static_cast<unsigned>(alphabet * alphabet));
}

// Bounded Schreier graphs on the boundary -------------------------------------------------------

struct SchreierYes {
    Word x, y;          // witness x y^omega
    std::size_t size = 0;
};
struct SchreierNo {
    std::size_t level = 0;  // first level m with chi(m) > limit
    std::size_t chi = 0;    // chi(m), or a lower bound when !chi_exact
    bool chi_exact = true;
};
struct SchreierExhausted {
    std::size_t horizon = 0;
    std::size_t smallest_open = 0;  // smallest size <= limit still alive at the horizon
    BigInt completion_horizon;
};
struct SchreierVerdict {
    std::variant<SchreierYes, SchreierNo, SchreierExhausted> result;
    std::size_t types_explored = 0;

    bool is_yes() const { return std::holds_alternative<SchreierYes>(result); }
    bool is_no() const { return std::holds_alternative<SchreierNo>(result); }
    bool is_exhausted() const { return std::holds_alternative<SchreierExhausted>(result); }
};

/// Smallest component size over all of level k, through the type graph.
inline std::optional<std::size_t> chi_by_types(TypeGraph& types, std::size_t k, std::size_t max_types) {
    std::set<std::uint32_t> level{TypeGraph::root()};
    for (std::size_t i = 0; i < k; ++i) {
        std::set<std::uint32_t> next;
        for (auto t : level) {
            for (Letter a = 0; a < types.letters(); ++a) next.insert(types.extend(t, a));
        }
        if (next.size() > max_types) return std::nullopt;
        level = std::move(next);
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (auto t : level) best = std::min<std::size_t>(best, types.size(t));
    return best;
}

/**
 * Is there a point of the boundary whose Schreier graph has at most `limit`
 * vertices? Explores the component types of size <= limit up to depth
 * `horizon`. A cycle among them yields Yes with the witness x y^omega; an
 * exhausted acyclic region yields No at the first level where every component
 * exceeds the limit; otherwise the answer is Exhausted.
 */
inline SchreierVerdict decide_bounded_schreier(const MealyMachine& m, std::size_t limit, std::size_t horizon,
                                               const Budget& budget = Budget::defaults()) {
    TypeGraph types(m, budget.power_states);
    std::map<std::uint32_t, std::size_t> depth{{TypeGraph::root(), 0}};
    std::map<std::uint32_t, std::vector<std::pair<Letter, std::uint32_t>>> edges;
    std::vector<std::uint32_t> order{TypeGraph::root()};
    bool open = false;
    std::size_t smallest_open = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto t = order[i];
        if (depth[t] >= horizon) {
            open = true;
            smallest_open = std::min<std::size_t>(smallest_open, types.size(t));
            continue;
        }
        for (Letter a = 0; a < m.num_letters(); ++a) {
            const auto c = types.extend(t, a);
            if (types.size(c) > limit) continue;
            edges[t].emplace_back(a, c);
            if (depth.emplace(c, depth[t] + 1).second) order.push_back(c);
        }
    }

    SchreierVerdict verdict;
    verdict.types_explored = types.num_types();

    // Cycle search: iterative DFS with colors, recording the letter path.
    std::map<std::uint32_t, int> color;
    struct Frame {
        std::uint32_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> stack{{TypeGraph::root(), 0}};
    Word path;
    color[TypeGraph::root()] = 1;
    while (!stack.empty()) {
        auto& f = stack.back();
        const auto& out = edges[f.node];
        if (f.next_edge == out.size()) {
            color[f.node] = 2;
            stack.pop_back();
            if (!path.empty() && !stack.empty()) path.pop_back();
            continue;
        }
        const auto [a, c] = out[f.next_edge++];
        if (color[c] == 1) {
            // Back edge: c is on the stack.
            std::size_t pos_c = 0;
            while (stack[pos_c].node != c) ++pos_c;
            SchreierYes yes;
            yes.x.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(pos_c));
            yes.y.assign(path.begin() + static_cast<std::ptrdiff_t>(pos_c), path.end());
            yes.y.push_back(a);
            yes.size = types.size(c);
            verdict.result = yes;
            return verdict;
        }
        if (color[c] == 0) {
            color[c] = 1;
            path.push_back(a);
            stack.push_back({c, 0});
        }
    }

    const std::size_t c = norm(dual(m));
    if (open) {
        verdict.result = SchreierExhausted{horizon, smallest_open, completion_horizon(m.num_letters(), c, horizon)};
        return verdict;
    }
    // Acyclic and closed: the longest path gives the last level with a small component.
    // Post-order of the DFS above is a reverse topological order of the DAG.
    std::map<std::uint32_t, std::size_t> longest;
    std::vector<std::pair<std::uint32_t, std::size_t>> dfs{{TypeGraph::root(), 0}};
    while (!dfs.empty()) {
        auto& [node, next_edge] = dfs.back();
        const auto& out = edges[node];
        if (next_edge < out.size()) {
            const auto child = out[next_edge++].second;
            if (!longest.count(child)) dfs.emplace_back(child, 0);
            continue;
        }
        std::size_t best = 0;
        for (const auto& e : out) best = std::max(best, longest.at(e.second) + 1);
        longest[node] = best;
        dfs.pop_back();
    }
    SchreierNo no;
    no.level = longest[TypeGraph::root()] + 1;
    if (auto exact = chi_by_types(types, no.level, budget.power_states / 16 + 1)) {
        no.chi = *exact;
    } else {
        no.chi = limit + 1;
        no.chi_exact = false;
    }
    verdict.result = no;
    verdict.types_explored = types.num_types();
    return verdict;
}

/// Component sizes of x y^t for t = 1..periods, through the level graphs.
inline std::vector<std::size_t> almost_periodic_sizes(const MealyMachine& m, const Word& x, const Word& y,
                                                      std::size_t periods, const Budget& budget = Budget::defaults()) {
    std::vector<std::size_t> sizes;
    Word v = x;
    for (std::size_t t = 1; t <= periods; ++t) {
        v = concat(v, y);
        sizes.push_back(level_graph(m, v.size(), v, budget).words.size());
    }
    return sizes;
}

// Torsion and periodic points ----------------------------------------------------------------------

struct TorsionWitness {
    Word u;
    std::size_t i = 0, j = 0;  // B_{u^i} = B_{u^j}, i < j, j minimal
    std::size_t index() const { return i; }
    std::size_t period() const { return j - i; }
};

/// Exact torsion search in the semigroup of B = enrich(dual(m)): for each
/// word u of length 1..max_len the first repetition among the maps of
/// u, u^2, ..., u^max_exp.
inline std::vector<TorsionWitness> torsion_search(const MealyMachine& m, std::size_t max_len, std::size_t max_exp,
                                                  const Budget& budget = Budget::defaults()) {
    if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "torsion search needs an invertible machine");
    const EnrichedMachine b = enrich(dual(m));
    const std::size_t na = m.num_letters();
    std::vector<TorsionWitness> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t count = checked_pow(na, len, budget.enumeration, "torsion words");
        for (std::size_t idx = 0; idx < count; ++idx) {
            const Word u = word_from_index(idx, len, na);
            std::unordered_map<Signature, std::size_t, SignatureHash> seen;
            for (std::size_t e = 1; e <= max_exp; ++e) {
                const auto sig = canonical_signature(b.machine, positive_word(power(u, e)), budget.power_states);
                auto [it, fresh] = seen.emplace(sig, e);
                if (!fresh) {
                    out.push_back({u, it->second, e});
                    break;
                }
            }
        }
    }
    return out;
}

/// Independent check of a witness: u^i and u^j agree on every signed word of
/// length `depth` over the generators.
inline bool torsion_probe(const MealyMachine& m, const TorsionWitness& w, std::size_t depth) {
    const EnrichedMachine b = enrich(dual(m));
    const std::size_t nl = b.num_letters();
    const StateWord si = positive_word(power(w.u, w.i));
    const StateWord sj = positive_word(power(w.u, w.j));
    const std::size_t count = checked_pow(nl, depth, Budget::defaults().enumeration, "torsion probe");
    for (std::size_t idx = 0; idx < count; ++idx) {
        const Word x = word_from_index(idx, depth, nl);
        if (act_output(b.machine, si, x) != act_output(b.machine, sj, x)) return false;
    }
    return true;
}

/// n^(index + period - 1), n the order of the level group at |u|.
inline BigInt torsion_bound_ell(const MealyMachine& m, const Word& u, const TorsionWitness& w,
                                const Budget& budget = Budget::defaults()) {
    if (w.u != u || w.i == 0 || w.j <= w.i) throw Error(ErrorCode::PreconditionFailed, "witness does not match u");
    const std::size_t n = level_group(m, u.size(), budget).order;
    return boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(w.index() + w.period() - 1));
}

/**
 * Whether the group element of path word g fixes the periodic point w^omega.
 * Sections after whole blocks of w repeat eventually; g fixes w^omega iff
 * every block up to the repetition is mapped onto w.
 */
inline bool fixes_periodic_point(const MealyMachine& m, const SignedWord& g, const Word& w) {
    if (w.empty()) throw Error(ErrorCode::InvalidArgument, "period must be non-empty");
    ActionTables t(m);
    StateWord s = path_to_state_word(g);
    t.check(s);
    std::unordered_set<std::vector<std::uint32_t>, WordHash> seen;
    while (seen.insert(detail::encode_state_word(s)).second) {
        for (Letter a : w) {
            if (t.feed(s, a) != a) return false;
        }
    }
    return true;
}

struct PeriodicScanEntry {
    Word w;
    std::size_t tested = 0;
    std::vector<SignedWord> fixing;      // every tested g fixing w^omega
    std::vector<SignedWord> nontrivial;  // those not acting trivially at the check depth
};

/// For each w with 1 <= |w| <= max_period and each reduced g with
/// 1 <= |g| <= max_gen_len, decides whether g fixes w^omega.
inline std::vector<PeriodicScanEntry> periodic_stabilizer_scan(const MealyMachine& m, std::size_t max_period,
                                                               std::size_t max_gen_len, std::size_t depth = 8,
                                                               const Budget& budget = Budget::defaults()) {
    if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "periodic scan needs an invertible machine");
    std::vector<SignedWord> gens;
    for_each_reduced_word(m.num_states(), max_gen_len, [&](const SignedWord& g) {
        if (gens.size() >= budget.enumeration) throw BudgetExceeded("scan generators", budget.enumeration);
        gens.push_back(g);
    });
    std::unordered_map<std::size_t, bool> trivial;
    std::vector<PeriodicScanEntry> out;
    for (std::size_t len = 1; len <= max_period; ++len) {
        const std::size_t count = checked_pow(m.num_letters(), len, budget.enumeration, "scan periods");
        for (std::size_t idx = 0; idx < count; ++idx) {
            PeriodicScanEntry e;
            e.w = word_from_index(idx, len, m.num_letters());
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                ++e.tested;
                if (!fixes_periodic_point(m, gens[gi], e.w)) continue;
                e.fixing.push_back(gens[gi]);
                auto it = trivial.find(gi);
                if (it == trivial.end()) it = trivial.emplace(gi, is_group_relation_up_to(m, gens[gi], depth)).first;
                if (!it->second) e.nontrivial.push_back(gens[gi]);
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace mealyforge
