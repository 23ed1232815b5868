#pragma once

/**
 * @file levels.hpp
 * @brief Level graphs (Schreier graphs of level stabilizers), level groups,
 * the components growth function and relation detection.
 *
 * The level graph D_k has the words of A^k as vertices and an edge
 * `v --g--> g o v` for every signed generator g. It is computed as a power of
 * the enriched dual, where a tuple (a1,...,ak) with a1 reading first is the
 * word a1...ak. Path labels are read left to right: following g1 then g2 from v
 * ends at g2 o (g1 o v).
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "error.hpp"
#include "inverse_graphs.hpp"
#include "machine.hpp"
#include "words.hpp"

namespace mealyforge {

/// Signed generator alphabet of a machine: its state names.
inline Alphabet generator_alphabet(const MealyMachine& m) { return Alphabet(m.state_names()); }

/// Steps words of A^k along signed generators through the enriched dual.
class LevelAction {
public:
    explicit LevelAction(const MealyMachine& m) : base_(m), dual_(make_dual(m)) {}

    const MealyMachine& machine() const noexcept { return base_; }
    const EnrichedMachine& enriched_dual() const noexcept { return dual_; }

    /// Replaces v by g o v.
    void apply(Word& v, SignedLetter g) const {
        for (auto& a : v) {
            const State next = dual_.next(a, g);
            g = dual_.output(a, g);
            a = next;
        }
    }

    Word image(Word v, SignedLetter g) const {
        apply(v, g);
        return v;
    }

    Word image_of_path(Word v, const SignedWord& path) const {
        for (const auto& g : path) apply(v, g);
        return v;
    }

private:
    static EnrichedMachine make_dual(const MealyMachine& m) {
        if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "level graphs need an invertible machine");
        return enrich(dual(m));
    }

    MealyMachine base_;
    EnrichedMachine dual_;
};

struct LevelGraph {
    std::size_t level = 0;
    InverseAutomaton graph;   // labels: generators; vertex names: the words
    std::vector<Word> words;  // vertex -> word
};

namespace detail {

template <typename Step>
LevelGraph orbit_graph(const MealyMachine& m, const Word& base, std::size_t budget, Step step) {
    const std::size_t nq = m.num_states();
    LevelGraph lg;
    lg.level = base.size();
    std::unordered_map<std::vector<std::uint32_t>, State, WordHash> index{{base, 0}};
    lg.words.push_back(base);
    std::vector<std::tuple<State, SignedLetter, State>> edges;
    for (std::size_t i = 0; i < lg.words.size(); ++i) {
        for (std::uint32_t code = 0; code < 2 * nq; ++code) {
            const auto g = SignedLetter::decode(code, nq);
            Word w = step(lg.words[i], g);
            auto [it, fresh] = index.emplace(w, static_cast<State>(lg.words.size()));
            if (fresh) {
                if (lg.words.size() >= budget) throw BudgetExceeded("level vertices", budget);
                lg.words.push_back(std::move(w));
            }
            edges.emplace_back(static_cast<State>(i), g, it->second);
        }
    }
    lg.graph = InverseAutomaton(generator_alphabet(m), lg.words.size(), 0);
    for (const auto& [s, g, t] : edges) lg.graph.set_edge(s, g, t);
    for (const auto& w : lg.words) lg.graph.vertex_names.push_back(word_to_string(w, m.alphabet().symbols()));
    return lg;
}

}  // namespace detail

/**
 * The level graph D_k. With a base word the result is its component, numbered
 * canonically from the base; without one it is the whole graph on A^k with
 * vertex i the word of mixed-radix index i.
 */
inline LevelGraph level_graph(const MealyMachine& m, std::size_t k, const std::optional<Word>& base = std::nullopt,
                              const Budget& budget = Budget::defaults()) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "level must be at least 1");
    if (k > budget.max_level) throw BudgetExceeded("level", budget.max_level);
    const LevelAction act(m);
    if (base) {
        if (base->size() != k) throw Error(ErrorCode::InvalidArgument, "base word length differs from level");
        // Breadth-first discovery with labels in code order is already the canonical numbering.
        return detail::orbit_graph(m, *base, budget.level_vertices,
                                   [&](const Word& v, SignedLetter g) { return act.image(v, g); });
    }
    const std::size_t na = m.num_letters();
    const std::size_t total = checked_pow(na, k, budget.level_vertices, "level vertices");
    LevelGraph lg;
    lg.level = k;
    lg.graph = InverseAutomaton(generator_alphabet(m), total, 0);
    for (std::size_t i = 0; i < total; ++i) {
        lg.words.push_back(word_from_index(i, k, na));
        lg.graph.vertex_names.push_back(word_to_string(lg.words.back(), m.alphabet().symbols()));
    }
    for (std::size_t i = 0; i < total; ++i) {
        for (State q = 0; q < m.num_states(); ++q) {
            const Word w = act.image(lg.words[i], pos(q));
            lg.graph.set_edge(static_cast<State>(i), pos(q), static_cast<State>(word_index(w, na)));
        }
    }
    return lg;
}

/// Orbit of v computed straight from the machine: each generator q acts by
/// act_output, each inverse through the inverse machine.
inline InverseAutomaton orbit_oracle(const MealyMachine& m, const Word& v,
                                     std::size_t budget = Budget::defaults().level_vertices) {
    const MealyMachine inv = inverse_machine(m);
    auto lg = detail::orbit_graph(m, v, budget, [&](const Word& w, SignedLetter g) {
        return g.inverted ? act_output(inv, {pos(g.base)}, w) : act_output(m, {pos(g.base)}, w);
    });
    return canonical_form(lg.graph);
}

/// Words over the signed generators generating the stabilizer of v in the
/// level quotient: a basis of the Schreier graph at v.
inline std::vector<SignedWord> schreier_stabilizer_generators(const MealyMachine& m, const Word& v,
                                                              const Budget& budget = Budget::defaults()) {
    return basis(level_graph(m, v.size(), v, budget).graph);
}

/// Vertex sets of the connected components of D_k, ordered by smallest word index.
inline std::vector<std::vector<std::size_t>> level_components(const MealyMachine& m, std::size_t k,
                                                              const Budget& budget = Budget::defaults()) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "level must be at least 1");
    const LevelAction act(m);
    const std::size_t na = m.num_letters();
    const std::size_t total = checked_pow(na, k, budget.level_vertices, "level vertices");
    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < total; ++i) {
        const Word w = word_from_index(i, k, na);
        for (State q = 0; q < m.num_states(); ++q) {
            const auto a = find(i), b = find(word_index(act.image(w, pos(q)), na));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < total; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

/// Largest weakly connected component of the machine's state graph.
inline std::size_t norm(const MealyMachine& m) {
    std::vector<std::size_t> parent(m.num_states());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) parent[find(q)] = find(m.next(q, a));
    }
    std::map<std::size_t, std::size_t> size;
    for (State q = 0; q < m.num_states(); ++q) ++size[find(q)];
    std::size_t best = 0;
    for (const auto& [r, s] : size) best = std::max(best, s);
    return best;
}

/// Size of the component of the base.
inline std::size_t norm(const InverseAutomaton& a) { return canonical_form(a).num_vertices(); }

struct GrowthReport {
    std::string machine;
    std::vector<std::size_t> chi;                               // chi[n-1] = chi(n)
    std::vector<std::map<std::size_t, std::size_t>> sizes;      // per level: size -> count
    bool monotone = true;
    std::optional<std::size_t> stable_from;                     // chi constant from here to the last level
    std::size_t dual_norm = 0;
    bool truncated = false;
    std::string truncation_reason;
};

/**
 * chi(n) is the smallest component size of D_n. Levels are computed until
 * n_max or until the budget refuses a level; in the latter case the report is
 * returned with `truncated` set.
 */
inline GrowthReport growth_chi(const MealyMachine& m, std::size_t n_max, const Budget& budget = Budget::defaults()) {
    GrowthReport r;
    r.dual_norm = norm(dual(m));
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<std::vector<std::size_t>> comps;
        try {
            if (n > budget.max_level) throw BudgetExceeded("level", budget.max_level);
            comps = level_components(m, n, budget);
        } catch (const BudgetExceeded& e) {
            r.truncated = true;
            r.truncation_reason = e.what();
            break;
        }
        std::map<std::size_t, std::size_t> sizes;
        std::size_t best = comps.front().size();
        for (const auto& c : comps) {
            ++sizes[c.size()];
            best = std::min(best, c.size());
        }
        if (!r.chi.empty() && best < r.chi.back()) r.monotone = false;
        r.chi.push_back(best);
        r.sizes.push_back(std::move(sizes));
    }
    if (r.chi.size() >= 2) {
        std::size_t i = r.chi.size() - 1;
        while (i > 0 && r.chi[i - 1] == r.chi.back()) --i;
        if (i + 1 < r.chi.size()) r.stable_from = i + 1;
    }
    return r;
}

// Level groups ------------------------------------------------------------------

struct LevelGroup {
    std::size_t order = 0;
    InverseAutomaton cayley;  // vertices: group elements, edge h --q--> q o h
    std::vector<SignedWord> words;  // a path from the identity to each element

    /// Order of element g: reading its path repeatedly from the identity.
    std::size_t element_order(State g) const {
        State v = g;
        std::size_t k = 1;
        while (v != 0) {
            v = *cayley.read(v, words[g]);
            ++k;
        }
        return k;
    }

    bool is_cyclic() const {
        for (State g = 0; g < order; ++g) {
            if (element_order(g) == order) return true;
        }
        return false;
    }
};

/// Permutation group induced on A^k, closed by BFS from the identity.
inline LevelGroup level_group(const MealyMachine& m, std::size_t k, const Budget& budget = Budget::defaults()) {
    const LevelAction act(m);
    const std::size_t na = m.num_letters();
    const std::size_t nq = m.num_states();
    const std::size_t total = checked_pow(na, k, budget.level_vertices, "level vertices");
    using Perm = std::vector<std::uint32_t>;

    std::vector<Perm> gens(2 * nq, Perm(total));
    for (std::size_t i = 0; i < total; ++i) {
        const Word w = word_from_index(i, k, na);
        for (std::uint32_t code = 0; code < 2 * nq; ++code) {
            gens[code][i] = static_cast<std::uint32_t>(word_index(act.image(w, SignedLetter::decode(code, nq)), na));
        }
    }
    Perm id(total);
    std::iota(id.begin(), id.end(), 0);
    std::unordered_map<Perm, State, WordHash> index{{id, 0}};
    std::vector<Perm> elements{id};
    std::vector<SignedWord> names{{}};
    std::vector<std::tuple<State, SignedLetter, State>> edges;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::uint32_t code = 0; code < 2 * nq; ++code) {
            Perm next(total);
            for (std::size_t x = 0; x < total; ++x) next[x] = gens[code][elements[i][x]];
            auto [it, fresh] = index.emplace(next, static_cast<State>(elements.size()));
            if (fresh) {
                if (elements.size() >= budget.group_order) throw BudgetExceeded("level group order", budget.group_order);
                elements.push_back(std::move(next));
                names.push_back(names[i]);
                names.back().push_back(SignedLetter::decode(code, nq));
            }
            edges.emplace_back(static_cast<State>(i), SignedLetter::decode(code, nq), it->second);
        }
    }
    LevelGroup g;
    g.order = elements.size();
    g.cayley = InverseAutomaton(generator_alphabet(m), elements.size(), 0);
    for (const auto& [s, x, t] : edges) g.cayley.set_edge(s, x, t);
    for (const auto& w : names) g.cayley.vertex_names.push_back(signed_word_to_string(w, m.state_names()));
    g.words = std::move(names);
    return g;
}

// Relations -----------------------------------------------------------------------

/// The path word w acts trivially on every word of length `depth`.
inline bool is_group_relation_up_to(const MealyMachine& m, const SignedWord& w, std::size_t depth) {
    ActionTables t(m);
    const StateWord start = path_to_state_word(w);
    t.check(start);
    const std::size_t na = m.num_letters();
    std::vector<StateWord> stack_words{start};
    std::vector<std::size_t> stack_depth{0};
    while (!stack_words.empty()) {
        StateWord s = std::move(stack_words.back());
        const std::size_t d = stack_depth.back();
        stack_words.pop_back();
        stack_depth.pop_back();
        if (d == depth) continue;
        for (Letter a = 0; a < na; ++a) {
            StateWord section = s;
            if (t.feed(section, a) != a) return false;
            stack_words.push_back(std::move(section));
            stack_depth.push_back(d + 1);
        }
    }
    return true;
}

/// Non-empty reduced words of length at most max_len that act trivially at `depth`,
/// in length-lexicographic order. Candidates only: relations are depth-verified.
inline std::vector<SignedWord> find_relations(const MealyMachine& m, std::size_t max_len, std::size_t depth,
                                              const Budget& budget = Budget::defaults()) {
    if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "relations need an invertible machine");
    std::vector<SignedWord> out;
    std::size_t visited = 0;
    for_each_reduced_word(m.num_states(), max_len, [&](const SignedWord& w) {
        if (++visited > budget.enumeration) throw BudgetExceeded("relation candidates", budget.enumeration);
        if (is_group_relation_up_to(m, w, depth)) out.push_back(w);
    });
    return out;
}

/// a o u = a o v for every letter a.
inline bool colliding_pair(const MealyMachine& m, const StateWord& u, const StateWord& v) {
    for (Letter a = 0; a < m.num_letters(); ++a) {
        if (act_output(m, u, {a}) != act_output(m, v, {a})) return false;
    }
    return true;
}

inline bool semigroup_relation_exact(const MealyMachine& m, const StateWord& u, const StateWord& v) {
    return states_equivalent(m, u, v);
}

struct FreeSemigroupVerdict {
    bool free_so_far = true;
    std::optional<std::pair<StateWord, StateWord>> counterexample;
    std::size_t words_checked = 0;
};

/**
 * Checks that distinct non-empty positive state words of length at most
 * max_len induce distinct maps. All words are states of one disjoint union of
 * powers, so a single partition refinement decides every pair.
 */
inline FreeSemigroupVerdict free_semigroup_check(const MealyMachine& m, std::size_t max_len,
                                                 const Budget& budget = Budget::defaults()) {
    const std::size_t nq = m.num_states(), na = m.num_letters();
    std::vector<std::pair<std::size_t, std::size_t>> offset_len;  // (offset, length)
    std::size_t total = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        offset_len.emplace_back(total, len);
        total += checked_pow(nq, len, budget.power_states, "free check states");
        if (total > budget.power_states) throw BudgetExceeded("free check states", budget.power_states);
    }
    std::vector<std::uint32_t> next(total * na);
    std::vector<Letter> out(total * na);
    for (const auto& [offset, len] : offset_len) {
        const PowerMachine pm(m, len);
        const std::size_t count = checked_pow(nq, len, budget.power_states, "free check states");
        for (std::size_t i = 0; i < count; ++i) {
            for (Letter a = 0; a < na; ++a) {
                auto t = pm.tuple(i);
                out[(offset + i) * na + a] = pm.step(t, a);
                next[(offset + i) * na + a] = static_cast<std::uint32_t>(offset + pm.index(t));
            }
        }
    }
    const auto block = equivalence_classes(total, na, next, out);
    FreeSemigroupVerdict v;
    v.words_checked = total;
    std::unordered_map<std::uint32_t, std::size_t> first;
    for (const auto& [offset, len] : offset_len) {
        const PowerMachine pm(m, len);
        for (std::size_t i = 0; i < checked_pow(nq, len, total, "free check states"); ++i) {
            auto [it, fresh] = first.emplace(block[offset + i], offset + i);
            if (fresh) continue;
            auto word_of = [&](std::size_t flat) {
                for (const auto& [o, l] : offset_len) {
                    if (flat < o + checked_pow(nq, l, total, "free check states")) {
                        return PowerMachine(m, l).state_word(PowerMachine(m, l).tuple(flat - o));
                    }
                }
                return StateWord{};
            };
            v.free_so_far = false;
            v.counterexample = std::make_pair(word_of(it->second), pm.state_word(pm.tuple(i)));
            return v;
        }
    }
    return v;
}

}  // namespace mealyforge
