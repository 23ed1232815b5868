#pragma once

/**
 * @file machine.hpp
 * @brief Mealy machines, their coupled actions, and exact equality of induced maps.
 *
 * A machine has a finite state set Q and one alphabet A used for both input
 * and output. Every (state, letter) pair has exactly one edge `q --a|b--> p`.
 *
 * Composition order. A state word q1...qm acts on A* with the RIGHTMOST state
 * acting first:
 *
 *     (q1...qm) o u = (q1...q{m-1}) o (qm o u)
 *     (q1...qm) . u = ((q1...q{m-1}) . (qm o u)) (qm . u)
 *
 * The literature varies on this point; every function in this file follows the
 * recursion above. A signed entry q^-1 acts through the inverse machine and is
 * only accepted when the machine is invertible.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "words.hpp"

namespace mealyforge {

/// Edge given by names, as read from a file or built by hand.
struct RawEdge {
    std::string from;
    std::string input;
    std::string to;
    std::string output;
};

struct RawMachine {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<RawEdge> edges;
};

struct ValidationIssue {
    ErrorCode kind;
    std::string state;   // empty for alphabet-level issues
    std::string letter;
    std::string detail;
};

inline std::string describe(const ValidationIssue& issue) {
    std::string s(to_string(issue.kind));
    s += "(" + issue.state + "," + issue.letter + ")";
    if (!issue.detail.empty()) s += ": " + issue.detail;
    return s;
}

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues)
        : Error(issues.empty() ? ErrorCode::InvalidMachine : issues.front().kind, summarize(issues)),
          issues_(std::move(issues)) {}

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::vector<ValidationIssue>& issues) {
        std::string s;
        for (const auto& i : issues) {
            if (!s.empty()) s += "; ";
            s += describe(i);
        }
        return s;
    }
    std::vector<ValidationIssue> issues_;
};

class MealyMachine {
public:
    MealyMachine() = default;

    /// Builds from dense tables indexed `[q * |A| + a]`. Throws on malformed tables.
    MealyMachine(std::vector<std::string> state_names, Alphabet alphabet, std::vector<State> next,
                 std::vector<Letter> output)
        : state_names_(std::move(state_names)),
          alphabet_(std::move(alphabet)),
          next_(std::move(next)),
          output_(std::move(output)) {
        const std::size_t nq = state_names_.size();
        const std::size_t na = alphabet_.size();
        if (nq == 0) throw Error(ErrorCode::InvalidMachine, "machine needs at least one state");
        if (next_.size() != nq * na || output_.size() != nq * na) {
            throw Error(ErrorCode::InvalidMachine, "transition table has wrong size");
        }
        std::unordered_map<std::string, State> seen;
        for (std::size_t q = 0; q < nq; ++q) {
            if (!seen.emplace(state_names_[q], static_cast<State>(q)).second) {
                throw Error(ErrorCode::InvalidMachine, "duplicate state name '" + state_names_[q] + "'");
            }
        }
        state_index_ = std::move(seen);
        for (std::size_t i = 0; i < next_.size(); ++i) {
            if (next_[i] >= nq || output_[i] >= na) {
                throw Error(ErrorCode::InvalidMachine, "table entry out of range");
            }
        }
    }

    std::size_t num_states() const noexcept { return state_names_.size(); }
    std::size_t num_letters() const noexcept { return alphabet_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<std::string>& state_names() const noexcept { return state_names_; }
    const std::string& state_name(State q) const { return state_names_.at(q); }
    const std::string& letter_name(Letter a) const { return alphabet_.name(a); }

    std::optional<State> find_state(std::string_view name) const {
        auto it = state_index_.find(std::string(name));
        if (it == state_index_.end()) return std::nullopt;
        return it->second;
    }
    State state_index(std::string_view name) const {
        if (auto q = find_state(name)) return *q;
        throw Error(ErrorCode::UnknownSymbol, "state '" + std::string(name) + "'");
    }

    State next(State q, Letter a) const { return next_[q * num_letters() + a]; }
    Letter output(State q, Letter a) const { return output_[q * num_letters() + a]; }

    const std::vector<State>& next_table() const noexcept { return next_; }
    const std::vector<Letter>& output_table() const noexcept { return output_; }

    /// Structural equality: same names in the same order and the same tables.
    bool operator==(const MealyMachine& other) const {
        return state_names_ == other.state_names_ && alphabet_ == other.alphabet_ && next_ == other.next_ &&
               output_ == other.output_;
    }

    /// Equality of tables only, ignoring names.
    bool same_structure(const MealyMachine& other) const {
        return num_states() == other.num_states() && num_letters() == other.num_letters() &&
               next_ == other.next_ && output_ == other.output_;
    }

private:
    std::vector<std::string> state_names_;
    Alphabet alphabet_;
    std::vector<State> next_;
    std::vector<Letter> output_;
    std::unordered_map<std::string, State> state_index_;
};

/// Collects every problem in a raw description; empty result means valid.
inline std::vector<ValidationIssue> validation_issues(const RawMachine& raw) {
    std::vector<ValidationIssue> issues;
    std::unordered_map<std::string, std::size_t> qi, ai;
    for (std::size_t i = 0; i < raw.states.size(); ++i) {
        if (!qi.emplace(raw.states[i], i).second) {
            issues.push_back({ErrorCode::DuplicateTransition, raw.states[i], "", "state declared twice"});
        }
    }
    for (std::size_t i = 0; i < raw.alphabet.size(); ++i) {
        if (!ai.emplace(raw.alphabet[i], i).second) {
            issues.push_back({ErrorCode::UnknownSymbol, "", raw.alphabet[i], "letter declared twice"});
        }
    }
    if (raw.states.empty()) issues.push_back({ErrorCode::InvalidMachine, "", "", "no states"});
    if (raw.alphabet.empty()) issues.push_back({ErrorCode::InvalidMachine, "", "", "empty alphabet"});

    std::vector<int> count(raw.states.size() * raw.alphabet.size(), 0);
    for (const auto& e : raw.edges) {
        bool ok = true;
        for (const auto* s : {&e.from, &e.to}) {
            if (!qi.count(*s)) {
                issues.push_back({ErrorCode::UnknownSymbol, *s, e.input, "unknown state '" + *s + "'"});
                ok = false;
            }
        }
        for (const auto* s : {&e.input, &e.output}) {
            if (!ai.count(*s)) {
                issues.push_back({ErrorCode::UnknownSymbol, e.from, *s, "unknown letter '" + *s + "'"});
                ok = false;
            }
        }
        if (ok) ++count[qi[e.from] * raw.alphabet.size() + ai[e.input]];
    }
    for (std::size_t q = 0; q < raw.states.size(); ++q) {
        for (std::size_t a = 0; a < raw.alphabet.size(); ++a) {
            const int c = count[q * raw.alphabet.size() + a];
            if (c == 0) issues.push_back({ErrorCode::MissingTransition, raw.states[q], raw.alphabet[a], ""});
            if (c > 1) issues.push_back({ErrorCode::DuplicateTransition, raw.states[q], raw.alphabet[a], ""});
        }
    }
    return issues;
}

struct ValidationResult {
    std::optional<MealyMachine> machine;
    std::vector<ValidationIssue> issues;
    bool ok() const { return machine.has_value(); }
};

inline ValidationResult validate(const RawMachine& raw) {
    ValidationResult result;
    result.issues = validation_issues(raw);
    if (!result.issues.empty()) return result;

    Alphabet alphabet(raw.alphabet);
    std::unordered_map<std::string, State> qi;
    for (std::size_t i = 0; i < raw.states.size(); ++i) qi[raw.states[i]] = static_cast<State>(i);
    const std::size_t na = raw.alphabet.size();
    std::vector<State> next(raw.states.size() * na);
    std::vector<Letter> out(raw.states.size() * na);
    for (const auto& e : raw.edges) {
        const std::size_t idx = qi[e.from] * na + alphabet.index(e.input);
        next[idx] = qi[e.to];
        out[idx] = alphabet.index(e.output);
    }
    result.machine.emplace(raw.states, std::move(alphabet), std::move(next), std::move(out));
    return result;
}

inline MealyMachine validate_or_throw(const RawMachine& raw) {
    auto r = validate(raw);
    if (!r.ok()) throw ValidationError(std::move(r.issues));
    return std::move(*r.machine);
}

inline RawMachine to_raw(const MealyMachine& m) {
    RawMachine raw{m.state_names(), m.alphabet().symbols(), {}};
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) {
            raw.edges.push_back({m.state_name(q), m.letter_name(a), m.state_name(m.next(q, a)),
                                 m.letter_name(m.output(q, a))});
        }
    }
    return raw;
}

// Structural predicates --------------------------------------------------------

inline bool is_permutation_of(const std::vector<std::uint32_t>& values, std::size_t n) {
    std::vector<char> hit(n, 0);
    for (auto v : values) {
        if (v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    return values.size() == n;
}

/// Every state's output map is a permutation of A.
inline bool is_invertible(const MealyMachine& m) {
    std::vector<std::uint32_t> row(m.num_letters());
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < m.num_letters(); ++a) row[a] = m.output(q, a);
        if (!is_permutation_of(row, m.num_letters())) return false;
    }
    return true;
}

/// Every letter's transition map is a permutation of Q.
inline bool is_reversible(const MealyMachine& m) {
    std::vector<std::uint32_t> col(m.num_states());
    for (Letter a = 0; a < m.num_letters(); ++a) {
        for (State q = 0; q < m.num_states(); ++q) col[q] = m.next(q, a);
        if (!is_permutation_of(col, m.num_states())) return false;
    }
    return true;
}

/// Reversible, and the output automaton is a reversible semiautomaton too.
inline bool is_bireversible(const MealyMachine& m) {
    if (!is_reversible(m) || !is_invertible(m)) return false;
    const std::size_t na = m.num_letters();
    std::vector<std::uint32_t> col(m.num_states());
    for (Letter b = 0; b < na; ++b) {
        for (State q = 0; q < m.num_states(); ++q) {
            for (Letter a = 0; a < na; ++a) {
                if (m.output(q, a) == b) col[q] = m.next(q, a);
            }
        }
        if (!is_permutation_of(col, m.num_states())) return false;
    }
    return true;
}

inline bool is_ri(const MealyMachine& m) { return is_reversible(m) && is_invertible(m); }

// Coupled actions ----------------------------------------------------------------

/// Per-state inverse output tables, used to run signed states.
class ActionTables {
public:
    explicit ActionTables(const MealyMachine& m) : m_(&m), invertible_(is_invertible(m)) {
        if (invertible_) {
            const std::size_t na = m.num_letters();
            inv_out_.resize(m.num_states() * na);
            for (State q = 0; q < m.num_states(); ++q) {
                for (Letter a = 0; a < na; ++a) inv_out_[q * na + m.output(q, a)] = a;
            }
        }
    }

    bool invertible() const noexcept { return invertible_; }
    const MealyMachine& machine() const noexcept { return *m_; }

    /// One edge of A or A^-1: q^-1 --a|b--> p^-1 whenever q --b|a--> p.
    std::pair<SignedLetter, Letter> step(SignedLetter q, Letter a) const {
        if (!q.inverted) return {pos(m_->next(q.base, a)), m_->output(q.base, a)};
        const Letter b = inv_out_[q.base * m_->num_letters() + a];
        return {neg(m_->next(q.base, b)), b};
    }

    void check(const StateWord& w) const {
        for (const auto& q : w) {
            if (q.base >= m_->num_states()) throw Error(ErrorCode::UnknownSymbol, "state index out of range");
            if (q.inverted && !invertible_) {
                throw Error(ErrorCode::SignedStateOnNonInvertible,
                            "state '" + m_->state_name(q.base) + "^-1' on a non-invertible machine");
            }
        }
    }

    /// Feeds one letter through the state word (rightmost first), updating the
    /// word in place to its section; returns the output letter.
    Letter feed(StateWord& w, Letter a) const {
        for (std::size_t i = w.size(); i-- > 0;) {
            auto [next, out] = step(w[i], a);
            w[i] = next;
            a = out;
        }
        return a;
    }

private:
    const MealyMachine* m_;
    bool invertible_;
    std::vector<Letter> inv_out_;
};

struct ActionResult {
    Word output;
    StateWord section;
};

/// Runs the state word on u; returns both q o u and q . u.
inline ActionResult act(const MealyMachine& m, const StateWord& q, const Word& u) {
    ActionTables t(m);
    t.check(q);
    ActionResult r{{}, q};
    r.output.reserve(u.size());
    for (Letter a : u) {
        if (a >= m.num_letters()) throw Error(ErrorCode::UnknownSymbol, "letter index out of range");
        r.output.push_back(t.feed(r.section, a));
    }
    return r;
}

inline Word act_output(const MealyMachine& m, const StateWord& q, const Word& u) { return act(m, q, u).output; }

inline StateWord act_transition(const MealyMachine& m, const StateWord& q, const Word& u) {
    return act(m, q, u).section;
}

/// Image of u under the group element labelled by a path word: the first
/// letter of the path is applied first.
inline Word act_path(const MealyMachine& m, const SignedWord& path, const Word& u) {
    return act_output(m, path_to_state_word(path), u);
}

// Exact equality of induced maps ------------------------------------------------

namespace detail {

inline std::vector<std::uint32_t> encode_state_word(const StateWord& w) {
    std::vector<std::uint32_t> key;
    key.reserve(w.size());
    for (const auto& q : w) key.push_back(q.base * 2 + (q.inverted ? 1U : 0U));
    return key;
}

/// Explicit transducer reachable from a start state word: states are the
/// distinct sections met while reading arbitrary input.
struct ReachableTransducer {
    std::size_t letters = 0;
    std::vector<StateWord> states;
    std::vector<std::uint32_t> next;
    std::vector<Letter> output;
};

inline ReachableTransducer explore(const ActionTables& t, const StateWord& start, std::size_t budget) {
    const std::size_t na = t.machine().num_letters();
    ReachableTransducer r;
    r.letters = na;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, WordHash> index;
    auto intern = [&](const StateWord& w) -> std::uint32_t {
        auto [it, fresh] = index.emplace(encode_state_word(w), static_cast<std::uint32_t>(r.states.size()));
        if (fresh) {
            if (r.states.size() >= budget) throw BudgetExceeded("reachable state words", budget);
            r.states.push_back(w);
        }
        return it->second;
    };
    intern(start);
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        for (Letter a = 0; a < na; ++a) {
            StateWord w = r.states[i];
            const Letter b = t.feed(w, a);
            const std::uint32_t j = intern(w);
            r.next.push_back(j);
            r.output.push_back(b);
        }
    }
    return r;
}

}  // namespace detail

/// Moore partition refinement; returns the block of every state of `m`.
inline std::vector<std::uint32_t> equivalence_classes(std::size_t num_states, std::size_t num_letters,
                                                      const std::vector<std::uint32_t>& next,
                                                      const std::vector<Letter>& output) {
    std::vector<std::uint32_t> block(num_states, 0);
    std::size_t num_blocks = 0;
    {
        std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, WordHash> sig;
        for (std::size_t q = 0; q < num_states; ++q) {
            std::vector<std::uint32_t> row(output.begin() + q * num_letters, output.begin() + (q + 1) * num_letters);
            auto [it, fresh] = sig.emplace(std::move(row), static_cast<std::uint32_t>(sig.size()));
            block[q] = it->second;
        }
        num_blocks = sig.size();
    }
    while (true) {
        std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, WordHash> sig;
        std::vector<std::uint32_t> refined(num_states);
        for (std::size_t q = 0; q < num_states; ++q) {
            std::vector<std::uint32_t> key;
            key.reserve(num_letters + 1);
            key.push_back(block[q]);
            for (std::size_t a = 0; a < num_letters; ++a) key.push_back(block[next[q * num_letters + a]]);
            auto [it, fresh] = sig.emplace(std::move(key), static_cast<std::uint32_t>(sig.size()));
            refined[q] = it->second;
        }
        block = std::move(refined);
        if (sig.size() == num_blocks) break;
        num_blocks = sig.size();
    }
    return block;
}

/**
 * Decides whether two state words induce the same map on A*.
 *
 * Hopcroft-Karp style bisimulation: pairs of sections reachable under a common
 * input are merged with union-find, and the first pair whose outputs disagree
 * on some letter refutes equality. The search space is finite (sections keep
 * their length), so the answer is exact.
 */
inline bool states_equivalent(const MealyMachine& m, const StateWord& u, const StateWord& v,
                              std::size_t budget = Budget::defaults().power_states) {
    ActionTables t(m);
    t.check(u);
    t.check(v);
    const std::size_t na = m.num_letters();

    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, WordHash> ids;
    std::vector<StateWord> words;
    std::vector<std::uint32_t> parent;
    auto id_of = [&](const StateWord& w) {
        auto [it, fresh] = ids.emplace(detail::encode_state_word(w), static_cast<std::uint32_t>(words.size()));
        if (fresh) {
            if (words.size() >= budget) throw BudgetExceeded("bisimulation state words", budget);
            words.push_back(w);
            parent.push_back(it->second);
        }
        return it->second;
    };
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{id_of(u), id_of(v)}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        const auto rx = find(x), ry = find(y);
        if (rx == ry) continue;
        parent[rx] = ry;
        for (Letter a = 0; a < na; ++a) {
            StateWord wx = words[x], wy = words[y];
            if (t.feed(wx, a) != t.feed(wy, a)) return false;
            const auto nx = id_of(wx);
            const auto ny = id_of(wy);
            work.emplace_back(nx, ny);
        }
    }
    return true;
}

/**
 * Canonical form of the map induced by a state word: the minimal transducer
 * reachable from it, renumbered by breadth-first search from the start state
 * with letters in order. Two state words induce the same map iff their
 * signatures are equal.
 */
struct Signature {
    std::vector<std::uint32_t> data;  // [num_states, then (next, output) per state and letter]
    bool operator==(const Signature&) const = default;
    std::size_t num_states() const { return data.empty() ? 0 : data[0]; }
};

struct SignatureHash {
    std::size_t operator()(const Signature& s) const noexcept { return WordHash{}(s.data); }
};

inline Signature canonical_signature(const MealyMachine& m, const StateWord& w,
                                     std::size_t budget = Budget::defaults().power_states) {
    ActionTables t(m);
    t.check(w);
    const auto r = detail::explore(t, w, budget);
    const std::size_t na = r.letters;
    const auto block = equivalence_classes(r.states.size(), na, r.next, r.output);

    std::unordered_map<std::uint32_t, std::uint32_t> order;
    std::vector<std::uint32_t> reps;  // representative explicit state per canonical number
    std::queue<std::uint32_t> bfs;
    order[block[0]] = 0;
    reps.push_back(0);
    bfs.push(0);
    while (!bfs.empty()) {
        const auto s = bfs.front();
        bfs.pop();
        for (Letter a = 0; a < na; ++a) {
            const auto target = r.next[s * na + a];
            if (order.emplace(block[target], static_cast<std::uint32_t>(reps.size())).second) {
                reps.push_back(target);
                bfs.push(target);
            }
        }
    }
    Signature sig;
    sig.data.push_back(static_cast<std::uint32_t>(reps.size()));
    for (auto s : reps) {
        for (Letter a = 0; a < na; ++a) {
            sig.data.push_back(order.at(block[r.next[s * na + a]]));
            sig.data.push_back(r.output[s * na + a]);
        }
    }
    return sig;
}

/// Quotient by equality of induced maps on single states. Each class keeps the
/// name of its first state in declaration order.
inline MealyMachine minimize(const MealyMachine& m) {
    const auto block = equivalence_classes(m.num_states(), m.num_letters(), m.next_table(), m.output_table());
    std::vector<std::int64_t> new_index(m.num_states(), -1);
    std::vector<std::uint32_t> block_to_new;
    std::unordered_map<std::uint32_t, std::uint32_t> seen;
    std::vector<std::string> names;
    std::vector<State> reps;
    for (State q = 0; q < m.num_states(); ++q) {
        if (seen.emplace(block[q], static_cast<std::uint32_t>(names.size())).second) {
            names.push_back(m.state_name(q));
            reps.push_back(q);
        }
    }
    const std::size_t na = m.num_letters();
    std::vector<State> next;
    std::vector<Letter> out;
    for (State r : reps) {
        for (Letter a = 0; a < na; ++a) {
            next.push_back(seen.at(block[m.next(r, a)]));
            out.push_back(m.output(r, a));
        }
    }
    return MealyMachine(std::move(names), m.alphabet(), std::move(next), std::move(out));
}

}  // namespace mealyforge
