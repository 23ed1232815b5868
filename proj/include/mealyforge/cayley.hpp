#pragma once

/**
 * @file cayley.hpp
 * @brief Finite groups given by tables, their Cayley-type machines, the
 * relation ledger of the dual Cayley machine and related diagnostics.
 *
 * Words over the signed alphabet of a group distinguish a formal inverse
 * `(g)^-1` (signed letter, inverted) from the group inverse `(g^-1)` (the
 * positive letter of the inverse element).
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "error.hpp"
#include "levels.hpp"
#include "machine.hpp"
#include "words.hpp"

namespace mealyforge {

class GroupTable {
public:
    GroupTable() = default;
    GroupTable(Alphabet elements, std::vector<Letter> table, std::vector<Letter> inverses)
        : elements_(std::move(elements)), table_(std::move(table)), inverse_(std::move(inverses)) {}

    std::size_t order() const noexcept { return elements_.size(); }
    const Alphabet& elements() const noexcept { return elements_; }
    const std::string& name(Letter g) const { return elements_.name(g); }
    static constexpr Letter identity() { return 0; }
    Letter mul(Letter g, Letter h) const { return table_[g * order() + h]; }
    Letter inverse(Letter g) const { return inverse_[g]; }

    /// Value of a signed word: the product of u_i^{e_i}.
    Letter evaluate(const SignedWord& w) const {
        Letter acc = identity();
        for (const auto& x : w) acc = mul(acc, x.inverted ? inverse(x.base) : x.base);
        return acc;
    }

private:
    Alphabet elements_;
    std::vector<Letter> table_;
    std::vector<Letter> inverse_;
};

struct GroupIssue {
    ErrorCode kind;
    std::string detail;
    std::vector<Letter> witness;  // triple for associativity, element for inverses
};

/// Every failed group axiom, for a table whose first element must be the identity.
inline std::vector<GroupIssue> group_axiom_issues(const std::vector<std::string>& names,
                                                  const std::vector<Letter>& table) {
    std::vector<GroupIssue> issues;
    const std::size_t n = names.size();
    if (n == 0 || table.size() != n * n) {
        issues.push_back({ErrorCode::InvalidArgument, "table must be square over the elements", {}});
        return issues;
    }
    for (Letter v : table) {
        if (v >= n) {
            issues.push_back({ErrorCode::InvalidArgument, "table entry out of range", {}});
            return issues;
        }
    }
    auto mul = [&](Letter a, Letter b) { return table[a * n + b]; };
    for (Letter g = 0; g < n; ++g) {
        if (mul(0, g) != g || mul(g, 0) != g) {
            issues.push_back({ErrorCode::NoIdentity, "first element '" + names[0] + "' is not an identity", {g}});
            break;
        }
    }
    for (Letter a = 0; a < n && issues.size() < 16; ++a) {
        for (Letter b = 0; b < n; ++b) {
            for (Letter c = 0; c < n; ++c) {
                if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
                    issues.push_back({ErrorCode::NotAssociative,
                                      "(" + names[a] + "," + names[b] + "," + names[c] + ")", {a, b, c}});
                    goto next_a;
                }
            }
        }
    next_a:;
    }
    for (Letter g = 0; g < n; ++g) {
        bool found = false;
        for (Letter h = 0; h < n && !found; ++h) found = mul(g, h) == 0 && mul(h, g) == 0;
        if (!found) issues.push_back({ErrorCode::NoInverse, "'" + names[g] + "' has no inverse", {g}});
    }
    return issues;
}

inline GroupTable group_from_table(const std::vector<std::string>& names, const std::vector<Letter>& table,
                                   std::size_t max_order = Budget::defaults().group_size) {
    if (names.size() > max_order) throw BudgetExceeded("group order", max_order);
    const auto issues = group_axiom_issues(names, table);
    if (!issues.empty()) {
        std::string msg;
        for (const auto& i : issues) msg += (msg.empty() ? "" : "; ") + std::string(to_string(i.kind)) + " " + i.detail;
        throw Error(issues.front().kind, msg);
    }
    const std::size_t n = names.size();
    std::vector<Letter> inv(n);
    for (Letter g = 0; g < n; ++g) {
        for (Letter h = 0; h < n; ++h) {
            if (table[g * n + h] == 0) inv[g] = h;
        }
    }
    return GroupTable(Alphabet(names), table, std::move(inv));
}

/// The cyclic group Z_n with elements e, a, a2, ... (a^i written "a<i>").
inline GroupTable cyclic_group(std::size_t n) {
    std::vector<std::string> names{"e"};
    for (std::size_t i = 1; i < n; ++i) names.push_back(i == 1 ? "a" : "a" + std::to_string(i));
    std::vector<Letter> table(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) table[i * n + j] = static_cast<Letter>((i + j) % n);
    }
    return group_from_table(names, table, n);
}

// Cayley-type machines ----------------------------------------------------------------------

/// `g --x|phi(x)--> gx` over states and letters G.
inline MealyMachine phi_machine(const GroupTable& g, const std::vector<Letter>& phi) {
    const std::size_t n = g.order();
    if (phi.size() != n) throw Error(ErrorCode::InvalidArgument, "phi must be defined on every element");
    std::vector<State> next(n * n);
    std::vector<Letter> out(n * n);
    for (Letter s = 0; s < n; ++s) {
        for (Letter x = 0; x < n; ++x) {
            if (phi[x] >= n) throw Error(ErrorCode::InvalidArgument, "phi value out of range");
            next[s * n + x] = g.mul(s, x);
            out[s * n + x] = phi[x];
        }
    }
    return MealyMachine(g.elements().symbols(), g.elements(), std::move(next), std::move(out));
}

/// `g --x|gx--> gx`.
inline MealyMachine cayley_machine(const GroupTable& g) {
    const std::size_t n = g.order();
    std::vector<State> next(n * n);
    std::vector<Letter> out(n * n);
    for (Letter s = 0; s < n; ++s) {
        for (Letter x = 0; x < n; ++x) {
            next[s * n + x] = g.mul(s, x);
            out[s * n + x] = g.mul(s, x);
        }
    }
    return MealyMachine(g.elements().symbols(), g.elements(), std::move(next), std::move(out));
}

/// `g --x|x^-1--> gx`.
inline MealyMachine palindrome_machine(const GroupTable& g) {
    std::vector<Letter> phi(g.order());
    for (Letter x = 0; x < g.order(); ++x) phi[x] = g.inverse(x);
    return phi_machine(g, phi);
}

/// `g --x|x--> gx`.
inline MealyMachine identity_machine_of(const GroupTable& g) {
    std::vector<Letter> phi(g.order());
    for (Letter x = 0; x < g.order(); ++x) phi[x] = x;
    return phi_machine(g, phi);
}

/// (u1)(u2^-1)^-1 (u3)(u4^-1)^-1 ...
inline SignedWord alternating_map(const GroupTable& g, const Word& u) {
    if (u.size() % 2 != 0) throw Error(ErrorCode::OddLength, "alternating map needs an even-length word");
    SignedWord out;
    for (std::size_t i = 0; i < u.size(); i += 2) {
        out.push_back(pos(u[i]));
        out.push_back(neg(g.inverse(u[i + 1])));
    }
    return out;
}

// Relation ledger -----------------------------------------------------------------------------

inline std::set<SignedWord> cyclic_shifts(const SignedWord& w) {
    std::set<SignedWord> out;
    for (std::size_t i = 0; i < std::max<std::size_t>(w.size(), 1); ++i) {
        SignedWord s(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
        s.insert(s.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        out.insert(std::move(s));
    }
    return out;
}

struct LedgerLevel {
    std::size_t length = 0;          // 2k
    std::set<SignedWord> relations;  // N_2k
    std::set<SignedWord> invariant;  // V_2k
    bool verified = true;            // every relation acts trivially at the check depth
};

struct RelationLedger {
    std::vector<LedgerLevel> levels;  // levels[k-1] holds length 2k
    std::size_t depth = 0;
};

/// Output of the enriched Cayley machine from state g on a signed word: g . u.
inline SignedWord enriched_output(const EnrichedMachine& c, State g, const SignedWord& u) {
    SignedWord out;
    for (const auto& x : u) {
        out.push_back(c.output(g, x));
        g = c.next(g, x);
    }
    return out;
}

/**
 * Relations of the group of dual(cayley_machine(G)) by length, built from
 * N_2 = {(x)(x)^-1, (x)^-1(x)} with
 *   V_2k     = { u : g . u in N_2k for every g },
 *   N_2(k+1) = cyclic shifts of (x)(y)^-1 v with v in V_2k and x y^-1 v^ = e.
 * Every produced relation is checked on the level graphs up to `depth`.
 */
inline RelationLedger relation_recursion(const GroupTable& g, std::size_t k_max, std::size_t depth,
                                         const Budget& budget = Budget::defaults()) {
    const std::size_t n = g.order();
    const MealyMachine cay = cayley_machine(g);
    const EnrichedMachine cminus = enrich(cay);
    const MealyMachine dual_cay = dual(cay);
    RelationLedger ledger;
    ledger.depth = depth;

    auto compute_invariant = [&](LedgerLevel& level) {
        const std::size_t count = checked_pow(2 * n, level.length, budget.enumeration, "ledger words");
        for (std::size_t idx = 0; idx < count; ++idx) {
            const Word codes = word_from_index(idx, level.length, 2 * n);
            SignedWord u;
            for (Letter c : codes) u.push_back(SignedLetter::decode(c, n));
            bool all = true;
            for (State s = 0; s < n && all; ++s) all = level.relations.count(enriched_output(cminus, s, u)) > 0;
            if (all) level.invariant.insert(std::move(u));
        }
    };
    auto verify = [&](LedgerLevel& level) {
        for (const auto& w : level.relations) {
            if (!is_group_relation_up_to(dual_cay, w, depth)) level.verified = false;
        }
    };

    if (k_max == 0) return ledger;
    LedgerLevel first;
    first.length = 2;
    for (Letter x = 0; x < n; ++x) {
        const auto shifts = cyclic_shifts({pos(x), neg(x)});
        first.relations.insert(shifts.begin(), shifts.end());
    }
    compute_invariant(first);
    verify(first);
    ledger.levels.push_back(std::move(first));

    for (std::size_t k = 1; k < k_max; ++k) {
        const LedgerLevel& prev = ledger.levels.back();
        LedgerLevel level;
        level.length = 2 * (k + 1);
        for (const auto& v : prev.invariant) {
            const Letter vhat = g.evaluate(v);
            for (Letter x = 0; x < n; ++x) {
                for (Letter y = 0; y < n; ++y) {
                    if (g.mul(g.mul(x, g.inverse(y)), vhat) != GroupTable::identity()) continue;
                    SignedWord w{pos(x), neg(y)};
                    w.insert(w.end(), v.begin(), v.end());
                    const auto shifts = cyclic_shifts(w);
                    level.relations.insert(shifts.begin(), shifts.end());
                }
            }
        }
        compute_invariant(level);
        verify(level);
        ledger.levels.push_back(std::move(level));
    }
    return ledger;
}

// Diagnostics ------------------------------------------------------------------------------------

struct PalindromicReport {
    std::size_t max_len = 0;
    std::size_t words = 0;
    std::size_t in_h = 0, in_h_reversed = 0, in_both = 0;
    bool palindromic_so_far = true;          // H and H^R agree on every enumerated word
    std::optional<SignedWord> counterexample;
    std::vector<std::size_t> level_orders;  // level groups of dual(palindrome_machine(G))
    bool orders_match_group = true;         // checked only when palindromic_so_far
};

/// Reduced words u up to max_len over the signed elements; u is in H when it
/// evaluates to the identity, and in H^R when its mirror does.
inline PalindromicReport palindromic_diagnostics(const GroupTable& g, std::size_t max_len, std::size_t levels = 3,
                                                 const Budget& budget = Budget::defaults()) {
    PalindromicReport r;
    r.max_len = max_len;
    for_each_reduced_word(g.order(), max_len, [&](const SignedWord& u) {
        if (++r.words > budget.enumeration) throw BudgetExceeded("palindromic words", budget.enumeration);
        const bool h = g.evaluate(u) == GroupTable::identity();
        const bool hr = g.evaluate(SignedWord(u.rbegin(), u.rend())) == GroupTable::identity();
        r.in_h += h ? 1 : 0;
        r.in_h_reversed += hr ? 1 : 0;
        r.in_both += (h && hr) ? 1 : 0;
        if (h != hr && r.palindromic_so_far) {
            r.palindromic_so_far = false;
            r.counterexample = u;
        }
    });
    const MealyMachine dp = dual(palindrome_machine(g));
    for (std::size_t k = 1; k <= levels; ++k) {
        r.level_orders.push_back(level_group(dp, k, budget).order);
        if (r.palindromic_so_far && r.level_orders.back() != g.order()) r.orders_match_group = false;
    }
    return r;
}

struct IdentityLevelReport {
    std::size_t level = 0;
    std::size_t order = 0;
    bool order_divides_group = false;
    bool stabilizers_trivial = false;
    bool pass() const { return order_divides_group && stabilizers_trivial; }
};

/// Level groups of dual(identity_machine_of(G)) and triviality of every level
/// word's stabilizer generators at `depth`.
inline std::vector<IdentityLevelReport> identity_machine_group_check(const GroupTable& g, std::size_t k_max,
                                                                     std::size_t depth = 6,
                                                                     const Budget& budget = Budget::defaults()) {
    const MealyMachine d = dual(identity_machine_of(g));
    std::vector<IdentityLevelReport> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        IdentityLevelReport r;
        r.level = k;
        r.order = level_group(d, k, budget).order;
        r.order_divides_group = g.order() % r.order == 0;
        r.stabilizers_trivial = true;
        const std::size_t count = checked_pow(d.num_letters(), k, budget.level_vertices, "level words");
        for (std::size_t idx = 0; idx < count && r.stabilizers_trivial; ++idx) {
            for (const auto& w : schreier_stabilizer_generators(d, word_from_index(idx, k, d.num_letters()), budget)) {
                if (!is_group_relation_up_to(d, w, depth)) {
                    r.stabilizers_trivial = false;
                    break;
                }
            }
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace mealyforge
