#pragma once

/**
 * @file constructions.hpp
 * @brief Machine-to-machine constructions: dual, inverse, union, enrichment,
 * products and powers.
 *
 * Product convention: in `product(m1, m2)` the first machine reads the input
 * and the second reads the first one's output. The product state `(q, q')`
 * therefore acts like the state word `q' q` (rightmost first). Product state
 * names are `"q.q'"`; powers are left-associated, `power(m, k) = power(m, k-1) m`,
 * so a power state `q1.q2...qk` has q1 reading first.
 */

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "machine.hpp"
#include "words.hpp"

namespace mealyforge {

/// Swaps the roles of states and letters: `p --a|b--> q` becomes `a --p|q--> b`.
/// Defined for every machine: the result is always deterministic and complete.
inline MealyMachine dual(const MealyMachine& m) {
    const std::size_t nq = m.num_states();
    const std::size_t na = m.num_letters();
    std::vector<State> next(na * nq);
    std::vector<Letter> out(na * nq);
    for (State q = 0; q < nq; ++q) {
        for (Letter a = 0; a < na; ++a) {
            next[a * nq + q] = m.output(q, a);
            out[a * nq + q] = m.next(q, a);
        }
    }
    return MealyMachine(m.alphabet().symbols(), Alphabet(m.state_names()), std::move(next), std::move(out));
}

/// `q^-1 --a|b--> p^-1` whenever `q --b|a--> p`.
inline MealyMachine inverse_machine(const MealyMachine& m) {
    if (!is_invertible(m)) throw Error(ErrorCode::NotInvertible, "inverse of a non-invertible machine");
    const std::size_t na = m.num_letters();
    std::vector<std::string> names;
    for (const auto& n : m.state_names()) names.push_back(inverse_name(n));
    std::vector<State> next(m.num_states() * na);
    std::vector<Letter> out(m.num_states() * na);
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter b = 0; b < na; ++b) {
            const Letter a = m.output(q, b);
            next[q * na + a] = m.next(q, b);
            out[q * na + a] = b;
        }
    }
    return MealyMachine(std::move(names), m.alphabet(), std::move(next), std::move(out));
}

/// States of m1 followed by states of m2. Names are kept when they do not
/// collide; otherwise every name is prefixed with "L." or "R.".
inline MealyMachine disjoint_union(const MealyMachine& m1, const MealyMachine& m2) {
    if (!(m1.alphabet() == m2.alphabet())) throw Error(ErrorCode::AlphabetMismatch, "disjoint union");
    bool collide = false;
    for (const auto& n : m2.state_names()) collide = collide || m1.find_state(n).has_value();
    std::vector<std::string> names;
    for (const auto& n : m1.state_names()) names.push_back(collide ? "L." + n : n);
    for (const auto& n : m2.state_names()) names.push_back(collide ? "R." + n : n);

    std::vector<State> next = m1.next_table();
    std::vector<Letter> out = m1.output_table();
    const auto shift = static_cast<State>(m1.num_states());
    for (State s : m2.next_table()) next.push_back(s + shift);
    out.insert(out.end(), m2.output_table().begin(), m2.output_table().end());
    return MealyMachine(std::move(names), m1.alphabet(), std::move(next), std::move(out));
}

// Enrichment -------------------------------------------------------------------

/// Signed alphabet names: the positive names, then the same names with "^-1".
inline Alphabet signed_alphabet(const Alphabet& a) {
    std::vector<std::string> names = a.symbols();
    for (const auto& n : a.symbols()) names.push_back(inverse_name(n));
    return Alphabet(std::move(names));
}

/**
 * A reversible machine over a signed alphabet, closed under the edge
 * involution `q --a|b--> p  <=>  p --a^-1|b^-1--> q`. Letter `x` of the base
 * alphabet has code `x`, its inverse has code `x + base_letters`.
 */
struct EnrichedMachine {
    MealyMachine machine;
    std::size_t base_letters = 0;

    std::size_t num_states() const { return machine.num_states(); }
    std::size_t num_letters() const { return machine.num_letters(); }
    State next(State q, SignedLetter a) const { return machine.next(q, a.encode(base_letters)); }
    SignedLetter output(State q, SignedLetter a) const {
        return SignedLetter::decode(machine.output(q, a.encode(base_letters)), base_letters);
    }

    bool operator==(const EnrichedMachine&) const = default;
};

inline EnrichedMachine enrich(const MealyMachine& m) {
    if (!is_reversible(m)) throw Error(ErrorCode::NotReversible, "enrichment needs a reversible machine");
    const std::size_t n = m.num_letters();
    const std::size_t n2 = 2 * n;
    std::vector<State> next(m.num_states() * n2);
    std::vector<Letter> out(m.num_states() * n2);
    for (State q = 0; q < m.num_states(); ++q) {
        for (Letter a = 0; a < n; ++a) {
            const State p = m.next(q, a);
            const Letter b = m.output(q, a);
            next[q * n2 + a] = p;
            out[q * n2 + a] = b;
            next[p * n2 + a + n] = q;
            out[p * n2 + a + n] = static_cast<Letter>(b + n);
        }
    }
    return {MealyMachine(m.state_names(), signed_alphabet(m.alphabet()), std::move(next), std::move(out)), n};
}

/// The positive-letter part of an enriched machine.
inline MealyMachine positive_part(const EnrichedMachine& e) {
    const std::size_t n = e.base_letters;
    const std::size_t n2 = e.num_letters();
    std::vector<std::string> letters(e.machine.alphabet().symbols().begin(),
                                     e.machine.alphabet().symbols().begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<State> next;
    std::vector<Letter> out;
    for (State q = 0; q < e.num_states(); ++q) {
        for (Letter a = 0; a < n; ++a) {
            next.push_back(e.machine.next_table()[q * n2 + a]);
            out.push_back(e.machine.output_table()[q * n2 + a]);
        }
    }
    return MealyMachine(e.machine.state_names(), Alphabet(std::move(letters)), std::move(next), std::move(out));
}

// Products and powers --------------------------------------------------------------

inline std::string product_name(const std::string& a, const std::string& b) { return a + "." + b; }

/// `(q,q') --a|b--> (p,p')` whenever `q --a|c--> p` in m1 and `q' --c|b--> p'` in m2.
/// State `(q,q')` has index `q * |Q2| + q'`.
inline MealyMachine product(const MealyMachine& m1, const MealyMachine& m2,
                            std::size_t budget = Budget::defaults().power_states) {
    if (!(m1.alphabet() == m2.alphabet())) throw Error(ErrorCode::AlphabetMismatch, "product");
    const std::size_t n1 = m1.num_states(), n2 = m2.num_states(), na = m1.num_letters();
    if (n2 != 0 && n1 > budget / n2) throw BudgetExceeded("product states", budget);
    std::vector<std::string> names;
    names.reserve(n1 * n2);
    std::vector<State> next(n1 * n2 * na);
    std::vector<Letter> out(n1 * n2 * na);
    for (State q = 0; q < n1; ++q) {
        for (State r = 0; r < n2; ++r) {
            names.push_back(product_name(m1.state_name(q), m2.state_name(r)));
            const std::size_t row = (q * n2 + r) * na;
            for (Letter a = 0; a < na; ++a) {
                const Letter c = m1.output(q, a);
                next[row + a] = static_cast<State>(m1.next(q, a) * n2 + m2.next(r, c));
                out[row + a] = m2.output(r, c);
            }
        }
    }
    return MealyMachine(std::move(names), m1.alphabet(), std::move(next), std::move(out));
}

inline EnrichedMachine product(const EnrichedMachine& m1, const EnrichedMachine& m2,
                               std::size_t budget = Budget::defaults().power_states) {
    if (m1.base_letters != m2.base_letters) throw Error(ErrorCode::AlphabetMismatch, "enriched product");
    return {product(m1.machine, m2.machine, budget), m1.base_letters};
}

/**
 * The k-th power, stepped lazily on tuples of base states. A tuple lists the
 * factors in reading order: `t[0]` reads the input first. Its index is the
 * mixed-radix number with `t[0]` most significant, which matches the state
 * numbering of the materialized iterated product.
 */
class PowerMachine {
public:
    PowerMachine(MealyMachine base, std::size_t k) : base_(std::move(base)), k_(k) {
        if (k == 0) throw Error(ErrorCode::InvalidArgument, "power exponent must be at least 1");
    }

    const MealyMachine& base() const noexcept { return base_; }
    std::size_t exponent() const noexcept { return k_; }

    /// Reads one letter through the tuple, updating it in place; returns the output.
    Letter step(std::vector<State>& tuple, Letter a) const {
        for (auto& q : tuple) {
            const Letter b = base_.output(q, a);
            q = base_.next(q, a);
            a = b;
        }
        return a;
    }

    std::size_t index(const std::vector<State>& tuple) const {
        std::size_t idx = 0;
        for (State q : tuple) idx = idx * base_.num_states() + q;
        return idx;
    }

    std::vector<State> tuple(std::size_t idx) const {
        std::vector<State> t(k_);
        for (std::size_t i = k_; i-- > 0;) {
            t[i] = static_cast<State>(idx % base_.num_states());
            idx /= base_.num_states();
        }
        return t;
    }

    std::string name(const std::vector<State>& tuple) const {
        std::string s;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i > 0) s += '.';
            s += base_.state_name(tuple[i]);
        }
        return s;
    }

    /// The tuple as a state word of the base machine (rightmost acts first).
    StateWord state_word(const std::vector<State>& tuple) const {
        StateWord w;
        for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) w.push_back(pos(*it));
        return w;
    }

    std::size_t num_states(std::size_t budget = Budget::defaults().power_states) const {
        return checked_pow(base_.num_states(), k_, budget, "power states");
    }

    MealyMachine materialize(std::size_t budget = Budget::defaults().power_states) const {
        num_states(budget);
        MealyMachine m = base_;
        for (std::size_t i = 1; i < k_; ++i) m = product(m, base_, budget);
        return m;
    }

private:
    MealyMachine base_;
    std::size_t k_;
};

inline PowerMachine power(const MealyMachine& m, std::size_t k) { return PowerMachine(m, k); }

inline EnrichedMachine power(const EnrichedMachine& m, std::size_t k,
                             std::size_t budget = Budget::defaults().power_states) {
    return {PowerMachine(m.machine, k).materialize(budget), m.base_letters};
}

/// S_0 = enrich(dual(m)), S_i = S_{i-1}^2.
inline EnrichedMachine symmetric_power(const MealyMachine& m, std::size_t j,
                                       std::size_t budget = Budget::defaults().power_states) {
    if (!is_ri(m)) throw Error(ErrorCode::NotRI, "symmetric powers need a reversible invertible machine");
    EnrichedMachine s = enrich(dual(m));
    for (std::size_t i = 0; i < j; ++i) s = product(s, s, budget);
    return s;
}

/// Compares enrich(m1 m2) with enrich(m1) enrich(m2), names included.
inline bool inverse_of_product_check(const MealyMachine& m1, const MealyMachine& m2) {
    if (!is_reversible(m1) || !is_reversible(m2)) {
        throw Error(ErrorCode::NotReversible, "both factors must be reversible");
    }
    return enrich(product(m1, m2)) == product(enrich(m1), enrich(m2));
}

/// True when every letter occurs as an output of m1.
inline bool outputs_cover_alphabet(const MealyMachine& m) {
    std::vector<char> hit(m.num_letters(), 0);
    for (Letter b : m.output_table()) hit[b] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

/**
 * Checks "m1 m2 reversible iff m1 and m2 reversible". The statement is only
 * claimed when every letter is an output of m1; without that condition the
 * check is skipped and nullopt is returned.
 */
inline std::optional<bool> reversible_product_converse(const MealyMachine& m1, const MealyMachine& m2) {
    if (!outputs_cover_alphabet(m1)) return std::nullopt;
    return is_reversible(product(m1, m2)) == (is_reversible(m1) && is_reversible(m2));
}

}  // namespace mealyforge
