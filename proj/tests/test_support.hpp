#pragma once

// Shared fixtures for the test suite: the machine corpus, random machine
// generators and brute-force oracles that do not go through the library's
// power / dual / level-graph code.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <mealyforge/mealyforge.hpp>

namespace mftest {

using namespace mealyforge;

inline unsigned& seed() {
    static unsigned s = 20240611;
    return s;
}

inline std::mt19937 rng_for(unsigned salt) { return std::mt19937(seed() * 2654435761u + salt); }

// Corpus -------------------------------------------------------------------------------------

inline MealyMachine odometer() {
    return parse_machine("states: q e\nalphabet: 0 1\nq 0 -> e 1\nq 1 -> q 0\ne 0 -> e 0\ne 1 -> e 1\n");
}

inline MealyMachine grigorchuk() {
    return parse_machine(
        "states: a b c d e\nalphabet: 0 1\n"
        "a 0 -> e 1\na 1 -> e 0\n"
        "b 0 -> a 0\nb 1 -> c 1\n"
        "c 0 -> a 0\nc 1 -> d 1\n"
        "d 0 -> e 0\nd 1 -> b 1\n"
        "e 0 -> e 0\ne 1 -> e 1\n");
}

inline MealyMachine trivial_machine() { return parse_machine("states: e\nalphabet: 0 1\ne 0 -> e 0\ne 1 -> e 1\n"); }

inline MealyMachine lamplighter() {
    return parse_machine("states: a b\nalphabet: 0 1\na 0 -> a 1\na 1 -> b 0\nb 0 -> a 0\nb 1 -> b 1\n");
}

inline MealyMachine aleshin() {
    return parse_machine("states: a b c\nalphabet: 0 1\na 0 -> c 1\na 1 -> b 0\nb 0 -> b 1\nb 1 -> c 0\nc 0 -> a 0\nc 1 -> a 1\n");
}

struct Named {
    std::string name;
    MealyMachine machine;
};

/// Invertible machines used by the corpus-wide checks.
inline std::vector<Named> corpus() {
    const auto z2 = cyclic_group(2);
    const auto z3 = cyclic_group(3);
    return {
        {"odometer", odometer()},
        {"grigorchuk", grigorchuk()},
        {"trivial", trivial_machine()},
        {"lamplighter", lamplighter()},
        {"aleshin", aleshin()},
        {"cayley_z2", cayley_machine(z2)},
        {"cayley_z3", cayley_machine(z3)},
        {"dual_cayley_z2", dual(cayley_machine(z2))},
        {"dual_identity_z2", dual(identity_machine_of(z2))},
        {"dual_identity_z3", dual(identity_machine_of(z3))},
        {"palindrome_z3", palindrome_machine(z3)},
        {"dual_palindrome_z3", dual(palindrome_machine(z3))},
    };
}

// Random machines -------------------------------------------------------------------------------

enum class Kind { Any, Invertible, Reversible, Bireversible };

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline std::vector<std::uint32_t> random_perm(std::mt19937& rng, std::size_t n) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline MealyMachine random_machine_sized(std::mt19937& rng, Kind kind, std::size_t nq, std::size_t na) {
    std::uniform_int_distribution<std::uint32_t> qd(0, static_cast<std::uint32_t>(nq - 1));
    std::uniform_int_distribution<std::uint32_t> ad(0, static_cast<std::uint32_t>(na - 1));
    for (int attempt = 0;; ++attempt) {
        std::vector<State> next(nq * na);
        std::vector<Letter> out(nq * na);
        if (kind == Kind::Reversible || kind == Kind::Bireversible) {
            for (Letter a = 0; a < na; ++a) {
                const auto p = random_perm(rng, nq);
                for (State q = 0; q < nq; ++q) next[q * na + a] = p[q];
            }
        } else {
            for (auto& x : next) x = qd(rng);
        }
        if (kind == Kind::Any) {
            for (auto& x : out) x = ad(rng);
        } else {
            for (State q = 0; q < nq; ++q) {
                const auto p = random_perm(rng, na);
                for (Letter a = 0; a < na; ++a) out[q * na + a] = p[a];
            }
        }
        MealyMachine m(names("q", nq), Alphabet(names("x", na)), next, out);
        if (kind != Kind::Bireversible || is_bireversible(m)) return m;
        if (attempt > 200) {
            // Output letter fixed per input: bireversible whenever transitions are permutations.
            for (State q = 0; q < nq; ++q) {
                for (Letter a = 0; a < na; ++a) out[q * na + a] = a;
            }
            return MealyMachine(names("q", nq), Alphabet(names("x", na)), next, out);
        }
    }
}

inline MealyMachine random_machine(std::mt19937& rng, Kind kind, std::size_t max_states = 4, std::size_t max_letters = 4) {
    std::uniform_int_distribution<std::size_t> qs(1, max_states), as(1, max_letters);
    const std::size_t nq = qs(rng);
    const std::size_t na = as(rng);
    return random_machine_sized(rng, kind, nq, na);
}

// Oracles ----------------------------------------------------------------------------------------

/// Output of a single state, straight from the transition tables.
inline Word run_state(const MealyMachine& m, State q, const Word& u) {
    Word out;
    for (Letter a : u) {
        out.push_back(m.output(q, a));
        q = m.next(q, a);
    }
    return out;
}

/// Output of the inverse of state q of an invertible machine.
inline Word run_inverse_state(const MealyMachine& m, State q, const Word& u) {
    Word out;
    for (Letter b : u) {
        Letter a = 0;
        while (m.output(q, a) != b) ++a;
        out.push_back(a);
        q = m.next(q, a);
    }
    return out;
}

/// Path word read left to right: the first letter acts first.
inline Word run_path(const MealyMachine& m, const SignedWord& path, Word u) {
    for (const auto& g : path) u = g.inverted ? run_inverse_state(m, g.base, u) : run_state(m, g.base, u);
    return u;
}

inline std::vector<Word> all_words(std::size_t na, std::size_t k) {
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Word> next;
        for (const auto& w : out) {
            for (Letter a = 0; a < na; ++a) {
                next.push_back(w);
                next.back().push_back(a);
            }
        }
        out = std::move(next);
    }
    return out;
}

using Perm = std::vector<std::uint32_t>;

/// The permutation of A^k induced by each positive generator.
inline std::vector<Perm> generator_perms(const MealyMachine& m, std::size_t k) {
    const auto words = all_words(m.num_letters(), k);
    std::map<Word, std::uint32_t> index;
    for (std::uint32_t i = 0; i < words.size(); ++i) index[words[i]] = i;
    std::vector<Perm> gens;
    for (State q = 0; q < m.num_states(); ++q) {
        Perm p(words.size());
        for (std::uint32_t i = 0; i < words.size(); ++i) p[i] = index.at(run_state(m, q, words[i]));
        gens.push_back(std::move(p));
    }
    return gens;
}

/// Order of the permutation group generated by the level-k actions.
inline std::size_t group_order_oracle(const MealyMachine& m, std::size_t k) {
    const auto gens = generator_perms(m, k);
    Perm id(gens.front().size());
    std::iota(id.begin(), id.end(), 0);
    std::set<Perm> seen{id};
    std::vector<Perm> todo{id};
    while (!todo.empty()) {
        const Perm p = todo.back();
        todo.pop_back();
        for (const auto& g : gens) {
            Perm r(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) r[i] = g[p[i]];
            if (seen.insert(r).second) todo.push_back(std::move(r));
        }
    }
    return seen.size();
}

/// Orbit sizes of the level-k action, via union-find over generator edges.
inline std::multiset<std::size_t> orbit_sizes_oracle(const MealyMachine& m, std::size_t k) {
    const auto gens = generator_perms(m, k);
    const std::size_t n = gens.front().size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : gens) {
        for (std::size_t i = 0; i < n; ++i) parent[find(i)] = find(g[i]);
    }
    std::map<std::size_t, std::size_t> count;
    for (std::size_t i = 0; i < n; ++i) ++count[find(i)];
    std::multiset<std::size_t> sizes;
    for (const auto& [root, c] : count) sizes.insert(c);
    return sizes;
}

inline SignedWord signed_from_codes(const Word& codes, std::size_t n) {
    SignedWord w;
    for (auto c : codes) w.push_back(SignedLetter::decode(c, n));
    return w;
}

/// Reduced words of length at most max_len in the subgroup generated by `gens`,
/// from products of at most max_factors generators and inverses.
inline std::set<SignedWord> subgroup_words_oracle(const std::vector<SignedWord>& gens, std::size_t max_len,
                                                  std::size_t max_factors) {
    std::vector<SignedWord> letters;
    for (const auto& g : gens) {
        letters.push_back(g);
        letters.push_back(inverse(g));
    }
    std::set<SignedWord> frontier{SignedWord{}}, found{SignedWord{}};
    for (std::size_t f = 0; f < max_factors; ++f) {
        std::set<SignedWord> next;
        for (const auto& w : frontier) {
            for (const auto& l : letters) {
                SignedWord r = reduce(concat(w, l));
                if (found.insert(r).second) next.insert(r);
            }
        }
        frontier = std::move(next);
    }
    std::set<SignedWord> out;
    for (const auto& w : found) {
        if (w.size() <= max_len) out.insert(w);
    }
    return out;
}

}  // namespace mftest
