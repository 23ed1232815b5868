#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mealyforge;
using mftest::Kind;

namespace {

TEST(Constructions, DualOfOdometer) {
    const auto d = dual(mftest::odometer());
    EXPECT_EQ(d.state_names(), (std::vector<std::string>{"0", "1"}));
    EXPECT_EQ(d.alphabet().symbols(), (std::vector<std::string>{"q", "e"}));
    // q --0|1--> e  becomes  0 --q|e--> 1
    EXPECT_EQ(d.next(0, 0), 1u);
    EXPECT_EQ(d.output(0, 0), 1u);
    EXPECT_TRUE(is_reversible(d));
    EXPECT_FALSE(is_invertible(d));
}

TEST(Constructions, DualIsTotal) {
    auto rng = mftest::rng_for(21);
    for (int t = 0; t < 200; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Any);
        EXPECT_EQ(dual(dual(m)), m);
    }
}

TEST(ConstructionsProperty, DualInvolutionOnInvertible) {
    auto rng = mftest::rng_for(22);
    for (int t = 0; t < 500; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Invertible);
        EXPECT_EQ(dual(dual(m)), m);
    }
}

TEST(ConstructionsProperty, ProductActsAsComposition) {
    auto rng = mftest::rng_for(23);
    for (int t = 0; t < 150; ++t) {
        const auto m1 = mftest::random_machine(rng, Kind::Any, 3, 3);
        std::uniform_int_distribution<std::size_t> qs(1, 3);
        const auto m2 = mftest::random_machine_sized(rng, Kind::Any, qs(rng), m1.num_letters());
        const auto p = product(m1, m2);
        for (std::size_t len = 0; len <= 5; ++len) {
            for (const auto& u : mftest::all_words(m1.num_letters(), len)) {
                for (State q = 0; q < m1.num_states(); ++q) {
                    for (State r = 0; r < m2.num_states(); ++r) {
                        const State s = static_cast<State>(q * m2.num_states() + r);
                        // m1 reads first
                        EXPECT_EQ(mftest::run_state(p, s, u), mftest::run_state(m2, r, mftest::run_state(m1, q, u)));
                    }
                }
            }
        }
    }
}

TEST(ConstructionsProperty, PowerMatchesIteratedAction) {
    auto rng = mftest::rng_for(24);
    for (int t = 0; t < 60; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Any, 3, 3);
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto pw = power(m, k);
            const auto mat = pw.materialize();
            ASSERT_EQ(mat.num_states(), pw.num_states());
            for (std::size_t idx = 0; idx < mat.num_states(); ++idx) {
                const auto tuple = pw.tuple(idx);
                EXPECT_EQ(pw.index(tuple), idx);
                EXPECT_EQ(mat.state_name(static_cast<State>(idx)), pw.name(tuple));
                for (std::size_t len = 0; len <= 4; ++len) {
                    for (const auto& u : mftest::all_words(m.num_letters(), len)) {
                        Word expect = u;
                        for (State q : tuple) expect = mftest::run_state(m, q, expect);
                        EXPECT_EQ(mftest::run_state(mat, static_cast<State>(idx), u), expect);
                        EXPECT_EQ(act_output(m, pw.state_word(tuple), u), expect);
                        auto tup = tuple;
                        Word lazy;
                        for (Letter a : u) lazy.push_back(pw.step(tup, a));
                        EXPECT_EQ(lazy, expect);
                    }
                }
            }
        }
    }
}

TEST(Constructions, PowerBudget) {
    EXPECT_THROW(power(mftest::grigorchuk(), 12).materialize(1000), BudgetExceeded);
    EXPECT_THROW(power(mftest::odometer(), 0), Error);
}

TEST(Constructions, InverseMachine) {
    const auto odo = mftest::odometer();
    const auto inv = inverse_machine(odo);
    EXPECT_EQ(inv.state_names(), (std::vector<std::string>{"q^-1", "e^-1"}));
    for (const auto& u : mftest::all_words(2, 5)) {
        EXPECT_EQ(mftest::run_state(inv, 0, mftest::run_state(odo, 0, u)), u);
    }
    EXPECT_EQ(inverse_machine(inv), odo);
    const MealyMachine bad({"q"}, Alphabet({"0", "1"}), {0, 0}, {0, 0});
    EXPECT_THROW(inverse_machine(bad), Error);
}

TEST(Constructions, EnrichRequiresReversible) {
    EXPECT_THROW(enrich(mftest::odometer()), Error);
    const auto e = enrich(dual(mftest::odometer()));
    EXPECT_EQ(e.machine.alphabet().symbols(), (std::vector<std::string>{"q", "e", "q^-1", "e^-1"}));
    EXPECT_EQ(e.base_letters, 2u);
}

TEST(ConstructionsProperty, EnrichIsInvolutive) {
    auto rng = mftest::rng_for(25);
    for (int t = 0; t < 200; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Reversible);
        const auto e = enrich(m);
        const std::size_t n = m.num_letters();
        for (State q = 0; q < m.num_states(); ++q) {
            for (std::uint32_t c = 0; c < 2 * n; ++c) {
                const auto x = SignedLetter::decode(c, n);
                const State p = e.next(q, x);
                const auto y = e.output(q, x);
                EXPECT_EQ(e.next(p, x.inverse()), q);
                EXPECT_EQ(e.output(p, x.inverse()), y.inverse());
                EXPECT_EQ(y.inverted, x.inverted);
            }
        }
        EXPECT_TRUE(is_reversible(e.machine));
    }
}

TEST(ConstructionsProperty, EnrichedDualIsDualOfUnion) {
    auto rng = mftest::rng_for(26);
    for (int t = 0; t < 200; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Invertible);
        const auto lhs = enrich(dual(m)).machine;
        const auto rhs = dual(disjoint_union(m, inverse_machine(m)));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(ConstructionsProperty, InverseOfProduct) {
    auto rng = mftest::rng_for(27);
    for (int t = 0; t < 200; ++t) {
        const auto m1 = mftest::random_machine(rng, Kind::Reversible);
        std::uniform_int_distribution<std::size_t> qs(1, 4);
        const auto m2 = mftest::random_machine_sized(rng, Kind::Reversible, qs(rng), m1.num_letters());
        EXPECT_TRUE(inverse_of_product_check(m1, m2));
    }
}

TEST(ConstructionsProperty, ProductClosure) {
    auto rng = mftest::rng_for(28);
    for (int t = 0; t < 200; ++t) {
        for (Kind kind : {Kind::Reversible, Kind::Bireversible}) {
            const auto m1 = mftest::random_machine(rng, kind);
            std::uniform_int_distribution<std::size_t> qs(1, 4);
            const auto m2 = mftest::random_machine_sized(rng, kind, qs(rng), m1.num_letters());
            EXPECT_TRUE(is_reversible(product(m1, m2)));
            if (kind == Kind::Bireversible) {
                EXPECT_TRUE(is_bireversible(product(m1, m2)));
            }
        }
    }
}

TEST(ConstructionsProperty, ReversibleProductConverse) {
    auto rng = mftest::rng_for(29);
    std::size_t checked = 0;
    for (int t = 0; t < 400; ++t) {
        const auto m1 = mftest::random_machine(rng, Kind::Invertible, 3, 3);
        const auto m2 = mftest::random_machine_sized(rng, t % 2 ? Kind::Reversible : Kind::Any, 3, m1.num_letters());
        if (const auto r = reversible_product_converse(m1, m2)) {
            ++checked;
            EXPECT_TRUE(*r) << print_machine(m1) << print_machine(m2);
        }
    }
    EXPECT_GT(checked, 100u);
}

TEST(Constructions, SymmetricPowers) {
    const auto cz2 = cayley_machine(cyclic_group(2));
    const auto s0 = symmetric_power(cz2, 0);
    const auto s2 = symmetric_power(cz2, 2);
    EXPECT_EQ(s0, enrich(dual(cz2)));
    EXPECT_EQ(s2.num_states(), 16u);
    EXPECT_EQ(s2, power(s0, 4));
    EXPECT_THROW(symmetric_power(mftest::odometer(), 1), Error);
}

TEST(Constructions, DisjointUnionNames) {
    const auto odo = mftest::odometer();
    const auto u = disjoint_union(odo, odo);
    EXPECT_EQ(u.state_names(), (std::vector<std::string>{"L.q", "L.e", "R.q", "R.e"}));
    const auto v = disjoint_union(odo, inverse_machine(odo));
    EXPECT_EQ(v.state_names(), (std::vector<std::string>{"q", "e", "q^-1", "e^-1"}));
}

}  // namespace
