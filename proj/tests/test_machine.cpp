#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mealyforge;
using mftest::Kind;

namespace {

TEST(Machine, ValidationListsEveryIssue) {
    RawMachine raw{{"q", "p"}, {"0", "1"}, {{"q", "0", "p", "1"}, {"q", "0", "q", "0"}, {"q", "2", "q", "0"}}};
    const auto r = validate(raw);
    ASSERT_FALSE(r.ok());
    std::set<ErrorCode> kinds;
    for (const auto& i : r.issues) kinds.insert(i.kind);
    EXPECT_TRUE(kinds.count(ErrorCode::DuplicateTransition));
    EXPECT_TRUE(kinds.count(ErrorCode::UnknownSymbol));
    EXPECT_TRUE(kinds.count(ErrorCode::MissingTransition));
    EXPECT_THROW(validate_or_throw(raw), ValidationError);
}

TEST(Machine, Predicates) {
    const auto odo = mftest::odometer();
    EXPECT_TRUE(is_invertible(odo));
    EXPECT_FALSE(is_reversible(odo));
    EXPECT_FALSE(is_bireversible(odo));
    const auto cz2 = cayley_machine(cyclic_group(2));
    EXPECT_TRUE(is_invertible(cz2));
    EXPECT_TRUE(is_reversible(cz2));
    EXPECT_FALSE(is_bireversible(cz2));
    EXPECT_TRUE(is_bireversible(mftest::aleshin()));
}

TEST(Machine, OdometerAddsOne) {
    const auto odo = mftest::odometer();
    const State q = odo.state_index("q");
    // little-endian binary counter
    for (std::size_t len = 1; len <= 8; ++len) {
        const std::size_t count = std::size_t{1} << len;
        for (std::size_t x = 0; x < count; ++x) {
            Word w(len);
            for (std::size_t i = 0; i < len; ++i) w[i] = (x >> i) & 1;
            const Word r = act_output(odo, {pos(q)}, w);
            std::size_t y = 0;
            for (std::size_t i = 0; i < len; ++i) y |= std::size_t{r[i]} << i;
            EXPECT_EQ(y, (x + 1) % count);
        }
    }
    EXPECT_EQ(act_output(odo, {pos(q), pos(q)}, {0, 0}), (Word{0, 1}));
    EXPECT_EQ(act_output(odo, {neg(q)}, {0, 0}), (Word{1, 1}));
}

TEST(Machine, SignedStatesNeedInvertibility) {
    const MealyMachine m({"q"}, Alphabet({"0", "1"}), {0, 0}, {0, 0});
    EXPECT_THROW(act_output(m, {neg(0)}, {0}), Error);
    try {
        act_output(m, {neg(0)}, {0});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SignedStateOnNonInvertible);
    }
}

TEST(MachineProperty, CocycleIdentity) {
    auto rng = mftest::rng_for(11);
    for (int t = 0; t < 300; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Any);
        std::uniform_int_distribution<std::uint32_t> qd(0, m.num_states() - 1), ad(0, m.num_letters() - 1);
        std::uniform_int_distribution<int> len(0, 5);
        StateWord q;
        for (int i = 0, n = len(rng) % 3 + 1; i < n; ++i) q.push_back(pos(qd(rng)));
        Word u, v;
        for (int i = 0, n = len(rng); i < n; ++i) u.push_back(ad(rng));
        for (int i = 0, n = len(rng); i < n; ++i) v.push_back(ad(rng));
        const Word whole = act_output(m, q, concat(u, v));
        const Word split = concat(act_output(m, q, u), act_output(m, act_transition(m, q, u), v));
        EXPECT_EQ(whole, split);
    }
}

TEST(MachineProperty, SingleStateMatchesTables) {
    auto rng = mftest::rng_for(12);
    for (int t = 0; t < 200; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Invertible);
        for (const auto& u : mftest::all_words(m.num_letters(), 3)) {
            for (State q = 0; q < m.num_states(); ++q) {
                EXPECT_EQ(act_output(m, {pos(q)}, u), mftest::run_state(m, q, u));
                EXPECT_EQ(act_output(m, {neg(q)}, u), mftest::run_inverse_state(m, q, u));
            }
        }
    }
}

TEST(MachineProperty, InvertibleIffDualReversible) {
    auto rng = mftest::rng_for(13);
    for (int t = 0; t < 500; ++t) {
        const auto m = mftest::random_machine(rng, t % 2 ? Kind::Any : Kind::Invertible);
        EXPECT_EQ(is_invertible(m), is_reversible(dual(m)));
    }
}

TEST(MachineProperty, InverseUndoesAction) {
    auto rng = mftest::rng_for(14);
    for (int t = 0; t < 100; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Invertible, 4, 3);
        for (std::size_t len = 0; len <= 6; ++len) {
            for (const auto& u : mftest::all_words(m.num_letters(), len)) {
                for (State q = 0; q < m.num_states(); ++q) {
                    EXPECT_EQ(act_output(m, {neg(q)}, act_output(m, {pos(q)}, u)), u);
                    EXPECT_EQ(act_output(m, {pos(q), neg(q)}, u), u);
                }
            }
        }
    }
}

// Agreement on every word up to length 7: necessary for equality.
bool equal_by_brute_force(const MealyMachine& m, const StateWord& u, const StateWord& v) {
    for (std::size_t l = 1; l <= 7; ++l) {
        for (const auto& w : mftest::all_words(m.num_letters(), l)) {
            if (act_output(m, u, w) != act_output(m, v, w)) return false;
        }
    }
    return true;
}

TEST(MachineProperty, StatesEquivalentIsACongruence) {
    auto rng = mftest::rng_for(15);
    for (int t = 0; t < 150; ++t) {
        const auto m = mftest::random_machine(rng, Kind::Invertible, 4, 2);
        std::uniform_int_distribution<std::uint32_t> code(0, 2 * m.num_states() - 1);
        auto random_word = [&](int n) {
            StateWord w;
            for (int i = 0; i < n; ++i) w.push_back(SignedLetter::decode(code(rng), m.num_states()));
            return w;
        };
        const auto a = random_word(1), b = random_word(2), c = random_word(1);
        EXPECT_TRUE(states_equivalent(m, a, a));
        EXPECT_EQ(states_equivalent(m, a, b), states_equivalent(m, b, a));
        if (states_equivalent(m, a, b) && states_equivalent(m, b, c)) {
            EXPECT_TRUE(states_equivalent(m, a, c));
        }
        if (states_equivalent(m, a, b)) {
            EXPECT_TRUE(states_equivalent(m, concat(a, c), concat(b, c)));
            EXPECT_TRUE(states_equivalent(m, concat(c, a), concat(c, b)));
        }
        if (states_equivalent(m, a, b)) {
            EXPECT_TRUE(equal_by_brute_force(m, a, b));
        }
        EXPECT_EQ(states_equivalent(m, a, b),
                  canonical_signature(m, a, 1'000'000) == canonical_signature(m, b, 1'000'000));
    }
}

TEST(Machine, OdometerWordsCommute) {
    const auto odo = mftest::odometer();
    const State q = 0, e = 1;
    EXPECT_TRUE(states_equivalent(odo, {pos(q), pos(e)}, {pos(e), pos(q)}));
    EXPECT_FALSE(states_equivalent(odo, {pos(q)}, {pos(e)}));
    EXPECT_TRUE(states_equivalent(odo, {pos(q), neg(q)}, {pos(e)}));
}

TEST(Machine, MinimizeMergesEquivalentStates) {
    // p and r both behave as the identity.
    const MealyMachine m({"q", "p", "r"}, Alphabet({"0", "1"}), {1, 0, 1, 2, 2, 1}, {1, 0, 0, 1, 0, 1});
    const auto min = minimize(m);
    EXPECT_EQ(min.num_states(), 2u);
    EXPECT_EQ(min.state_names(), (std::vector<std::string>{"q", "p"}));
    for (const auto& u : mftest::all_words(2, 5)) EXPECT_EQ(mftest::run_state(min, 0, u), mftest::run_state(m, 0, u));
}

}  // namespace
