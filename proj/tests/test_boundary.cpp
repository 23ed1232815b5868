#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mealyforge;

namespace {

MealyMachine dual_identity_z2() { return dual(identity_machine_of(cyclic_group(2))); }

TEST(Types, SizesMatchLevelGraphs) {
    for (const auto& named : mftest::corpus()) {
        TypeGraph types(named.machine);
        const std::size_t na = named.machine.num_letters();
        for (std::size_t k = 1; k <= (na == 2 ? 6u : 4u); ++k) {
            for (const auto& u : mftest::all_words(na, k)) {
                EXPECT_EQ(types.size(types.type_of(u)), level_graph(named.machine, k, u).words.size())
                    << named.name << " " << word_to_string(u, named.machine.alphabet().symbols());
            }
        }
    }
}

TEST(Types, SameTypeSameComponentShape) {
    const auto g = mftest::grigorchuk();
    TypeGraph types(g);
    std::map<std::uint32_t, InverseAutomaton> shape;
    for (std::size_t k = 1; k <= 6; ++k) {
        for (const auto& u : mftest::all_words(2, k)) {
            const auto t = types.type_of(u);
            const auto graph = canonical_form(level_graph(g, k, u).graph);
            auto [it, fresh] = shape.emplace(t, graph);
            if (!fresh) {
                EXPECT_TRUE(it->second == graph);
            }
        }
    }
}

TEST(Decide, OdometerHasNoSmallGraphs) {
    const auto v = decide_bounded_schreier(mftest::odometer(), 3, 8);
    ASSERT_TRUE(v.is_no());
    const auto& no = std::get<SchreierNo>(v.result);
    EXPECT_EQ(no.level, 2u);
    EXPECT_EQ(no.chi, 4u);
    EXPECT_TRUE(no.chi_exact);
}

TEST(Decide, IdentityMachineHasSingletons) {
    const auto v = decide_bounded_schreier(mftest::trivial_machine(), 1, 4);
    ASSERT_TRUE(v.is_yes());
    EXPECT_EQ(std::get<SchreierYes>(v.result).size, 1u);
}

TEST(Decide, FiniteGroupWitnessRepeats) {
    const auto m = dual_identity_z2();
    const auto v = decide_bounded_schreier(m, 2, 6);
    ASSERT_TRUE(v.is_yes());
    const auto& yes = std::get<SchreierYes>(v.result);
    EXPECT_LE(yes.size, 2u);
    for (auto s : almost_periodic_sizes(m, yes.x, yes.y, 4)) EXPECT_EQ(s, yes.size);
}

TEST(Decide, ExhaustedWhenHorizonTooShort) {
    const auto v = decide_bounded_schreier(mftest::grigorchuk(), 4, 1);
    ASSERT_TRUE(v.is_exhausted());
    const auto& e = std::get<SchreierExhausted>(v.result);
    EXPECT_EQ(e.horizon, 1u);
    EXPECT_GT(e.completion_horizon, BigInt(1));
}

TEST(DecideProperty, VerdictsAgreeWithGrowth) {
    auto rng = mftest::rng_for(51);
    std::map<std::string, int> seen;
    for (int t = 0; t < 150; ++t) {
        const auto m = mftest::random_machine(rng, mftest::Kind::Invertible, 3, 2);
        std::uniform_int_distribution<std::size_t> ld(1, 4);
        const std::size_t limit = ld(rng);
        const auto v = decide_bounded_schreier(m, limit, 8);
        if (const auto* yes = std::get_if<SchreierYes>(&v.result)) {
            ++seen["yes"];
            EXPECT_LE(yes->size, limit);
            for (auto s : almost_periodic_sizes(m, yes->x, yes->y, 4)) EXPECT_EQ(s, yes->size);
        } else if (const auto* no = std::get_if<SchreierNo>(&v.result)) {
            ++seen["no"];
            const auto r = growth_chi(m, no->level);
            EXPECT_GT(r.chi[no->level - 1], limit);
            if (no->level > 1) {
                EXPECT_LE(r.chi[no->level - 2], limit);
            }
            if (no->chi_exact) {
                EXPECT_EQ(no->chi, r.chi[no->level - 1]);
            }
        } else {
            ++seen["exhausted"];
        }
    }
    EXPECT_GT(seen["yes"], 0);
    EXPECT_GT(seen["no"], 0);
}

TEST(Finiteness, Verdicts) {
    EXPECT_TRUE(std::holds_alternative<InfiniteVerdict>(finiteness_semidecision(cayley_machine(cyclic_group(2)), 6)));
    EXPECT_TRUE(std::holds_alternative<InfiniteVerdict>(finiteness_semidecision(mftest::odometer(), 6)));
    const auto f = finiteness_semidecision(dual_identity_z2(), 6);
    ASSERT_TRUE(std::holds_alternative<FiniteVerdict>(f));
    EXPECT_EQ(std::get<FiniteVerdict>(f).bound, 2u);
    EXPECT_TRUE(std::holds_alternative<FiniteVerdict>(finiteness_semidecision(mftest::trivial_machine(), 6)));
    const MealyMachine constant({"q"}, Alphabet({"0", "1"}), {0, 0}, {0, 0});
    EXPECT_TRUE(std::holds_alternative<UnknownVerdict>(finiteness_semidecision(constant, 6)));
}

TEST(FinitenessProperty, CertificateExcludesFinite) {
    auto rng = mftest::rng_for(52);
    std::size_t fired = 0;
    for (int t = 0; t < 200; ++t) {
        const auto m = mftest::random_machine(rng, mftest::Kind::Reversible, 3, 3);
        if (!is_invertible(m)) continue;
        const auto v = finiteness_semidecision(m, 5);
        if (infiniteness_certificate(m)) {
            ++fired;
            EXPECT_FALSE(std::holds_alternative<FiniteVerdict>(v));
        }
        if (const auto* fin = std::get_if<FiniteVerdict>(&v)) {
            for (std::size_t k = 1; k <= 4; ++k) {
                for (auto s : mftest::orbit_sizes_oracle(m, k)) EXPECT_LE(s, fin->bound);
            }
        }
    }
    EXPECT_GT(fired, 0u);
}

TEST(Finiteness, CertificateOnCayleyMachines) {
    for (std::size_t n : {2u, 3u}) {
        const auto cert = infiniteness_certificate(cayley_machine(cyclic_group(n)));
        ASSERT_TRUE(cert.has_value());
        EXPECT_NE(cert->q, cert->s);
    }
    EXPECT_FALSE(infiniteness_certificate(mftest::aleshin()).has_value());
}

// ceil(log_c((c^(N^2) - 1) n / N^(N^2)) / N^2) - 1, in exact integer arithmetic.
BigInt rough_lower_bound(std::size_t N, std::size_t c, const BigInt& n) {
    const auto n2 = static_cast<unsigned>(N * N);
    const BigInt lead = boost::multiprecision::pow(BigInt(N), n2);
    const BigInt step = boost::multiprecision::pow(BigInt(c), n2);
    const BigInt x_num = (step - 1) * n;  // x = x_num / lead
    // smallest t with step^t >= x, i.e. ceil(log_step x)
    BigInt t = 0, p = 1;
    if (x_num <= lead) {
        // x <= 1: log is <= 0; find the largest t <= 0 with step^t >= x
        while (p * x_num * step <= lead && x_num > 0) {
            p *= step;
            --t;
        }
        return t - 1;
    }
    while (p * lead < x_num) {
        p *= step;
        ++t;
    }
    return t - 1;
}

TEST(Zeta, OdometerThreshold) {
    const auto odo = mftest::odometer();
    EXPECT_EQ(norm(dual(odo)), 2u);
    EXPECT_EQ(zeta_threshold(2, 2, 1), BigInt(255));
    EXPECT_TRUE(zeta(odo, 254).below_threshold);
    EXPECT_EQ(zeta(odo, 255).value, BigInt(1));
    EXPECT_EQ(zeta(odo, zeta_threshold(2, 2, 3)).value, BigInt(3));
    EXPECT_EQ(zeta(odo, zeta_threshold(2, 2, 3) - 1).value, BigInt(2));
    EXPECT_TRUE(zeta(2, 1, 1000).unbounded);
}

TEST(Zeta, RoughLowerBoundIsOffByOne) {
    // At n = 254 the rough bound claims 1 while no y >= 1 qualifies.
    EXPECT_EQ(rough_lower_bound(2, 2, 254), BigInt(1));
    EXPECT_EQ(zeta(2, 2, 254).value, BigInt(0));
    // One less than the rough bound holds everywhere sampled.
    auto rng = mftest::rng_for(53);
    for (std::size_t c : {2u, 3u}) {
        for (int t = 0; t < 300; ++t) {
            std::uniform_int_distribution<unsigned> digits(1, 30);
            BigInt n = 1;
            for (unsigned i = 0, d = digits(rng); i < d; ++i) n = n * 10 + rng() % 10;
            EXPECT_GE(BigInt(zeta(2, c, n).value), rough_lower_bound(2, c, n) - 1) << n;
        }
    }
}

TEST(Torsion, FiniteGroupDualsAreTorsion) {
    for (const auto& m : {dual_identity_z2(), dual(identity_machine_of(cyclic_group(3))), dual(palindrome_machine(cyclic_group(3)))}) {
        const auto ws = torsion_search(m, 1, 16);
        ASSERT_EQ(ws.size(), m.num_letters());
        for (const auto& w : ws) {
            for (std::size_t d = 1; d <= 4; ++d) EXPECT_TRUE(torsion_probe(m, w, d));
            EXPECT_GT(torsion_bound_ell(m, w.u, w), BigInt(0));
        }
    }
}

TEST(Torsion, OdometerIsNotTorsionAtZero) {
    const auto ws = torsion_search(mftest::odometer(), 1, 8);
    for (const auto& w : ws) EXPECT_NE(w.u, Word{0});
}

TEST(Periodic, FixesPeriodicPoint) {
    const auto g = mftest::grigorchuk();
    const Alphabet gens = generator_alphabet(g);
    // b, c, d fix 1^omega; a does not.
    EXPECT_TRUE(fixes_periodic_point(g, parse_signed_word("b", gens), {1}));
    EXPECT_TRUE(fixes_periodic_point(g, parse_signed_word("c d", gens), {1}));
    EXPECT_FALSE(fixes_periodic_point(g, parse_signed_word("a", gens), {1}));
    // the odometer moves every periodic point
    for (const auto& w : mftest::all_words(2, 3)) {
        if (!w.empty()) {
            EXPECT_FALSE(fixes_periodic_point(mftest::odometer(), {pos(0)}, w));
        }
    }
}

TEST(Periodic, ScanAgreesWithTruncations) {
    const auto g = mftest::grigorchuk();
    const auto entries = periodic_stabilizer_scan(g, 2, 2, 6);
    for (const auto& e : entries) {
        for (const auto& h : e.fixing) {
            const Word prefix = power(e.w, 12 / e.w.size());
            EXPECT_EQ(mftest::run_path(g, h, prefix), prefix);
        }
        for (const auto& h : e.nontrivial) EXPECT_FALSE(is_group_relation_up_to(g, h, 6));
    }
    // b fixes 1^omega and acts nontrivially
    const auto& ones = *std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.w == Word{1}; });
    EXPECT_FALSE(ones.nontrivial.empty());
}

TEST(Swapping, InclusionImpliesLoopInclusion) {
    auto rng = mftest::rng_for(54);
    for (int t = 0; t < 40; ++t) {
        const auto m = mftest::random_machine(rng, mftest::Kind::Invertible, 3, 2);
        const auto b = enrich(dual(m));
        const auto comp = component_of(b, 0);
        for (State p1 : comp) {
            for (State p2 : comp) {
                if (!swapping_inclusion(b, p1, p2)) continue;
                // every output word of a loop at p1 of length <= 4 labels a loop at p2
                for (std::size_t len = 1; len <= 4; ++len) {
                    for (const auto& u : mftest::all_words(b.num_letters(), len)) {
                        State v = p1;
                        Word out;
                        for (Letter x : u) {
                            out.push_back(b.machine.output(v, x));
                            v = b.machine.next(v, x);
                        }
                        if (v != p1) continue;
                        State w = p2;
                        for (Letter x : out) w = b.machine.next(w, x);
                        EXPECT_EQ(w, p2);
                    }
                }
                const auto cycle = swapping_cycle(b, p1, p2);
                EXPECT_FALSE(cycle.empty());
                for (State s : cycle) EXPECT_TRUE(std::binary_search(comp.begin(), comp.end(), s));
            }
        }
    }
}

TEST(Swapping, IdentityMachineIsSupersymmetric) {
    const auto b = enrich(dual(dual_identity_z2()));
    EXPECT_TRUE(is_supersymmetric(b, 0));
}

}  // namespace
