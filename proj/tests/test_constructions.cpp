#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace lasso;
using namespace lasso::testing;

namespace {

/// Every lasso of base length <= B accepted by `small` is accepted by `big`.
void expect_contained(const ParityAutomaton& small, const ParityAutomaton& big, std::size_t B) {
    for (std::size_t len = 1; len <= B; ++len)
        enumerate_bases(small.alphabet(), len).for_each([&](const Lasso& w) {
            if (accepts_lasso(small, w)) {
                ASSERT_TRUE(accepts_lasso(big, w)) << format_lasso(small.alphabet(), w);
            }
        });
}

/// Exactly the lassos of base length n agree.
void expect_agree_at(const ParityAutomaton& x, const ParityAutomaton& y, std::size_t n) {
    enumerate_bases(x.alphabet(), n).for_each([&](const Lasso& w) {
        ASSERT_EQ(accepts_lasso(x, w), accepts_lasso(y, w)) << format_lasso(x.alphabet(), w);
    });
}

} // namespace

TEST(SafetyConstruction, PreciseOnRandomProperties) {
    std::mt19937 rng(41);
    for (int i = 0; i < 30; ++i) {
        const auto ref = random_automaton(rng, 2, 1 + rng() % 3, 3, i % 2 == 0, 1.0);
        const auto phi = automaton_oracle(ref);
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto s = build_safety_lasso_precise(phi, n);
            ASSERT_TRUE(s.is_safety());
            ASSERT_TRUE(s.is_deterministic());
            ASSERT_LE(static_cast<double>(s.size()), safety_construction_bound(2, n));
            const auto r = check_lasso_precise(s, phi, n, n + 2);
            ASSERT_TRUE(r.passed()) << report_text(r, s.alphabet());
        }
    }
}

TEST(SafetyConstruction, AnnotationsAndNames) {
    const auto s = build_safety_lasso_precise(families::phi_n_oracle(families::binary_alphabet(), 2), 2);
    std::map<std::string, std::string> ann(s.annotations().begin(), s.annotations().end());
    EXPECT_EQ(ann["construction"], "safety-lasso-precise");
    EXPECT_EQ(ann["bound"], "2");
    EXPECT_EQ(ann["states"], std::to_string(s.size()));
    EXPECT_TRUE(s.find("0#").has_value() || s.find("#").has_value());
}

TEST(SafetyConstruction, EmptyPropertyGivesEmptyLanguage) {
    const MembershipOracle none(families::binary_alphabet(), [](const Lasso&) { return false; });
    const auto s = build_safety_lasso_precise(none, 2);
    EXPECT_TRUE(is_empty(s).empty);
}

TEST(BuechiToSafety, GfOneSizes) {
    const auto gf = families::gf_one();
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto s = buechi_to_safety(gf, n);
        EXPECT_LE(s.size(), n + 1);
        EXPECT_LE(s.size(), buechi_to_safety_bound(1, 1, n));
        EXPECT_TRUE(s.is_deterministic());
        EXPECT_TRUE(check_inclusion_exact(s, gf).holds);
    }
}

TEST(BuechiToSafety, PreciseOnRandomBuchi) {
    std::mt19937 rng(42);
    int tested = 0;
    while (tested < 60) {
        auto a = random_automaton(rng, 2, 1 + rng() % 4, 2, rng() % 2 == 0, 1.2);
        if (!a.is_buchi()) continue;
        ++tested;
        const auto phi = automaton_oracle(a);
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto s = buechi_to_safety(a, n);
            std::size_t acc = 0;
            for (StateId q = 0; q < a.size(); ++q) acc += a.color(q) == 2;
            ASSERT_LE(s.size(), buechi_to_safety_bound(a.size() - acc, acc, n));
            if (a.is_deterministic()) {
                ASSERT_TRUE(s.is_deterministic());
            }
            const auto r = check_lasso_precise(s, phi, n, n + 3);
            ASSERT_TRUE(r.passed()) << report_text(r, s.alphabet());
        }
    }
}

TEST(BuechiToSafety, RejectsParityInput) {
    EXPECT_THROW(buechi_to_safety(families::fg_gf_dpa(), 2), ContractError);
    EXPECT_THROW(buechi_to_safety(families::gf_one(), 0), InputError);
}

TEST(ReduceColors, FgGfFixture) {
    const auto fg = families::fg_gf_dpa();
    ASSERT_EQ(fg.num_colors(), 3u);
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t t : {1u, 2u}) {
            const auto r = reduce_parity_colors(fg, n, t);
            EXPECT_LE(r.num_colors(), t);
            EXPECT_LE(r.size(), reduce_colors_bound(fg.size(), 3, t, n));
            EXPECT_TRUE(r.is_deterministic());
            const auto rep = check_lasso_precise(r, automaton_oracle(fg), n, 2 * n);
            EXPECT_TRUE(rep.passed()) << report_text(rep, r.alphabet());
        }
    EXPECT_TRUE(reduce_parity_colors(fg, 2, 2).is_buchi());
    EXPECT_TRUE(reduce_parity_colors(fg, 2, 1).is_safety());
}

TEST(ReduceColors, PreciseOnRandomDeterministicParity) {
    std::mt19937 rng(43);
    int tested = 0;
    while (tested < 80) {
        const auto a = random_automaton(rng, 2, 1 + rng() % 4, 4, true, 0.9);
        const std::size_t m = a.num_colors();
        if (m < 2) continue;
        ++tested;
        const auto phi = automaton_oracle(a);
        for (std::size_t n = 1; n <= 2; ++n)
            for (std::size_t t = 1; t < m; ++t) {
                const auto r = reduce_parity_colors(a, n, t);
                ASSERT_LE(r.num_colors(), t);
                ASSERT_LE(r.size(), reduce_colors_bound(a.size(), m, t, n));
                ASSERT_TRUE(r.is_deterministic());
                const auto rep = check_lasso_precise(r, phi, n, 2 * n + 2);
                ASSERT_TRUE(rep.passed()) << "target " << t << " n " << n << "\n" << report_text(rep, r.alphabet());
            }
    }
}

TEST(ReduceColors, Contracts) {
    const auto fg = families::fg_gf_dpa();
    EXPECT_THROW(reduce_parity_colors(fg, 2, 3), ContractError);
    EXPECT_THROW(reduce_parity_colors(fg, 2, 0), ContractError);
    EXPECT_THROW(reduce_parity_colors(families::omega_k(2), 2, 1), ContractError);
}

TEST(Approximate, UnderDispatch) {
    const auto gf = families::gf_one();
    EXPECT_TRUE(underapproximate(gf, 3, SafetyTarget{}).is_safety());
    EXPECT_EQ(underapproximate(gf, 3, ColorTarget{2}), gf);
    const auto fg = families::fg_gf_dpa();
    EXPECT_LE(underapproximate(fg, 2, ColorTarget{2}).num_colors(), 2u);
    EXPECT_TRUE(underapproximate(fg, 2, SafetyTarget{}).is_safety());
}

TEST(Approximate, OverIsSupersetAndPrecise) {
    std::mt19937 rng(44);
    std::vector<ParityAutomaton> inputs = {families::gf_one(), families::fg_gf_dpa()};
    while (inputs.size() < 25) {
        auto a = random_automaton(rng, 2, 1 + rng() % 3, 3, true, 0.9);
        if (a.num_colors() >= 2) inputs.push_back(a);
    }
    for (const auto& a : inputs)
        for (std::size_t n = 1; n <= 2; ++n) {
            const auto o = overapproximate(a, n, SafetyTarget{});
            expect_contained(a, o, n + 3);
            expect_agree_at(a, o, n);
            const auto c = overapproximate(a, n, ColorTarget{1});
            expect_agree_at(a, c, n);
        }
    EXPECT_THROW(overapproximate(families::omega_k(2), 1, SafetyTarget{}), ContractError);
}

TEST(Approximate, DropOneColor) {
    const auto fg = families::fg_gf_dpa();
    const auto d = drop_one_color(fg, 2);
    EXPECT_EQ(d.num_colors(), 2u);
    expect_contained(d, fg, 4);
    expect_agree_at(d, fg, 2);
}
