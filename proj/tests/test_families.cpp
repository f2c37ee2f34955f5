#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace lasso;
using namespace lasso::testing;

namespace {

/// Ω_k straight from its definition: exactly one 2, all later letters are
/// 1, and the letter k positions before the 2 is a 1 preceded by fewer than
/// k letters.
bool in_omega(const Lasso& w, std::size_t k) {
    // A 2 in the loop would occur infinitely often.
    for (LetterId x : w.loop)
        if (x == 2) return false;
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i < w.stem.size(); ++i)
        if (w.stem[i] == 2) {
            if (pos) return false;
            pos = i;
        }
    if (!pos) return false;
    for (std::size_t i = *pos + 1; i < w.length() + 1; ++i)
        if (w.at(i) != 1) return false;
    if (*pos < k) return false;
    const std::size_t one = *pos - k;
    return w.at(one) == 1 && one < k;
}

} // namespace

TEST(Families, Catalogue) {
    const auto c = families::catalogue();
    EXPECT_EQ(c.size(), 4u);
    for (const auto& f : c) EXPECT_FALSE(f.provenance.empty());
}

TEST(Families, GfOne) {
    const auto a = families::gf_one();
    EXPECT_EQ(a.size(), 2u);
    EXPECT_TRUE(a.is_buchi());
    const ltl::ApLetterMap map(std::vector<std::string>{"p"});
    const auto gfp = ltl::parse("G F p");
    // Letter 1 plays the role of {p}.
    for (std::size_t n = 1; n <= 6; ++n)
        enumerate_bases(a.alphabet(), n).for_each([&](const Lasso& w) {
            ASSERT_EQ(accepts_lasso(a, w), ltl::eval_on_lasso(gfp, w, map));
        });
}

TEST(Families, OmegaStructure) {
    for (std::size_t k = 1; k <= 5; ++k) {
        const auto a = families::omega_k(k);
        EXPECT_EQ(a.size(), 2 * k + 1);
        EXPECT_EQ(a.alphabet().size(), 3u);
        EXPECT_EQ(a.color_image(), (std::set<Color>{0, 1}));
        EXPECT_EQ(a.initial().size(), 1u);
    }
    EXPECT_FALSE(families::omega_k(2).is_deterministic());
    EXPECT_THROW(families::omega_k(0), InputError);
}

TEST(Families, OmegaLanguageMatchesDefinition) {
    for (std::size_t k = 1; k <= 2; ++k) {
        const auto a = families::omega_k(k);
        std::size_t accepted = 0;
        for (std::size_t n = 1; n <= 2 * k + 3; ++n)
            enumerate_bases(a.alphabet(), n).for_each([&](const Lasso& w) {
                const bool in = in_omega(w, k);
                accepted += in;
                ASSERT_EQ(accepts_lasso(a, w), in) << "k=" << k << " " << format_lasso(a.alphabet(), w);
            });
        EXPECT_GT(accepted, 0u);
    }
    const auto a = families::omega_k(2);
    EXPECT_TRUE(accepts_lasso(a, parse_lasso(a.alphabet(), "0102", "1")));
    EXPECT_TRUE(accepts_lasso(a, parse_lasso(a.alphabet(), "112", "1")));
    EXPECT_FALSE(accepts_lasso(a, parse_lasso(a.alphabet(), "0012", "1")));
    EXPECT_FALSE(accepts_lasso(a, parse_lasso(a.alphabet(), "00102", "1")));
}

TEST(Families, PhiNOracle) {
    const Alphabet bin = families::binary_alphabet();
    const auto phi2 = families::phi_n_oracle(bin, 2);
    EXPECT_TRUE(phi2(parse_lasso(bin, "", "01")));
    EXPECT_TRUE(phi2(parse_lasso(bin, "0", "10")));
    EXPECT_TRUE(phi2(parse_lasso(bin, "", "1")));
    EXPECT_FALSE(phi2(parse_lasso(bin, "1", "0")));
    EXPECT_FALSE(phi2(parse_lasso(bin, "", "001")));
    EXPECT_THROW(families::phi_n_oracle(bin, 0), InputError);
    // Exactly |Σ|^n words have period n; each has a lasso of base n.
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto phi = families::phi_n_oracle(bin, n);
        std::set<std::pair<Word, Word>> words;
        enumerate_bases(bin, n).for_each([&](const Lasso& w) {
            if (phi(w)) {
                const auto c = canonical(w);
                words.insert({c.stem, c.loop});
            }
        });
        EXPECT_EQ(words.size(), std::size_t{1} << n);
    }
}

TEST(Families, FgGfMatchesFormula) {
    const auto a = families::fg_gf_dpa();
    EXPECT_EQ(a.size(), 3u);
    EXPECT_EQ(a.num_colors(), 3u);
    EXPECT_TRUE(a.is_deterministic());
    const auto f = families::intro_formulas()[1];
    ASSERT_EQ(a.alphabet().letters(), f.map.alphabet().letters());
    for (std::size_t n = 1; n <= 5; ++n)
        enumerate_bases(a.alphabet(), n).for_each([&](const Lasso& w) {
            ASSERT_EQ(accepts_lasso(a, w), ltl::eval_on_lasso(f.formula, w, f.map)) << format_lasso(a.alphabet(), w);
        });
}

TEST(Families, IntroFormulas) {
    const auto fs = families::intro_formulas();
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[0].map.alphabet().size(), 16u);
    EXPECT_EQ(fs[1].map.alphabet().size(), 4u);
    EXPECT_EQ(ltl::atoms(fs[0].formula), (std::vector<std::string>{"p", "q", "r", "s"}));
}
