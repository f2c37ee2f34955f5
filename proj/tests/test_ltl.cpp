#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace lasso;
using namespace lasso::testing;

namespace {

/// Direct recursive semantics. Positions beyond the stem repeat with the loop
/// period, so every suffix of the word occurs among the first |u|+|v|
/// positions after any given one; the searches for U, F and G stop there.
bool holds(const ltl::Formula& f, const Lasso& w, std::size_t i, const ltl::ApLetterMap& map) {
    const std::size_t horizon = w.length();
    using ltl::Op;
    switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return (map.alphabet().mask(w.at(i)) >> map.ap_index(f->atom)) & 1u;
    case Op::Not: return !holds(f->left, w, i, map);
    case Op::And: return holds(f->left, w, i, map) && holds(f->right, w, i, map);
    case Op::Or: return holds(f->left, w, i, map) || holds(f->right, w, i, map);
    case Op::Implies: return !holds(f->left, w, i, map) || holds(f->right, w, i, map);
    case Op::Next: return holds(f->left, w, i + 1, map);
    case Op::Finally:
        for (std::size_t j = i; j <= i + horizon; ++j)
            if (holds(f->left, w, j, map)) return true;
        return false;
    case Op::Globally:
        for (std::size_t j = i; j <= i + horizon; ++j)
            if (!holds(f->left, w, j, map)) return false;
        return true;
    case Op::Until:
        for (std::size_t j = i; j <= i + horizon; ++j) {
            if (holds(f->right, w, j, map)) return true;
            if (!holds(f->left, w, j, map)) return false;
        }
        return false;
    case Op::Release:
        for (std::size_t j = i; j <= i + horizon; ++j) {
            if (!holds(f->right, w, j, map)) return false;
            if (holds(f->left, w, j, map)) return true;
        }
        return true;
    }
    return false;
}

ltl::Formula random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& aps) {
    if (depth == 0 || rng() % 4 == 0) return ltl::atom(aps[rng() % aps.size()]);
    switch (rng() % 9) {
    case 0: return ltl::neg(random_formula(rng, depth - 1, aps));
    case 1: return ltl::next(random_formula(rng, depth - 1, aps));
    case 2: return ltl::finally(random_formula(rng, depth - 1, aps));
    case 3: return ltl::globally(random_formula(rng, depth - 1, aps));
    case 4: return ltl::conj(random_formula(rng, depth - 1, aps), random_formula(rng, depth - 1, aps));
    case 5: return ltl::disj(random_formula(rng, depth - 1, aps), random_formula(rng, depth - 1, aps));
    case 6: return ltl::until(random_formula(rng, depth - 1, aps), random_formula(rng, depth - 1, aps));
    case 7: return ltl::release(random_formula(rng, depth - 1, aps), random_formula(rng, depth - 1, aps));
    default: return ltl::implies(random_formula(rng, depth - 1, aps), random_formula(rng, depth - 1, aps));
    }
}

} // namespace

TEST(LtlParse, PrecedenceAndPrinting) {
    EXPECT_EQ(ltl::to_string(ltl::parse("G F p -> G F q")), "G F p -> G F q");
    EXPECT_EQ(ltl::to_string(ltl::parse("p & q | r")), "(p & q) | r");
    EXPECT_EQ(ltl::to_string(ltl::parse("a -> b -> c")), "a -> (b -> c)");
    EXPECT_EQ(ltl::to_string(ltl::parse("p U X q")), "p U X q");
    EXPECT_EQ(ltl::to_string(ltl::parse("!(p R q) && true")), "!(p R q) & 1");
    EXPECT_EQ(ltl::to_string(ltl::parse("(G p) U q")), "(G p) U q");
    EXPECT_EQ(ltl::atoms(ltl::parse("(G F p -> G F q) & (G F r -> G F s)")),
              (std::vector<std::string>{"p", "q", "r", "s"}));
}

TEST(LtlParse, RoundTripThroughPrinter) {
    std::mt19937 rng(21);
    const std::vector<std::string> aps{"p", "q"};
    for (int i = 0; i < 300; ++i) {
        const auto f = random_formula(rng, 4, aps);
        const auto g = ltl::parse(ltl::to_string(f), aps);
        ASSERT_TRUE(ltl::equal(f, g)) << ltl::to_string(f) << " vs " << ltl::to_string(g);
    }
}

TEST(LtlParse, ErrorsCarryPositions) {
    try {
        ltl::parse("p &\n (q", {"p", "q"});
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(ltl::parse("p & z", {"p"}), ParseError);
    EXPECT_THROW(ltl::parse("p q"), ParseError);
    EXPECT_THROW(ltl::parse(""), ParseError);
}

TEST(LtlEval, HandComputedExamples) {
    const ltl::ApLetterMap map(std::vector<std::string>{"p"});
    const Alphabet& a = map.alphabet();
    auto ev = [&](const char* f, const char* u, const char* v) {
        return ltl::eval_on_lasso(ltl::parse(f), parse_lasso(a, u, v), map);
    };
    EXPECT_TRUE(ev("G F p", "{}{}", "{}{p}"));
    EXPECT_FALSE(ev("G F p", "{p}{p}", "{}"));
    EXPECT_TRUE(ev("F G p", "{}{}{}", "{p}"));
    EXPECT_FALSE(ev("F G p", "", "{p}{}"));
    EXPECT_TRUE(ev("p U X p", "{}", "{p}"));
    EXPECT_FALSE(ev("p U X p", "{}{}", "{p}"));
    EXPECT_TRUE(ev("X X X p", "{}{}", "{}{p}"));
    EXPECT_TRUE(ev("false R p", "", "{p}"));
}

TEST(LtlEval, AgreesWithRecursiveSemantics) {
    std::mt19937 rng(22);
    const std::vector<std::string> aps{"p", "q"};
    const ltl::ApLetterMap map(aps);
    for (int i = 0; i < 400; ++i) {
        const auto f = random_formula(rng, 3, aps);
        const Lasso w = random_lasso(rng, map.alphabet().size(), 3, 3);
        ASSERT_EQ(ltl::eval_on_lasso(f, w, map), holds(f, w, 0, map))
            << ltl::to_string(f) << " on " << format_lasso(map.alphabet(), w);
    }
}

TEST(LtlEval, RestrictedAlphabet) {
    const auto aps = std::vector<std::string>{"p", "q"};
    const ltl::ApLetterMap map(Alphabet::from_aps(aps, {1, 2}));
    const auto phi = ltl::ltl_oracle(ltl::parse("G (p | q)", aps), map);
    EXPECT_EQ(phi.alphabet().size(), 2u);
    EXPECT_TRUE(phi(parse_lasso(map.alphabet(), "{p}", "{q}")));
    EXPECT_THROW(ltl::ltl_oracle(ltl::parse("G r"), map), InputError);
    EXPECT_THROW(ltl::ApLetterMap(Alphabet({"a"})), InputError);
}
