#pragma once

// Seeded property corpora shared by the unit suite and the acceptance
// binary. Each function returns the number of failing cases.

#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace lasso::testing {

/// Another representation of the same infinite word: unrolled, with the
/// loop repeated, or both.
inline Lasso random_representation(std::mt19937& rng, const Lasso& w) {
    Lasso r = w;
    if (rng() % 2) {
        Word v2 = r.loop;
        const std::size_t times = 1 + rng() % 2;
        for (std::size_t i = 0; i < times; ++i) v2.insert(v2.end(), r.loop.begin(), r.loop.end());
        r = Lasso(r.stem, v2);
    }
    return unroll(r, r.length() + rng() % 4);
}

struct PropertyOutcome {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
};

/// Acceptance does not depend on how a word is represented as a lasso.
inline PropertyOutcome acceptance_invariance(std::size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    PropertyOutcome out;
    while (out.cases < cases) {
        const auto a = random_automaton(rng, 2, 1 + rng() % 4, 4, rng() % 2 == 0, 1.2);
        const Lasso w = random_lasso(rng, 2, 4, 4);
        const Lasso r = random_representation(rng, w);
        out.record(accepts_lasso(a, w) == accepts_lasso(a, r) && accepts_lasso(a, w) == accepts_reference(a, r),
                   format_lasso(a.alphabet(), w) + " vs " + format_lasso(a.alphabet(), r));
    }
    return out;
}

inline ltl::Formula random_ltl(std::mt19937& rng, int depth, const std::vector<std::string>& aps) {
    if (depth == 0 || rng() % 4 == 0) return ltl::atom(aps[rng() % aps.size()]);
    auto sub = [&] { return random_ltl(rng, depth - 1, aps); };
    switch (rng() % 8) {
    case 0: return ltl::neg(sub());
    case 1: return ltl::next(sub());
    case 2: return ltl::finally(sub());
    case 3: return ltl::globally(sub());
    case 4: return ltl::conj(sub(), sub());
    case 5: return ltl::disj(sub(), sub());
    case 6: return ltl::until(sub(), sub());
    default: return ltl::release(sub(), sub());
    }
}

/// LTL evaluation does not depend on the lasso representation.
inline PropertyOutcome ltl_invariance(std::size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    const std::vector<std::string> aps{"p", "q"};
    const ltl::ApLetterMap map(aps);
    PropertyOutcome out;
    while (out.cases < cases) {
        const auto f = random_ltl(rng, 4, aps);
        const Lasso w = random_lasso(rng, 4, 4, 4);
        const Lasso r = random_representation(rng, w);
        out.record(ltl::eval_on_lasso(f, w, map) == ltl::eval_on_lasso(f, r, map),
                   ltl::to_string(f) + " on " + format_lasso(map.alphabet(), w));
    }
    return out;
}

/// Complementing a complete deterministic automaton twice gives back its
/// lassos, and once flips every lasso.
inline PropertyOutcome complement_involution(std::size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    PropertyOutcome out;
    while (out.cases < cases) {
        const auto a = complete_with_sink(random_automaton(rng, 2, 1 + rng() % 4, 5, true, 0.8));
        const auto c = complement_dpa(a);
        const auto cc = complement_dpa(c);
        const Lasso w = random_lasso(rng, 2, 4, 4);
        const bool x = accepts_lasso(a, w);
        out.record(accepts_lasso(c, w) == !x && accepts_lasso(cc, w) == x, format_lasso(a.alphabet(), w));
    }
    return out;
}

/// L_n ⊆ L_n' for n <= n': a lasso of length n unrolled to length n'
/// denotes the same word, so membership carries over.
inline PropertyOutcome monotonicity(std::size_t cases, unsigned seed) {
    std::mt19937 rng(seed);
    PropertyOutcome out;
    while (out.cases < cases) {
        const auto a = random_automaton(rng, 2, 1 + rng() % 4, 3, rng() % 2 == 0, 1.2);
        const std::size_t n = 1 + rng() % 4, n2 = n + rng() % 4;
        const auto bases = enumerate_bases(a.alphabet(), n);
        const Lasso w = bases.at(rng() % bases.size());
        if (!accepts_lasso(a, w)) continue;  // only members of L_n matter
        const Lasso u = unroll(w, n2);
        out.record(u.length() == n2 && accepts_lasso(a, u) && canonical(u) == canonical(w),
                   format_lasso(a.alphabet(), w) + " to length " + std::to_string(n2));
    }
    return out;
}

} // namespace lasso::testing
