#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lasso/alphabet.hpp"
#include "lasso/automaton.hpp"
#include "lasso/error.hpp"
#include "lasso/lassolab.hpp"
#include "lasso/ltl.hpp"
#include "lasso/oracle.hpp"

namespace lasso::families {

/// Name, parameters and provenance of a fixture family.
struct FamilySpec {
    std::string name;
    std::string parameters;
    std::string provenance;
};

inline std::vector<FamilySpec> catalogue() {
    return {
        {"phi-n", "alphabet, n >= 1", "words sigma^omega with |sigma| = n; safety approximations need |Sigma|^n states"},
        {"gf-one", "none", "infinitely many 1s; safety approximations need n states"},
        {"omega-k", "k >= 1", "one 2, preceded k positions earlier by a 1; determinization needs 2^k states"},
        {"fg-gf", "none", "(F G p) & (G F q) as a 3-color deterministic parity automaton"},
    };
}

/// Binary alphabet {0, 1}.
inline Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }

/// Oracle for {σ^ω : σ ∈ Σ^n}: the infinite word has period n.
inline MembershipOracle phi_n_oracle(const Alphabet& alphabet, std::size_t n) {
    if (n == 0) throw InputError("phi_n_oracle: n must be at least 1");
    return MembershipOracle(alphabet, [n](const Lasso& w) {
        // Beyond the base the word repeats with period |v|, so positions up to
        // |u|+|v| cover every residue class of the comparison x[i] = x[i+n].
        for (std::size_t i = 0; i < w.length(); ++i)
            if (w.at(i) != w.at(i + n)) return false;
        return true;
    });
}

/// Deterministic Büchi automaton over {0,1} for "infinitely many 1s":
/// q0 (color 1) is reached on 0, q1 (color 2) on 1.
inline ParityAutomaton gf_one() {
    AutomatonBuilder b(binary_alphabet());
    const StateId q0 = b.add_state("q0", 1);
    const StateId q1 = b.add_state("q1", 2);
    b.add_initial(q0);
    for (StateId q : {q0, q1}) {
        b.add_transition(q, 0, q0);
        b.add_transition(q, 1, q1);
    }
    b.annotate("family", "gf-one");
    return b.build();
}

/// Nondeterministic parity automaton with 2k+1 states over {0,1,2} for
/// Ω_k = {0,1}^i · 1 · {0,1}^(k−1) · 2 · 1^ω with i < k.
/// States (b,i) guess (b = 1) or not yet (b = 0) the distinguished 1; q_a
/// reads the 1^ω tail. (1,k) has no successor except on 2.
inline ParityAutomaton omega_k(std::size_t k) {
    if (k == 0) throw InputError("omega_k: k must be at least 1");
    AutomatonBuilder b(Alphabet({"0", "1", "2"}));
    std::vector<std::vector<StateId>> s(2, std::vector<StateId>(k + 1));
    for (int bit = 0; bit < 2; ++bit)
        for (std::size_t i = 1; i <= k; ++i)
            s[bit][i] = b.add_state("(" + std::to_string(bit) + "," + std::to_string(i) + ")", 1);
    const StateId qa = b.add_state("q_a", 0);
    b.add_initial(s[0][1]);
    b.add_transition(qa, 1, qa);
    for (std::size_t i = 1; i <= k; ++i) {
        if (i < k) {
            b.add_transition(s[0][i], 0, s[0][i + 1]);
            b.add_transition(s[0][i], 1, s[0][i + 1]);
            b.add_transition(s[1][i], 0, s[1][i + 1]);
            b.add_transition(s[1][i], 1, s[1][i + 1]);
        } else {
            b.add_transition(s[1][i], 2, qa);
        }
        b.add_transition(s[0][i], 1, s[1][1]);
    }
    b.annotate("family", "omega-k");
    b.annotate("k", std::to_string(k));
    return b.build();
}

/// Deterministic 3-color parity automaton over the AP alphabet of {p, q} for
/// (F G p) ∧ (G F q): the color is that of the state entered by the last
/// letter — 3 after ¬p, 2 after p∧q, 1 after p∧¬q (also the initial state).
inline ParityAutomaton fg_gf_dpa() {
    const Alphabet sigma = Alphabet::from_aps({"p", "q"});
    AutomatonBuilder b(sigma);
    const StateId wait = b.add_state("p", 1);
    const StateId good = b.add_state("pq", 2);
    const StateId bad = b.add_state("!p", 3);
    b.add_initial(wait);
    for (StateId from : {wait, good, bad})
        for (LetterId l = 0; l < sigma.size(); ++l) {
            const std::uint32_t m = sigma.mask(l);
            const bool p = m & 1u, q = m & 2u;
            b.add_transition(from, l, !p ? bad : q ? good : wait);
        }
    b.annotate("family", "fg-gf");
    return b.build();
}

/// An LTL formula together with the AP alphabet it is evaluated over.
struct FormulaFixture {
    std::string text;
    ltl::Formula formula;
    ltl::ApLetterMap map;
};

/// The two motivating specifications: a conjunction of two Streett-style
/// fairness implications over {p,q,r,s}, and (F G p) ∧ (G F q) over {p,q}.
inline std::vector<FormulaFixture> intro_formulas() {
    std::vector<FormulaFixture> out;
    const std::vector<std::pair<std::string, std::vector<std::string>>> specs = {
        {"(G F p -> G F q) & (G F r -> G F s)", {"p", "q", "r", "s"}},
        {"(F G p) & (G F q)", {"p", "q"}},
    };
    for (const auto& [text, aps] : specs)
        out.push_back({text, ltl::parse(text, aps), ltl::ApLetterMap(aps)});
    return out;
}

} // namespace lasso::families
