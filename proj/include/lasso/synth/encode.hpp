#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lasso/error.hpp"
#include "lasso/ltl.hpp"
#include "lasso/synth/circuit.hpp"

namespace lasso::synth {

enum class TargetKind { Deterministic, Nondeterministic };

/// Is there a (deterministic) parity automaton with k states and m colors
/// that n-lasso-precisely underapproximates `formula`?
///
/// Containment is required on every lasso whose base is at most the
/// inclusion bound (default n·k); equality on every lasso of base exactly n.
struct SynthesisQuery {
    ltl::Formula formula;
    ltl::ApLetterMap map{std::vector<std::string>{}};
    std::size_t n = 1;
    std::size_t k = 1;
    std::size_t m = 1;
    TargetKind kind = TargetKind::Deterministic;
    std::optional<std::size_t> inclusion_bound;

    std::size_t inclusion_bound_value() const { return inclusion_bound.value_or(n * k); }
    /// Length of the universally quantified word.
    std::size_t word_length() const { return std::max(n, inclusion_bound_value()); }
    std::size_t alphabet_size() const { return map.alphabet().size(); }

    void validate() const {
        if (!formula) throw InputError("synthesis query: missing formula");
        if (n == 0 || k == 0 || m == 0) throw InputError("synthesis query: n, k and m must be at least 1");
        if (inclusion_bound && *inclusion_bound < n)
            throw InputError("synthesis query: inclusion bound must be at least n");
    }
};

/// Number of bits of a binary letter code.
inline std::size_t letter_bits(std::size_t sigma) {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < sigma) ++b;
    return b;
}

/// Existential variables: transition selectors δ and color selectors μ.
struct AutomatonVars {
    std::size_t k = 0, sigma = 0, m = 0;
    std::vector<Lit> delta;  // ((s·|Σ|) + α)·k + s'
    std::vector<Lit> mu;     // s·m + c

    Lit d(std::size_t s, std::size_t a, std::size_t t) const { return delta[(s * sigma + a) * k + t]; }
    Lit color(std::size_t s, std::size_t c) const { return mu[s * m + c]; }
};

/// Universal variables: letter bits a_j and loop markers l_j.
struct WordVars {
    std::vector<std::vector<Lit>> letter;  // [j][bit]
    std::vector<Lit> loop;                 // [j]
};

/// A run-state node of the encoding, kept for variable-role comments.
struct RunNode {
    std::string part;
    std::string name;
    Lit lit;
};

namespace detail {

/// Builds the matrix of the synthesis query over a circuit, for arbitrary
/// (symbolic or constant) universal literals.
class MatrixBuilder {
public:
    MatrixBuilder(Circuit& c, const SynthesisQuery& q, const AutomatonVars& a, std::vector<RunNode>* runs = nullptr)
        : c_(c), q_(q), a_(a), bits_(letter_bits(q.alphabet_size())), runs_(runs) {}

    /// φ_DPA: colors exactly one of {0..m−1} per state, and (deterministic
    /// target) at most one successor per state and letter. State 0 is initial.
    Lit automaton_constraint() {
        std::vector<Lit> parts;
        for (std::size_t s = 0; s < a_.k; ++s) {
            std::vector<Lit> cols;
            for (std::size_t col = 0; col < a_.m; ++col) cols.push_back(a_.color(s, col));
            parts.push_back(c_.exactly_one(cols));
            if (q_.kind != TargetKind::Deterministic) continue;
            for (std::size_t l = 0; l < a_.sigma; ++l) {
                std::vector<Lit> succ;
                for (std::size_t t = 0; t < a_.k; ++t) succ.push_back(a_.d(s, l, t));
                parts.push_back(c_.at_most_one(succ));
            }
        }
        return c_.land(std::move(parts));
    }

    /// Word/loop well-formedness: exactly one loop marker, valid letter codes.
    Lit loop_constraint(const WordVars& w) {
        std::vector<Lit> parts{c_.exactly_one(w.loop)};
        for (std::size_t j = 0; j < w.loop.size(); ++j) {
            std::vector<Lit> any;
            for (std::size_t l = 0; l < a_.sigma; ++l) any.push_back(is_letter(w, j, l));
            parts.push_back(c_.lor(std::move(any)));
        }
        return c_.land(std::move(parts));
    }

    struct LassoPart {
        Lit active;  // the loop marker lies within the prefix
        Lit in_phi;
        Lit accrun;
    };

    /// Membership in φ and acceptance by the automaton for the lasso given by
    /// the first `len` letters and the loop markers l_0..l_{len−1}.
    LassoPart lasso_part(const WordVars& w, std::size_t len, const std::string& tag) {
        tag_ = tag;
        LassoPart p;
        std::vector<Lit> markers(w.loop.begin(), w.loop.begin() + static_cast<std::ptrdiff_t>(len));
        p.active = c_.lor(markers);
        p.in_phi = ltl_at(w, len, q_.formula)[0];
        p.accrun = q_.kind == TargetKind::Deterministic ? accrun_deterministic(w, len) : accrun_closure(w, len);
        return p;
    }

    Lit is_letter(const WordVars& w, std::size_t j, std::size_t l) {
        std::vector<Lit> eq;
        for (std::size_t b = 0; b < bits_; ++b) eq.push_back(lit_if(w.letter[j][b], (l >> b) & 1u));
        return c_.land(std::move(eq));
    }

private:
    static std::size_t position(std::size_t t, std::size_t len, std::size_t loop) {
        return t < len ? t : loop + (t - loop) % (len - loop);
    }

    /// Letter-at-step predicate for the run, following the loop back edge.
    Lit letter_at_step(const WordVars& w, std::size_t t, std::size_t len, std::size_t l) {
        if (t < len) return is_letter(w, t, l);
        std::vector<Lit> alts;
        for (std::size_t i = 0; i < len; ++i) alts.push_back(c_.land(w.loop[i], is_letter(w, position(t, len, i), l)));
        return c_.lor(std::move(alts));
    }

    /// Deterministic run for len·k steps: the run of a partial deterministic
    /// automaton on a lasso of length len is periodic within len·k steps in
    /// the position×state product, so the run is accepting iff it survives
    /// and the segment between some earlier occurrence of the last
    /// product node and the end has an even maximum color.
    Lit accrun_deterministic(const WordVars& w, std::size_t len) {
        const std::size_t k = a_.k, T = len * k;
        std::vector<std::vector<Lit>> st(T + 1, std::vector<Lit>(k, kFalse));
        st[0][0] = kTrue;
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<Lit> letter(a_.sigma);
            for (std::size_t l = 0; l < a_.sigma; ++l) letter[l] = letter_at_step(w, t, len, l);
            for (std::size_t s2 = 0; s2 < k; ++s2) {
                std::vector<Lit> alts;
                for (std::size_t s = 0; s < k; ++s) {
                    if (st[t][s] == kFalse) continue;
                    for (std::size_t l = 0; l < a_.sigma; ++l)
                        alts.push_back(c_.land({st[t][s], letter[l], a_.d(s, l, s2)}));
                }
                st[t + 1][s2] = c_.lor(std::move(alts));
                record("s[" + std::to_string(t + 1) + "][" + std::to_string(s2) + "]", st[t + 1][s2]);
            }
        }
        const Lit alive = c_.lor(st[T]);
        // has[c] over the suffix [j, T)
        std::vector<Lit> has(a_.m, kFalse);
        std::vector<Lit> accepting;
        for (std::size_t j = T; j-- > 0;) {
            for (std::size_t col = 0; col < a_.m; ++col) {
                std::vector<Lit> here;
                for (std::size_t s = 0; s < k; ++s) here.push_back(c_.land(st[j][s], a_.color(s, col)));
                has[col] = c_.lor(has[col], c_.lor(std::move(here)));
            }
            std::vector<Lit> pos_eq;
            for (std::size_t i = 0; i < len; ++i)
                if (position(j, len, i) == position(T, len, i)) pos_eq.push_back(w.loop[i]);
            std::vector<Lit> state_eq;
            for (std::size_t s = 0; s < k; ++s) state_eq.push_back(c_.land(st[j][s], st[T][s]));
            const Lit r = c_.land(c_.lor(std::move(pos_eq)), c_.lor(std::move(state_eq)));
            record("r[" + std::to_string(j) + "]", r);
            accepting.push_back(c_.land(r, max_even(has)));
        }
        return c_.land(alive, c_.lor(std::move(accepting)));
    }

    Lit max_even(const std::vector<Lit>& has) {
        std::vector<Lit> alts;
        for (std::size_t col = 0; col < has.size(); col += 2) {
            std::vector<Lit> conj{has[col]};
            for (std::size_t hi = col + 1; hi < has.size(); ++hi) conj.push_back(negate(has[hi]));
            alts.push_back(c_.land(std::move(conj)));
        }
        return c_.lor(std::move(alts));
    }

    /// Nondeterministic acceptance: some product node reachable from
    /// (0, state 0) with even color c lies on a cycle through nodes of color ≤ c.
    Lit accrun_closure(const WordVars& w, std::size_t len) {
        const std::size_t k = a_.k, P = len * k;
        auto node = [k](std::size_t pos, std::size_t s) { return pos * k + s; };
        std::vector<std::vector<Lit>> edge(P, std::vector<Lit>(P, kFalse));
        for (std::size_t pos = 0; pos < len; ++pos)
            for (std::size_t s = 0; s < k; ++s)
                for (std::size_t s2 = 0; s2 < k; ++s2) {
                    std::vector<Lit> by_letter;
                    for (std::size_t l = 0; l < a_.sigma; ++l) by_letter.push_back(c_.land(is_letter(w, pos, l), a_.d(s, l, s2)));
                    const Lit step = c_.lor(std::move(by_letter));
                    if (pos + 1 < len) edge[node(pos, s)][node(pos + 1, s2)] = step;
                    else
                        for (std::size_t i = 0; i < len; ++i) edge[node(pos, s)][node(i, s2)] = c_.land(step, w.loop[i]);
                }
        std::vector<Lit> reach(P, kFalse);
        reach[node(0, 0)] = kTrue;
        for (std::size_t round = 0; round < P; ++round) {
            std::vector<Lit> next = reach;
            for (std::size_t v = 0; v < P; ++v) {
                std::vector<Lit> in{reach[v]};
                for (std::size_t u = 0; u < P; ++u) in.push_back(c_.land(reach[u], edge[u][v]));
                next[v] = c_.lor(std::move(in));
            }
            reach = std::move(next);
        }
        std::vector<Lit> accepting;
        for (std::size_t col = 0; col < a_.m; col += 2) {
            std::vector<Lit> allowed(P), exact(P);
            for (std::size_t v = 0; v < P; ++v) {
                const std::size_t s = v % k;
                std::vector<Lit> low;
                for (std::size_t c2 = 0; c2 <= col; ++c2) low.push_back(a_.color(s, c2));
                allowed[v] = c_.lor(std::move(low));
                exact[v] = a_.color(s, col);
            }
            auto closure = edge;
            for (std::size_t u = 0; u < P; ++u)
                for (std::size_t v = 0; v < P; ++v) closure[u][v] = c_.land({edge[u][v], allowed[u], allowed[v]});
            for (std::size_t mid = 0; mid < P; ++mid)
                for (std::size_t u = 0; u < P; ++u)
                    for (std::size_t v = 0; v < P; ++v)
                        closure[u][v] = c_.lor(closure[u][v], c_.land(closure[u][mid], closure[mid][v]));
            for (std::size_t v = 0; v < P; ++v) accepting.push_back(c_.land({reach[v], exact[v], closure[v][v]}));
        }
        return c_.lor(std::move(accepting));
    }

    Lit atom_at(const WordVars& w, std::size_t j, const std::string& ap) {
        const std::size_t bit = q_.map.ap_index(ap);
        std::vector<Lit> alts;
        for (std::size_t l = 0; l < a_.sigma; ++l)
            if (q_.map.holds(static_cast<LetterId>(l), bit)) alts.push_back(is_letter(w, j, l));
        return c_.lor(std::move(alts));
    }

    /// Truth of `f` at every position of the lasso. The successor of the last
    /// position is the marked loop start; until/release are resolved by two
    /// backward passes (least/greatest fixpoint seeded with false/true).
    std::vector<Lit> ltl_at(const WordVars& w, std::size_t len, const ltl::Formula& f) {
        using ltl::Op;
        std::vector<Lit> out(len);
        auto wrap = [&](const std::vector<Lit>& v) {
            std::vector<Lit> alts;
            for (std::size_t i = 0; i < len; ++i) alts.push_back(c_.land(w.loop[i], v[i]));
            return c_.lor(std::move(alts));
        };
        auto fixpoint = [&](const std::vector<Lit>& a, const std::vector<Lit>& b, bool until) {
            std::vector<Lit> val(len, constant(!until));
            Lit after = constant(!until);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = len; i-- > 0;) {
                    const Lit next = i + 1 < len ? val[i + 1] : after;
                    val[i] = until ? c_.lor(b[i], c_.land(a[i], next)) : c_.land(b[i], c_.lor(a[i], next));
                }
                after = wrap(val);
            }
            return val;
        };
        switch (f->op) {
        case Op::True:
            std::fill(out.begin(), out.end(), kTrue);
            return out;
        case Op::False:
            std::fill(out.begin(), out.end(), kFalse);
            return out;
        case Op::Atom:
            for (std::size_t j = 0; j < len; ++j) out[j] = atom_at(w, j, f->atom);
            return out;
        case Op::Not: {
            auto a = ltl_at(w, len, f->left);
            for (std::size_t j = 0; j < len; ++j) out[j] = negate(a[j]);
            return out;
        }
        case Op::Next: {
            auto a = ltl_at(w, len, f->left);
            for (std::size_t j = 0; j + 1 < len; ++j) out[j] = a[j + 1];
            out[len - 1] = wrap(a);
            return out;
        }
        case Op::Finally:
            return fixpoint(std::vector<Lit>(len, kTrue), ltl_at(w, len, f->left), true);
        case Op::Globally:
            return fixpoint(std::vector<Lit>(len, kFalse), ltl_at(w, len, f->left), false);
        default:
            break;
        }
        auto a = ltl_at(w, len, f->left);
        auto b = ltl_at(w, len, f->right);
        switch (f->op) {
        case Op::And:
            for (std::size_t j = 0; j < len; ++j) out[j] = c_.land(a[j], b[j]);
            return out;
        case Op::Or:
            for (std::size_t j = 0; j < len; ++j) out[j] = c_.lor(a[j], b[j]);
            return out;
        case Op::Implies:
            for (std::size_t j = 0; j < len; ++j) out[j] = c_.implies(a[j], b[j]);
            return out;
        case Op::Until:
            return fixpoint(a, b, true);
        case Op::Release:
            return fixpoint(a, b, false);
        default:
            throw std::logic_error("ltl_at: unexpected operator");
        }
    }

    void record(const std::string& name, Lit l) {
        if (runs_ && !Circuit::is_const(l)) runs_->push_back({tag_, name, l});
    }

    Circuit& c_;
    const SynthesisQuery& q_;
    const AutomatonVars& a_;
    std::size_t bits_;
    std::vector<RunNode>* runs_;
    std::string tag_;
};

} // namespace detail

/// The 2-QBF ∃(δ, μ) ∀(a, l) . matrix, as a circuit.
struct QbfProblem {
    SynthesisQuery query;
    Circuit circuit;
    AutomatonVars automaton;
    WordVars word;
    std::map<std::string, Lit> parts;
    std::vector<RunNode> run_nodes;
    Lit matrix = kTrue;

    /// Existential inputs in variable order: δ, then μ.
    std::vector<Lit> existential() const {
        std::vector<Lit> v = automaton.delta;
        v.insert(v.end(), automaton.mu.begin(), automaton.mu.end());
        return v;
    }
    /// Universal inputs in variable order: letter bits position by position, then loop markers.
    std::vector<Lit> universal() const {
        std::vector<Lit> v;
        for (const auto& bits : word.letter) v.insert(v.end(), bits.begin(), bits.end());
        v.insert(v.end(), word.loop.begin(), word.loop.end());
        return v;
    }
};

/// Fresh δ/μ inputs on a circuit.
inline AutomatonVars make_automaton_vars(Circuit& c, const SynthesisQuery& q) {
    AutomatonVars a;
    a.k = q.k;
    a.sigma = q.alphabet_size();
    a.m = q.m;
    const Alphabet& sigma = q.map.alphabet();
    for (std::size_t s = 0; s < a.k; ++s)
        for (std::size_t l = 0; l < a.sigma; ++l)
            for (std::size_t t = 0; t < a.k; ++t)
                a.delta.push_back(c.new_input("delta " + std::to_string(s) + " " + sigma.name(static_cast<LetterId>(l)) + " " +
                                              std::to_string(t)));
    for (std::size_t s = 0; s < a.k; ++s)
        for (std::size_t col = 0; col < a.m; ++col)
            a.mu.push_back(c.new_input("mu " + std::to_string(s) + " " + std::to_string(col)));
    return a;
}

/// Matrix parts for given universal literals.
struct MatrixParts {
    Lit dpa, loop;
    detail::MatrixBuilder::LassoPart incl, eq;
    Lit incl_ok, eq_ok, matrix;
};

inline MatrixParts build_matrix(Circuit& c, const SynthesisQuery& q, const AutomatonVars& a, const WordVars& w,
                                std::vector<RunNode>* runs = nullptr) {
    detail::MatrixBuilder mb(c, q, a, runs);
    MatrixParts p;
    p.dpa = mb.automaton_constraint();
    p.loop = mb.loop_constraint(w);
    p.incl = mb.lasso_part(w, q.word_length(), "incl");
    p.eq = mb.lasso_part(w, q.n, "eq");
    p.incl_ok = c.implies(p.incl.accrun, p.incl.in_phi);
    p.eq_ok = c.implies(c.land(p.eq.active, p.eq.in_phi), p.eq.accrun);
    p.matrix = c.land(p.dpa, c.implies(p.loop, c.land(p.incl_ok, p.eq_ok)));
    return p;
}

/// Symbolic encoding of the query.
inline QbfProblem encode(const SynthesisQuery& q) {
    q.validate();
    QbfProblem p;
    p.query = q;
    p.automaton = make_automaton_vars(p.circuit, q);
    const std::size_t len = q.word_length(), bits = letter_bits(q.alphabet_size());
    p.word.letter.assign(len, {});
    for (std::size_t j = 0; j < len; ++j)
        for (std::size_t b = 0; b < bits; ++b)
            p.word.letter[j].push_back(p.circuit.new_input("letter " + std::to_string(j) + " " + std::to_string(b)));
    for (std::size_t j = 0; j < len; ++j) p.word.loop.push_back(p.circuit.new_input("loop " + std::to_string(j)));
    const MatrixParts m = build_matrix(p.circuit, q, p.automaton, p.word, &p.run_nodes);
    p.parts = {{"dpa", m.dpa},
               {"loop", m.loop},
               {"incl.accrun", m.incl.accrun},
               {"incl.in_phi", m.incl.in_phi},
               {"incl", m.incl_ok},
               {"eq.active", m.eq.active},
               {"eq.in_phi", m.eq.in_phi},
               {"eq.accrun", m.eq.accrun},
               {"eq", m.eq_ok}};
    p.matrix = m.matrix;
    return p;
}

/// Constant literals for a concrete universal assignment: the word's letters
/// (length word_length) and loop start.
inline WordVars constant_word(const SynthesisQuery& q, const Word& letters, std::size_t loop_start) {
    const std::size_t len = q.word_length(), bits = letter_bits(q.alphabet_size());
    if (letters.size() != len || loop_start >= len) throw ContractError("constant_word: malformed assignment");
    WordVars w;
    w.letter.assign(len, std::vector<Lit>(bits));
    for (std::size_t j = 0; j < len; ++j)
        for (std::size_t b = 0; b < bits; ++b) w.letter[j][b] = constant((letters[j] >> b) & 1u);
    w.loop.assign(len, kFalse);
    w.loop[loop_start] = kTrue;
    return w;
}

} // namespace lasso::synth
