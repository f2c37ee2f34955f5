#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lasso/automaton.hpp"
#include "lasso/error.hpp"
#include "lasso/operations.hpp"
#include "lasso/oracle.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Size bounds

/// (|Σ|+1)^n + |Σ|^n·(n+1)^n, the size of the full state space of the
/// language-independent safety construction.
inline double safety_construction_bound(std::size_t sigma, std::size_t n) {
    const double s = static_cast<double>(sigma), m = static_cast<double>(n);
    return std::pow(s + 1, m) + std::pow(s, m) * std::pow(m + 1, m);
}

/// n·|Q∖F|² + |F| for a Büchi automaton with accepting set F.
inline std::size_t buechi_to_safety_bound(std::size_t rejecting, std::size_t accepting, std::size_t n) {
    return n * rejecting * rejecting + accepting;
}

/// (n·|Q|+1)·|Q|·(m−m'+2).
inline std::size_t reduce_colors_bound(std::size_t states, std::size_t colors, std::size_t target, std::size_t n) {
    return (n * states + 1) * states * (colors - target + 2);
}

namespace detail {

template <class Key>
class Explorer {
public:
    explicit Explorer(AutomatonBuilder& b) : b_(b) {}

    /// Id of the state for `key`, creating it (and queueing it) if new.
    StateId get(const Key& key, const std::string& name, Color color) {
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        StateId id = b_.add_state(name, color);
        ids_.emplace(key, id);
        queue_.push_back(key);
        return id;
    }

    bool pop(Key& key) {
        if (queue_.empty()) return false;
        key = std::move(queue_.front());
        queue_.pop_front();
        return true;
    }

    StateId id(const Key& key) const { return ids_.at(key); }

private:
    AutomatonBuilder& b_;
    std::map<Key, StateId> ids_;
    std::deque<Key> queue_;
};

inline void check_bound(std::size_t states, double bound, const char* what) {
    if (static_cast<double>(states) > bound)
        throw std::logic_error(std::string(what) + ": reachable state count exceeds the theoretical bound");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Language-independent deterministic safety automaton for L_n(φ)

/// Deterministic safety automaton accepting exactly L_n(phi).
///
/// Phase one stores the first n letters (padding with '#'). On the n-th
/// letter the automaton queries the oracle once per candidate loop start i
/// and enters phase two with pointer t_i = i when w(1)…(w(i)…w(n))^ω ∈ phi.
/// In phase two every live pointer names the letter that must come next for
/// its loop start to remain possible; a mismatch kills the pointer. The state
/// with only dead pointers has no successors.
///
/// Only the reachable part is built.
inline ParityAutomaton build_safety_lasso_precise(const MembershipOracle& phi, std::size_t n) {
    if (n == 0) throw InputError("build_safety_lasso_precise: bound must be at least 1");
    const Alphabet& sigma = phi.alphabet();
    const MembershipOracle oracle = memoized(phi);
    constexpr int kHash = -1;  // '#' in phase one, '-' in phase two

    // Phase one: (false, letters with kHash padding, {}); phase two: (true, w, pointers).
    using Key = std::tuple<bool, std::vector<int>, std::vector<int>>;
    AutomatonBuilder b(sigma);
    detail::Explorer<Key> ex(b);

    auto word_name = [&](const std::vector<int>& w) {
        std::string s;
        for (int l : w) s += l == kHash ? std::string("#") : sigma.name(static_cast<LetterId>(l));
        return s;
    };
    auto state_name = [&](const Key& k) {
        const auto& [phase2, w, t] = k;
        if (!phase2) return word_name(w);
        std::string s = "(" + word_name(w) + ",(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ',';
            s += t[i] == kHash ? std::string("-") : std::to_string(t[i] + 1);
        }
        return s + "))";
    };
    auto get = [&](const Key& k) { return ex.get(k, state_name(k), 0); };

    const Key init{false, std::vector<int>(n, kHash), {}};
    b.add_initial(get(init));

    Key cur;
    while (ex.pop(cur)) {
        const StateId from = ex.id(cur);
        const auto& [phase2, w, t] = cur;
        if (!phase2) {
            const auto read = static_cast<std::size_t>(std::find(w.begin(), w.end(), kHash) - w.begin());
            for (LetterId a = 0; a < sigma.size(); ++a) {
                std::vector<int> w2 = w;
                w2[read] = static_cast<int>(a);
                if (read + 1 < n) {
                    b.add_transition(from, a, get(Key{false, w2, {}}));
                    continue;
                }
                Word base(w2.begin(), w2.end());
                std::vector<int> ptr(n, kHash);
                for (std::size_t i = 0; i < n; ++i) {
                    Lasso l(Word(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(i)),
                            Word(base.begin() + static_cast<std::ptrdiff_t>(i), base.end()));
                    if (oracle(l)) ptr[i] = static_cast<int>(i);
                }
                b.add_transition(from, a, get(Key{true, w2, ptr}));
            }
            continue;
        }
        if (std::all_of(t.begin(), t.end(), [](int x) { return x == kHash; })) continue;
        for (LetterId a = 0; a < sigma.size(); ++a) {
            std::vector<int> t2(n, kHash);
            for (std::size_t i = 0; i < n; ++i) {
                if (t[i] == kHash || w[static_cast<std::size_t>(t[i])] != static_cast<int>(a)) continue;
                t2[i] = static_cast<std::size_t>(t[i]) + 1 < n ? t[i] + 1 : static_cast<int>(i);
            }
            b.add_transition(from, a, get(Key{true, w, t2}));
        }
    }

    const double bound = safety_construction_bound(sigma.size(), n);
    detail::check_bound(b.size(), bound, "build_safety_lasso_precise");
    b.annotate("construction", "safety-lasso-precise");
    b.annotate("bound", std::to_string(n));
    b.annotate("states", std::to_string(b.size()));
    b.annotate("state-bound", std::to_string(static_cast<unsigned long long>(bound)));
    return b.build();
}

// ---------------------------------------------------------------------------
// Büchi -> safety

/// Safety automaton A' with L(A') ⊆ L(A) and L_n(A') = L_n(A) for a Büchi
/// automaton A (colors within {1,2}; a safety automaton counts as Büchi with
/// every state accepting). States are (q, c): c = 0 on accepting states,
/// otherwise the number of consecutive non-accepting states so far. A move
/// whose counter would exceed n·|Q∖F| is dropped. Determinism is preserved.
inline ParityAutomaton buechi_to_safety(const ParityAutomaton& a, std::size_t n) {
    if (n == 0) throw InputError("buechi_to_safety: bound must be at least 1");
    const bool all_accepting = a.is_safety();
    if (!all_accepting && !a.is_buchi()) throw ContractError("buechi_to_safety: automaton is not a Büchi automaton");
    auto accepting = [&](StateId q) { return all_accepting || a.color(q) == 2; };
    std::size_t rejecting = 0;
    for (StateId q = 0; q < a.size(); ++q) rejecting += !accepting(q);
    const std::size_t limit = n * rejecting;

    using Key = std::pair<StateId, std::size_t>;
    AutomatonBuilder b(a.alphabet());
    detail::Explorer<Key> ex(b);
    auto get = [&](StateId q, std::size_t c) {
        return ex.get({q, c}, "(" + a.name(q) + "," + std::to_string(c) + ")", 0);
    };
    for (StateId q : a.initial()) b.add_initial(get(q, accepting(q) ? 0 : 1));

    Key cur;
    while (ex.pop(cur)) {
        const auto [q, c] = cur;
        const StateId from = ex.id(cur);
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            for (StateId q2 : a.successors(q, l)) {
                if (accepting(q2)) b.add_transition(from, l, get(q2, 0));
                else if (c + 1 <= limit) b.add_transition(from, l, get(q2, c + 1));
            }
    }

    const std::size_t bound = buechi_to_safety_bound(rejecting, a.size() - rejecting, n);
    detail::check_bound(b.size(), static_cast<double>(bound), "buechi_to_safety");
    b.annotate("construction", "buechi-to-safety");
    b.annotate("input-states", std::to_string(a.size()));
    b.annotate("bound", std::to_string(n));
    b.annotate("states", std::to_string(b.size()));
    b.annotate("state-bound", std::to_string(bound));
    return b.build();
}

// ---------------------------------------------------------------------------
// Parity -> fewer colors

/// Deterministic parity automaton A' with at most `target` colors,
/// L(A') ⊆ L(A) and L_n(A') = L_n(A), for a deterministic A.
///
/// With N = n·|Q|: the first N steps only follow A (on an n-lasso word the
/// run is periodic afterwards). Then the largest eliminated color h seen so
/// far is tracked together with the number of steps since it last occurred;
/// if it does not recur within N steps the run is rejected. A run that never
/// sees an eliminated color keeps A's own (kept) colors after N further steps.
///
/// The eliminated colors are the m − target largest ones. For target = 1 the
/// output is a safety automaton; since no odd color is left to mark a
/// stable odd h, the counter for an odd h is not reset when h recurs, so the
/// run dies N steps after h was raised unless a larger color shows up.
inline ParityAutomaton reduce_parity_colors(const ParityAutomaton& a, std::size_t n, std::size_t target) {
    if (n == 0) throw InputError("reduce_parity_colors: bound must be at least 1");
    if (!a.is_deterministic()) throw ContractError("reduce_parity_colors: automaton is not deterministic");
    const std::size_t m = a.num_colors();
    if (target == 0) throw ContractError("reduce_parity_colors: target number of colors must be positive");
    if (target >= m)
        throw ContractError("reduce_parity_colors: target (" + std::to_string(target) +
                            ") must be smaller than the number of colors (" + std::to_string(m) + ")");

    const Color lo = a.min_color();
    const std::size_t big_n = n * a.size();
    const Color threshold = target == 1 ? 1 : lo + static_cast<Color>(target);  // colors >= threshold are eliminated
    const Color base_color = target == 1 ? 0 : lo;
    const Color even_color = target == 1 ? 0 : (lo % 2 == 0 ? lo : lo + 1);
    const Color odd_color = target == 1 ? 0 : (lo % 2 == 1 ? lo : lo + 1);
    constexpr int kNone = -1;

    // (q, c, h, phase2)
    using Key = std::tuple<StateId, std::size_t, int, bool>;
    AutomatonBuilder b(a.alphabet());
    detail::Explorer<Key> ex(b);
    auto get = [&](StateId q, std::size_t c, int h, bool phase2) {
        std::string name = "(" + a.name(q) + "," + std::to_string(c);
        Color col = base_color;
        if (phase2) {
            name += "," + std::to_string(h);
            if (h == kNone && c == big_n) col = a.color(q);
            else if (h != kNone) col = (h % 2 == 0) ? even_color : odd_color;
        }
        return ex.get({q, c, h, phase2}, name + ")", col);
    };
    auto tracked = [&](StateId q2, std::size_t c) {
        const Color mu = a.color(q2);
        return mu >= threshold ? std::make_pair(static_cast<std::size_t>(0), static_cast<int>(mu))
                               : std::make_pair(c, kNone);
    };
    b.add_initial(get(a.initial().front(), 0, kNone, false));

    Key cur;
    while (ex.pop(cur)) {
        const auto [q, c, h, phase2] = cur;
        const StateId from = ex.id(cur);
        for (LetterId l = 0; l < a.alphabet().size(); ++l) {
            auto next = a.successor(q, l);
            if (!next) continue;
            const StateId q2 = *next;
            const Color mu = a.color(q2);
            if (!phase2) {
                if (c + 1 < big_n) {
                    b.add_transition(from, l, get(q2, c + 1, kNone, false));
                } else {
                    auto [c2, h2] = tracked(q2, 0);
                    b.add_transition(from, l, get(q2, c2, h2, true));
                }
                continue;
            }
            if (h == kNone) {
                if (c < big_n) {
                    auto [c2, h2] = tracked(q2, c + 1);
                    b.add_transition(from, l, get(q2, c2, h2, true));
                } else if (mu < threshold) {
                    b.add_transition(from, l, get(q2, big_n, kNone, true));
                }
                continue;
            }
            const Color hc = static_cast<Color>(h);
            const bool reset_on_recur = target > 1 || hc % 2 == 0;
            if (mu > hc) b.add_transition(from, l, get(q2, 0, static_cast<int>(mu), true));
            else if (mu == hc && reset_on_recur) b.add_transition(from, l, get(q2, 0, h, true));
            else if (c + 1 < big_n) b.add_transition(from, l, get(q2, c + 1, h, true));
        }
    }

    const std::size_t bound = reduce_colors_bound(a.size(), m, target, n);
    detail::check_bound(b.size(), static_cast<double>(bound), "reduce_parity_colors");
    b.annotate("construction", "reduce-parity-colors");
    b.annotate("input-states", std::to_string(a.size()));
    b.annotate("input-colors", std::to_string(m));
    b.annotate("target-colors", std::to_string(target));
    b.annotate("bound", std::to_string(n));
    b.annotate("states", std::to_string(b.size()));
    b.annotate("state-bound", std::to_string(bound));
    ParityAutomaton out = b.build();
    if (out.num_colors() > target) throw std::logic_error("reduce_parity_colors: too many colors in the result");
    return out;
}

/// One color less: reduce_parity_colors(a, n, m − 1).
inline ParityAutomaton drop_one_color(const ParityAutomaton& a, std::size_t n) {
    const std::size_t m = a.num_colors();
    if (m < 2) throw ContractError("drop_one_color: automaton has a single color");
    return reduce_parity_colors(a, n, m - 1);
}

// ---------------------------------------------------------------------------
// Overapproximation

struct SafetyTarget {};
struct ColorTarget {
    std::size_t colors;
};
using ApproximationTarget = std::variant<SafetyTarget, ColorTarget>;

/// n-lasso-precise underapproximation of a deterministic automaton for the
/// given target class. Inputs already in the class are returned unchanged.
inline ParityAutomaton underapproximate(const ParityAutomaton& a, std::size_t n, const ApproximationTarget& target) {
    if (std::holds_alternative<SafetyTarget>(target)) {
        if (a.is_safety()) return a;
        if (a.is_buchi()) return buechi_to_safety(a, n);
        return reduce_parity_colors(a, n, 1);
    }
    const std::size_t m = std::get<ColorTarget>(target).colors;
    if (a.num_colors() <= m) return a;
    return reduce_parity_colors(a, n, m);
}

/// n-lasso-precise overapproximation: complement, underapproximate, and
/// complement again. The target class applies to the inner automaton, so a
/// safety target yields the complement of a safety automaton (a Büchi
/// automaton whose accepting states are absorbing).
inline ParityAutomaton overapproximate(const ParityAutomaton& a, std::size_t n, const ApproximationTarget& target) {
    if (!a.is_deterministic()) throw ContractError("overapproximate: automaton is not deterministic");
    const ParityAutomaton co = complement_dpa(complete_with_sink(a));
    const ParityAutomaton under = underapproximate(co, n, target);
    if (!under.is_deterministic()) throw std::logic_error("overapproximate: inner approximation is not deterministic");
    return complement_dpa(complete_with_sink(under));
}

} // namespace lasso
