#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "lasso/acceptance.hpp"
#include "lasso/automaton.hpp"
#include "lasso/error.hpp"

namespace lasso {

/// Adds one fresh rejecting sink (odd color, self-loops on every letter) and
/// redirects every undefined transition to it. Complete inputs are returned
/// unchanged.
inline ParityAutomaton complete_with_sink(const ParityAutomaton& a) {
    if (a.is_complete()) return a;
    Color sink_color = 1;
    for (Color c : a.color_image())
        if (c % 2 == 1) {
            sink_color = c;
            break;
        }
    AutomatonBuilder b = to_builder(a);
    std::string name = "sink";
    while (a.find(name)) name += "'";
    const StateId sink = b.add_state(name, sink_color);
    for (StateId q = 0; q < a.size(); ++q)
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            if (a.successors(q, l).empty()) b.add_transition(q, l, sink);
    for (LetterId l = 0; l < a.alphabet().size(); ++l) b.add_transition(sink, l, sink);
    return b.build();
}

/// Complement of a complete deterministic parity automaton: same structure,
/// every color shifted by one.
inline ParityAutomaton complement_dpa(const ParityAutomaton& a) {
    if (!a.is_deterministic()) throw ContractError("complement_dpa: automaton is not deterministic");
    if (!a.is_complete()) throw ContractError("complement_dpa: automaton is not complete (use complete_with_sink)");
    AutomatonBuilder b = to_builder(a);
    for (StateId q = 0; q < a.size(); ++q) b.set_color(q, a.color(q) + 1);
    return b.build();
}

/// Synchronous product of a safety automaton S with A, keeping A's colors.
/// Only pairs reachable from the initial pairs are built.
inline ParityAutomaton product_safety(const ParityAutomaton& s, const ParityAutomaton& a) {
    if (!s.is_safety()) throw ContractError("product_safety: first operand is not a safety automaton");
    if (!(s.alphabet() == a.alphabet())) throw ContractError("product_safety: alphabets differ");
    AutomatonBuilder b(a.alphabet());
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::deque<std::pair<StateId, StateId>> queue;
    auto id_of = [&](StateId x, StateId y) {
        auto key = std::make_pair(x, y);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        StateId id = b.add_state("(" + s.name(x) + "," + a.name(y) + ")", a.color(y));
        ids.emplace(key, id);
        queue.push_back(key);
        return id;
    };
    for (StateId x : s.initial())
        for (StateId y : a.initial()) b.add_initial(id_of(x, y));
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        const StateId from = ids.at({x, y});
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            for (StateId x2 : s.successors(x, l))
                for (StateId y2 : a.successors(y, l)) b.add_transition(from, l, id_of(x2, y2));
    }
    return b.build();
}

struct InclusionResult {
    bool holds = true;
    std::optional<Lasso> counterexample;
};

/// Exact check of L(S) ⊆ L(D) for a safety automaton S and a deterministic
/// parity automaton D, via emptiness of S × complement(D).
inline InclusionResult check_inclusion_exact(const ParityAutomaton& s, const ParityAutomaton& d) {
    if (!s.is_safety()) throw ContractError("check_inclusion_exact: left operand is not a safety automaton");
    if (!d.is_deterministic()) throw ContractError("check_inclusion_exact: right operand is not deterministic");
    auto e = is_empty(product_safety(s, complement_dpa(complete_with_sink(d))));
    InclusionResult r;
    r.holds = e.empty;
    r.counterexample = e.word;
    return r;
}

} // namespace lasso
