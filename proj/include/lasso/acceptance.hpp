#pragma once

#include <optional>
#include <vector>

#include "lasso/alphabet.hpp"
#include "lasso/automaton.hpp"
#include "lasso/graph.hpp"

namespace lasso {

/// Ultimately periodic run: states[0..loop_start) then states[loop_start..)
/// repeated forever.
struct RunLasso {
    std::vector<StateId> states;
    std::size_t loop_start = 0;

    std::size_t size() const noexcept { return states.size(); }
    bool operator==(const RunLasso& o) const { return states == o.states && loop_start == o.loop_start; }
};

/// Canonical (shortest) representation of the same infinite run.
inline RunLasso minimize_run(const RunLasso& r) {
    std::vector<StateId> stem(r.states.begin(), r.states.begin() + static_cast<std::ptrdiff_t>(r.loop_start));
    std::vector<StateId> loop(r.states.begin() + static_cast<std::ptrdiff_t>(r.loop_start), r.states.end());
    auto [u, v] = canonical_lasso(std::move(stem), std::move(loop));
    RunLasso out;
    out.loop_start = u.size();
    out.states = std::move(u);
    out.states.insert(out.states.end(), v.begin(), v.end());
    return out;
}

namespace detail {

/// Product of A with the lasso's position graph: node (i, q) means A is in q
/// before reading position i of the base; after the last position the word
/// continues at the loop start.
inline graph::LabeledGraph lasso_product(const ParityAutomaton& a, const Lasso& w) {
    const std::size_t n = w.length();
    const std::size_t q = a.size();
    const Word base = w.base();
    graph::LabeledGraph g(n * q);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t next = i + 1 < n ? i + 1 : w.stem.size();
        for (StateId s = 0; s < q; ++s) {
            const auto v = static_cast<graph::Node>(i * q + s);
            g.color[v] = a.color(s);
            for (StateId t : a.successors(s, base[i]))
                g.adj[v].emplace_back(static_cast<graph::Node>(next * q + t), base[i]);
        }
    }
    for (StateId s : a.initial()) g.initial.push_back(s);
    return g;
}

} // namespace detail

/// Does A accept u·v^ω? Decided on the position×state product graph, which
/// has |u·v|·|Q| nodes; the word is accepted iff that graph has a reachable
/// cycle whose maximal color is even.
inline bool accepts_lasso(const ParityAutomaton& a, const Lasso& w) {
    a.alphabet().check(w.stem);
    a.alphabet().check(w.loop);
    return graph::find_accepting_cycle(detail::lasso_product(a, w), false).has_value();
}

struct EmptinessResult {
    bool empty = true;
    std::optional<RunLasso> run;
    std::optional<Lasso> word;
};

namespace detail {

inline graph::LabeledGraph state_graph(const ParityAutomaton& a) {
    graph::LabeledGraph g(a.size());
    for (StateId q = 0; q < a.size(); ++q) {
        g.color[q] = a.color(q);
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            for (StateId t : a.successors(q, l)) g.adj[q].emplace_back(t, l);
    }
    g.initial = a.initial();
    return g;
}

} // namespace detail

/// Emptiness of L(A). When the language is non-empty the result carries an
/// accepting run lasso and the word it reads; the base of that word is at
/// most |A| letters long.
inline EmptinessResult is_empty(const ParityAutomaton& a) {
    auto w = graph::find_accepting_cycle(detail::state_graph(a), true);
    EmptinessResult r;
    if (!w) return r;
    r.empty = false;
    RunLasso run;
    run.states.assign(w->stem_nodes.begin(), w->stem_nodes.end());
    run.loop_start = run.states.size();
    run.states.insert(run.states.end(), w->cycle_nodes.begin(), w->cycle_nodes.end());
    r.run = run;
    r.word = Lasso(Word(w->stem_labels.begin(), w->stem_labels.end()),
                   Word(w->cycle_labels.begin(), w->cycle_labels.end()));
    return r;
}

} // namespace lasso
