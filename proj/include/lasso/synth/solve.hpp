#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lasso/automaton.hpp"
#include "lasso/error.hpp"
#include "lasso/synth/encode.hpp"
#include "lasso/synth/sat.hpp"

namespace lasso::synth {

/// Assignment of the existential variables (δ then μ, as in QbfProblem::existential).
using Model = std::vector<bool>;

struct ExpansionResult {
    bool sat = false;
    Model model;                       // valid when sat
    std::size_t universal_count = 0;   // well-formed universal assignments expanded
    std::size_t distinct_instances = 0;
    std::size_t clauses = 0;
};

/// Number of well-formed universal assignments: |Σ|^N letters × N loop starts.
inline double universal_assignment_count(const SynthesisQuery& q) {
    const double len = static_cast<double>(q.word_length());
    return len * std::pow(static_cast<double>(q.alphabet_size()), len);
}

/// Calls f(word, loop_start) for every well-formed universal assignment.
template <class F>
void for_each_universal(const SynthesisQuery& q, F&& f) {
    const std::size_t len = q.word_length(), sigma = q.alphabet_size();
    Word w(len, 0);
    for (;;) {
        for (std::size_t loop = 0; loop < len; ++loop) f(w, loop);
        std::size_t j = 0;
        while (j < len && ++w[j] == sigma) w[j++] = 0;
        if (j == len) return;
    }
}

/// Decides the query by expanding the universal block: every well-formed
/// (word, loop) assignment instantiates the matrix with constants; the
/// conjunction is hash-consed (identical instances collapse) and handed to
/// the SAT solver.
inline ExpansionResult solve_by_expansion(const SynthesisQuery& q, std::size_t limit) {
    q.validate();
    const double count = universal_assignment_count(q);
    if (count > static_cast<double>(limit))
        throw ResourceLimit("universal expansion needs " + std::to_string(static_cast<unsigned long long>(count)) +
                                " instances, limit is " + std::to_string(limit),
                            count > static_cast<double>(std::numeric_limits<std::size_t>::max())
                                ? std::numeric_limits<std::size_t>::max()
                                : static_cast<std::size_t>(count));
    ExpansionResult r;
    Circuit c;
    const AutomatonVars a = make_automaton_vars(c, q);
    std::vector<Lit> instances;
    for_each_universal(q, [&](const Word& w, std::size_t loop) {
        instances.push_back(build_matrix(c, q, a, constant_word(q, w, loop)).matrix);
        ++r.universal_count;
    });
    std::sort(instances.begin(), instances.end());
    instances.erase(std::unique(instances.begin(), instances.end()), instances.end());
    r.distinct_instances = instances.size();
    const Lit all = c.land(std::move(instances));

    Cnf cnf;
    const std::size_t existential = a.delta.size() + a.mu.size();
    cnf.num_vars = static_cast<int>(existential);
    Tseitin t(c, cnf, [](std::uint32_t index) { return static_cast<int>(index) + 1; });
    t.assert_true(all);
    r.clauses = cnf.clauses.size();
    SatSolver solver;
    solver.add_cnf(cnf);
    r.sat = solver.solve() == SatResult::Sat;
    if (r.sat) {
        r.model.resize(existential);
        for (std::size_t v = 0; v < existential; ++v) r.model[v] = solver.model_value(static_cast<int>(v) + 1);
    }
    return r;
}

inline ExpansionResult solve_by_expansion(const QbfProblem& p, std::size_t limit) {
    return solve_by_expansion(p.query, limit);
}

/// Automaton described by a model: states s0…s(k−1), s0 initial.
inline ParityAutomaton decode(const SynthesisQuery& q, const Model& model) {
    const std::size_t k = q.k, sigma = q.alphabet_size(), m = q.m;
    if (model.size() != k * sigma * k + k * m)
        throw ContractError("decode: model has " + std::to_string(model.size()) + " values, expected " +
                            std::to_string(k * sigma * k + k * m));
    AutomatonBuilder b(q.map.alphabet());
    for (std::size_t s = 0; s < k; ++s) {
        std::optional<Color> color;
        for (std::size_t c = 0; c < m; ++c) {
            if (!model[k * sigma * k + s * m + c]) continue;
            if (color) throw ContractError("decode: state s" + std::to_string(s) + " has two colors");
            color = static_cast<Color>(c);
        }
        if (!color) throw ContractError("decode: state s" + std::to_string(s) + " has no color");
        b.add_state("s" + std::to_string(s), *color);
    }
    b.add_initial(0);
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t l = 0; l < sigma; ++l) {
            std::size_t succ = 0;
            for (std::size_t t = 0; t < k; ++t)
                if (model[(s * sigma + l) * k + t]) {
                    b.add_transition(static_cast<StateId>(s), static_cast<LetterId>(l), static_cast<StateId>(t));
                    ++succ;
                }
            if (succ > 1 && q.kind == TargetKind::Deterministic)
                throw ContractError("decode: state s" + std::to_string(s) + " has several successors on one letter");
        }
    b.annotate("construction", "synthesized");
    b.annotate("formula", ltl::to_string(q.formula));
    b.annotate("bound", std::to_string(q.n));
    b.annotate("state-budget", std::to_string(q.k));
    b.annotate("color-budget", std::to_string(q.m));
    return b.build();
}

inline ParityAutomaton decode(const QbfProblem& p, const Model& model) { return decode(p.query, model); }

} // namespace lasso::synth
