#pragma once

#include <optional>
#include <string>
#include <utility>

#include "lasso/lassolab.hpp"
#include "lasso/synth/encode.hpp"
#include "lasso/synth/external.hpp"
#include "lasso/synth/qdimacs.hpp"
#include "lasso/synth/solve.hpp"

namespace lasso::synth {

struct SynthesisOptions {
    std::size_t expansion_limit = 1'000'000;
    std::optional<std::string> solver_command;  // external QBF solver; internal expansion otherwise
    std::size_t jobs = 1;                       // for re-verification
};

struct SynthesisResult {
    bool sat = false;
    std::optional<ParityAutomaton> automaton;  // absent on UNSAT or in verdict-only mode
    bool verdict_only = false;
    std::string backend;
    std::size_t universal_count = 0;
    std::optional<PrecisionReport> verification;
};

/// Decides a query and re-verifies any certificate with the exhaustive
/// precision check at the query's bounds. A certificate that fails the
/// check raises SolverError.
inline SynthesisResult synthesize(const SynthesisQuery& q, const SynthesisOptions& opt = {}) {
    q.validate();
    SynthesisResult r;
    std::optional<Model> model;
    if (opt.solver_command) {
        r.backend = "external";
        const QbfProblem p = encode(q);
        const ExternalResult ext = run_external_solver(*opt.solver_command, emit_qdimacs(p));
        r.sat = ext.sat;
        if (r.sat) {
            const std::size_t vars = p.existential().size();
            bool complete = ext.assignment.has_value();
            Model m(vars, false);
            for (std::size_t v = 0; complete && v < vars; ++v) {
                auto it = ext.assignment->find(static_cast<int>(v) + 1);
                if (it == ext.assignment->end()) complete = false;
                else m[v] = it->second;
            }
            if (complete) model = std::move(m);
            else r.verdict_only = true;
        }
    } else {
        r.backend = "expansion";
        const ExpansionResult e = solve_by_expansion(q, opt.expansion_limit);
        r.universal_count = e.universal_count;
        r.sat = e.sat;
        if (e.sat) model = e.model;
    }
    if (model) {
        ParityAutomaton a = decode(q, *model);
        PrecisionReport report =
            check_lasso_precise(a, ltl::ltl_oracle(q.formula, q.map), q.n, q.inclusion_bound_value(), static_cast<unsigned>(opt.jobs));
        if (!report.passed())
            throw SolverError("certificate failed re-verification (" + std::to_string(report.mismatches.size()) +
                              " mismatches, " + std::to_string(report.inclusion_violations.size()) + " inclusion violations)");
        r.verification = std::move(report);
        r.automaton = std::move(a);
    }
    return r;
}

/// Smallest k in 1..k_max for which the query is satisfiable.
inline std::optional<std::pair<std::size_t, SynthesisResult>> synthesize_minimal(SynthesisQuery q, std::size_t k_max,
                                                                                 const SynthesisOptions& opt = {}) {
    if (k_max == 0) throw InputError("synthesize_minimal: k_max must be at least 1");
    for (std::size_t k = 1; k <= k_max; ++k) {
        q.k = k;
        SynthesisResult r = synthesize(q, opt);
        if (r.sat) return std::make_pair(k, std::move(r));
    }
    return std::nullopt;
}

} // namespace lasso::synth
