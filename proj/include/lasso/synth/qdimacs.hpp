#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lasso/error.hpp"
#include "lasso/synth/encode.hpp"
#include "lasso/synth/sat.hpp"

namespace lasso::synth {

/// Prenex CNF with a quantifier prefix.
struct Qdimacs {
    struct Block {
        char quantifier;  // 'e' or 'a'
        std::vector<int> vars;
    };
    int num_vars = 0;
    std::vector<Block> prefix;
    std::vector<std::vector<int>> clauses;
    std::vector<std::string> comments;
};

/// CNF form of an encoded problem. Variables 1..E are δ then μ, E+1..E+U
/// the universal letter bits and loop markers, and the rest Tseitin
/// auxiliaries (including the run-state nodes), quantified innermost.
inline Qdimacs to_qdimacs(const QbfProblem& p) {
    Qdimacs q;
    Cnf cnf;
    const auto ex = p.existential(), un = p.universal();
    cnf.num_vars = static_cast<int>(ex.size() + un.size());
    Tseitin t(p.circuit, cnf, [](std::uint32_t index) { return static_cast<int>(index) + 1; });
    std::vector<std::pair<std::string, int>> part_lits;
    for (const auto& [name, lit] : p.parts) part_lits.emplace_back(name, t.literal(lit));
    std::vector<std::pair<std::string, int>> run_lits;
    for (const auto& r : p.run_nodes) run_lits.emplace_back(r.part + " " + r.name, t.literal(r.lit));
    t.assert_true(p.matrix);

    const SynthesisQuery& s = p.query;
    q.comments.push_back("lasso-precise synthesis query");
    q.comments.push_back("formula " + ltl::to_string(s.formula));
    {
        std::string names = "alphabet";
        for (const auto& l : s.map.alphabet().letters()) names += " " + l;
        q.comments.push_back(names);
    }
    q.comments.push_back("bounds n " + std::to_string(s.n) + " k " + std::to_string(s.k) + " m " + std::to_string(s.m) +
                         " inclusion " + std::to_string(s.inclusion_bound_value()) + " kind " +
                         (s.kind == TargetKind::Deterministic ? "deterministic" : "nondeterministic"));
    for (std::size_t i = 0; i < ex.size() + un.size(); ++i)
        q.comments.push_back("role " + std::to_string(i + 1) + " " + p.circuit.input_name(static_cast<std::uint32_t>(i)));
    for (const auto& [name, lit] : part_lits) q.comments.push_back("role " + std::to_string(lit) + " part " + name);
    for (const auto& [name, lit] : run_lits) q.comments.push_back("role " + std::to_string(lit) + " run " + name);

    q.num_vars = cnf.num_vars;
    Qdimacs::Block e{'e', {}}, a{'a', {}}, aux{'e', {}};
    for (std::size_t i = 0; i < ex.size(); ++i) e.vars.push_back(static_cast<int>(i) + 1);
    for (std::size_t i = 0; i < un.size(); ++i) a.vars.push_back(static_cast<int>(ex.size() + i) + 1);
    for (int v = static_cast<int>(ex.size() + un.size()) + 1; v <= cnf.num_vars; ++v) aux.vars.push_back(v);
    q.prefix = {e, a};
    if (!aux.vars.empty()) q.prefix.push_back(aux);
    q.clauses = std::move(cnf.clauses);
    return q;
}

inline std::string write_qdimacs(const Qdimacs& q) {
    std::ostringstream out;
    for (const auto& c : q.comments) out << "c " << c << '\n';
    out << "p cnf " << q.num_vars << ' ' << q.clauses.size() << '\n';
    for (const auto& b : q.prefix) {
        out << b.quantifier;
        for (int v : b.vars) out << ' ' << v;
        out << " 0\n";
    }
    for (const auto& c : q.clauses) {
        for (int l : c) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

/// QDIMACS text for an encoded problem; identical input gives identical output.
inline std::string emit_qdimacs(const QbfProblem& p) { return write_qdimacs(to_qdimacs(p)); }

inline Qdimacs parse_qdimacs(const std::string& text) {
    Qdimacs q;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    long declared_clauses = -1;
    std::set<int> quantified;
    auto fail = [&](const std::string& what) { throw ParseError(what, line_no, 1); };
    auto read_ints = [&](std::istringstream& ls) {
        std::vector<int> v;
        long x;
        while (ls >> x) {
            if (x == 0) return v;
            if (std::labs(x) > q.num_vars) fail("literal " + std::to_string(x) + " exceeds the declared variable count");
            v.push_back(static_cast<int>(x));
        }
        if (!ls.eof()) fail("expected an integer");
        fail("missing terminating 0");
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") {
            q.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        if (tok == "p") {
            if (header) fail("duplicate problem line");
            std::string fmt;
            long vars = 0;
            if (!(ls >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars < 0 || declared_clauses < 0)
                fail("malformed problem line (expected 'p cnf <vars> <clauses>')");
            q.num_vars = static_cast<int>(vars);
            header = true;
            continue;
        }
        if (!header) fail("clause or quantifier before the problem line");
        if (tok == "e" || tok == "a") {
            if (!q.clauses.empty()) fail("quantifier line after clauses");
            auto vars = read_ints(ls);
            for (int v : vars) {
                if (v < 0) fail("negative variable in quantifier block");
                if (!quantified.insert(v).second) fail("variable " + std::to_string(v) + " quantified twice");
            }
            if (!q.prefix.empty() && q.prefix.back().quantifier == tok[0])
                q.prefix.back().vars.insert(q.prefix.back().vars.end(), vars.begin(), vars.end());
            else
                q.prefix.push_back({tok[0], std::move(vars)});
            continue;
        }
        std::istringstream cs(line);
        q.clauses.push_back(read_ints(cs));
    }
    if (!header) throw ParseError("missing problem line", line_no, 1);
    if (static_cast<long>(q.clauses.size()) != declared_clauses)
        throw ParseError("declared " + std::to_string(declared_clauses) + " clauses, found " + std::to_string(q.clauses.size()),
                         line_no, 1);
    return q;
}

struct QdimacsResult {
    bool sat = false;
    std::map<int, bool> assignment;  // outermost existential variables, when sat
};

/// Decides a QDIMACS formula with prefix [∃X] ∀Y [∃Z] by expanding Y.
/// Unquantified variables belong to the outermost existential block.
inline QdimacsResult solve_qdimacs_by_expansion(const Qdimacs& q, std::size_t limit) {
    std::vector<int> outer, universal, inner;
    std::size_t i = 0;
    if (i < q.prefix.size() && q.prefix[i].quantifier == 'e') outer = q.prefix[i++].vars;
    if (i < q.prefix.size() && q.prefix[i].quantifier == 'a') universal = q.prefix[i++].vars;
    if (i < q.prefix.size() && q.prefix[i].quantifier == 'e') inner = q.prefix[i++].vars;
    if (i < q.prefix.size()) throw InputError("qdimacs: only prefixes of the form [e] [a] [e] are supported");
    std::vector<char> role(static_cast<std::size_t>(q.num_vars) + 1, 'x');
    for (int v : universal) role[static_cast<std::size_t>(v)] = 'a';
    for (int v : inner) role[static_cast<std::size_t>(v)] = 'i';
    for (int v = 1; v <= q.num_vars; ++v)
        if (role[static_cast<std::size_t>(v)] == 'x') outer.push_back(v);
    std::sort(outer.begin(), outer.end());
    outer.erase(std::unique(outer.begin(), outer.end()), outer.end());

    if (universal.size() >= 63 || (std::uint64_t{1} << universal.size()) > limit)
        throw ResourceLimit("qdimacs expansion needs 2^" + std::to_string(universal.size()) + " instances",
                            universal.size() >= 63 ? std::numeric_limits<std::size_t>::max()
                                                   : static_cast<std::size_t>(std::uint64_t{1} << universal.size()));
    std::vector<int> index(static_cast<std::size_t>(q.num_vars) + 1, -1);
    for (std::size_t u = 0; u < universal.size(); ++u) index[static_cast<std::size_t>(universal[u])] = static_cast<int>(u);
    for (std::size_t z = 0; z < inner.size(); ++z) index[static_cast<std::size_t>(inner[z])] = static_cast<int>(z);

    SatSolver solver;
    for (int v = 1; v <= q.num_vars; ++v) solver.new_var();  // outer variables keep their numbers
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << universal.size()); ++y) {
        const int base = solver.num_vars();
        for (std::size_t z = 0; z < inner.size(); ++z) solver.new_var();
        for (const auto& clause : q.clauses) {
            std::vector<int> out;
            bool satisfied = false;
            for (int l : clause) {
                const auto v = static_cast<std::size_t>(std::abs(l));
                if (role[v] == 'a') {
                    const bool val = (y >> index[v]) & 1u;
                    if (val == (l > 0)) {
                        satisfied = true;
                        break;
                    }
                } else if (role[v] == 'i') {
                    const int nv = base + index[v] + 1;
                    out.push_back(l > 0 ? nv : -nv);
                } else {
                    out.push_back(l);
                }
            }
            if (satisfied) continue;
            if (!solver.add_clause(out)) break;
        }
    }
    QdimacsResult r;
    r.sat = solver.solve() == SatResult::Sat;
    if (r.sat)
        for (int v : outer) r.assignment[v] = solver.model_value(v);
    return r;
}

} // namespace lasso::synth
