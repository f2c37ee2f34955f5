#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lasso/lasso.hpp"

namespace lasso::cli {

/// Process exit codes; a total function of the outcome class.
enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,  // precision check failed, or synthesis query unsatisfiable
    kUsage = 2,        // parse or usage error
    kContract = 3,     // precondition violated (e.g. nondeterministic input)
    kResource = 4,     // search or expansion limit exceeded
    kSolver = 5,       // external solver failure
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so a failure never leaves a partial file behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InputError("cannot write '" + path + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw InputError("cannot write '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot write '" + path + "': " + ec.message());
    }
}

inline std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

/// LTL formula plus AP alphabet from the command-line options.
struct LtlInput {
    ltl::Formula formula;
    ltl::ApLetterMap map{std::vector<std::string>{}};
};

inline LtlInput ltl_input(const std::string& text, const std::string& aps_opt, const std::string& alphabet_opt) {
    LtlInput in;
    std::vector<std::string> aps;
    if (!aps_opt.empty()) {
        aps = split(aps_opt, ", ");
        in.formula = ltl::parse(text, aps);
    } else {
        in.formula = ltl::parse(text);
        aps = ltl::atoms(in.formula);
    }
    if (alphabet_opt.empty()) {
        in.map = ltl::ApLetterMap(aps);
    } else {
        const Alphabet full = Alphabet::from_aps(aps);
        std::vector<std::uint32_t> masks;
        for (const auto& letter : split(alphabet_opt, "; \t")) {
            const LetterId id = full.index(letter);
            masks.push_back(full.mask(id));
        }
        in.map = ltl::ApLetterMap(Alphabet::from_aps(aps, masks));
    }
    return in;
}

inline std::string bound_text(const ParityAutomaton& a) {
    for (const auto& [k, v] : a.annotations())
        if (k == "state-bound") return v;
    return "n/a";
}

inline void emit_automaton(const ParityAutomaton& a, const std::string& out_path, const std::string& dot_path,
                           const std::string& name, std::ostream& out) {
    const std::string text = hoa::write(a, name);
    if (out_path.empty() || out_path == "-") out << text;
    else write_file_atomic(out_path, text);
    if (!dot_path.empty()) write_file_atomic(dot_path, to_dot(a));
}

/// An LTL formula from a file: lines starting with '#' are comments, the
/// remaining lines are joined.
inline std::string read_ltl_file(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line, text;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        text += line + ' ';
    }
    if (text.find_first_not_of(" \t\r") == std::string::npos) throw InputError("'" + path + "' contains no formula");
    return text;
}

inline std::optional<ApproximationTarget> parse_target(const std::string& t) {
    if (t == "safety") return SafetyTarget{};
    if (t.rfind("parity:", 0) == 0) {
        const std::string num = t.substr(7);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
        const std::size_t m = std::stoul(num);
        if (m == 0) return std::nullopt;
        return ColorTarget{m};
    }
    return std::nullopt;
}

} // namespace detail

/// Runs the command line; returns the exit code. Output goes to `out`,
/// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Lasso-precise approximation and synthesis of omega-automata"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lassotool 1.0");

    // approximate ---------------------------------------------------------
    struct {
        std::string ltl, ltl_file, in, aps, alphabet, target = "safety", direction = "under", out, dot;
        std::size_t bound = 0;
    } ap;
    auto* approximate = app.add_subcommand("approximate", "Build an n-lasso-precise approximation");
    auto* ap_src = approximate->add_option_group("input");
    ap_src->add_option("--ltl", ap.ltl, "LTL formula");
    ap_src->add_option("--ltl-file", ap.ltl_file, "File containing an LTL formula");
    ap_src->add_option("--in", ap.in, "Automaton in HOA format");
    ap_src->require_option(1);
    approximate->add_option("--aps", ap.aps, "Atomic propositions (comma separated; default: atoms of the formula)");
    approximate->add_option("--alphabet", ap.alphabet, "Restrict to these letters, e.g. \"{p};{}\"");
    approximate->add_option("--bound,-n", ap.bound, "Precision bound n")->required();
    approximate->add_option("--target", ap.target, "safety | parity:<m>");
    approximate->add_option("--direction", ap.direction, "under | over")->check(CLI::IsMember({"under", "over"}));
    approximate->add_option("--out,-o", ap.out, "Output HOA file (default: stdout)");
    approximate->add_option("--dot", ap.dot, "Also write a DOT graph");

    // check ---------------------------------------------------------------
    struct {
        std::string in, ltl, ltl_file, ref, aps, alphabet, report;
        std::size_t bound = 0;
        std::optional<std::size_t> inclusion;
        unsigned jobs = 1;
    } ck;
    auto* check = app.add_subcommand("check", "Check n-lasso-precision of an automaton");
    check->add_option("--in", ck.in, "Automaton in HOA format")->required();
    auto* ck_src = check->add_option_group("property");
    ck_src->add_option("--ltl", ck.ltl, "LTL formula");
    ck_src->add_option("--ltl-file", ck.ltl_file, "File containing an LTL formula");
    ck_src->add_option("--ref", ck.ref, "Reference automaton in HOA format");
    ck_src->require_option(1);
    check->add_option("--aps", ck.aps, "Atomic propositions (comma separated)");
    check->add_option("--alphabet", ck.alphabet, "Restrict to these letters");
    check->add_option("--bound,-n", ck.bound, "Precision bound n")->required();
    check->add_option("--inclusion-bound", ck.inclusion, "Largest base checked for containment (default 2n)");
    check->add_option("--jobs,-j", ck.jobs, "Worker threads");
    check->add_option("--report", ck.report, "Write a JSON report");

    // synthesize ----------------------------------------------------------
    struct {
        std::string ltl, ltl_file, aps, alphabet, solver, emit, out, result;
        std::size_t bound = 0, states = 1, colors = 1, max_states = 0, limit = 1'000'000;
        std::optional<std::size_t> inclusion;
        bool minimal = false, nondet = false;
        unsigned jobs = 1;
    } sy;
    auto* synthesize = app.add_subcommand("synthesize", "Search for a small lasso-precise automaton");
    auto* sy_src = synthesize->add_option_group("formula");
    sy_src->add_option("--ltl", sy.ltl, "LTL formula");
    sy_src->add_option("--ltl-file", sy.ltl_file, "File containing an LTL formula");
    sy_src->require_option(1);
    synthesize->add_option("--aps", sy.aps, "Atomic propositions (comma separated)");
    synthesize->add_option("--alphabet", sy.alphabet, "Restrict to these letters");
    synthesize->add_option("--bound,-n", sy.bound, "Precision bound n")->required();
    synthesize->add_option("--states,-k", sy.states, "State budget k");
    synthesize->add_option("--colors,-m", sy.colors, "Color budget m");
    synthesize->add_option("--inclusion-bound", sy.inclusion, "Largest base checked for containment (default n*k)");
    synthesize->add_flag("--minimal", sy.minimal, "Try k = 1 .. --max-states");
    synthesize->add_option("--max-states", sy.max_states, "Largest k tried with --minimal");
    synthesize->add_flag("--nondeterministic", sy.nondet, "Nondeterministic target (experimental)");
    synthesize->add_option("--solver", sy.solver, std::string("External QBF solver command (default: $") + synth::kSolverEnv + ")");
    synthesize->add_option("--expansion-limit", sy.limit, "Maximum number of universal assignments expanded");
    synthesize->add_option("--emit-qbf", sy.emit, "Write the QDIMACS encoding");
    synthesize->add_option("--out,-o", sy.out, "Output HOA file for the witness");
    synthesize->add_option("--result", sy.result, "Write a JSON result file");
    synthesize->add_option("--jobs,-j", sy.jobs, "Worker threads for re-verification");

    // family --------------------------------------------------------------
    struct {
        std::string name, sigma = "01", out;
        std::size_t k = 1, n = 1;
        bool construct = false;
    } fa;
    auto* family = app.add_subcommand("family", "Emit a fixture family");
    family->add_option("name", fa.name, "gf1 | omega | phi-n | fg-gf | intro")->required();
    family->add_option("--k", fa.k, "Parameter k of omega");
    family->add_option("--n", fa.n, "Parameter n of phi-n");
    family->add_option("--sigma", fa.sigma, "Alphabet of phi-n, one character per letter");
    family->add_flag("--construct", fa.construct, "phi-n: emit the safety automaton for L_n instead of the description");
    family->add_option("--out,-o", fa.out, "Output file (default: stdout)");

    // info / complement / qbf-solve -----------------------------------------
    std::string info_in, comp_in, comp_out, qbf_file;
    std::size_t qbf_limit = 1u << 20;
    auto* info = app.add_subcommand("info", "Describe an automaton");
    info->add_option("--in", info_in, "Automaton in HOA format")->required();
    auto* complement = app.add_subcommand("complement", "Complement a deterministic automaton");
    complement->add_option("--in", comp_in, "Automaton in HOA format")->required();
    complement->add_option("--out,-o", comp_out, "Output HOA file (default: stdout)");
    auto* qbf = app.add_subcommand("qbf-solve", "Decide a small QDIMACS formula by universal expansion");
    qbf->add_option("file", qbf_file, "QDIMACS file")->required();
    qbf->add_option("--limit", qbf_limit, "Maximum number of universal assignments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!ap.ltl_file.empty()) ap.ltl = detail::read_ltl_file(ap.ltl_file);
        if (!ck.ltl_file.empty()) ck.ltl = detail::read_ltl_file(ck.ltl_file);
        if (!sy.ltl_file.empty()) sy.ltl = detail::read_ltl_file(sy.ltl_file);
        if (*approximate) {
            if (ap.bound == 0) throw InputError("--bound must be at least 1");
            const auto target = detail::parse_target(ap.target);
            if (!target) throw InputError("--target must be 'safety' or 'parity:<m>' with m >= 1");
            std::optional<ParityAutomaton> result;
            if (!ap.ltl.empty()) {
                if (!std::holds_alternative<SafetyTarget>(*target) || ap.direction != "under")
                    throw ContractError("LTL input supports only --target safety --direction under; "
                                        "use an automaton input for color reduction or overapproximation");
                const auto in = detail::ltl_input(ap.ltl, ap.aps, ap.alphabet);
                result = build_safety_lasso_precise(ltl::ltl_oracle(in.formula, in.map), ap.bound);
            } else {
                const ParityAutomaton a = hoa::parse(detail::read_file(ap.in));
                result = ap.direction == "under" ? underapproximate(a, ap.bound, *target)
                                                 : overapproximate(a, ap.bound, *target);
            }
            detail::emit_automaton(*result, ap.out, ap.dot, "", out);
            err << "type: " << automaton_type(*result) << "\nstates: " << result->size()
                << "\ncolors: " << result->num_colors() << "\nstate-bound: " << detail::bound_text(*result) << "\n";
            return kOk;
        }

        if (*check) {
            if (ck.bound == 0) throw InputError("--bound must be at least 1");
            const ParityAutomaton a = hoa::parse(detail::read_file(ck.in));
            const std::size_t B = ck.inclusion.value_or(2 * ck.bound);
            PrecisionReport r;
            if (!ck.ltl.empty()) {
                auto in = detail::ltl_input(ck.ltl, ck.aps, ck.alphabet);
                if (in.map.alphabet().letters() != a.alphabet().letters()) {
                    // Use the automaton's alphabet when it is a subset of the formula's letters.
                    if (!a.alphabet().ap_backed()) throw InputError("automaton alphabet is not over atomic propositions");
                    in.map = ltl::ApLetterMap(a.alphabet());
                }
                r = check_lasso_precise(a, ltl::ltl_oracle(in.formula, in.map), ck.bound, B, ck.jobs);
            } else {
                const ParityAutomaton ref = hoa::parse(detail::read_file(ck.ref));
                const MembershipOracle phi(ref.alphabet(), [ref](const Lasso& w) { return accepts_lasso(ref, w); });
                const bool exact = a.is_safety() && ref.is_deterministic();
                r = check_lasso_precise(a, phi, ck.bound, B, ck.jobs, exact ? &ref : nullptr);
            }
            out << report_text(r, a.alphabet());
            if (!ck.report.empty()) detail::write_file_atomic(ck.report, report_json(r, a.alphabet()).dump(2) + "\n");
            return r.passed() ? kOk : kCheckFailed;
        }

        if (*synthesize) {
            if (sy.bound == 0) throw InputError("--bound must be at least 1");
            const auto in = detail::ltl_input(sy.ltl, sy.aps, sy.alphabet);
            synth::SynthesisQuery q;
            q.formula = in.formula;
            q.map = in.map;
            q.n = sy.bound;
            q.k = sy.states;
            q.m = sy.colors;
            q.kind = sy.nondet ? synth::TargetKind::Nondeterministic : synth::TargetKind::Deterministic;
            q.inclusion_bound = sy.inclusion;
            q.validate();
            synth::SynthesisOptions opt;
            opt.expansion_limit = sy.limit;
            opt.jobs = sy.jobs;
            if (!sy.solver.empty()) opt.solver_command = sy.solver;
            else opt.solver_command = synth::solver_from_environment();
            if (!sy.emit.empty()) detail::write_file_atomic(sy.emit, synth::emit_qdimacs(synth::encode(q)));

            std::optional<std::pair<std::size_t, synth::SynthesisResult>> found;
            if (sy.minimal) {
                found = synth::synthesize_minimal(q, sy.max_states ? sy.max_states : sy.states, opt);
            } else {
                auto r = synth::synthesize(q, opt);
                if (r.sat) found = std::make_pair(q.k, std::move(r));
            }
            nlohmann::json res;
            res["formula"] = ltl::to_string(q.formula);
            res["bound"] = q.n;
            res["colors"] = q.m;
            if (!found) {
                out << "UNSAT\n";
                res["verdict"] = "UNSAT";
                if (!sy.result.empty()) detail::write_file_atomic(sy.result, res.dump(2) + "\n");
                return kCheckFailed;
            }
            const auto& [k, r] = *found;
            out << "SAT k=" << k << " backend=" << r.backend << (r.verdict_only ? " (verdict only)" : "") << "\n";
            res["verdict"] = "SAT";
            res["states"] = k;
            res["backend"] = r.backend;
            if (r.automaton) {
                out << "states: " << r.automaton->size() << " type: " << automaton_type(*r.automaton) << "\n";
                if (!sy.out.empty()) {
                    detail::write_file_atomic(sy.out, hoa::write(*r.automaton));
                    res["automaton"] = sy.out;
                } else {
                    out << hoa::write(*r.automaton);
                }
            }
            if (!sy.result.empty()) detail::write_file_atomic(sy.result, res.dump(2) + "\n");
            return kOk;
        }

        if (*family) {
            std::string text;
            if (fa.name == "gf1") {
                text = hoa::write(families::gf_one(), "gf1");
            } else if (fa.name == "omega") {
                text = hoa::write(families::omega_k(fa.k), "omega-" + std::to_string(fa.k));
            } else if (fa.name == "fg-gf") {
                text = hoa::write(families::fg_gf_dpa(), "fg-gf");
            } else if (fa.name == "phi-n") {
                std::vector<std::string> letters;
                for (char c : fa.sigma) letters.emplace_back(1, c);
                const Alphabet sigma(letters);
                if (fa.construct) {
                    text = hoa::write(build_safety_lasso_precise(families::phi_n_oracle(sigma, fa.n), fa.n),
                                      "phi-" + std::to_string(fa.n));
                } else {
                    (void)families::phi_n_oracle(sigma, fa.n);  // validates n
                    nlohmann::json j;
                    j["family"] = "phi-n";
                    j["n"] = fa.n;
                    j["alphabet"] = letters;
                    j["language"] = "words sigma^omega with sigma of length n";
                    j["oracle"] = "period-n check of the lasso word";
                    text = j.dump(2) + "\n";
                }
            } else if (fa.name == "intro") {
                for (const auto& f : families::intro_formulas()) text += ltl::to_string(f.formula) + "\n";
            } else {
                err << "error: unknown family '" << fa.name << "' (expected gf1, omega, phi-n, fg-gf or intro)\n";
                return kUsage;
            }
            if (fa.out.empty() || fa.out == "-") out << text;
            else detail::write_file_atomic(fa.out, text);
            return kOk;
        }

        if (*info) {
            const ParityAutomaton a = hoa::parse(detail::read_file(info_in));
            std::string colors;
            for (Color c : a.color_image()) colors += (colors.empty() ? "" : ",") + std::to_string(c);
            out << "type: " << automaton_type(a) << "\nstates: " << a.size() << "\ntransitions: " << a.num_transitions()
                << "\nletters: " << a.alphabet().size() << "\ncolors: {" << colors << "}\ndeterministic: "
                << (a.is_deterministic() ? "yes" : "no") << "\ncomplete: " << (a.is_complete() ? "yes" : "no")
                << "\n";
            const auto e = is_empty(a);
            out << "empty: " << (e.empty ? "yes" : "no") << "\n";
            if (!e.empty) out << "witness: " << format_lasso(a.alphabet(), *e.word) << "\n";
            for (const auto& [k, v] : a.annotations()) out << k << ": " << v << "\n";
            return kOk;
        }

        if (*complement) {
            const ParityAutomaton a = hoa::parse(detail::read_file(comp_in));
            detail::emit_automaton(complement_dpa(complete_with_sink(a)), comp_out, "", "", out);
            return kOk;
        }

        if (*qbf) {
            const auto q = synth::parse_qdimacs(detail::read_file(qbf_file));
            const auto r = synth::solve_qdimacs_by_expansion(q, qbf_limit);
            out << "s cnf " << (r.sat ? 1 : 0) << ' ' << q.num_vars << ' ' << q.clauses.size() << "\n";
            for (const auto& [v, val] : r.assignment) out << "V " << (val ? v : -v) << " 0\n";
            return r.sat ? 10 : 20;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return kContract;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
        return kResource;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return kSolver;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kContract;
    }
    return kOk;
}

} // namespace lasso::cli
