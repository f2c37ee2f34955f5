// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lasso/lasso.hpp"
#include "property_checks.hpp"

using namespace lasso;
using namespace lasso::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [violated: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << std::fixed
              << std::setprecision(2) << seconds_since(t0) << " s)" << o.detail.str() << std::endl;
}

MembershipOracle oracle_of(const ParityAutomaton& a) {
    return MembershipOracle(a.alphabet(), [a](const Lasso& w) { return accepts_lasso(a, w); });
}

/// Ω_k from its definition (exactly one 2, 1^ω afterwards, a 1 exactly k
/// letters before the 2, preceded by fewer than k letters).
bool in_omega(const Lasso& w, std::size_t k) {
    for (LetterId x : w.loop)
        if (x == 2) return false;
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i < w.stem.size(); ++i)
        if (w.stem[i] == 2) {
            if (pos) return false;
            pos = i;
        }
    if (!pos || *pos < k) return false;
    for (std::size_t i = *pos + 1; i <= w.length(); ++i)
        if (w.at(i) != 1) return false;
    return w.at(*pos - k) == 1 && *pos - k < k;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    std::cout << std::unitbuf;

    criterion(1, "Buechi-to-safety size <= n+1 and precision for GF(1), n = 1..6", [](Outcome& o) {
        const auto gf = families::gf_one();
        std::ostringstream sizes;
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto t0 = Clock::now();
            const auto s = buechi_to_safety(gf, n);
            const auto r = check_lasso_precise(s, oracle_of(gf), n, n + 3);
            const auto inc = check_inclusion_exact(s, gf);
            const double t = seconds_since(t0);
            sizes << (n > 1 ? "," : "") << s.size();
            const std::string at = " at n=" + std::to_string(n);
            o.require(s.size() <= n + 1, "size" + at);
            o.require(s.is_deterministic(), "determinism" + at);
            o.require(r.agree && r.inclusion_violations.empty(), "precision" + at);
            o.require(inc.holds, "exact inclusion" + at);
            o.require(t < 1.0, "runtime" + at);
        }
        o.detail << " sizes=" << sizes.str();
    });

    criterion(2, "safety construction size bound and precision for phi_n, |Sigma| = 2, n = 1..3", [](Outcome& o) {
        const Alphabet bin = families::binary_alphabet();
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto t0 = Clock::now();
            const auto phi = families::phi_n_oracle(bin, n);
            const auto s = build_safety_lasso_precise(phi, n);
            const auto r = check_lasso_precise(s, phi, n, n);
            const double t = seconds_since(t0);
            const double bound = std::pow(3.0, double(n)) + std::pow(2.0, double(n)) * std::pow(double(n + 1), double(n));
            const std::string at = " at n=" + std::to_string(n);
            o.require(static_cast<double>(s.size()) <= bound, "size" + at);
            o.require(r.agree, "precision" + at);
            o.require(r.lassos_checked >= (std::uint64_t{1} << n) * n, "lasso count" + at);
            if (n == 3) o.require(t < 5.0, "runtime at n=3");
            o.detail << " n=" << n << ":" << s.size() << "/" << bound << " states";
        }
    });

    criterion(3, "no NPA/DPA with < 2^n states is n-lasso-precise for phi_n (n = 1,2); construction has >= 2^n states",
              [](Outcome& o) {
                  const Alphabet bin = families::binary_alphabet();
                  for (std::size_t n = 1; n <= 2; ++n) {
                      const auto phi = families::phi_n_oracle(bin, n);
                      for (auto kind : {synth::TargetKind::Deterministic, synth::TargetKind::Nondeterministic})
                          for (std::size_t m = 1; m <= 2; ++m) {
                              synth::BruteForceOptions opt;
                              opt.n = n;
                              opt.k = (std::size_t{1} << n) - 1;
                              opt.m = m;
                              opt.kind = kind;
                              // Containment is checked on bases up to n+1. A bounded
                              // check is weaker than full containment, so an empty
                              // search under it remains a sound lower bound.
                              opt.inclusion_bound = n + 1;
                              opt.ceiling = 1e8;
                              opt.jobs = 2;
                              const auto r = synth::brute_force_search(phi, opt);
                              o.require(!r.witness.has_value(), "witness found at n=" + std::to_string(n));
                              o.detail << " n=" << n << (kind == synth::TargetKind::Deterministic ? " DPA" : " NPA")
                                       << " m=" << m << ":" << static_cast<std::uint64_t>(r.candidates);
                          }
                  }
                  for (std::size_t n = 1; n <= 3; ++n) {
                      const auto s = build_safety_lasso_precise(families::phi_n_oracle(bin, n), n);
                      o.require(s.size() >= (std::size_t{1} << n), "construction size at n=" + std::to_string(n));
                  }
              });

    criterion(4, "no deterministic safety automaton with k < n states is n-lasso-precise for GF(1), n = 2..4",
              [](Outcome& o) {
                  const auto gf = families::gf_one();
                  for (std::size_t n = 2; n <= 4; ++n) {
                      const auto t0 = Clock::now();
                      synth::BruteForceOptions opt;
                      opt.n = n;
                      opt.k = n - 1;
                      opt.m = 1;
                      opt.inclusion_bound = n;
                      opt.kind = synth::TargetKind::Deterministic;
                      const auto r = synth::brute_force_search(oracle_of(gf), opt);
                      const double t = seconds_since(t0);
                      o.require(!r.witness.has_value(), "witness found at n=" + std::to_string(n));
                      if (n == 4) o.require(t < 30.0, "runtime at n=4");
                      o.detail << " n=" << n << ":" << r.canonical_checked << " canonical candidates";
                  }
              });

    criterion(5, "color reduction of the (F G p) & (G F q) DPA to m' = 2 and m' = 1 at n = 2", [](Outcome& o) {
        const auto fg = families::fg_gf_dpa();
        const std::size_t n = 2;
        const auto phi = oracle_of(fg);
        for (std::size_t t : {2u, 1u}) {
            const auto r = reduce_parity_colors(fg, n, t);
            const std::size_t bound = (n * fg.size() + 1) * fg.size() * (fg.num_colors() - t + 2);
            const auto rep = check_lasso_precise(r, phi, n, 2 * n);
            const std::string at = " at m'=" + std::to_string(t);
            o.require(r.size() <= bound, "size" + at);
            o.require(r.num_colors() <= t, "colors" + at);
            o.require(rep.passed(), "precision" + at);
            o.detail << " m'=" << t << ":" << r.size() << "/" << bound << " states";
        }
        const auto one = reduce_parity_colors(fg, n, 1);
        const auto via_buchi = buechi_to_safety(reduce_parity_colors(fg, n, 2), n);
        bool same = true;
        enumerate_bases(fg.alphabet(), n).for_each([&](const Lasso& w) {
            same = same && accepts_lasso(one, w) == accepts_lasso(via_buchi, w);
        });
        o.require(same, "cross-validation against Buechi-to-safety");
    });

    criterion(6, "Omega_k automata: 2k+1 states, exact lasso language, no 1-state DPA for k = 1", [](Outcome& o) {
        for (std::size_t k = 1; k <= 3; ++k) {
            const auto a = families::omega_k(k);
            o.require(a.size() == 2 * k + 1, "state count at k=" + std::to_string(k));
            std::uint64_t checked = 0, accepted = 0;
            bool match = true;
            for (std::size_t len = 1; len <= 2 * k + 3; ++len)
                enumerate_bases(a.alphabet(), len).for_each([&](const Lasso& w) {
                    const bool in = in_omega(w, k);
                    ++checked;
                    accepted += in;
                    match = match && accepts_lasso(a, w) == in;
                });
            o.require(match, "language at k=" + std::to_string(k));
            o.detail << " k=" << k << ":" << accepted << "/" << checked;
        }
        const auto omega1 = families::omega_k(1);
        synth::BruteForceOptions opt;
        opt.n = 3;
        opt.k = 1;
        opt.m = 2;
        opt.inclusion_bound = 3;
        opt.kind = synth::TargetKind::Deterministic;
        o.require(!synth::brute_force_search(oracle_of(omega1), opt).witness.has_value(), "1-state DPA found");
        o.detail << " (2^k lower bound checked only at k=1; larger k exceed exhaustive search)";
    });

    criterion(7, "expansion solver agrees with brute force on the |AP| = 1 corpus; certificates re-verify", [](Outcome& o) {
        const auto t0 = Clock::now();
        std::size_t queries = 0, agree = 0, sat = 0, verified = 0;
        for (const char* f : {"G p", "F p", "G F p", "F G p", "p U X p"})
            for (std::size_t n = 1; n <= 3; ++n)
                for (std::size_t k = 1; k <= 2; ++k)
                    for (std::size_t m = 1; m <= 2; ++m) {
                        synth::SynthesisQuery q;
                        q.formula = ltl::parse(f, {"p"});
                        q.map = ltl::ApLetterMap(std::vector<std::string>{"p"});
                        q.n = n;
                        q.k = k;
                        q.m = m;
                        const auto e = synth::solve_by_expansion(q, 1'000'000);
                        const auto b = synth::brute_force_search(q);
                        ++queries;
                        agree += e.sat == b.witness.has_value();
                        if (e.sat) {
                            ++sat;
                            const auto a = synth::decode(q, e.model);
                            verified += a.size() <= k && a.num_colors() <= m &&
                                        check_lasso_precise(a, ltl::ltl_oracle(q.formula, q.map), n, q.inclusion_bound_value())
                                            .passed();
                        }
                    }
        const double t = seconds_since(t0);
        o.require(agree == queries, "verdict disagreement");
        o.require(verified == sat, "certificate failed re-verification");
        o.require(t < 60.0, "runtime");
        o.detail << " queries=" << queries << " agree=" << agree << " sat=" << sat << " verified=" << verified;
    });

    criterion(8, "4-state 2-lasso-precise safety automaton for (GFp -> GFq) & (GFr -> GFs)", [](Outcome& o) {
        const auto intro = families::intro_formulas()[0];
        const auto phi = ltl::ltl_oracle(intro.formula, intro.map);
        const auto fixture = hoa::parse(read_file(std::string(LASSO_FIXTURE_DIR) + "/intro4.hoa"));
        const auto r = check_lasso_precise(fixture, phi, 2, 2);
        o.require(fixture.size() == 4, "fixture size");
        o.require(fixture.num_colors() == 1, "fixture colors");
        o.require(r.lassos_checked == 16 * 1 + 16 * 16 * 2, "lasso count");
        o.require(r.passed(), "fixture precision");
        o.detail << " fixture: " << r.lassos_checked << " lassos checked";

        synth::SynthesisQuery q;
        q.formula = intro.formula;
        q.map = intro.map;
        q.n = 2;
        q.m = 1;
        q.inclusion_bound = 2;
        synth::SynthesisOptions opt;
        opt.solver_command = synth::solver_from_environment();
        opt.expansion_limit = 10'000'000;
        const auto found = synth::synthesize_minimal(q, 4, opt);
        o.require(found.has_value(), "synthesis SAT at k=4");
        if (found) {
            o.require(found->first == 4, "minimal k is 4");
            o.detail << "; live synthesis (" << found->second.backend << "): minimal k=" << found->first;
            if (found->second.automaton) o.require(found->second.verification->passed(), "certificate precision");
        }
    });

    criterion(9, "property suites: representation invariance, complement involution, monotonicity", [](Outcome& o) {
        const auto a = acceptance_invariance(1000, 91);
        const auto l = ltl_invariance(1000, 92);
        const auto c = complement_involution(1000, 93);
        const auto m = monotonicity(500, 94);
        for (const auto* r : {&a, &l, &c, &m}) o.require(r->failures == 0, r->first_failure);
        o.detail << " cases=" << a.cases << "+" << l.cases << "+" << c.cases << "+" << m.cases << " failures="
                 << a.failures + l.failures + c.failures + m.failures;
    });

    return failures;
}
