#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lasso/acceptance.hpp"
#include "lasso/alphabet.hpp"
#include "lasso/automaton.hpp"
#include "lasso/error.hpp"
#include "lasso/operations.hpp"
#include "lasso/oracle.hpp"

namespace lasso {

/// Re-represents w with a base of exactly `length` letters: the first
/// length - |w| letters of the loop's unfolding move into the stem and the
/// loop is rotated accordingly. The induced infinite word is unchanged.
inline Lasso unroll(const Lasso& w, std::size_t length) {
    if (length < w.length()) throw InputError("unroll: target length is shorter than the lasso");
    const std::size_t t = length - w.length();
    Word stem = w.stem;
    for (std::size_t i = 0; i < t; ++i) stem.push_back(w.loop[i % w.loop.size()]);
    Word loop = w.loop;
    std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(t % loop.size()), loop.end());
    return Lasso(std::move(stem), std::move(loop));
}

/// The lassos with a base of exactly n letters: every base word in
/// lexicographic order (w.r.t. the alphabet order), and for each base word
/// every split point (stem length 0 .. n-1). Random access by index lets
/// callers partition the range.
class BaseEnumerator {
public:
    BaseEnumerator(const Alphabet& alphabet, std::size_t n) : sigma_(alphabet.size()), n_(n) {
        if (n == 0) throw InputError("enumerate_bases: bound must be at least 1");
        words_ = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (words_ > std::numeric_limits<std::uint64_t>::max() / sigma_ / (n + 1))
                throw ResourceLimit("enumerate_bases: too many lassos", std::numeric_limits<std::size_t>::max());
            words_ *= sigma_;
        }
    }

    std::uint64_t size() const noexcept { return words_ * n_; }
    std::size_t bound() const noexcept { return n_; }

    Lasso at(std::uint64_t index) const {
        std::uint64_t word = index / n_;
        const std::size_t split = static_cast<std::size_t>(index % n_);
        Word base(n_);
        for (std::size_t i = n_; i-- > 0;) {
            base[i] = static_cast<LetterId>(word % sigma_);
            word /= sigma_;
        }
        return Lasso(Word(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(split)),
                     Word(base.begin() + static_cast<std::ptrdiff_t>(split), base.end()));
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::uint64_t i = 0; i < size(); ++i) f(at(i));
    }

private:
    std::uint64_t sigma_;
    std::size_t n_;
    std::uint64_t words_;
};

inline BaseEnumerator enumerate_bases(const Alphabet& alphabet, std::size_t n) { return BaseEnumerator(alphabet, n); }

/// Runs f(index) for every index in [0, count) on `jobs` threads.
template <class F>
void parallel_for(std::uint64_t count, unsigned jobs, F&& f) {
    if (jobs <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (count + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        const std::uint64_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &f] {
            for (std::uint64_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : threads) th.join();
}

struct Mismatch {
    Lasso lasso;
    bool in_phi;
    bool in_automaton;
};

/// Outcome of an n-lasso-precision check.
struct PrecisionReport {
    std::size_t bound = 0;
    bool agree = true;
    std::vector<Mismatch> mismatches;
    std::size_t inclusion_bound = 0;
    std::vector<Lasso> inclusion_violations;
    std::uint64_t lassos_checked = 0;
    /// Set when containment was additionally decided exactly (safety
    /// automaton against a deterministic reference).
    std::optional<bool> exact_inclusion;
    std::optional<Lasso> exact_counterexample;

    bool passed() const {
        return agree && inclusion_violations.empty() && exact_inclusion.value_or(true);
    }
};

namespace detail {

inline void sort_lassos(std::vector<Lasso>& v) {
    std::sort(v.begin(), v.end(), [](const Lasso& a, const Lasso& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        if (a.base() != b.base()) return a.base() < b.base();
        return a.stem.size() < b.stem.size();
    });
}

} // namespace detail

/// Checks that A is an n-lasso-precise underapproximation of phi:
///  * equality: for every lasso with a base of exactly n letters, A accepts
///    it iff phi holds (by unrolling this covers all shorter bases too);
///  * containment: every lasso with a base of at most B letters that A
///    accepts satisfies phi.
/// When `reference` is given, A is a safety automaton and the reference a
/// deterministic automaton for phi, containment is also decided exactly.
inline PrecisionReport check_lasso_precise(const ParityAutomaton& a, const MembershipOracle& phi, std::size_t n,
                                           std::size_t inclusion_bound, unsigned jobs = 1,
                                           const ParityAutomaton* reference = nullptr) {
    if (n == 0) throw InputError("check_lasso_precise: bound must be at least 1");
    if (inclusion_bound < n) throw InputError("check_lasso_precise: inclusion bound must be at least the bound");
    if (a.alphabet().letters() != phi.alphabet().letters())
        throw InputError("check_lasso_precise: automaton and property use different alphabets");

    PrecisionReport r;
    r.bound = n;
    r.inclusion_bound = inclusion_bound;
    std::mutex mu;
    std::atomic<std::uint64_t> checked{0};

    for (std::size_t len = 1; len <= inclusion_bound; ++len) {
        const BaseEnumerator bases(a.alphabet(), len);
        parallel_for(bases.size(), jobs, [&](std::uint64_t i) {
            const Lasso w = bases.at(i);
            const bool in_a = accepts_lasso(a, w);
            ++checked;
            if (len == n) {
                const bool in_phi = phi(w);
                if (in_a == in_phi) return;
                std::lock_guard<std::mutex> lock(mu);
                r.mismatches.push_back({w, in_phi, in_a});
                if (in_a) r.inclusion_violations.push_back(w);
                return;
            }
            if (in_a && !phi(w)) {
                std::lock_guard<std::mutex> lock(mu);
                r.inclusion_violations.push_back(w);
            }
        });
    }
    r.lassos_checked = checked;
    std::sort(r.mismatches.begin(), r.mismatches.end(), [](const Mismatch& x, const Mismatch& y) {
        if (x.lasso.base() != y.lasso.base()) return x.lasso.base() < y.lasso.base();
        return x.lasso.stem.size() < y.lasso.stem.size();
    });
    detail::sort_lassos(r.inclusion_violations);
    r.agree = r.mismatches.empty();

    if (reference && a.is_safety() && reference->is_deterministic()) {
        auto inc = check_inclusion_exact(a, *reference);
        r.exact_inclusion = inc.holds;
        r.exact_counterexample = inc.counterexample;
    }
    return r;
}

/// Same decision as check_lasso_precise(...).passed() without building a
/// report; stops at the first failure. Intended for search loops.
inline bool is_lasso_precise(const ParityAutomaton& a, const MembershipOracle& phi, std::size_t n,
                             std::size_t inclusion_bound) {
    {
        const BaseEnumerator bases(a.alphabet(), n);
        for (std::uint64_t i = 0; i < bases.size(); ++i) {
            const Lasso w = bases.at(i);
            if (accepts_lasso(a, w) != phi(w)) return false;
        }
    }
    for (std::size_t len = 1; len <= inclusion_bound; ++len) {
        if (len == n) continue;
        const BaseEnumerator bases(a.alphabet(), len);
        for (std::uint64_t i = 0; i < bases.size(); ++i) {
            const Lasso w = bases.at(i);
            if (accepts_lasso(a, w) && !phi(w)) return false;
        }
    }
    return true;
}

/// Line-oriented rendering of a report.
inline std::string report_text(const PrecisionReport& r, const Alphabet& alphabet) {
    std::ostringstream os;
    os << "bound: " << r.bound << "\n";
    os << "inclusion-bound: " << r.inclusion_bound << "\n";
    os << "lassos-checked: " << r.lassos_checked << "\n";
    os << "agree: " << (r.agree ? "yes" : "no") << "\n";
    os << "mismatches: " << r.mismatches.size() << "\n";
    for (const auto& m : r.mismatches)
        os << "  mismatch " << format_lasso(alphabet, m.lasso) << " phi=" << m.in_phi << " automaton=" << m.in_automaton
           << "\n";
    os << "inclusion-violations: " << r.inclusion_violations.size() << "\n";
    for (const auto& w : r.inclusion_violations) os << "  violation " << format_lasso(alphabet, w) << "\n";
    if (r.exact_inclusion) {
        os << "exact-inclusion: " << (*r.exact_inclusion ? "holds" : "fails") << "\n";
        if (r.exact_counterexample) os << "  counterexample " << format_lasso(alphabet, *r.exact_counterexample) << "\n";
    }
    os << "result: " << (r.passed() ? "PRECISE" : "NOT PRECISE") << "\n";
    return os.str();
}

/// Structured rendering: one record per mismatch with the base word, the
/// split index (stem length) and both membership bits.
inline nlohmann::json report_json(const PrecisionReport& r, const Alphabet& alphabet) {
    nlohmann::json j;
    j["bound"] = r.bound;
    j["inclusion_bound"] = r.inclusion_bound;
    j["lassos_checked"] = r.lassos_checked;
    j["agree"] = r.agree;
    j["passed"] = r.passed();
    j["mismatches"] = nlohmann::json::array();
    for (const auto& m : r.mismatches)
        j["mismatches"].push_back({{"base", format_word(alphabet, m.lasso.base())},
                                   {"split", m.lasso.stem.size()},
                                   {"in_phi", m.in_phi},
                                   {"in_automaton", m.in_automaton}});
    j["inclusion_violations"] = nlohmann::json::array();
    for (const auto& w : r.inclusion_violations)
        j["inclusion_violations"].push_back({{"base", format_word(alphabet, w.base())}, {"split", w.stem.size()}});
    if (r.exact_inclusion) j["exact_inclusion"] = *r.exact_inclusion;
    return j;
}

} // namespace lasso
