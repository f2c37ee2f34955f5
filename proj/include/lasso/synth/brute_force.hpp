#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "lasso/acceptance.hpp"
#include "lasso/automaton.hpp"
#include "lasso/error.hpp"
#include "lasso/lassolab.hpp"
#include "lasso/oracle.hpp"
#include "lasso/synth/encode.hpp"

namespace lasso::synth {

struct BruteForceOptions {
    std::size_t n = 1;
    std::size_t k = 1;
    std::size_t m = 1;
    TargetKind kind = TargetKind::Deterministic;
    std::optional<std::size_t> inclusion_bound;  // default n·k
    double ceiling = 5e7;                         // candidates before symmetry pruning
    std::size_t jobs = 1;
};

struct BruteForceResult {
    std::optional<ParityAutomaton> witness;
    double candidates = 0;             // search space size, all budgets up to k
    std::uint64_t canonical_checked = 0;  // candidates surviving symmetry pruning
};

/// Search-space size (k'+1)^(k'·|Σ|)·m^k' (deterministic) or
/// 2^(k'·k'·|Σ|)·m^k' (nondeterministic), summed over k' = 1..k.
inline double brute_force_space(std::size_t sigma, std::size_t k, std::size_t m, TargetKind kind) {
    double total = 0;
    for (std::size_t s = 1; s <= k; ++s) {
        const double options = kind == TargetKind::Deterministic ? static_cast<double>(s + 1) : std::pow(2.0, static_cast<double>(s));
        total += std::pow(options, static_cast<double>(s * sigma)) * std::pow(static_cast<double>(m), static_cast<double>(s));
    }
    return total;
}

namespace detail {

/// Candidate automaton in compact form: per (state, letter) a successor
/// bitmask; per state a color.
struct Candidate {
    std::size_t k = 0, sigma = 0;
    std::vector<std::uint32_t> succ;  // [s·σ + a]
    std::vector<Color> color;

    ParityAutomaton to_automaton(const Alphabet& alphabet) const {
        AutomatonBuilder b(alphabet);
        for (std::size_t s = 0; s < k; ++s) b.add_state("s" + std::to_string(s), color[s]);
        b.add_initial(0);
        for (std::size_t s = 0; s < k; ++s)
            for (std::size_t a = 0; a < sigma; ++a)
                for (std::size_t t = 0; t < k; ++t)
                    if ((succ[s * sigma + a] >> t) & 1u)
                        b.add_transition(static_cast<StateId>(s), static_cast<LetterId>(a), static_cast<StateId>(t));
        return b.build(false);
    }

    /// Every state reachable and numbered in breadth-first discovery order.
    bool canonical() const {
        std::size_t next = 1;
        std::vector<std::size_t> queue{0};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const std::size_t s = queue[h];
            for (std::size_t a = 0; a < sigma; ++a) {
                const std::uint32_t set = succ[s * sigma + a];
                for (std::size_t t = 0; t < k; ++t) {
                    if (!((set >> t) & 1u) || t < next) continue;
                    if (t != next) return false;
                    queue.push_back(t);
                    ++next;
                }
            }
        }
        return next == k;
    }

    /// Lasso acceptance on the position×state product with bitmask sets.
    bool accepts(const Lasso& w) const {
        const std::size_t len = w.length(), P = len * k;
        if (P > 64) return accepts_lasso(to_automaton(Alphabet(std::vector<std::string>(sigma_names()))), w);
        std::vector<std::uint64_t> adj(P, 0);
        for (std::size_t pos = 0; pos < len; ++pos) {
            const std::size_t np = pos + 1 < len ? pos + 1 : w.stem.size();
            const LetterId a = w.at(pos);
            for (std::size_t s = 0; s < k; ++s) {
                const std::uint32_t set = succ[s * sigma + a];
                for (std::size_t t = 0; t < k; ++t)
                    if ((set >> t) & 1u) adj[pos * k + s] |= std::uint64_t{1} << (np * k + t);
            }
        }
        auto closure = [&](std::uint64_t from, std::uint64_t allowed) {
            std::uint64_t seen = 0, frontier = from & allowed;
            while (frontier) {
                seen |= frontier;
                std::uint64_t next = 0;
                for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(__builtin_ctzll(f))];
                frontier = next & allowed & ~seen;
            }
            return seen;
        };
        const std::uint64_t all = P == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << P) - 1;
        const std::uint64_t reach = closure(1, all);
        Color top = 0;
        for (Color c : color) top = std::max(top, c);
        for (Color c = 0; c <= top; c += 2) {
            std::uint64_t allowed = 0, exact = 0;
            for (std::size_t v = 0; v < P; ++v) {
                const Color cv = color[v % k];
                if (cv <= c) allowed |= std::uint64_t{1} << v;
                if (cv == c) exact |= std::uint64_t{1} << v;
            }
            for (std::uint64_t e = exact & reach; e; e &= e - 1) {
                const auto v = static_cast<std::size_t>(__builtin_ctzll(e));
                if ((closure(adj[v], allowed) >> v) & 1u) return true;
            }
        }
        return false;
    }

    std::vector<std::string> sigma_names() const {
        std::vector<std::string> v;
        for (std::size_t a = 0; a < sigma; ++a) v.push_back(std::to_string(a));
        return v;
    }
};

} // namespace detail

/// Exhaustive search for an automaton with at most k states and colors
/// {0..m−1} that is n-lasso-precise for `phi` (equality on bases of length n,
/// containment on bases up to the inclusion bound). Only automata whose
/// states are all reachable and numbered in breadth-first order from the
/// initial state 0 are tested; every automaton is equivalent to one of those
/// with at most as many states.
inline BruteForceResult brute_force_search(const MembershipOracle& phi, const BruteForceOptions& opt) {
    const Alphabet& alphabet = phi.alphabet();
    const std::size_t sigma = alphabet.size(), n = opt.n, B = opt.inclusion_bound.value_or(opt.n * opt.k);
    if (n == 0 || opt.k == 0 || opt.m == 0) throw InputError("brute_force_search: n, k and m must be at least 1");
    if (B < n) throw InputError("brute_force_search: inclusion bound must be at least n");
    if (opt.k > 16) throw InputError("brute_force_search: at most 16 states");
    BruteForceResult result;
    result.candidates = brute_force_space(sigma, opt.k, opt.m, opt.kind);
    if (result.candidates > opt.ceiling)
        throw ResourceLimit("brute-force search space has " + std::to_string(static_cast<unsigned long long>(result.candidates)) +
                                " candidates, ceiling is " + std::to_string(static_cast<unsigned long long>(opt.ceiling)),
                            result.candidates > 1e18 ? std::numeric_limits<std::size_t>::max()
                                                     : static_cast<std::size_t>(result.candidates));

    // Lassos that must be accepted (base n, in phi) and rejected (base ≤ B,
    // not in phi), deduplicated by the word they denote.
    std::vector<Lasso> must_accept, must_reject;
    {
        std::set<std::pair<Word, Word>> seen_accept, seen_reject;
        for (std::size_t len = 1; len <= B; ++len)
            enumerate_bases(alphabet, len).for_each([&](const Lasso& w) {
                const Lasso c = canonical(w);
                const std::pair<Word, Word> key{c.stem, c.loop};
                const bool in = phi(w);
                if (!in && seen_reject.insert(key).second) must_reject.push_back(c);
                if (in && len == n && seen_accept.insert(key).second) must_accept.push_back(c);
            });
    }
    auto precise = [&](const detail::Candidate& c) {
        for (const auto& w : must_accept)
            if (!c.accepts(w)) return false;
        for (const auto& w : must_reject)
            if (c.accepts(w)) return false;
        return true;
    };

    const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
    for (std::size_t k = 1; k <= opt.k && !result.witness; ++k) {
        const std::uint64_t options = opt.kind == TargetKind::Deterministic ? k + 1 : (std::uint64_t{1} << k);
        const std::size_t digits = k * sigma;
        // Mixed radix: transition digits (most significant first), then colors.
        std::vector<std::uint64_t> radix(digits, options);
        radix.insert(radix.end(), k, opt.m);
        std::uint64_t total = 1;
        for (auto r : radix) total *= r;

        std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
        std::atomic<std::uint64_t> checked{0};
        auto worker = [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<std::uint64_t> d(radix.size());
            std::uint64_t x = begin;
            for (std::size_t i = radix.size(); i-- > 0;) {
                d[i] = x % radix[i];
                x /= radix[i];
            }
            detail::Candidate c;
            c.k = k;
            c.sigma = sigma;
            c.succ.assign(digits, 0);
            c.color.assign(k, 0);
            std::uint64_t local = 0;
            for (std::uint64_t idx = begin; idx < end && idx < best.load(std::memory_order_relaxed); ++idx) {
                for (std::size_t i = 0; i < digits; ++i)
                    c.succ[i] = opt.kind == TargetKind::Deterministic
                                    ? (d[i] == 0 ? 0u : (1u << (d[i] - 1)))
                                    : static_cast<std::uint32_t>(d[i]);
                for (std::size_t s = 0; s < k; ++s) c.color[s] = static_cast<Color>(d[digits + s]);
                if (c.canonical()) {
                    ++local;
                    if (precise(c)) {
                        std::uint64_t cur = best.load();
                        while (idx < cur && !best.compare_exchange_weak(cur, idx)) {}
                        break;
                    }
                }
                for (std::size_t i = radix.size(); i-- > 0;) {
                    if (++d[i] < radix[i]) break;
                    d[i] = 0;
                }
            }
            checked += local;
        };
        if (jobs == 1 || total < 1024) {
            worker(0, total);
        } else {
            std::vector<std::thread> threads;
            const std::uint64_t chunk = (total + jobs - 1) / jobs;
            for (std::size_t j = 0; j < jobs; ++j) {
                const std::uint64_t b = j * chunk, e = std::min<std::uint64_t>(total, b + chunk);
                if (b < e) threads.emplace_back(worker, b, e);
            }
            for (auto& t : threads) t.join();
        }
        result.canonical_checked += checked.load();
        if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
            std::uint64_t x = best.load();
            detail::Candidate c;
            c.k = k;
            c.sigma = sigma;
            c.succ.assign(digits, 0);
            c.color.assign(k, 0);
            std::vector<std::uint64_t> d(radix.size());
            for (std::size_t i = radix.size(); i-- > 0;) {
                d[i] = x % radix[i];
                x /= radix[i];
            }
            for (std::size_t i = 0; i < digits; ++i)
                c.succ[i] = opt.kind == TargetKind::Deterministic ? (d[i] == 0 ? 0u : (1u << (d[i] - 1))) : static_cast<std::uint32_t>(d[i]);
            for (std::size_t s = 0; s < k; ++s) c.color[s] = static_cast<Color>(d[digits + s]);
            ParityAutomaton a = c.to_automaton(alphabet);
            AutomatonBuilder b = to_builder(a);
            b.annotate("construction", "brute-force");
            b.annotate("bound", std::to_string(n));
            result.witness = b.build();
        }
    }
    return result;
}

/// Brute-force search for a synthesis query, with the query's LTL oracle.
inline BruteForceResult brute_force_search(const SynthesisQuery& q, double ceiling = 5e7, std::size_t jobs = 1) {
    q.validate();
    BruteForceOptions opt;
    opt.n = q.n;
    opt.k = q.k;
    opt.m = q.m;
    opt.kind = q.kind;
    opt.inclusion_bound = q.inclusion_bound_value();
    opt.ceiling = ceiling;
    opt.jobs = jobs;
    return brute_force_search(ltl::ltl_oracle(q.formula, q.map), opt);
}

} // namespace lasso::synth
