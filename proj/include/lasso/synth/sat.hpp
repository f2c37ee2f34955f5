#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "lasso/synth/circuit.hpp"

namespace lasso::synth {

enum class SatResult { Sat, Unsat, Unknown };

/// Conflict-driven clause-learning SAT solver: two watched literals, first-UIP
/// learning, activity-based branching with phase saving, Luby restarts.
/// Literals are DIMACS integers.
class SatSolver {
public:
    int new_var() {
        const int v = static_cast<int>(assign_.size());
        assign_.push_back(kUndef);
        level_.push_back(0);
        reason_.push_back(-1);
        activity_.push_back(0.0);
        phase_.push_back(0);
        seen_.push_back(0);
        heap_pos_.push_back(-1);
        watches_.emplace_back();
        watches_.emplace_back();
        heap_insert(v);
        return v + 1;
    }
    int num_vars() const noexcept { return static_cast<int>(assign_.size()); }
    std::size_t num_clauses() const noexcept { return clauses_.size(); }

    /// Adds a clause; variables are created on demand. Returns false once the
    /// clause set is known to be unsatisfiable.
    bool add_clause(const std::vector<int>& dimacs) {
        if (!ok_) return false;
        backtrack(0);
        std::vector<std::uint32_t> c;
        for (int d : dimacs) {
            if (d == 0) throw std::invalid_argument("SatSolver: literal 0");
            while (num_vars() < std::abs(d)) new_var();
            c.push_back(to_lit(d));
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        std::vector<std::uint32_t> kept;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i + 1 < c.size() && c[i + 1] == (c[i] ^ 1u)) return true;  // tautology
            const signed char v = value(c[i]);
            if (v == 1) return true;
            if (v == 0) continue;
            kept.push_back(c[i]);
        }
        if (kept.empty()) return ok_ = false;
        if (kept.size() == 1) {
            enqueue(kept[0], -1);
            if (propagate() >= 0) ok_ = false;
            return ok_;
        }
        attach(std::move(kept), false);
        return true;
    }

    void add_cnf(const Cnf& cnf) {
        while (num_vars() < cnf.num_vars) new_var();
        for (const auto& c : cnf.clauses) add_clause(c);
    }

    /// Solves; with a positive conflict limit, may return Unknown.
    SatResult solve(std::uint64_t conflict_limit = 0) {
        if (!ok_) return SatResult::Unsat;
        backtrack(0);
        if (propagate() >= 0) {
            ok_ = false;
            return SatResult::Unsat;
        }
        std::uint64_t conflicts = 0;
        for (std::uint64_t restart = 0;; ++restart) {
            const std::uint64_t budget = 100 * luby(restart);
            const SatResult r = search(budget, conflicts, conflict_limit);
            if (r != SatResult::Unknown) return r;
            if (conflict_limit && conflicts >= conflict_limit) return SatResult::Unknown;
        }
    }

    /// Value of a variable in the last model.
    bool model_value(int var) const {
        if (var < 1 || var > static_cast<int>(model_.size())) throw std::out_of_range("SatSolver: no such variable");
        return model_[static_cast<std::size_t>(var - 1)];
    }
    const std::vector<bool>& model() const noexcept { return model_; }

private:
    static constexpr signed char kUndef = -1;
    struct Clause {
        std::vector<std::uint32_t> lits;
        bool learnt;
    };

    static std::uint32_t to_lit(int d) {
        return static_cast<std::uint32_t>(2 * (std::abs(d) - 1)) + (d < 0 ? 1u : 0u);
    }
    static std::uint32_t var(std::uint32_t lit) { return lit >> 1; }
    signed char value(std::uint32_t lit) const {
        const signed char a = assign_[var(lit)];
        return a == kUndef ? kUndef : static_cast<signed char>(a ^ static_cast<signed char>(lit & 1u));
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    static std::uint64_t luby(std::uint64_t i) {
        std::uint64_t size = 1, seq = 0;
        while (size < i + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        std::uint64_t x = i;
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x = x % size;
        }
        return std::uint64_t{1} << seq;
    }

    void attach(std::vector<std::uint32_t> lits, bool learnt) {
        const int idx = static_cast<int>(clauses_.size());
        watches_[lits[0]].push_back(idx);
        watches_[lits[1]].push_back(idx);
        clauses_.push_back({std::move(lits), learnt});
    }

    void enqueue(std::uint32_t lit, int reason) {
        const std::uint32_t v = var(lit);
        assign_[v] = static_cast<signed char>(!(lit & 1u));
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(lit);
    }

    /// Returns the index of a conflicting clause, or −1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            const std::uint32_t p = trail_[qhead_++] ^ 1u;  // literal that became false
            auto& ws = watches_[p];
            std::size_t i = 0, j = 0;
            int conflict = -1;
            while (i < ws.size()) {
                const int ci = ws[i++];
                auto& c = clauses_[static_cast<std::size_t>(ci)].lits;
                if (c[0] == p) std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ws[j++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[c[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) continue;
                ws[j++] = ci;
                if (value(c[0]) == 0) {
                    conflict = ci;
                    while (i < ws.size()) ws[j++] = ws[i++];
                } else {
                    enqueue(c[0], ci);
                }
            }
            ws.resize(j);
            if (conflict >= 0) return conflict;
        }
        return -1;
    }

    void analyze(int conflict, std::vector<std::uint32_t>& learnt, int& back_level) {
        learnt.assign(1, 0);
        int pending = 0;
        std::uint32_t p = 0;
        bool have_p = false;
        std::size_t index = trail_.size();
        int ci = conflict;
        do {
            const auto& c = clauses_[static_cast<std::size_t>(ci)].lits;
            for (std::size_t k = have_p ? 1 : 0; k < c.size(); ++k) {
                const std::uint32_t q = c[k];
                const std::uint32_t v = var(q);
                if (seen_[v] || level_[v] == 0) continue;
                seen_[v] = 1;
                bump(v);
                if (level_[v] >= decision_level()) ++pending;
                else learnt.push_back(q);
            }
            while (!seen_[var(trail_[--index])]) {}
            p = trail_[index];
            have_p = true;
            ci = reason_[var(p)];
            seen_[var(p)] = 0;
            --pending;
            if (pending > 0 && ci >= 0) {
                // Reason clauses keep their implied literal in position 0.
                auto& rc = clauses_[static_cast<std::size_t>(ci)].lits;
                if (rc[0] != p) std::swap(rc[0], rc[1]);
            }
        } while (pending > 0);
        learnt[0] = p ^ 1u;
        back_level = 0;
        std::size_t max_i = 1;
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            seen_[var(learnt[k])] = 0;
            if (level_[var(learnt[k])] > back_level) {
                back_level = level_[var(learnt[k])];
                max_i = k;
            }
        }
        if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
        decay();
    }

    void backtrack(int level) {
        if (decision_level() <= level) return;
        for (std::size_t i = trail_.size(); i > trail_lim_[static_cast<std::size_t>(level)]; --i) {
            const std::uint32_t v = var(trail_[i - 1]);
            phase_[v] = assign_[v];
            assign_[v] = kUndef;
            reason_[v] = -1;
            if (heap_pos_[v] < 0) heap_insert(static_cast<int>(v));
        }
        trail_.resize(trail_lim_[static_cast<std::size_t>(level)]);
        trail_lim_.resize(static_cast<std::size_t>(level));
        qhead_ = trail_.size();
    }

    SatResult search(std::uint64_t budget, std::uint64_t& conflicts, std::uint64_t limit) {
        std::uint64_t local = 0;
        std::vector<std::uint32_t> learnt;
        for (;;) {
            const int conflict = propagate();
            if (conflict >= 0) {
                ++conflicts;
                ++local;
                if (decision_level() == 0) {
                    ok_ = false;
                    return SatResult::Unsat;
                }
                int back = 0;
                analyze(conflict, learnt, back);
                backtrack(back);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], -1);
                } else {
                    attach(learnt, true);
                    enqueue(learnt[0], static_cast<int>(clauses_.size()) - 1);
                }
                continue;
            }
            if (local >= budget || (limit && conflicts >= limit)) {
                backtrack(0);
                return SatResult::Unknown;
            }
            int next = -1;
            while (!heap_.empty()) {
                const int v = heap_pop();
                if (assign_[static_cast<std::size_t>(v)] == kUndef) {
                    next = v;
                    break;
                }
            }
            if (next < 0) {
                model_.assign(assign_.size(), false);
                for (std::size_t v = 0; v < assign_.size(); ++v) model_[v] = assign_[v] == 1;
                backtrack(0);
                return SatResult::Sat;
            }
            trail_lim_.push_back(trail_.size());
            const std::uint32_t lit = 2u * static_cast<std::uint32_t>(next) + (phase_[static_cast<std::size_t>(next)] == 1 ? 0u : 1u);
            enqueue(lit, -1);
        }
    }

    // --- activity heap -----------------------------------------------------
    void bump(std::uint32_t v) {
        activity_[v] += inc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            inc_ *= 1e-100;
        }
        if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
    }
    void decay() { inc_ /= 0.95; }
    bool heap_less(int a, int b) const { return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)]; }
    void heap_insert(int v) {
        heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_pos_[static_cast<std::size_t>(v)]);
    }
    void heap_swap(int i, int j) {
        std::swap(heap_[static_cast<std::size_t>(i)], heap_[static_cast<std::size_t>(j)]);
        heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
        heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(j)])] = j;
    }
    void heap_up(int i) {
        while (i > 0) {
            const int parent = (i - 1) / 2;
            if (!heap_less(heap_[static_cast<std::size_t>(i)], heap_[static_cast<std::size_t>(parent)])) break;
            heap_swap(i, parent);
            i = parent;
        }
    }
    void heap_down(int i) {
        const int n = static_cast<int>(heap_.size());
        for (;;) {
            int best = i;
            for (int c : {2 * i + 1, 2 * i + 2})
                if (c < n && heap_less(heap_[static_cast<std::size_t>(c)], heap_[static_cast<std::size_t>(best)])) best = c;
            if (best == i) return;
            heap_swap(i, best);
            i = best;
        }
    }
    int heap_pop() {
        const int top = heap_.front();
        heap_swap(0, static_cast<int>(heap_.size()) - 1);
        heap_.pop_back();
        heap_pos_[static_cast<std::size_t>(top)] = -1;
        if (!heap_.empty()) heap_down(0);
        return top;
    }

    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<signed char> assign_, phase_;
    std::vector<int> level_, reason_;
    std::vector<double> activity_;
    std::vector<char> seen_;
    std::vector<int> heap_, heap_pos_;
    std::vector<std::uint32_t> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    double inc_ = 1.0;
    std::vector<bool> model_;
};

} // namespace lasso::synth
