#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lasso::synth {

/// Literal of a circuit node: 2·node + negation bit. Node 0 is the constant
/// false, so kFalse = 0 and kTrue = 1.
using Lit = std::uint32_t;
inline constexpr Lit kFalse = 0;
inline constexpr Lit kTrue = 1;

inline constexpr Lit negate(Lit l) { return l ^ 1u; }
inline constexpr Lit lit_if(Lit l, bool positive) { return positive ? l : negate(l); }
inline constexpr Lit constant(bool b) { return b ? kTrue : kFalse; }
inline constexpr std::uint32_t node_of(Lit l) { return l >> 1; }
inline constexpr bool is_negated(Lit l) { return l & 1u; }

/// Hash-consed And-Inverter circuit with n-ary AND nodes and constant folding.
/// Structurally equal subcircuits are represented by the same literal.
class Circuit {
public:
    enum class Kind { Const, Input, And };

    Circuit() { nodes_.push_back({Kind::Const, 0, {}}); }

    /// New input; returns its positive literal.
    Lit new_input(std::string name = {}) {
        const auto index = static_cast<std::uint32_t>(inputs_.size());
        const auto node = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({Kind::Input, index, {}});
        inputs_.push_back(node << 1);
        input_names_.push_back(std::move(name));
        return node << 1;
    }

    std::size_t num_inputs() const noexcept { return inputs_.size(); }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    Lit input(std::uint32_t index) const { return inputs_.at(index); }
    const std::string& input_name(std::uint32_t index) const { return input_names_.at(index); }

    Kind kind(std::uint32_t node) const { return nodes_.at(node).kind; }
    /// Input index of an input node.
    std::uint32_t input_index(std::uint32_t node) const { return nodes_.at(node).input; }
    const std::vector<Lit>& children(std::uint32_t node) const { return nodes_.at(node).kids; }
    static bool is_const(Lit l) { return node_of(l) == 0; }

    Lit land(std::vector<Lit> kids) {
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
        std::vector<Lit> out;
        out.reserve(kids.size());
        for (Lit k : kids) {
            if (k == kFalse) return kFalse;
            if (k == kTrue) continue;
            if (!out.empty() && out.back() == negate(k)) return kFalse;  // x and ¬x are adjacent when sorted
            out.push_back(k);
        }
        if (out.empty()) return kTrue;
        if (out.size() == 1) return out.front();
        auto it = index_.find(out);
        if (it != index_.end()) return it->second << 1;
        const auto node = static_cast<std::uint32_t>(nodes_.size());
        index_.emplace(out, node);
        nodes_.push_back({Kind::And, 0, std::move(out)});
        return node << 1;
    }
    Lit lor(std::vector<Lit> kids) {
        for (Lit& k : kids) k = negate(k);
        return negate(land(std::move(kids)));
    }
    Lit land(Lit a, Lit b) { return land(std::vector<Lit>{a, b}); }
    Lit lor(Lit a, Lit b) { return lor(std::vector<Lit>{a, b}); }
    Lit implies(Lit a, Lit b) { return lor(negate(a), b); }
    Lit iff(Lit a, Lit b) { return land(implies(a, b), implies(b, a)); }
    Lit lxor(Lit a, Lit b) { return negate(iff(a, b)); }
    Lit ite(Lit c, Lit t, Lit e) { return lor(land(c, t), land(negate(c), e)); }

    /// At most one of `lits` holds (pairwise encoding).
    Lit at_most_one(const std::vector<Lit>& lits) {
        std::vector<Lit> parts;
        for (std::size_t i = 0; i < lits.size(); ++i)
            for (std::size_t j = i + 1; j < lits.size(); ++j) parts.push_back(negate(land(lits[i], lits[j])));
        return land(std::move(parts));
    }
    Lit exactly_one(const std::vector<Lit>& lits) { return land(at_most_one(lits), lor(lits)); }

    /// Value of `root` under an assignment of all inputs (indexed by input index).
    bool eval(Lit root, const std::vector<bool>& inputs) const {
        std::vector<signed char> memo(nodes_.size(), -1);
        return eval_rec(root, inputs, memo);
    }

    /// Rebuilds `root` with inputs replaced according to `map` (input index →
    /// literal); unmapped inputs are kept.
    Lit substitute(Lit root, const std::unordered_map<std::uint32_t, Lit>& map) {
        std::unordered_map<std::uint32_t, Lit> memo;
        return substitute_rec(root, map, memo);
    }

    /// Nodes reachable from the roots, children before parents.
    std::vector<std::uint32_t> cone(const std::vector<Lit>& roots) const {
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<std::uint32_t> order;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack;
        for (Lit r : roots) {
            if (seen[node_of(r)]) continue;
            seen[node_of(r)] = 1;
            stack.push_back({node_of(r), 0});
            while (!stack.empty()) {
                auto& [n, i] = stack.back();
                const auto& kids = nodes_[n].kids;
                if (i < kids.size()) {
                    const std::uint32_t c = node_of(kids[i++]);
                    if (!seen[c]) {
                        seen[c] = 1;
                        stack.push_back({c, 0});
                    }
                } else {
                    order.push_back(n);
                    stack.pop_back();
                }
            }
        }
        return order;
    }

private:
    struct Node {
        Kind kind;
        std::uint32_t input;
        std::vector<Lit> kids;
    };
    struct VecHash {
        std::size_t operator()(const std::vector<Lit>& v) const noexcept {
            std::size_t h = v.size();
            for (Lit l : v) h ^= std::hash<Lit>{}(l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };

    bool eval_rec(Lit l, const std::vector<bool>& in, std::vector<signed char>& memo) const {
        const std::uint32_t n = node_of(l);
        if (memo[n] < 0) {
            const Node& node = nodes_[n];
            bool v = false;
            if (node.kind == Kind::Input) v = in.at(node.input);
            else if (node.kind == Kind::And) {
                v = true;
                for (Lit k : node.kids)
                    if (!eval_rec(k, in, memo)) {
                        v = false;
                        break;
                    }
            }
            memo[n] = v;
        }
        return static_cast<bool>(memo[n]) != is_negated(l);
    }

    Lit substitute_rec(Lit l, const std::unordered_map<std::uint32_t, Lit>& map,
                       std::unordered_map<std::uint32_t, Lit>& memo) {
        const std::uint32_t n = node_of(l);
        auto it = memo.find(n);
        Lit r;
        if (it != memo.end()) {
            r = it->second;
        } else {
            if (nodes_[n].kind == Kind::Const) {
                r = kFalse;
            } else if (nodes_[n].kind == Kind::Input) {
                auto m = map.find(nodes_[n].input);
                r = m == map.end() ? (n << 1) : m->second;
            } else {
                std::vector<Lit> kids = nodes_[n].kids;  // copy: nodes_ may grow
                for (Lit& k : kids) k = substitute_rec(k, map, memo);
                r = land(std::move(kids));
            }
            memo.emplace(n, r);
        }
        return is_negated(l) ? negate(r) : r;
    }

    std::vector<Node> nodes_;
    std::unordered_map<std::vector<Lit>, std::uint32_t, VecHash> index_;
    std::vector<Lit> inputs_;
    std::vector<std::string> input_names_;
};

/// Clause set with DIMACS literals (±var, var ≥ 1).
struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    int new_var() { return ++num_vars; }
};

/// Tseitin transformation with full equivalences. Inputs are mapped to CNF
/// variables by the caller; every AND node reached gets a fresh variable.
class Tseitin {
public:
    Tseitin(const Circuit& c, Cnf& cnf, std::function<int(std::uint32_t)> input_var)
        : c_(c), cnf_(cnf), input_var_(std::move(input_var)) {}

    /// CNF literal equivalent to `l`; constants are encoded by a shared
    /// variable forced true.
    int literal(Lit l) {
        const int v = var(node_of(l));
        return is_negated(l) ? -v : v;
    }

    /// Adds `l` as a unit constraint.
    void assert_true(Lit l) {
        if (l == kTrue) return;
        if (l == kFalse) {
            cnf_.clauses.push_back({});
            return;
        }
        cnf_.clauses.push_back({literal(l)});
    }

    /// CNF variable of an AND node, or 0 if none was created.
    int node_var(std::uint32_t node) const {
        auto it = vars_.find(node);
        return it == vars_.end() ? 0 : it->second;
    }

private:
    int var(std::uint32_t root) {
        if (auto it = vars_.find(root); it != vars_.end()) return it->second;
        for (std::uint32_t n : c_.cone({root << 1})) {
            if (vars_.count(n)) continue;
            int v;
            switch (c_.kind(n)) {
            case Circuit::Kind::Const:
                v = cnf_.new_var();
                cnf_.clauses.push_back({-v});
                break;
            case Circuit::Kind::Input:
                v = input_var_(c_.input_index(n));
                break;
            case Circuit::Kind::And: {
                v = cnf_.new_var();
                std::vector<int> big{v};
                for (Lit k : c_.children(n)) {
                    const int kv = is_negated(k) ? -vars_.at(node_of(k)) : vars_.at(node_of(k));
                    cnf_.clauses.push_back({-v, kv});
                    big.push_back(-kv);
                }
                cnf_.clauses.push_back(std::move(big));
                break;
            }
            default:
                throw std::logic_error("Tseitin: unknown node kind");
            }
            vars_.emplace(n, v);
        }
        return vars_.at(root);
    }

    const Circuit& c_;
    Cnf& cnf_;
    std::function<int(std::uint32_t)> input_var_;
    std::unordered_map<std::uint32_t, int> vars_;
};

} // namespace lasso::synth
