#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lasso/alphabet.hpp"
#include "lasso/error.hpp"
#include "lasso/oracle.hpp"

namespace lasso::ltl {

enum class Op { True, False, Atom, Not, And, Or, Implies, Next, Until, Release, Finally, Globally };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string atom;
    Formula left;
    Formula right;
};

inline Formula make(Op op, Formula l = nullptr, Formula r = nullptr) {
    return std::make_shared<const Node>(Node{op, {}, std::move(l), std::move(r)});
}
inline Formula tt() { return make(Op::True); }
inline Formula ff() { return make(Op::False); }
inline Formula atom(std::string name) { return std::make_shared<const Node>(Node{Op::Atom, std::move(name), {}, {}}); }
inline Formula neg(Formula f) { return make(Op::Not, std::move(f)); }
inline Formula conj(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return make(Op::Implies, std::move(a), std::move(b)); }
inline Formula next(Formula f) { return make(Op::Next, std::move(f)); }
inline Formula until(Formula a, Formula b) { return make(Op::Until, std::move(a), std::move(b)); }
inline Formula release(Formula a, Formula b) { return make(Op::Release, std::move(a), std::move(b)); }
inline Formula finally(Formula f) { return make(Op::Finally, std::move(f)); }
inline Formula globally(Formula f) { return make(Op::Globally, std::move(f)); }

inline bool is_unary(Op op) { return op == Op::Not || op == Op::Next || op == Op::Finally || op == Op::Globally; }
inline bool is_binary(Op op) {
    return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Until || op == Op::Release;
}

inline bool equal(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op || a->atom != b->atom) return false;
    return equal(a->left, b->left) && equal(a->right, b->right);
}

/// Number of syntax-tree nodes.
inline std::size_t size(const Formula& f) {
    if (!f) return 0;
    return 1 + size(f->left) + size(f->right);
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (!f) return;
    if (f->op == Op::Atom) out.insert(f->atom);
    collect_atoms(f->left, out);
    collect_atoms(f->right, out);
}

/// Atomic propositions of f in lexicographic order.
inline std::vector<std::string> atoms(const Formula& f) {
    std::set<std::string> s;
    collect_atoms(f, s);
    return {s.begin(), s.end()};
}

inline std::string to_string(const Formula& f) {
    auto wrap = [](const Formula& g) {
        std::string s = to_string(g);
        if (g->op == Op::Atom || g->op == Op::True || g->op == Op::False || is_unary(g->op)) return s;
        return "(" + s + ")";
    };
    // U and R bind tighter than the prefix operators, so a prefix operator on
    // their left needs parentheses.
    auto wrap_left = [&](const Formula& g) {
        if (is_unary(g->op)) return "(" + to_string(g) + ")";
        return wrap(g);
    };
    switch (f->op) {
    case Op::True: return "1";
    case Op::False: return "0";
    case Op::Atom: return f->atom;
    case Op::Not: return "!" + wrap(f->left);
    case Op::Next: return "X " + wrap(f->left);
    case Op::Finally: return "F " + wrap(f->left);
    case Op::Globally: return "G " + wrap(f->left);
    case Op::And: return wrap(f->left) + " & " + wrap(f->right);
    case Op::Or: return wrap(f->left) + " | " + wrap(f->right);
    case Op::Implies: return wrap(f->left) + " -> " + wrap(f->right);
    case Op::Until: return wrap_left(f->left) + " U " + wrap(f->right);
    case Op::Release: return wrap_left(f->left) + " R " + wrap(f->right);
    }
    return {};
}

namespace detail {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>* aps) : text_(text), aps_(aps) {}

    Formula parse() {
        Formula f = implication();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(pos_ >= text_.size() ? what + " at end of input" : what, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        // Keyword tokens must not run into an identifier ("true1", "false_x").
        if (std::isalpha(static_cast<unsigned char>(tok.back())) && tok.size() > 1) {
            std::size_t end = pos_ + tok.size();
            if (end < text_.size() && is_ident_char(text_[end])) return false;
        }
        pos_ += tok.size();
        return true;
    }

    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

    Formula implication() {
        Formula l = disjunction();
        if (accept("->")) return implies(l, implication());
        return l;
    }

    Formula disjunction() {
        Formula l = conjunction();
        while (accept("||") || accept("|")) l = disj(l, conjunction());
        return l;
    }

    Formula conjunction() {
        Formula l = unary();
        while (accept("&&") || accept("&")) l = conj(l, unary());
        return l;
    }

    Formula unary() {
        if (accept("!")) return neg(unary());
        if (accept("X")) return next(unary());
        if (accept("F")) return finally(unary());
        if (accept("G")) return globally(unary());
        return temporal();
    }

    Formula temporal() {
        Formula l = primary();
        if (accept("U")) return until(l, unary());
        if (accept("R")) return release(l, unary());
        return l;
    }

    Formula primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a formula");
        if (accept("(")) {
            Formula f = implication();
            if (!accept(")")) fail("expected ')'");
            return f;
        }
        if (accept("true") || accept("1")) return tt();
        if (accept("false") || accept("0")) return ff();
        if (is_ident_start(text_[pos_])) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (aps_ && std::find(aps_->begin(), aps_->end(), name) == aps_->end()) {
                pos_ = start;
                fail("undeclared atomic proposition '" + name + "'");
            }
            return atom(std::move(name));
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    const std::vector<std::string>* aps_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the concrete syntax. Precedence from loosest to tightest:
/// `->` (right associative), `|`, `&`, the unary operators `!` `X` `F` `G`,
/// then `U` and `R` (right associative). Atoms are lower-case identifiers;
/// `1`/`true` and `0`/`false` are the constants. Every atom must be in aps.
inline Formula parse(std::string_view text, const std::vector<std::string>& aps) {
    return detail::Parser(text, &aps).parse();
}

/// Parses without an AP declaration; use atoms() to recover the AP set.
inline Formula parse(std::string_view text) { return detail::Parser(text, nullptr).parse(); }

/// Bijection between the letters of an AP-backed alphabet and AP sets.
class ApLetterMap {
public:
    explicit ApLetterMap(std::vector<std::string> aps) : alphabet_(Alphabet::from_aps(std::move(aps))) {}
    explicit ApLetterMap(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
        if (!alphabet_.ap_backed()) throw InputError("alphabet is not backed by atomic propositions");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<std::string>& aps() const noexcept { return alphabet_.aps(); }

    std::size_t ap_index(const std::string& ap) const {
        const auto& a = aps();
        auto it = std::find(a.begin(), a.end(), ap);
        if (it == a.end()) throw InputError("unknown atomic proposition '" + ap + "'");
        return static_cast<std::size_t>(it - a.begin());
    }

    bool holds(LetterId letter, std::size_t ap) const { return (alphabet_.mask(letter) >> ap) & 1u; }
    LetterId letter(std::uint32_t mask) const {
        auto l = alphabet_.letter_of_mask(mask);
        if (!l) throw InputError("AP set " + alphabet_.mask_name(mask) + " is not a letter of the alphabet");
        return *l;
    }

private:
    Alphabet alphabet_;
};

namespace detail {

/// Truth values of every subformula at every base position of a lasso of
/// length n whose last position continues at loop_start.
class LassoEvaluator {
public:
    LassoEvaluator(const ApLetterMap& map, const Lasso& w)
        : map_(map), base_(w.base()), n_(w.length()), loop_(w.stem.size()) {
        map.alphabet().check(base_);
    }

    const std::vector<char>& eval(const Formula& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        std::vector<char> v(n_);
        switch (f->op) {
        case Op::True: std::fill(v.begin(), v.end(), 1); break;
        case Op::False: break;
        case Op::Atom: {
            const std::size_t ap = map_.ap_index(f->atom);
            for (std::size_t i = 0; i < n_; ++i) v[i] = map_.holds(base_[i], ap);
            break;
        }
        case Op::Not: {
            const auto& a = eval(f->left);
            for (std::size_t i = 0; i < n_; ++i) v[i] = !a[i];
            break;
        }
        case Op::And:
        case Op::Or:
        case Op::Implies: {
            const auto a = eval(f->left);
            const auto& b = eval(f->right);
            for (std::size_t i = 0; i < n_; ++i)
                v[i] = f->op == Op::And ? (a[i] && b[i]) : f->op == Op::Or ? (a[i] || b[i]) : (!a[i] || b[i]);
            break;
        }
        case Op::Next: {
            const auto& a = eval(f->left);
            for (std::size_t i = 0; i < n_; ++i) v[i] = a[succ(i)];
            break;
        }
        case Op::Until:
        case Op::Finally:
            v = until(f->op == Op::Until ? eval(f->left) : std::vector<char>(n_, 1),
                      eval(f->op == Op::Until ? f->right : f->left));
            break;
        case Op::Release:
        case Op::Globally:
            v = release(f->op == Op::Release ? eval(f->left) : std::vector<char>(n_, 0),
                        eval(f->op == Op::Release ? f->right : f->left));
            break;
        }
        return memo_.emplace(f.get(), std::move(v)).first->second;
    }

private:
    std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : loop_; }

    // Least fixpoint of x = b ∨ (a ∧ X x). Two backward passes suffice: the
    // first settles every witness that does not wrap around the loop, the
    // second lets the value at the loop start flow into the last position.
    std::vector<char> until(const std::vector<char>& a, const std::vector<char>& b) const {
        std::vector<char> x(n_, 0);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = n_; i-- > 0;) {
                const char after = (i + 1 < n_) ? x[i + 1] : (pass == 0 ? 0 : x[loop_]);
                x[i] = b[i] || (a[i] && after);
            }
        return x;
    }

    // Greatest fixpoint of x = b ∧ (a ∨ X x).
    std::vector<char> release(const std::vector<char>& a, const std::vector<char>& b) const {
        std::vector<char> x(n_, 1);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = n_; i-- > 0;) {
                const char after = (i + 1 < n_) ? x[i + 1] : (pass == 0 ? 1 : x[loop_]);
                x[i] = b[i] && (a[i] || after);
            }
        return x;
    }

    const ApLetterMap& map_;
    Word base_;
    std::size_t n_;
    std::size_t loop_;
    std::unordered_map<const Node*, std::vector<char>> memo_;
};

} // namespace detail

/// Exact LTL semantics on the ultimately periodic word u·v^ω.
inline bool eval_on_lasso(const Formula& f, const Lasso& w, const ApLetterMap& map) {
    detail::LassoEvaluator ev(map, w);
    return ev.eval(f)[0];
}

/// The formula as a membership oracle over the map's alphabet. Thread-safe.
inline MembershipOracle ltl_oracle(Formula f, ApLetterMap map) {
    for (const auto& ap : atoms(f)) map.ap_index(ap);
    Alphabet alphabet = map.alphabet();
    return MembershipOracle(std::move(alphabet),
                            [f = std::move(f), map = std::move(map)](const Lasso& w) { return eval_on_lasso(f, w, map); });
}

} // namespace lasso::ltl
