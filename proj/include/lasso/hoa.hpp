#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lasso/automaton.hpp"
#include "lasso/error.hpp"

namespace lasso::hoa {

// ---------------------------------------------------------------------------
// Writer

namespace detail {

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

/// Acceptance formula of "parity max even <sets>".
inline std::string parity_max_even(Color sets) {
    std::string f = "Inf(0)";
    for (Color c = 1; c < sets; ++c)
        f = (c % 2 == 0 ? "Inf(" + std::to_string(c) + ") | (" : "Fin(" + std::to_string(c) + ") & (") + f + ")";
    return f;
}

inline std::string cube(const Alphabet& sigma, LetterId l) {
    const std::uint32_t m = sigma.mask(l);
    std::string s;
    for (std::size_t i = 0; i < sigma.aps().size(); ++i) {
        if (i) s += '&';
        if (!((m >> i) & 1u)) s += '!';
        s += std::to_string(i);
    }
    return s.empty() ? "t" : s;
}

} // namespace detail

/// HOA text for `a`. AP-backed alphabets are written with an AP header and
/// Boolean labels; other alphabets use the `Alphabet:` header, whose labels
/// are letter indices. Annotations become header comments.
inline std::string write(const ParityAutomaton& a, const std::string& name = {}) {
    const Alphabet& sigma = a.alphabet();
    std::ostringstream out;
    std::string title = name;
    for (const auto& [k, v] : a.annotations())
        if (k == "name" && title.empty()) title = v;
    out << "HOA: v1\n";
    if (!title.empty()) out << "name: " << detail::quote(title) << '\n';
    for (const auto& [k, v] : a.annotations())
        if (k != "name") out << "/* " << k << ": " << v << " */\n";
    out << "States: " << a.size() << '\n';
    for (StateId q : a.initial()) out << "Start: " << q << '\n';
    const bool ap = sigma.ap_backed();
    bool full = false;
    if (ap) {
        out << "AP: " << sigma.aps().size();
        for (const auto& p : sigma.aps()) out << ' ' << detail::quote(p);
        out << '\n';
        full = sigma.size() == (std::size_t{1} << sigma.aps().size());
        bool identity = full;
        for (LetterId l = 0; identity && l < sigma.size(); ++l) identity = sigma.mask(l) == l;
        if (!identity) {
            out << "letter-masks:";
            for (LetterId l = 0; l < sigma.size(); ++l) out << ' ' << sigma.mask(l);
            out << '\n';
        }
    } else {
        out << "Alphabet: " << sigma.size();
        for (const auto& l : sigma.letters()) out << ' ' << detail::quote(l);
        out << '\n';
    }
    enum { All, Buchi, Parity } kind = a.is_safety() ? All : a.is_buchi() ? Buchi : Parity;
    const Color sets = a.max_color() + 1;
    if (kind == All) out << "acc-name: all\nAcceptance: 0 t\n";
    else if (kind == Buchi) out << "acc-name: Buchi\nAcceptance: 1 Inf(0)\n";
    else out << "acc-name: parity max even " << sets << "\nAcceptance: " << sets << ' ' << detail::parity_max_even(sets) << '\n';
    out << "properties: state-acc" << (a.is_deterministic() ? " deterministic" : "") << '\n';
    out << "--BODY--\n";
    for (StateId q = 0; q < a.size(); ++q) {
        out << "State: " << q << ' ' << detail::quote(a.name(q));
        if (kind == Buchi && a.color(q) == 2) out << " {0}";
        if (kind == Parity) out << " {" << a.color(q) << '}';
        out << '\n';
        std::map<StateId, std::vector<LetterId>> by_target;
        for (LetterId l = 0; l < sigma.size(); ++l)
            for (StateId t : a.successors(q, l)) by_target[t].push_back(l);
        for (const auto& [t, letters] : by_target) {
            std::string label;
            if (ap && full && letters.size() == sigma.size()) {
                label = "t";
            } else {
                for (LetterId l : letters) {
                    if (!label.empty()) label += " | ";
                    std::string atom = ap ? detail::cube(sigma, l) : std::to_string(l);
                    label += ap && letters.size() > 1 && sigma.aps().size() > 1 ? "(" + atom + ")" : atom;
                }
            }
            out << '[' << label << "] " << t << '\n';
        }
    }
    out << "--END--\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Reader

namespace detail {

struct Token {
    enum Kind { Header, String, Int, Ident, Punct, Body, End, Eof } kind;
    std::string text;
    std::size_t line, column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    std::vector<Token> run(std::vector<std::pair<std::string, std::string>>& comments) {
        std::vector<Token> out;
        for (;;) {
            skip(comments);
            const std::size_t l = line_, c = col_;
            if (i_ >= s_.size()) {
                out.push_back({Token::Eof, "", l, c});
                return out;
            }
            const char ch = s_[i_];
            if (ch == '"') {
                advance();
                std::string str;
                while (i_ < s_.size() && s_[i_] != '"') {
                    if (s_[i_] == '\\' && i_ + 1 < s_.size()) advance();
                    str += s_[i_];
                    advance();
                }
                if (i_ >= s_.size()) throw ParseError("unterminated string", l, c);
                advance();
                out.push_back({Token::String, str, l, c});
            } else if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::string num;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                    num += s_[i_];
                    advance();
                }
                out.push_back({Token::Int, num, l, c});
            } else if (s_.compare(i_, 8, "--BODY--") == 0) {
                for (int k = 0; k < 8; ++k) advance();
                out.push_back({Token::Body, "--BODY--", l, c});
            } else if (s_.compare(i_, 7, "--END--") == 0) {
                for (int k = 0; k < 7; ++k) advance();
                out.push_back({Token::End, "--END--", l, c});
            } else if (s_.compare(i_, 9, "--ABORT--") == 0) {
                throw ParseError("automaton aborted (--ABORT--)", l, c);
            } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' || ch == '@') {
                std::string id;
                while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                                          s_[i_] == '-' || s_[i_] == '@')) {
                    id += s_[i_];
                    advance();
                }
                if (i_ < s_.size() && s_[i_] == ':') {
                    advance();
                    out.push_back({Token::Header, id, l, c});
                } else {
                    out.push_back({Token::Ident, id, l, c});
                }
            } else if (std::string("[](){}!&|").find(ch) != std::string::npos) {
                advance();
                out.push_back({Token::Punct, std::string(1, ch), l, c});
            } else {
                throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
            }
        }
    }

private:
    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }
    void skip(std::vector<std::pair<std::string, std::string>>& comments) {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
            if (s_.compare(i_, 2, "/*") != 0) return;
            const std::size_t l = line_, c = col_;
            advance();
            advance();
            int depth = 1;
            std::string body;
            while (i_ < s_.size() && depth > 0) {
                if (s_.compare(i_, 2, "/*") == 0) ++depth;
                if (s_.compare(i_, 2, "*/") == 0 && --depth == 0) break;
                body += s_[i_];
                advance();
            }
            if (i_ >= s_.size()) throw ParseError("unterminated comment", l, c);
            advance();
            advance();
            const auto colon = body.find(": ");
            if (colon != std::string::npos) {
                auto trim = [](std::string x) {
                    const auto b = x.find_first_not_of(" \t\n");
                    const auto e = x.find_last_not_of(" \t\n");
                    return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
                };
                std::string key = trim(body.substr(0, colon));
                if (!key.empty() && key.find(' ') == std::string::npos) comments.emplace_back(key, trim(body.substr(colon + 2)));
            }
        }
    }

    const std::string& s_;
    std::size_t i_ = 0, line_ = 1, col_ = 1;
};

/// Boolean label over AP indices (or letter indices for `Alphabet:`).
struct Label {
    enum Kind { True, False, Atom, Not, And, Or } kind;
    std::size_t atom = 0;
    std::shared_ptr<Label> l, r;

    bool eval(const std::function<bool(std::size_t)>& atom_value) const {
        switch (kind) {
        case True: return true;
        case False: return false;
        case Atom: return atom_value(atom);
        case Not: return !l->eval(atom_value);
        case And: return l->eval(atom_value) && r->eval(atom_value);
        case Or: return l->eval(atom_value) || r->eval(atom_value);
        }
        return false;
    }
};

class Parser {
public:
    explicit Parser(const std::string& text) {
        tokens_ = Lexer(text).run(comments_);
    }

    ParityAutomaton parse() {
        header();
        return body();
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& what, const Token& t) const { throw ParseError(what, t.line, t.column); }
    [[noreturn]] void fail(const std::string& what) const { fail(what, peek()); }

    std::size_t integer(const char* what) {
        const Token& t = next();
        if (t.kind != Token::Int) fail(std::string("expected ") + what, t);
        try {
            return std::stoul(t.text);
        } catch (const std::exception&) {
            fail(std::string(what) + " out of range", t);
        }
    }
    std::string string(const char* what) {
        const Token& t = next();
        if (t.kind != Token::String) fail(std::string("expected ") + what, t);
        return t.text;
    }
    bool at_header_end() const {
        return peek().kind == Token::Header || peek().kind == Token::Body || peek().kind == Token::Eof;
    }

    void header() {
        if (peek().kind != Token::Header || peek().text != "HOA") fail("expected 'HOA: v1'");
        next();
        if (peek().kind != Token::Ident || peek().text != "v1") fail("unsupported HOA version (expected v1)");
        next();
        while (peek().kind == Token::Header) {
            const Token h = next();
            if (h.text == "States") {
                states_ = integer("state count");
            } else if (h.text == "Start") {
                start_.push_back(integer("initial state"));
                if (peek().kind == Token::Punct && peek().text == "&") fail("universal initial states are not supported");
            } else if (h.text == "AP") {
                const std::size_t n = integer("AP count");
                for (std::size_t i = 0; i < n; ++i) aps_.push_back(string("atomic proposition name"));
                have_ap_ = true;
            } else if (h.text == "Alphabet") {
                const std::size_t n = integer("alphabet size");
                for (std::size_t i = 0; i < n; ++i) letters_.push_back(string("letter name"));
                have_alphabet_ = true;
            } else if (h.text == "letter-masks") {
                while (!at_header_end()) masks_.push_back(static_cast<std::uint32_t>(integer("letter mask")));
            } else if (h.text == "acc-name") {
                acc_name_.clear();
                while (!at_header_end()) acc_name_.push_back(next().text);
            } else if (h.text == "Acceptance") {
                acc_sets_ = integer("acceptance set count");
                acc_cond_.clear();
                while (!at_header_end()) acc_cond_ += next().text;
            } else if (h.text == "name") {
                name_ = string("automaton name");
            } else if (h.text == "properties") {
                while (!at_header_end()) {
                    const Token& p = next();
                    if (p.text == "trans-acc" || p.text == "trans-labels" || p.text == "state-labels" ||
                        p.text == "univ-branch")
                        fail("unsupported property '" + p.text + "'", p);
                }
            } else if (h.text == "Alias") {
                fail("aliases are not supported", h);
            } else if (std::isupper(static_cast<unsigned char>(h.text[0]))) {
                fail("unsupported header item '" + h.text + ":'", h);
            } else {
                while (!at_header_end()) next();  // ignorable lowercase header item
            }
        }
        if (peek().kind != Token::Body) fail("expected --BODY--");
        next();
        if (!states_) fail("missing 'States:' header");
        if (start_.empty()) fail("missing 'Start:' header");
        if (have_ap_ == have_alphabet_) fail("exactly one of 'AP:' and 'Alphabet:' is required");
        classify_acceptance();
    }

    void classify_acceptance() {
        std::string name;
        for (const auto& t : acc_name_) name += (name.empty() ? "" : " ") + t;
        auto expect = [&](std::size_t sets, const std::string& cond) {
            std::string c = cond;
            c.erase(std::remove(c.begin(), c.end(), ' '), c.end());
            if (acc_sets_ && (*acc_sets_ != sets || acc_cond_ != c))
                throw ParseError("'Acceptance:' does not match acc-name '" + name + "'", 1, 1);
        };
        if (name == "all") {
            kind_ = All;
            expect(0, "t");
        } else if (name == "Buchi") {
            kind_ = Buchi;
            expect(1, "Inf(0)");
        } else if (acc_name_.size() == 4 && acc_name_[0] == "parity" && acc_name_[1] == "max" && acc_name_[2] == "even") {
            kind_ = Parity;
            sets_ = std::stoul(acc_name_[3]);
            expect(sets_, parity_max_even(static_cast<Color>(sets_)));
        } else if (name.empty()) {
            if (!acc_sets_) throw ParseError("missing acceptance condition", 1, 1);
            if (*acc_sets_ == 0 && acc_cond_ == "t") kind_ = All;
            else if (*acc_sets_ == 1 && acc_cond_ == "Inf(0)") kind_ = Buchi;
            else {
                std::string expected = parity_max_even(static_cast<Color>(*acc_sets_));
                expected.erase(std::remove(expected.begin(), expected.end(), ' '), expected.end());
                if (acc_cond_ != expected) throw ParseError("unsupported acceptance condition", 1, 1);
                kind_ = Parity;
                sets_ = *acc_sets_;
            }
        } else {
            throw ParseError("unsupported acc-name '" + name + "'", 1, 1);
        }
    }

    std::shared_ptr<Label> label_or() {
        auto l = label_and();
        while (peek().kind == Token::Punct && peek().text == "|") {
            next();
            l = std::make_shared<Label>(Label{Label::Or, 0, l, label_and()});
        }
        return l;
    }
    std::shared_ptr<Label> label_and() {
        auto l = label_not();
        while (peek().kind == Token::Punct && peek().text == "&") {
            next();
            l = std::make_shared<Label>(Label{Label::And, 0, l, label_not()});
        }
        return l;
    }
    std::shared_ptr<Label> label_not() {
        const Token& t = next();
        if (t.kind == Token::Punct && t.text == "!") return std::make_shared<Label>(Label{Label::Not, 0, label_not(), nullptr});
        if (t.kind == Token::Punct && t.text == "(") {
            auto l = label_or();
            if (!(peek().kind == Token::Punct && peek().text == ")")) fail("expected ')'");
            next();
            return l;
        }
        if (t.kind == Token::Ident && t.text == "t") return std::make_shared<Label>(Label{Label::True, 0, nullptr, nullptr});
        if (t.kind == Token::Ident && t.text == "f") return std::make_shared<Label>(Label{Label::False, 0, nullptr, nullptr});
        if (t.kind == Token::Ident && t.text[0] == '@') fail("aliases are not supported", t);
        if (t.kind == Token::Int) {
            const std::size_t v = std::stoul(t.text);
            const std::size_t limit = have_ap_ ? aps_.size() : letters_.size();
            if (v >= limit) fail("label refers to " + std::string(have_ap_ ? "AP " : "letter ") + t.text + " which is not declared", t);
            return std::make_shared<Label>(Label{Label::Atom, v, nullptr, nullptr});
        }
        fail("malformed label", t);
    }

    std::vector<std::uint32_t> state_colors(std::size_t q) {
        std::vector<std::uint32_t> sets;
        if (!(peek().kind == Token::Punct && peek().text == "{")) return sets;
        next();
        while (!(peek().kind == Token::Punct && peek().text == "}")) sets.push_back(static_cast<std::uint32_t>(integer("acceptance set")));
        next();
        (void)q;
        return sets;
    }

    ParityAutomaton body() {
        Alphabet sigma = have_ap_ ? (masks_.empty() ? Alphabet::from_aps(aps_) : Alphabet::from_aps(aps_, masks_))
                                  : Alphabet(letters_);
        if (have_ap_ && masks_.empty() && aps_.size() > 20) fail("too many atomic propositions");
        AutomatonBuilder b(sigma);
        for (const auto& [k, v] : comments_) b.annotate(k, v);
        if (!name_.empty()) b.annotate("name", name_);
        struct Edge {
            std::size_t from, to;
            std::shared_ptr<Label> label;  // null: implicit
            std::size_t implicit_index;
            Token where;
        };
        std::vector<Edge> edges;
        std::vector<std::optional<std::string>> names(*states_);
        std::vector<std::optional<Color>> colors(*states_);
        std::vector<bool> declared(*states_, false);
        while (peek().kind == Token::Header && peek().text == "State") {
            next();
            if (peek().kind == Token::Punct && peek().text == "[") fail("state labels are not supported");
            const Token st = peek();
            const std::size_t q = integer("state number");
            if (q >= *states_) fail("state " + std::to_string(q) + " exceeds 'States: " + std::to_string(*states_) + "'", st);
            if (declared[q]) fail("state " + std::to_string(q) + " declared twice", st);
            declared[q] = true;
            if (peek().kind == Token::String) names[q] = next().text;
            const auto sets = state_colors(q);
            if (kind_ == All) {
                colors[q] = 0;
            } else if (kind_ == Buchi) {
                colors[q] = std::find(sets.begin(), sets.end(), 0u) != sets.end() ? 2 : 1;
            } else {
                if (sets.size() != 1 || sets[0] >= sets_) fail("state " + std::to_string(q) + " needs exactly one color below " + std::to_string(sets_), st);
                colors[q] = sets[0];
            }
            std::size_t implicit = 0;
            while (peek().kind == Token::Int || (peek().kind == Token::Punct && peek().text == "[")) {
                Edge e{q, 0, nullptr, 0, peek()};
                if (peek().kind == Token::Punct) {
                    next();
                    e.label = label_or();
                    if (!(peek().kind == Token::Punct && peek().text == "]")) fail("expected ']'");
                    next();
                } else {
                    if (have_ap_ && aps_.size() > 26) fail("implicit labels with more than 26 atomic propositions are not supported");
                    e.implicit_index = implicit++;
                }
                const Token tt = peek();
                e.to = integer("target state");
                if (peek().kind == Token::Punct && peek().text == "&") fail("universal branching is not supported");
                if (e.to >= *states_) fail("target state " + std::to_string(e.to) + " is not declared", tt);
                if (peek().kind == Token::Punct && peek().text == "{") fail("transition-based acceptance is not supported");
                edges.push_back(std::move(e));
            }
        }
        if (peek().kind != Token::End) fail("expected 'State:' or --END--");
        for (std::size_t q = 0; q < *states_; ++q) {
            if (!declared[q]) throw ParseError("state " + std::to_string(q) + " is never declared in the body", peek().line, peek().column);
            b.add_state(names[q].value_or(std::to_string(q)), *colors[q]);
        }
        for (std::size_t s : start_) {
            if (s >= *states_) throw ParseError("initial state " + std::to_string(s) + " is not declared", 1, 1);
            b.add_initial(static_cast<StateId>(s));
        }
        for (const auto& e : edges) {
            for (LetterId l = 0; l < sigma.size(); ++l) {
                bool on;
                if (!e.label) {
                    on = have_ap_ ? sigma.mask(l) == e.implicit_index : l == e.implicit_index;
                } else if (have_ap_) {
                    const std::uint32_t m = sigma.mask(l);
                    on = e.label->eval([m](std::size_t i) { return ((m >> i) & 1u) != 0; });
                } else {
                    on = e.label->eval([l](std::size_t i) { return i == l; });
                }
                if (on) b.add_transition(static_cast<StateId>(e.from), l, static_cast<StateId>(e.to));
            }
        }
        return b.build();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, std::string>> comments_;
    std::optional<std::size_t> states_;
    std::vector<std::size_t> start_;
    std::vector<std::string> aps_, letters_;
    std::vector<std::uint32_t> masks_;
    bool have_ap_ = false, have_alphabet_ = false;
    std::vector<std::string> acc_name_;
    std::optional<std::size_t> acc_sets_;
    std::string acc_cond_;
    std::string name_;
    enum { All, Buchi, Parity } kind_ = All;
    std::size_t sets_ = 0;
};

} // namespace detail

/// Reads the supported HOA subset.
inline ParityAutomaton parse(const std::string& text) { return detail::Parser(text).parse(); }

} // namespace lasso::hoa
