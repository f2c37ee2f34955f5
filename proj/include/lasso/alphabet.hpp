#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lasso/error.hpp"

namespace lasso {

using LetterId = std::uint32_t;
using Word = std::vector<LetterId>;

/// Ordered set of opaque letter names. The order fixes the canonical
/// enumeration of words and is part of the observable behaviour.
///
/// An alphabet may be AP-backed: each letter then stands for a subset of an
/// ordered list of atomic propositions, stored as a bitmask (bit i set iff
/// aps()[i] holds). Such alphabets are named "{p,q}", "{}", ... and may cover
/// all of 2^AP or only a subset of it.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
        if (letters_.empty()) throw InputError("alphabet must not be empty");
        index_names();
    }

    /// All 2^|aps| letters, letter i being the AP set with bitmask i.
    static Alphabet from_aps(std::vector<std::string> aps) {
        if (aps.size() > 20) throw InputError("too many atomic propositions (at most 20 supported)");
        std::vector<std::uint32_t> masks(std::size_t{1} << aps.size());
        for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = static_cast<std::uint32_t>(i);
        return from_aps(std::move(aps), std::move(masks));
    }

    /// A subset of 2^AP, in the given order.
    static Alphabet from_aps(std::vector<std::string> aps, std::vector<std::uint32_t> masks) {
        if (masks.empty()) throw InputError("alphabet must not be empty");
        {
            std::vector<std::string> sorted = aps;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InputError("duplicate atomic proposition");
        }
        Alphabet a;
        a.aps_ = std::move(aps);
        a.masks_ = std::move(masks);
        for (std::uint32_t m : a.masks_) {
            if (a.aps_.size() < 32 && (m >> a.aps_.size()) != 0)
                throw InputError("letter mask refers to an undeclared proposition");
            a.letters_.push_back(a.mask_name(m));
        }
        a.index_names();
        return a;
    }

    std::size_t size() const noexcept { return letters_.size(); }
    const std::vector<std::string>& letters() const noexcept { return letters_; }
    const std::string& name(LetterId l) const { return letters_.at(l); }

    std::optional<LetterId> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    LetterId index(std::string_view name) const {
        if (auto l = find(name)) return *l;
        throw InputError("unknown letter '" + std::string(name) + "'");
    }

    bool ap_backed() const noexcept { return !masks_.empty(); }
    const std::vector<std::string>& aps() const noexcept { return aps_; }
    std::uint32_t mask(LetterId l) const { return masks_.at(l); }

    std::optional<LetterId> letter_of_mask(std::uint32_t mask) const {
        for (std::size_t i = 0; i < masks_.size(); ++i)
            if (masks_[i] == mask) return static_cast<LetterId>(i);
        return std::nullopt;
    }

    /// Name of an AP set in the "{p,q}" notation.
    std::string mask_name(std::uint32_t mask) const {
        std::string s = "{";
        bool first = true;
        for (std::size_t i = 0; i < aps_.size(); ++i) {
            if (!(mask >> i & 1u)) continue;
            if (!first) s += ',';
            s += aps_[i];
            first = false;
        }
        return s + "}";
    }

    bool contains(const Word& w) const {
        return std::all_of(w.begin(), w.end(), [&](LetterId l) { return l < size(); });
    }

    void check(const Word& w) const {
        if (!contains(w)) throw InputError("word contains a letter outside the alphabet");
    }

    bool operator==(const Alphabet& o) const {
        return letters_ == o.letters_ && aps_ == o.aps_ && masks_ == o.masks_;
    }

private:
    void index_names() {
        by_name_.clear();
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (!by_name_.emplace(letters_[i], static_cast<LetterId>(i)).second)
                throw InputError("duplicate letter '" + letters_[i] + "'");
    }

    std::vector<std::string> letters_;
    std::vector<std::string> aps_;
    std::vector<std::uint32_t> masks_;
    std::unordered_map<std::string, LetterId> by_name_;
};

/// Finite representation (u, v) of the ultimately periodic word u·v^ω.
struct Lasso {
    Word stem;
    Word loop;

    Lasso() : loop{0} {}
    Lasso(Word u, Word v) : stem(std::move(u)), loop(std::move(v)) {
        if (loop.empty()) throw InputError("lasso loop must be non-empty");
    }

    std::size_t length() const noexcept { return stem.size() + loop.size(); }

    /// Letter at position i of the infinite word.
    LetterId at(std::size_t i) const {
        if (i < stem.size()) return stem[i];
        return loop[(i - stem.size()) % loop.size()];
    }

    /// Base word u·v.
    Word base() const {
        Word b = stem;
        b.insert(b.end(), loop.begin(), loop.end());
        return b;
    }

    bool operator==(const Lasso& o) const { return stem == o.stem && loop == o.loop; }
};

/// Shortest representation of stem·loop^ω: the loop is reduced to its
/// primitive root and rotated backwards into the stem as far as possible.
/// Two representations denote the same infinite sequence iff their canonical
/// forms are equal.
template <class T>
std::pair<std::vector<T>, std::vector<T>> canonical_lasso(std::vector<T> stem, std::vector<T> loop) {
    const std::size_t n = loop.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = loop[i] == loop[i - p];
        if (periodic) {
            loop.resize(p);
            break;
        }
    }
    while (!stem.empty() && stem.back() == loop.back()) {
        stem.pop_back();
        std::rotate(loop.rbegin(), loop.rbegin() + 1, loop.rend());
    }
    return {std::move(stem), std::move(loop)};
}

inline Lasso canonical(const Lasso& w) {
    auto [u, v] = canonical_lasso(w.stem, w.loop);
    return Lasso(std::move(u), std::move(v));
}

/// Parses a word. Accepted notations: "ε" or "" for the empty word, brace
/// groups "{p}{}" for AP-backed alphabets, and otherwise a greedy
/// longest-match over the letter names, optionally whitespace separated.
inline Word parse_word(const Alphabet& alphabet, std::string_view text) {
    Word w;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
    };
    skip_ws();
    if (text.substr(i) == "ε" || text.substr(i) == "eps") return w;
    while (skip_ws(), i < text.size()) {
        if (text[i] == '{' && alphabet.ap_backed()) {
            std::size_t close = text.find('}', i);
            if (close == std::string_view::npos)
                throw InputError("unterminated '{' in word '" + std::string(text) + "'");
            std::uint32_t mask = 0;
            std::string_view inner = text.substr(i + 1, close - i - 1);
            std::size_t j = 0;
            while (j <= inner.size()) {
                std::size_t comma = inner.find(',', j);
                if (comma == std::string_view::npos) comma = inner.size();
                std::string ap(inner.substr(j, comma - j));
                ap.erase(std::remove_if(ap.begin(), ap.end(), [](char c) { return c == ' '; }), ap.end());
                if (!ap.empty()) {
                    const auto& aps = alphabet.aps();
                    auto it = std::find(aps.begin(), aps.end(), ap);
                    if (it == aps.end()) throw InputError("unknown proposition '" + ap + "' in word");
                    mask |= 1u << (it - aps.begin());
                }
                j = comma + 1;
            }
            auto l = alphabet.letter_of_mask(mask);
            if (!l) throw InputError("letter " + alphabet.mask_name(mask) + " is not in the alphabet");
            w.push_back(*l);
            i = close + 1;
            continue;
        }
        std::optional<LetterId> best;
        std::size_t best_len = 0;
        for (LetterId l = 0; l < alphabet.size(); ++l) {
            const std::string& nm = alphabet.name(l);
            if (nm.size() > best_len && text.substr(i, nm.size()) == nm) {
                best = l;
                best_len = nm.size();
            }
        }
        if (!best) throw InputError("cannot read a letter at offset " + std::to_string(i) + " of '" + std::string(text) + "'");
        w.push_back(*best);
        i += best_len;
    }
    return w;
}

inline std::string format_word(const Alphabet& alphabet, const Word& w) {
    if (w.empty()) return "";
    bool compact = true;
    for (const auto& nm : alphabet.letters())
        if (nm.size() != 1 && !(nm.front() == '{' && nm.back() == '}')) compact = false;
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i > 0) s += ' ';
        s += alphabet.name(w[i]);
    }
    return s;
}

inline std::string format_lasso(const Alphabet& alphabet, const Lasso& w) {
    return "(" + (w.stem.empty() ? std::string("ε") : format_word(alphabet, w.stem)) + ", " +
           format_word(alphabet, w.loop) + ")";
}

inline Lasso parse_lasso(const Alphabet& alphabet, std::string_view stem, std::string_view loop) {
    return Lasso(parse_word(alphabet, stem), parse_word(alphabet, loop));
}

} // namespace lasso
