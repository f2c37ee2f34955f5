#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lasso/alphabet.hpp"
#include "lasso/error.hpp"

namespace lasso {

using StateId = std::uint32_t;
using Color = std::uint32_t;

/// Relabels colors so that the image is gap free while every color keeps its
/// parity and the relative order is preserved. Adjacent colors of equal parity
/// are merged (this never changes the max-even parity condition). The smallest
/// resulting color is 0 or 1 according to the parity of the smallest input
/// color. Returns old color -> new color.
inline std::map<Color, Color> normalized_color_map(const std::vector<Color>& colors) {
    std::set<Color> image(colors.begin(), colors.end());
    std::map<Color, Color> out;
    bool first = true;
    Color prev_old = 0, prev_new = 0;
    for (Color c : image) {
        Color nc;
        if (first) nc = c % 2;
        else nc = (c % 2 == prev_old % 2) ? prev_new : prev_new + 1;
        out[c] = nc;
        prev_old = c;
        prev_new = nc;
        first = false;
    }
    return out;
}

/// State-based parity automaton (Q, Q0, δ, μ) with the max-even condition:
/// a run is accepting iff the largest color seen infinitely often is even.
/// The transition function may be partial; δ(q, a) = ∅ means the run dies.
///
/// Instances are immutable; build them with AutomatonBuilder.
class ParityAutomaton {
public:
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(StateId q) const { return names_.at(q); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<StateId>& initial() const noexcept { return initial_; }
    const std::vector<StateId>& successors(StateId q, LetterId a) const { return succ_.at(q).at(a); }
    Color color(StateId q) const { return colors_.at(q); }
    const std::vector<Color>& colors() const noexcept { return colors_; }

    std::optional<StateId> find(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    /// Successor of a deterministic automaton, or nullopt when undefined.
    std::optional<StateId> successor(StateId q, LetterId a) const {
        const auto& s = succ_.at(q).at(a);
        if (s.empty()) return std::nullopt;
        return s.front();
    }

    std::set<Color> color_image() const { return {colors_.begin(), colors_.end()}; }
    std::size_t num_colors() const { return color_image().size(); }
    Color max_color() const { return *std::max_element(colors_.begin(), colors_.end()); }
    Color min_color() const { return *std::min_element(colors_.begin(), colors_.end()); }

    bool is_deterministic() const {
        if (initial_.size() != 1) return false;
        for (const auto& row : succ_)
            for (const auto& s : row)
                if (s.size() > 1) return false;
        return true;
    }

    bool is_complete() const {
        for (const auto& row : succ_)
            for (const auto& s : row)
                if (s.empty()) return false;
        return true;
    }

    bool is_buchi() const {
        auto img = color_image();
        return std::all_of(img.begin(), img.end(), [](Color c) { return c == 1 || c == 2; });
    }

    bool is_safety() const {
        auto img = color_image();
        return img.size() == 1 && *img.begin() == 0;
    }

    std::size_t num_transitions() const {
        std::size_t n = 0;
        for (const auto& row : succ_)
            for (const auto& s : row) n += s.size();
        return n;
    }

    /// Free-form key/value metadata (construction parameters, bounds). Not
    /// part of the automaton's language or identity.
    const std::vector<std::pair<std::string, std::string>>& annotations() const noexcept { return annotations_; }

    ParityAutomaton with_annotation(std::string key, std::string value) const {
        ParityAutomaton copy = *this;
        copy.annotations_.emplace_back(std::move(key), std::move(value));
        return copy;
    }

    /// Structural equality (same names, initial states, transitions, colors).
    bool operator==(const ParityAutomaton& o) const {
        return alphabet_ == o.alphabet_ && names_ == o.names_ && initial_ == o.initial_ && succ_ == o.succ_ &&
               colors_ == o.colors_;
    }

private:
    friend class AutomatonBuilder;

    Alphabet alphabet_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> by_name_;
    std::vector<StateId> initial_;
    std::vector<std::vector<std::vector<StateId>>> succ_;
    std::vector<Color> colors_;
    std::vector<std::pair<std::string, std::string>> annotations_;
};

/// Incremental construction of a ParityAutomaton. build() validates the
/// invariants and normalizes the coloring (see normalized_color_map).
class AutomatonBuilder {
public:
    explicit AutomatonBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
        if (alphabet_.size() == 0) throw InputError("alphabet must not be empty");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return names_.size(); }

    StateId add_state(std::string name, Color color) {
        if (by_name_.count(name)) throw InputError("duplicate state '" + name + "'");
        StateId id = static_cast<StateId>(names_.size());
        by_name_.emplace(name, id);
        names_.push_back(std::move(name));
        colors_.push_back(color);
        succ_.emplace_back(alphabet_.size());
        return id;
    }

    std::optional<StateId> find(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    void set_color(StateId q, Color c) { colors_.at(q) = c; }

    void add_initial(StateId q) {
        check_state(q);
        if (std::find(initial_.begin(), initial_.end(), q) == initial_.end()) initial_.push_back(q);
    }

    void add_transition(StateId from, LetterId letter, StateId to) {
        check_state(from);
        check_state(to);
        if (letter >= alphabet_.size()) throw InputError("transition letter outside the alphabet");
        auto& s = succ_[from][letter];
        auto it = std::lower_bound(s.begin(), s.end(), to);
        if (it == s.end() || *it != to) s.insert(it, to);
    }

    void annotate(std::string key, std::string value) { annotations_.emplace_back(std::move(key), std::move(value)); }

    ParityAutomaton build(bool normalize = true) const {
        if (names_.empty()) throw InputError("automaton must have at least one state");
        if (initial_.empty()) throw InputError("automaton must have at least one initial state");
        ParityAutomaton a;
        a.alphabet_ = alphabet_;
        a.names_ = names_;
        a.by_name_ = by_name_;
        a.initial_ = initial_;
        a.succ_ = succ_;
        a.colors_ = colors_;
        a.annotations_ = annotations_;
        if (normalize) {
            auto m = normalized_color_map(colors_);
            for (auto& c : a.colors_) c = m.at(c);
        }
        return a;
    }

private:
    void check_state(StateId q) const {
        if (q >= names_.size()) throw InputError("reference to an undeclared state");
    }

    Alphabet alphabet_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> by_name_;
    std::vector<StateId> initial_;
    std::vector<std::vector<std::vector<StateId>>> succ_;
    std::vector<Color> colors_;
    std::vector<std::pair<std::string, std::string>> annotations_;
};

/// Re-opens an automaton for modification, keeping names and structure.
inline AutomatonBuilder to_builder(const ParityAutomaton& a) {
    AutomatonBuilder b(a.alphabet());
    for (StateId q = 0; q < a.size(); ++q) b.add_state(a.name(q), a.color(q));
    for (StateId q : a.initial()) b.add_initial(q);
    for (StateId q = 0; q < a.size(); ++q)
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            for (StateId t : a.successors(q, l)) b.add_transition(q, l, t);
    for (const auto& [k, v] : a.annotations()) b.annotate(k, v);
    return b;
}

/// Type abbreviation in the usual style: DPA, NBA, DSA, ...
inline std::string automaton_type(const ParityAutomaton& a) {
    std::string t = a.is_deterministic() ? "D" : "N";
    if (a.is_safety()) t += "SA";
    else if (a.is_buchi()) t += "BA";
    else t += "PA";
    return t;
}

} // namespace lasso
