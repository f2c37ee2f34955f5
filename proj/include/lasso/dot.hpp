#pragma once

#include <map>
#include <sstream>
#include <string>

#include "lasso/automaton.hpp"

namespace lasso {

/// Graphviz description of an automaton: one node per state labelled with
/// its name and color, one edge per target with the letters that lead there.
inline std::string to_dot(const ParityAutomaton& a) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    std::ostringstream out;
    out << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (StateId q : a.initial()) out << "  init" << q << " [shape=point];\n  init" << q << " -> q" << q << ";\n";
    for (StateId q = 0; q < a.size(); ++q)
        out << "  q" << q << " [label=\"" << esc(a.name(q)) << "\\n" << a.color(q) << "\"" << (a.color(q) % 2 == 0 ? ", shape=doublecircle" : "") << "];\n";
    for (StateId q = 0; q < a.size(); ++q) {
        std::map<StateId, std::string> by_target;
        for (LetterId l = 0; l < a.alphabet().size(); ++l)
            for (StateId t : a.successors(q, l)) {
                auto& s = by_target[t];
                if (!s.empty()) s += ",";
                s += a.alphabet().name(l);
            }
        for (const auto& [t, label] : by_target) out << "  q" << q << " -> q" << t << " [label=\"" << esc(label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace lasso
