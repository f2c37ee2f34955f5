#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

namespace lasso::graph {

using Node = std::uint32_t;
using Label = std::uint32_t;

/// Edge-labelled digraph with node colors and a set of initial nodes.
struct LabeledGraph {
    std::vector<std::vector<std::pair<Node, Label>>> adj;
    std::vector<std::uint32_t> color;
    std::vector<Node> initial;

    explicit LabeledGraph(std::size_t n = 0) : adj(n), color(n, 0) {}
    std::size_t size() const noexcept { return adj.size(); }
};

/// An ultimately periodic path: stem nodes followed by a cycle repeated
/// forever. stem_labels[i] labels the edge leaving stem_nodes[i];
/// cycle_labels[i] labels the edge leaving cycle_nodes[i] (the last one
/// closes the cycle).
struct CycleWitness {
    std::vector<Node> stem_nodes;
    std::vector<Label> stem_labels;
    std::vector<Node> cycle_nodes;
    std::vector<Label> cycle_labels;
};

inline std::vector<bool> reachable(const LabeledGraph& g) {
    std::vector<bool> seen(g.size(), false);
    std::deque<Node> queue;
    for (Node v : g.initial)
        if (!seen[v]) {
            seen[v] = true;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        Node v = queue.front();
        queue.pop_front();
        for (auto [t, l] : g.adj[v])
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
    }
    return seen;
}

/// Tarjan's algorithm, iterative, restricted to nodes with allowed[v].
/// Returns the SCC index of every allowed node (-1 elsewhere) and the number
/// of components.
inline std::pair<std::vector<int>, int> scc(const LabeledGraph& g, const std::vector<bool>& allowed) {
    const std::size_t n = g.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<Node> stack;
    std::vector<std::pair<Node, std::size_t>> call;
    int counter = 0, ncomp = 0;
    for (Node root = 0; root < n; ++root) {
        if (!allowed[root] || index[root] != -1) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < g.adj[v].size()) {
                Node w = g.adj[v][i++].first;
                if (!allowed[w]) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                Node w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            Node done = v;
            call.pop_back();
            if (!call.empty()) {
                Node parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return {comp, ncomp};
}

namespace detail {

/// Shortest path by BFS from `sources` to any node in `targets`, moving only
/// through nodes with allowed[v]. Returns nodes and labels (labels[i] leaves
/// nodes[i]; the last node is the target, with no label).
inline std::optional<std::pair<std::vector<Node>, std::vector<Label>>>
shortest_path(const LabeledGraph& g, const std::vector<Node>& sources, const std::vector<bool>& targets,
              const std::vector<bool>& allowed) {
    const std::size_t n = g.size();
    std::vector<std::int64_t> parent(n, -2);
    std::vector<Label> via(n, 0);
    std::deque<Node> queue;
    for (Node s : sources)
        if (allowed[s] && parent[s] == -2) {
            parent[s] = -1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        Node v = queue.front();
        queue.pop_front();
        if (targets[v]) {
            std::vector<Node> nodes;
            std::vector<Label> labels;
            for (std::int64_t x = v; x != -1; x = parent[x]) nodes.push_back(static_cast<Node>(x));
            std::reverse(nodes.begin(), nodes.end());
            for (std::size_t i = 1; i < nodes.size(); ++i) labels.push_back(via[nodes[i]]);
            return std::make_pair(nodes, labels);
        }
        for (auto [t, l] : g.adj[v])
            if (allowed[t] && parent[t] == -2) {
                parent[t] = v;
                via[t] = l;
                queue.push_back(t);
            }
    }
    return std::nullopt;
}

} // namespace detail

/// Searches for a reachable cycle whose largest color is even.
///
/// For every even color c, from the highest down: within the subgraph of
/// reachable nodes of color <= c, a strongly connected component that holds a
/// node of color c and at least one edge yields an accepting cycle.
///
/// With want_witness, the returned witness has a simple cycle through a
/// color-c node and a shortest stem to it, so stem and cycle together visit
/// pairwise distinct nodes.
inline std::optional<CycleWitness> find_accepting_cycle(const LabeledGraph& g, bool want_witness = true) {
    const auto reach = reachable(g);
    std::vector<std::uint32_t> even_colors;
    for (Node v = 0; v < g.size(); ++v)
        if (reach[v] && g.color[v] % 2 == 0) even_colors.push_back(g.color[v]);
    std::sort(even_colors.begin(), even_colors.end());
    even_colors.erase(std::unique(even_colors.begin(), even_colors.end()), even_colors.end());

    for (auto it = even_colors.rbegin(); it != even_colors.rend(); ++it) {
        const std::uint32_t c = *it;
        std::vector<bool> allowed(g.size());
        for (Node v = 0; v < g.size(); ++v) allowed[v] = reach[v] && g.color[v] <= c;
        auto [comp, ncomp] = scc(g, allowed);
        std::vector<int> comp_size(ncomp, 0);
        std::vector<bool> comp_has_edge(ncomp, false), comp_has_c(ncomp, false);
        for (Node v = 0; v < g.size(); ++v) {
            if (comp[v] < 0) continue;
            ++comp_size[comp[v]];
            if (g.color[v] == c) comp_has_c[comp[v]] = true;
            for (auto [t, l] : g.adj[v])
                if (t == v) comp_has_edge[comp[v]] = true;
        }
        for (Node x = 0; x < g.size(); ++x) {
            if (comp[x] < 0 || g.color[x] != c) continue;
            const int k = comp[x];
            if (comp_size[k] < 2 && !comp_has_edge[k]) continue;
            if (!want_witness) return CycleWitness{};

            // Shortest cycle through x inside its component.
            std::vector<bool> in_comp(g.size(), false);
            for (Node v = 0; v < g.size(); ++v) in_comp[v] = comp[v] == k;
            CycleWitness w;
            bool closed = false;
            for (auto [t, l] : g.adj[x])
                if (t == x) {
                    w.cycle_nodes = {x};
                    w.cycle_labels = {l};
                    closed = true;
                    break;
                }
            if (!closed) {
                std::vector<bool> target(g.size(), false);
                target[x] = true;
                std::optional<std::pair<std::vector<Node>, std::vector<Label>>> best;
                for (auto [t, l] : g.adj[x]) {
                    if (!in_comp[t]) continue;
                    auto p = detail::shortest_path(g, {t}, target, in_comp);
                    if (p && (!best || p->first.size() + 1 < best->first.size())) {
                        std::vector<Node> nodes{x};
                        nodes.insert(nodes.end(), p->first.begin(), p->first.end());
                        std::vector<Label> labels{l};
                        labels.insert(labels.end(), p->second.begin(), p->second.end());
                        best = std::make_pair(nodes, labels);
                    }
                }
                // best->first ends with x again; drop it.
                w.cycle_nodes.assign(best->first.begin(), best->first.end() - 1);
                w.cycle_labels = best->second;
            }

            // Shortest stem to any cycle node, then rotate the cycle.
            std::vector<bool> on_cycle(g.size(), false);
            for (Node v : w.cycle_nodes) on_cycle[v] = true;
            auto stem = detail::shortest_path(g, g.initial, on_cycle, reach);
            const Node entry = stem->first.back();
            auto pos = std::find(w.cycle_nodes.begin(), w.cycle_nodes.end(), entry) - w.cycle_nodes.begin();
            std::rotate(w.cycle_nodes.begin(), w.cycle_nodes.begin() + pos, w.cycle_nodes.end());
            std::rotate(w.cycle_labels.begin(), w.cycle_labels.begin() + pos, w.cycle_labels.end());
            w.stem_nodes.assign(stem->first.begin(), stem->first.end() - 1);
            w.stem_labels = stem->second;
            return w;
        }
    }
    return std::nullopt;
}

} // namespace lasso::graph
