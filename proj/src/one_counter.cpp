// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <deque>
#include <map>
#include <set>

#include "acra/sepgraph.hpp"

namespace acra {

Int path_weight(const WeightedDigraph& g, const std::vector<int>& path) {
    Int w = 0;
    for (int e : path) {
        w += g.edges[e].weight;
    }
    return w;
}

std::optional<std::vector<int>> nonzero_reach(const WeightedDigraph& g) {
    const int n = g.num_nodes;
    std::vector<std::vector<int>> out(n), in(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        out[g.edges[e].src].push_back(e);
        in[g.edges[e].dst].push_back(e);
    }

    // Co-reachability to the target, remembering the first edge toward it.
    std::vector<int> to_target(n, -1);
    std::vector<char> coreach(n, 0);
    std::deque<int> queue{g.target};
    coreach[g.target] = 1;
    while (!queue.empty()) {
        const int y = queue.front();
        queue.pop_front();
        for (int e : in[y]) {
            const int x = g.edges[e].src;
            if (!coreach[x]) {
                coreach[x] = 1;
                to_target[x] = e;
                queue.push_back(x);
            }
        }
    }
    if (!coreach[g.source]) {
        return std::nullopt;
    }

    // Potentials along a breadth-first tree of the relevant subgraph.
    std::vector<std::optional<Int>> pot(n);
    std::vector<int> parent(n, -1);
    pot[g.source] = Int(0);
    queue.push_back(g.source);
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int e : out[x]) {
            const int y = g.edges[e].dst;
            if (coreach[y] && !pot[y]) {
                pot[y] = *pot[x] + g.edges[e].weight;
                parent[y] = e;
                queue.push_back(y);
            }
        }
    }

    auto tree_path = [&](int x) {
        std::vector<int> p;
        for (; x != g.source; x = g.edges[parent[x]].src) {
            p.push_back(parent[x]);
        }
        return std::vector<int>(p.rbegin(), p.rend());
    };
    auto path_to_target = [&](int y) {
        std::vector<int> p;
        for (; y != g.target; y = g.edges[to_target[y]].dst) {
            p.push_back(to_target[y]);
        }
        return p;
    };

    if (*pot[g.target] != 0) {
        return tree_path(g.target);
    }
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const auto& edge = g.edges[e];
        if (!pot[edge.src] || !pot[edge.dst] || *pot[edge.dst] == *pot[edge.src] + edge.weight) {
            continue;
        }
        // The two candidates differ in weight by the edge's inconsistency, so
        // at least one of them is non-zero.
        const auto tail = path_to_target(edge.dst);
        std::vector<int> via = tree_path(edge.src);
        via.push_back(e);
        via.insert(via.end(), tail.begin(), tail.end());
        std::vector<int> direct = tree_path(edge.dst);
        direct.insert(direct.end(), tail.begin(), tail.end());
        if (path_weight(g, direct) != 0) {
            return direct;
        }
        return via;
    }
    return std::nullopt;
}

bool nonzero_reach_bruteforce(const WeightedDigraph& g, int max_len) {
    std::set<std::pair<int, Int>> frontier{{g.source, Int(0)}};
    for (int len = 0;; ++len) {
        for (const auto& [node, w] : frontier) {
            if (node == g.target && w != 0) {
                return true;
            }
        }
        if (len == max_len) {
            return false;
        }
        std::set<std::pair<int, Int>> next;
        for (const auto& [node, w] : frontier) {
            for (const auto& e : g.edges) {
                if (e.src == node) {
                    next.emplace(e.dst, w + e.weight);
                }
            }
        }
        frontier = std::move(next);
    }
}

} // namespace acra
