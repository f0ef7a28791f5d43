// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "acra/games.hpp"

namespace acra {

namespace {

constexpr std::int64_t kMaxProductStates = 50'000'000;

ClampedProduct empty_product(const AcraGame& game, int budget) {
    if (game.domain != Domain::Natural) {
        throw std::invalid_argument("games over the integers are undecidable; only the naturals are solved");
    }
    if (budget < 0) {
        throw std::invalid_argument("budget must be non-negative");
    }
    ClampedProduct p;
    p.budget = budget;
    p.num_registers = game.num_registers();
    p.num_base_states = game.num_states();
    std::int64_t count = game.num_states();
    for (int r = 0; r < game.num_registers(); ++r) {
        count *= budget + 2;
        if (count > kMaxProductStates) {
            throw std::invalid_argument("clamped product too large");
        }
    }
    p.game.num_states = static_cast<int>(count);
    p.game.num_symbols = game.num_symbols();
    p.game.initial = static_cast<int>(p.encode(game.initial, std::vector<int>(game.num_registers(), 0)));
    p.game.accepting.assign(static_cast<std::size_t>(count), 0);
    return p;
}

int clamp_add(int value, const Int& offset, int budget) {
    const Int v = offset + value;
    return v > budget ? budget + 1 : static_cast<int>(v);
}

// Accepting flag and outgoing edges of one product state.
void expand(const AcraGame& game, const std::vector<std::vector<int>>& by_state, const ClampedProduct& p,
            std::int64_t x, char& accepting, std::vector<ReachGame::Edge>& out) {
    const auto [q, vals] = p.decode(x);
    if (const auto& o = game.outputs[q]) {
        accepting = clamp_add(vals[o->source], o->offset, p.budget) <= p.budget;
    }
    std::vector<int> next(vals.size());
    for (int ti : by_state[q]) {
        const auto& t = game.transitions[ti];
        for (std::size_t r = 0; r < vals.size(); ++r) {
            next[r] = clamp_add(vals[t.updates[r].source], t.updates[r].offset, p.budget);
        }
        out.push_back(ReachGame::Edge{static_cast<int>(x), t.symbol, static_cast<int>(p.encode(t.to, next))});
    }
}

std::vector<std::vector<int>> transitions_by_state(const AcraGame& game) {
    std::vector<std::vector<int>> by_state(game.num_states());
    for (int i = 0; i < static_cast<int>(game.transitions.size()); ++i) {
        by_state[game.transitions[i].from].push_back(i);
    }
    return by_state;
}

} // namespace

ClampedProduct clamped_product_serial(const AcraGame& game, int budget) {
    ClampedProduct p = empty_product(game, budget);
    const auto by_state = transitions_by_state(game);
    for (std::int64_t x = 0; x < p.game.num_states; ++x) {
        expand(game, by_state, p, x, p.game.accepting[x], p.game.edges);
    }
    return p;
}

ClampedProduct clamped_product(const AcraGame& game, int budget) {
    ClampedProduct p = empty_product(game, budget);
    const auto by_state = transitions_by_state(game);
    const std::int64_t n = p.game.num_states;
    std::vector<std::vector<ReachGame::Edge>> local(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < n; ++x) {
        expand(game, by_state, p, x, p.game.accepting[x], local[x]);
    }
    // Concatenate in state order so the result matches the serial build.
    for (auto& edges : local) {
        p.game.edges.insert(p.game.edges.end(), edges.begin(), edges.end());
    }
    return p;
}

} // namespace acra
