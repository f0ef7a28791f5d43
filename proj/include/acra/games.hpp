// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acra/core.hpp"

namespace acra {

enum class Domain { Natural, Integer };

/// Alternating machine: the system picks a symbol, the adversary picks one of
/// the transitions carrying it.
struct AcraGame {
    struct Transition {
        StateId from = 0;
        SymbolId symbol = 0;
        StateId to = 0;
        std::vector<UpdateExpr> updates; // one per register
    };

    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<std::string> registers;
    std::vector<Transition> transitions;
    StateId initial = 0;
    std::vector<std::optional<OutputExpr>> outputs; // per state; set iff accepting
    Domain domain = Domain::Natural;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_symbols() const { return static_cast<int>(alphabet.size()); }
    int num_registers() const { return static_cast<int>(registers.size()); }
    bool accepting(StateId q) const { return outputs[q].has_value(); }

    /// Transition indices grouped by (state, symbol).
    std::vector<std::vector<std::vector<int>>> moves() const;
    /// Largest constant among update and output offsets.
    Int max_constant() const;
};

/// Throws ValidationError on structural problems or on negative offsets in a
/// game over the naturals.
void check_game(const AcraGame& game);

struct ReachGame {
    struct Edge {
        int src = 0;
        SymbolId symbol = 0;
        int dst = 0;
    };
    int num_states = 0;
    int num_symbols = 0;
    std::vector<Edge> edges;
    int initial = 0;
    std::vector<char> accepting;
};

inline constexpr int kStop = -1;
inline constexpr int kNoMove = -2;

struct ReachSolution {
    std::vector<char> winning;
    std::vector<int> strategy; // symbol, kStop at accepting states, kNoMove elsewhere
    std::vector<int> rank;     // round in which the state joined the attractor
};

ReachSolution solve_reach_game(const ReachGame& g);

/// Product with register values clamped to [0, budget + 1].
struct ClampedProduct {
    ReachGame game;
    int budget = 0;
    int num_registers = 0;
    int num_base_states = 0;

    std::int64_t encode(StateId q, const std::vector<int>& clamped) const;
    std::pair<StateId, std::vector<int>> decode(std::int64_t index) const;
};

/// OpenMP-parallel over product states.
ClampedProduct clamped_product(const AcraGame& game, int budget);
/// Serial reference for clamped_product.
ClampedProduct clamped_product_serial(const AcraGame& game, int budget);

struct ClampedStrategy {
    int budget = 0;
    int num_registers = 0;
    std::vector<int> action; // by product index: symbol, kStop or kNoMove

    int lookup(StateId q, const Valuation& exact) const;
};

struct GameSolution {
    bool winning = false;
    ClampedStrategy strategy;
    ClampedProduct product;
    ReachSolution solution;
};

GameSolution solve_game_n(const AcraGame& game, int budget);

/// Least winning budget, or nothing if no budget wins.
std::optional<int> optimal_budget(const AcraGame& game);

struct PlayResult {
    enum class Outcome { Stopped, Timeout };
    Outcome outcome = Outcome::Timeout;
    std::vector<Config> run;
    std::optional<Int> output;
};

/// Picks one transition index out of the candidates for (state, symbol).
using Adversary = std::function<int(const Config&, SymbolId, const std::vector<int>&)>;

PlayResult play_strategy(const AcraGame& game, const ClampedStrategy& strategy, const Adversary& adversary,
                         int max_steps);

/// Minimax value within depth_bound plies; nothing means +infinity.
std::optional<Int> brute_force_game_value(const AcraGame& game, int depth_bound);

} // namespace acra
