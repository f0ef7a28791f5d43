// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acra/core.hpp"
#include "acra/games.hpp"

namespace acra {

/// Complete DFA with a single accepting state.
struct Dfa {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<int> delta; // [state * |alphabet| + symbol]
    int initial = 0;
    int accepting = 0;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_symbols() const { return static_cast<int>(alphabet.size()); }
    int next(int q, int a) const { return delta[static_cast<std::size_t>(q) * alphabet.size() + a]; }
};

void check_dfa(const Dfa& dfa);

/// Separation gadget over a family sharing one alphabet. Symbols: the DFA
/// alphabet, then "#", then "a1".."ak". Registers: u, z, then v<i>_<state>.
Acra separation_gadget(const std::vector<Dfa>& dfas);

/// Shortest word accepted by every DFA, if one exists.
std::optional<std::vector<int>> dfa_intersection_nonempty(const std::vector<Dfa>& dfas);

/// Linearly bounded alternating Turing machine over tape alphabet {0,1}.
/// Heads that would leave the tape stay on the boundary cell.
struct AltTm {
    enum class Kind { Or, And };
    struct Action {
        int next = 0;
        int write = 0;
        int dir = 1; // -1 left, +1 right
    };
    std::vector<std::string> states;
    std::vector<Kind> kinds;
    std::vector<char> accepting;
    int initial = 0;
    int tape_length = 1;
    std::vector<Action> delta; // [(state * 2 + read) * 2 + (move - 1)]

    int num_states() const { return static_cast<int>(states.size()); }
    const Action& action(int q, int read, int move) const {
        return delta[(static_cast<std::size_t>(q) * 2 + read) * 2 + (move - 1)];
    }
    Action& action(int q, int read, int move) { return delta[(static_cast<std::size_t>(q) * 2 + read) * 2 + (move - 1)]; }
    int head_after(int pos, int dir) const;
};

void check_alt_tm(const AltTm& tm);

bool atm_halts(const AltTm& tm);

/// Game over the naturals whose budget-0 winnability matches atm_halts.
AcraGame atm_game_gadget(const AltTm& tm);

struct TwoCounterInstr {
    enum class Op { Inc, Dec, Branch, Halt };
    Op op = Op::Halt;
    int counter = 1;        // 1 or 2
    int if_nonneg = 0;      // branch targets, 1-based
    int if_negative = 0;
};

/// Targets range over 1..n+1; n+1 falls off the end and behaves as halt.
using TwoCounterProgram = std::vector<TwoCounterInstr>;

void check_two_counter(const TwoCounterProgram& prog);

enum class TwoCounterOutcome { Halted, Timeout };

TwoCounterOutcome run_two_counter(const TwoCounterProgram& prog, int max_steps);

/// Game over the integers. States l1..ln (plus an implicit halt location
/// when a target or fall-through needs one), then the four challenge states.
/// Symbols "--", "-+", "+-", "++" claim the signs of (c1, c2); "+" means >= 0.
AcraGame two_counter_gadget(const TwoCounterProgram& prog);

} // namespace acra
