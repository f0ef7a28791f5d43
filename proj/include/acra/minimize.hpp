// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acra/core.hpp"
#include "acra/invariants.hpp"

namespace acra {

/// A register tracked implicitly as rep + offset.
struct Elimination {
    RegId rep = 0;
    Int offset = 0;
    bool operator==(const Elimination&) const = default;
    auto operator<=>(const Elimination& o) const {
        if (rep != o.rep) {
            return rep <=> o.rep;
        }
        return offset.compare(o.offset) <=> 0;
    }
};

struct AbstractState {
    StateId base = 0;
    int disjunct = 0;                         // index into the invariant at base
    std::map<RegId, Elimination> eliminated; // live registers not kept

    bool operator==(const AbstractState&) const = default;
    bool operator<(const AbstractState& o) const {
        if (base != o.base) {
            return base < o.base;
        }
        if (disjunct != o.disjunct) {
            return disjunct < o.disjunct;
        }
        return eliminated < o.eliminated;
    }
};

/// Internal failure of the elimination construction.
class EliminationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Greedy maximal set of live registers pairwise unrelated by the disjunct.
std::vector<RegId> kept_registers(const Dbc& c, const std::set<RegId>& live);

struct EliminationResult {
    Acra machine;
    std::vector<AbstractState> states; // aligned with machine states
};

EliminationResult elimination_construct_detailed(const Acra& acra, const InvariantMap& invs);
Acra elimination_construct(const Acra& acra, const InvariantMap& invs);

struct MinimizeReport {
    int complexity = 0;
    std::optional<Int> bound;           // chosen b; empty when the input was already minimal
    std::vector<int> disjunct_counts;   // per input state
    int abstract_states = 0;
    InvariantMap invariants;
};

/// An inductive invariant inside seed_non_sep(acra, k, b) that holds at the
/// initial configuration, or nothing when the seed admits none. Searches
/// forward over exact offset patterns: live registers split into blocks with
/// fixed differences inside each block, every block spanning less than b.
/// Throws std::length_error past `max_patterns` patterns.
std::optional<InvariantMap> pattern_invariant(const Acra& acra, int k, const Int& b,
                                              std::size_t max_patterns = std::size_t{1} << 21);

/// Distinct configurations in breadth-first order from the initial one.
std::vector<Config> sample_configurations(const Acra& acra, std::size_t limit);

class DeepeningExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Expects a trimmed, live-normalized machine.
Acra minimize_registers(const Acra& acra, int max_bound_exponent = 20, MinimizeReport* report = nullptr);

} // namespace acra
