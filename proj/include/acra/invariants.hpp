// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acra/core.hpp"

namespace acra {

/// Strict interval lo < x < hi over the integers. Either both ends are finite
/// or both are infinite (the trivial bound).
struct Bound {
    std::optional<Int> lo;
    std::optional<Int> hi;

    bool trivial() const { return !lo && !hi; }
    bool contains(const Int& x) const { return (!lo || *lo < x) && (!hi || x < *hi); }
    bool operator==(const Bound&) const = default;
};

/// Conjunction of strict difference bounds lo < x_u - x_v < hi. Stored as a
/// matrix of strict upper bounds: hi(u,v) bounds x_u - x_v from above and
/// lo(u,v) = -hi(v,u). Instances returned by the public API are closed.
class Dbc {
  public:
    Dbc() = default;
    /// The trivial constraint over n registers.
    static Dbc top(int n);

    int size() const { return n_; }
    Bound bound(RegId u, RegId v) const;
    bool related(RegId u, RegId v) const { return u == v || hi_[idx(u, v)].has_value(); }

    /// Intersects the bound on (u,v) with lo < x_u - x_v < hi; the result is
    /// not closed until close_form runs.
    Dbc& constrain(RegId u, RegId v, const Int& lo, const Int& hi);

    bool satisfied_by(const Valuation& val) const;

    /// Total order used to keep disjunctions canonical.
    bool operator<(const Dbc& other) const;
    bool operator==(const Dbc&) const = default;

    /// Raw strict upper bound on x_u - x_v (nullopt = +inf).
    const std::optional<Int>& upper(RegId u, RegId v) const { return hi_[idx(u, v)]; }
    std::optional<Int>& upper(RegId u, RegId v) { return hi_[idx(u, v)]; }

  private:
    std::size_t idx(RegId u, RegId v) const { return static_cast<std::size_t>(u) * n_ + v; }

    int n_ = 0;
    std::vector<std::optional<Int>> hi_;
};

/// Tightest closed form, or nothing when unsatisfiable over the integers.
std::optional<Dbc> close_form(const Dbc& c);

bool implies(const Dbc& c, const Dbc& d);

enum class StrengthCategory { None, RelationGrew, IntervalShrank };

/// Requires implies(c, d). Classifies why c is strictly stronger than d.
StrengthCategory strictly_stronger(const Dbc& c, const Dbc& d);

/// Finite disjunction of closed satisfiable DBCs; empty means false.
struct Wfi {
    std::vector<Dbc> disjuncts;

    static Wfi top(int n) { return Wfi{{Dbc::top(n)}}; }
    static Wfi bottom() { return Wfi{}; }
    bool is_false() const { return disjuncts.empty(); }
    bool operator==(const Wfi&) const = default;
};

/// Closes every disjunct, drops unsatisfiable ones and ones implying another,
/// and sorts canonically.
Wfi normalize(const Wfi& d);

Wfi conjoin(const Wfi& d1, const Wfi& d2);

bool satisfies(const Valuation& val, const Wfi& d);

/// Complete test of c => d_1 \/ ... \/ d_m over integer valuations.
bool entails(const Dbc& c, const Wfi& d);

using InvariantMap = std::vector<Wfi>; // indexed by state

/// Pulls the invariant at next(q,a) back over the transition (q,a).
Wfi weakest_precondition(const Wfi& d, const Acra& acra, StateId q, SymbolId a);

/// One node of a per-state strengthening tree.
struct TreeNode {
    Dbc constraint;
    int parent = -1; // -1 for the root
    int depth = 0;
};

struct SaturationResult {
    InvariantMap invariants;
    std::vector<std::vector<TreeNode>> trees; // indexed by state
};

SaturationResult saturate_with_trees(const Acra& acra, const InvariantMap& seed);
InvariantMap saturate(const Acra& acra, const InvariantMap& seed);


struct InductivenessViolation {
    StateId state = 0;
    SymbolId symbol = 0;
    Dbc disjunct;
};

/// Nothing when inductive; otherwise the first violation in canonical order.
std::optional<InductivenessViolation> check_inductive(const Acra& acra, const InvariantMap& invs);

/// At each state, the disjunction over partitions of the live registers into
/// at most k-1 blocks, each block pairwise bounded by -b < u - v < b.
InvariantMap seed_non_sep(const Acra& acra, int k, const Int& b);

} // namespace acra
