// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/invariants.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace acra {

namespace {

// Strict bounds compose as x-y < a, y-z < b  =>  x-z <= a+b-2  =>  x-z < a+b-1.
Int compose_strict(const Int& a, const Int& b) { return a + b - 1; }

void tighten(std::optional<Int>& slot, const Int& value) {
    if (!slot || value < *slot) {
        slot = value;
    }
}

// Floyd-Warshall on the strict upper-bound matrix. Works for one-sided
// constraints too, which entails() relies on.
bool close_in_place(Dbc& c) {
    const int n = c.size();
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!c.upper(i, k)) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                if (c.upper(k, j)) {
                    tighten(c.upper(i, j), compose_strict(*c.upper(i, k), *c.upper(k, j)));
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (*c.upper(i, i) <= 0) {
            return false;
        }
    }
    return true;
}

// Keeps the weakest members: drops any item implying a different kept item.
// Exact duplicates keep their first occurrence.
template <typename Item, typename GetDbc>
std::vector<Item> antichain(std::vector<Item> items, GetDbc get) {
    std::vector<char> keep(items.size(), 1);
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = 0; j < items.size() && keep[i]; ++j) {
            if (i == j) {
                continue;
            }
            const Dbc& ci = get(items[i]);
            const Dbc& cj = get(items[j]);
            keep[i] = ci == cj ? j > i : !implies(ci, cj);
        }
    }
    std::vector<Item> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (keep[i]) {
            out.push_back(std::move(items[i]));
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const Item& x, const Item& y) { return get(x) < get(y); });
    return out;
}

Dbc conjoin_dbc(const Dbc& a, const Dbc& b) {
    Dbc c = a;
    for (int u = 0; u < a.size(); ++u) {
        for (int v = 0; v < a.size(); ++v) {
            if (b.upper(u, v)) {
                tighten(c.upper(u, v), *b.upper(u, v));
            }
        }
    }
    return c;
}

bool entails_from(const Dbc& c, const std::vector<Dbc>& d, std::size_t i) {
    if (i == d.size()) {
        return false;
    }
    if (implies(c, d[i])) {
        return true;
    }
    // c /\ not d[i] splits into one branch per violated atom of d[i].
    const int n = c.size();
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v || !d[i].upper(u, v)) {
                continue;
            }
            // Violating x_u - x_v < h means x_v - x_u < 1 - h.
            Dbc branch = c;
            tighten(branch.upper(v, u), 1 - *d[i].upper(u, v));
            if (close_in_place(branch) && !entails_from(branch, d, i + 1)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

Dbc Dbc::top(int n) {
    Dbc c;
    c.n_ = n;
    c.hi_.assign(static_cast<std::size_t>(n) * n, std::nullopt);
    for (int i = 0; i < n; ++i) {
        c.hi_[c.idx(i, i)] = Int(1);
    }
    return c;
}

Bound Dbc::bound(RegId u, RegId v) const {
    Bound b;
    b.hi = hi_[idx(u, v)];
    if (const auto& rev = hi_[idx(v, u)]) {
        b.lo = -*rev;
    }
    return b;
}

Dbc& Dbc::constrain(RegId u, RegId v, const Int& lo, const Int& hi) {
    tighten(hi_[idx(u, v)], hi);
    tighten(hi_[idx(v, u)], -lo);
    return *this;
}

bool Dbc::satisfied_by(const Valuation& val) const {
    for (int u = 0; u < n_; ++u) {
        for (int v = 0; v < n_; ++v) {
            if (u != v && hi_[idx(u, v)] && !(val[u] - val[v] < *hi_[idx(u, v)])) {
                return false;
            }
        }
    }
    return true;
}

bool Dbc::operator<(const Dbc& other) const {
    if (n_ != other.n_) {
        return n_ < other.n_;
    }
    for (std::size_t i = 0; i < hi_.size(); ++i) {
        const auto& a = hi_[i];
        const auto& b = other.hi_[i];
        if (a.has_value() != b.has_value()) {
            return a.has_value(); // finite sorts before infinite
        }
        if (a && *a != *b) {
            return *a < *b;
        }
    }
    return false;
}

std::optional<Dbc> close_form(const Dbc& c) {
    Dbc out = c;
    if (!close_in_place(out)) {
        return std::nullopt;
    }
    for (int i = 0; i < out.size(); ++i) {
        out.upper(i, i) = Int(1);
    }
    return out;
}

bool implies(const Dbc& c, const Dbc& d) {
    for (int u = 0; u < c.size(); ++u) {
        for (int v = 0; v < c.size(); ++v) {
            if (u == v || !d.upper(u, v)) {
                continue;
            }
            if (!c.upper(u, v) || *c.upper(u, v) > *d.upper(u, v)) {
                return false;
            }
        }
    }
    return true;
}

StrengthCategory strictly_stronger(const Dbc& c, const Dbc& d) {
    if (!implies(c, d)) {
        throw std::invalid_argument("strictly_stronger requires implies(c, d)");
    }
    if (implies(d, c)) {
        return StrengthCategory::None;
    }
    for (int u = 0; u < c.size(); ++u) {
        for (int v = 0; v < c.size(); ++v) {
            if (c.related(u, v) && !d.related(u, v)) {
                return StrengthCategory::RelationGrew;
            }
        }
    }
    return StrengthCategory::IntervalShrank;
}

Wfi normalize(const Wfi& d) {
    std::vector<Dbc> closed;
    for (const Dbc& c : d.disjuncts) {
        if (auto cc = close_form(c)) {
            closed.push_back(std::move(*cc));
        }
    }
    return Wfi{antichain(std::move(closed), [](const Dbc& c) -> const Dbc& { return c; })};
}

Wfi conjoin(const Wfi& d1, const Wfi& d2) {
    Wfi out;
    for (const Dbc& a : d1.disjuncts) {
        for (const Dbc& b : d2.disjuncts) {
            out.disjuncts.push_back(conjoin_dbc(a, b));
        }
    }
    return normalize(out);
}

bool satisfies(const Valuation& val, const Wfi& d) {
    return std::any_of(d.disjuncts.begin(), d.disjuncts.end(), [&](const Dbc& c) { return c.satisfied_by(val); });
}

bool entails(const Dbc& c, const Wfi& d) {
    const auto closed = close_form(c);
    if (!closed) {
        return true;
    }
    return entails_from(*closed, d.disjuncts, 0);
}

Wfi weakest_precondition(const Wfi& d, const Acra& acra, StateId q, SymbolId a) {
    const int n = acra.num_registers();
    Wfi out;
    for (const Dbc& c : d.disjuncts) {
        Dbc pre = Dbc::top(n);
        bool feasible = true;
        for (int u = 0; u < n && feasible; ++u) {
            for (int v = u + 1; v < n && feasible; ++v) {
                const Bound b = c.bound(u, v);
                if (b.trivial()) {
                    continue;
                }
                const UpdateExpr& eu = acra.update(q, a, u);
                const UpdateExpr& ev = acra.update(q, a, v);
                const Int shift = ev.offset - eu.offset;
                const Int lo = *b.lo + shift;
                const Int hi = *b.hi + shift;
                if (eu.source == ev.source) {
                    // Ground fact lo < 0 < hi: drop the term or the disjunct.
                    feasible = lo < 0 && 0 < hi;
                } else {
                    pre.constrain(eu.source, ev.source, lo, hi);
                }
            }
        }
        if (feasible) {
            out.disjuncts.push_back(std::move(pre));
        }
    }
    return normalize(out);
}

SaturationResult saturate_with_trees(const Acra& acra, const InvariantMap& seed) {
    const int nq = acra.num_states();
    const int ns = acra.num_symbols();
    const int nr = acra.num_registers();
    using Entry = std::pair<Dbc, int>; // constraint, tree node
    SaturationResult result;
    result.trees.resize(nq);
    std::vector<std::vector<Entry>> current(nq);
    for (StateId q = 0; q < nq; ++q) {
        const Dbc root = Dbc::top(nr);
        result.trees[q].push_back(TreeNode{root, -1, 0});
        for (const Dbc& c : normalize(seed.at(q)).disjuncts) {
            if (c == root) {
                current[q].emplace_back(c, 0);
            } else {
                result.trees[q].push_back(TreeNode{c, 0, 1});
                current[q].emplace_back(c, static_cast<int>(result.trees[q].size()) - 1);
            }
        }
    }

    std::vector<std::vector<std::pair<StateId, SymbolId>>> preds(nq);
    std::deque<std::pair<StateId, SymbolId>> work;
    std::vector<char> queued(static_cast<std::size_t>(nq) * ns, 1);
    for (StateId q = 0; q < nq; ++q) {
        for (SymbolId a = 0; a < ns; ++a) {
            preds[acra.next(q, a)].emplace_back(q, a);
            work.emplace_back(q, a);
        }
    }

    while (!work.empty()) {
        const auto [q, a] = work.front();
        work.pop_front();
        queued[static_cast<std::size_t>(q) * ns + a] = 0;
        Wfi target;
        for (const auto& e : current[acra.next(q, a)]) {
            target.disjuncts.push_back(e.first);
        }
        const Wfi pre = weakest_precondition(target, acra, q, a);

        bool changed = false;
        std::vector<Entry> next;
        for (const auto& [c, node] : current[q]) {
            const bool implied = std::any_of(pre.disjuncts.begin(), pre.disjuncts.end(),
                                             [&](const Dbc& p) { return implies(c, p); });
            if (implied) {
                next.emplace_back(c, node);
                continue;
            }
            changed = true;
            for (const Dbc& p : pre.disjuncts) {
                if (auto child = close_form(conjoin_dbc(c, p))) {
                    auto& tree = result.trees[q];
                    tree.push_back(TreeNode{*child, node, tree[node].depth + 1});
                    next.emplace_back(std::move(*child), static_cast<int>(tree.size()) - 1);
                }
            }
        }
        if (!changed) {
            continue;
        }
        current[q] = antichain(std::move(next), [](const Entry& e) -> const Dbc& { return e.first; });
        for (const auto& [p, b] : preds[q]) {
            auto& flag = queued[static_cast<std::size_t>(p) * ns + b];
            if (!flag) {
                flag = 1;
                work.emplace_back(p, b);
            }
        }
    }

    result.invariants.resize(nq);
    for (StateId q = 0; q < nq; ++q) {
        for (const auto& e : current[q]) {
            result.invariants[q].disjuncts.push_back(e.first);
        }
    }
    return result;
}

InvariantMap saturate(const Acra& acra, const InvariantMap& seed) { return saturate_with_trees(acra, seed).invariants; }

std::optional<InductivenessViolation> check_inductive(const Acra& acra, const InvariantMap& invs) {
    for (StateId q = 0; q < acra.num_states(); ++q) {
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const Wfi pre = weakest_precondition(invs.at(acra.next(q, a)), acra, q, a);
            for (const Dbc& c : invs.at(q).disjuncts) {
                if (!entails(c, pre)) {
                    return InductivenessViolation{q, a, c};
                }
            }
        }
    }
    return std::nullopt;
}

InvariantMap seed_non_sep(const Acra& acra, int k, const Int& b) {
    if (k < 2) {
        throw std::invalid_argument("seed_non_sep requires k >= 2");
    }
    if (b < 1) {
        throw std::invalid_argument("seed_non_sep requires b >= 1");
    }
    const int nr = acra.num_registers();
    const auto live = live_registers(acra);
    InvariantMap out(acra.num_states());
    for (StateId q = 0; q < acra.num_states(); ++q) {
        const std::vector<RegId> regs(live[q].begin(), live[q].end());
        if (static_cast<int>(regs.size()) < k) {
            out[q] = Wfi::top(nr);
            continue;
        }
        // Restricted growth strings enumerate set partitions exactly once.
        const int blocks = k - 1;
        std::vector<int> block(regs.size(), 0);
        Wfi d;
        for (;;) {
            Dbc c = Dbc::top(nr);
            for (std::size_t i = 0; i < regs.size(); ++i) {
                for (std::size_t j = i + 1; j < regs.size(); ++j) {
                    if (block[i] == block[j]) {
                        c.constrain(regs[i], regs[j], -b, b);
                    }
                }
            }
            d.disjuncts.push_back(std::move(c));
            // Advance to the next restricted growth string with max < blocks.
            int pos = static_cast<int>(regs.size()) - 1;
            for (; pos > 0; --pos) {
                const int prefix_max = *std::max_element(block.begin(), block.begin() + pos);
                if (block[pos] <= prefix_max && block[pos] + 1 < blocks) {
                    break;
                }
            }
            if (pos <= 0) {
                break;
            }
            ++block[pos];
            std::fill(block.begin() + pos + 1, block.end(), 0);
        }
        out[q] = normalize(d);
    }
    return out;
}

} // namespace acra
