// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "acra/minimize.hpp"

namespace acra {

namespace {

using Offset = std::int64_t;

struct Pattern {
    StateId state = 0;
    std::vector<int> block;     // per register; -1 for dead registers
    std::vector<Offset> offset; // relative to the first register of the block

    bool operator==(const Pattern&) const = default;
};

struct PatternHash {
    std::size_t operator()(const Pattern& p) const {
        std::size_t h = static_cast<std::size_t>(p.state);
        for (int b : p.block) {
            h = h * 1000003 ^ static_cast<std::size_t>(b + 1);
        }
        for (Offset o : p.offset) {
            h = h * 1000003 ^ static_cast<std::size_t>(o);
        }
        return h;
    }
};

int count_blocks(const Pattern& p) { return 1 + *std::max_element(p.block.begin(), p.block.end()); }

// Calls f(labels) for every set partition of n items as a restricted growth string.
template <typename F>
void for_each_partition(int n, F&& f) {
    std::vector<int> labels(n, 0);
    if (n == 0) {
        f(labels);
        return;
    }
    for (;;) {
        f(labels);
        int pos = n - 1;
        for (; pos > 0; --pos) {
            const int prefix_max = *std::max_element(labels.begin(), labels.begin() + pos);
            if (labels[pos] <= prefix_max) {
                break;
            }
        }
        if (pos <= 0) {
            return;
        }
        ++labels[pos];
        std::fill(labels.begin() + pos + 1, labels.end(), 0);
    }
}

class PatternSearch {
  public:
    PatternSearch(const Acra& acra, int k, Offset b, std::size_t max_patterns)
        : acra_(acra), k_(k), b_(b), max_patterns_(max_patterns), live_(acra.num_states()) {
        const auto live = live_registers(acra);
        for (StateId q = 0; q < acra.num_states(); ++q) {
            live_[q].assign(live[q].begin(), live[q].end());
        }
    }

    std::optional<InvariantMap> run() {
        const StateId q0 = acra_.initial();
        std::vector<Pattern> initial;
        const int n0 = static_cast<int>(live_[q0].size());
        for_each_partition(n0, [&](const std::vector<int>& labels) {
            Pattern p{q0, std::vector<int>(acra_.num_registers(), -1), std::vector<Offset>(acra_.num_registers(), 0)};
            for (int i = 0; i < n0; ++i) {
                p.block[live_[q0][i]] = labels[i];
            }
            if (n0 == 0 || allowed_blocks(q0, count_blocks(p))) {
                initial.push_back(std::move(p));
            }
        });
        sort_coarsest_first(initial);
        std::vector<int> roots;
        for (auto& p : initial) {
            roots.push_back(intern(std::move(p)));
        }
        explore();
        prune();

        for (int r : roots) {
            if (alive_[r]) {
                return collect(r);
            }
        }
        return std::nullopt;
    }

  private:
    bool allowed_blocks(StateId q, int blocks) const {
        // The seed constrains only states with at least k live registers.
        return static_cast<int>(live_[q].size()) < k_ || blocks <= k_ - 1;
    }

    static Pattern canonical(StateId q, int nr, const std::vector<RegId>& regs, const std::vector<int>& labels,
                             const std::vector<Offset>& values) {
        Pattern p{q, std::vector<int>(nr, -1), std::vector<Offset>(nr, 0)};
        std::map<int, int> rename;
        std::map<int, Offset> base;
        for (std::size_t i = 0; i < regs.size(); ++i) {
            auto [it, fresh] = rename.emplace(labels[i], static_cast<int>(rename.size()));
            if (fresh) {
                base[labels[i]] = values[i];
            }
            p.block[regs[i]] = it->second;
            p.offset[regs[i]] = values[i] - base[labels[i]];
        }
        return p;
    }

    static void sort_coarsest_first(std::vector<Pattern>& ps) {
        std::stable_sort(ps.begin(), ps.end(), [](const Pattern& x, const Pattern& y) {
            const int bx = count_blocks(x);
            const int by = count_blocks(y);
            if (bx != by) {
                return bx < by;
            }
            return std::tie(x.block, x.offset) < std::tie(y.block, y.offset);
        });
    }

    // Every refinement of the exact image of p under a whose blocks span less
    // than b, coarsest first.
    std::vector<Pattern> successors(const Pattern& p, SymbolId a) const {
        const StateId t = acra_.next(p.state, a);
        const auto& regs = live_[t];
        const int n = static_cast<int>(regs.size());
        std::vector<int> group(n);
        std::vector<Offset> value(n);
        for (int i = 0; i < n; ++i) {
            const UpdateExpr& e = acra_.update(p.state, a, regs[i]);
            group[i] = p.block[e.source];
            if (group[i] < 0) {
                throw std::logic_error("live register copied from a dead one");
            }
            value[i] = p.offset[e.source] + static_cast<Offset>(e.offset);
        }
        std::vector<Pattern> out;
        for_each_partition(n, [&](const std::vector<int>& labels) {
            std::map<int, std::pair<Offset, Offset>> span;
            std::map<int, int> group_of;
            for (int i = 0; i < n; ++i) {
                // A block may not mix registers of different image groups.
                auto [g, fresh] = group_of.emplace(labels[i], group[i]);
                if (!fresh && g->second != group[i]) {
                    return;
                }
                auto [s, first] = span.emplace(labels[i], std::pair{value[i], value[i]});
                if (!first) {
                    s->second.first = std::min(s->second.first, value[i]);
                    s->second.second = std::max(s->second.second, value[i]);
                }
            }
            for (const auto& [label, s] : span) {
                if (s.second - s.first >= b_) {
                    return;
                }
            }
            if (!allowed_blocks(t, static_cast<int>(span.size()))) {
                return;
            }
            out.push_back(canonical(t, acra_.num_registers(), regs, labels, value));
        });
        sort_coarsest_first(out);
        return out;
    }

    int intern(Pattern p) {
        auto [it, fresh] = index_.emplace(std::move(p), static_cast<int>(patterns_.size()));
        if (fresh) {
            if (patterns_.size() >= max_patterns_) {
                throw std::length_error("pattern search exceeded " + std::to_string(max_patterns_) + " patterns");
            }
            patterns_.push_back(it->first);
            edges_.emplace_back();
            queue_.push_back(it->second);
        }
        return it->second;
    }

    void explore() {
        while (!queue_.empty()) {
            const int id = queue_.front();
            queue_.pop_front();
            std::vector<std::vector<int>> out(acra_.num_symbols());
            for (SymbolId a = 0; a < acra_.num_symbols(); ++a) {
                for (auto& s : successors(patterns_[id], a)) {
                    out[a].push_back(intern(std::move(s)));
                }
            }
            edges_[id] = std::move(out);
        }
    }

    // Greatest fixpoint: a pattern survives while every symbol keeps at least
    // one surviving successor.
    void prune() {
        const std::size_t n = patterns_.size();
        const int ns = acra_.num_symbols();
        alive_.assign(n, 1);
        std::vector<int> count(n * ns);
        std::vector<std::vector<std::pair<int, SymbolId>>> rev(n);
        std::deque<int> dead;
        for (std::size_t p = 0; p < n; ++p) {
            for (SymbolId a = 0; a < ns; ++a) {
                count[p * ns + a] = static_cast<int>(edges_[p][a].size());
                for (int s : edges_[p][a]) {
                    rev[s].emplace_back(static_cast<int>(p), a);
                }
                if (count[p * ns + a] == 0 && alive_[p]) {
                    alive_[p] = 0;
                    dead.push_back(static_cast<int>(p));
                }
            }
        }
        while (!dead.empty()) {
            const int s = dead.front();
            dead.pop_front();
            for (const auto& [p, a] : rev[s]) {
                if (alive_[p] && --count[static_cast<std::size_t>(p) * ns + a] == 0) {
                    alive_[p] = 0;
                    dead.push_back(p);
                }
            }
        }
    }

    // Patterns visited from root when always taking the coarsest surviving
    // successor, merged into difference-bound disjuncts.
    InvariantMap collect(int root) const {
        std::vector<char> seen(patterns_.size(), 0);
        std::deque<int> queue{root};
        seen[root] = 1;
        std::map<std::pair<StateId, std::vector<int>>, std::vector<std::vector<Offset>>> points;
        while (!queue.empty()) {
            const int id = queue.front();
            queue.pop_front();
            const Pattern& p = patterns_[id];
            points[{p.state, p.block}].push_back(p.offset);
            for (const auto& succ : edges_[id]) {
                const auto it = std::find_if(succ.begin(), succ.end(), [&](int s) { return alive_[s]; });
                if (!seen[*it]) {
                    seen[*it] = 1;
                    queue.push_back(*it);
                }
            }
        }
        const int nr = acra_.num_registers();
        InvariantMap out(acra_.num_states(), Wfi::bottom());
        for (const auto& [key, pts] : points) {
            const auto& [q, block] = key;
            for (const auto& box : merge_boxes(pts)) {
                Dbc c = Dbc::top(nr);
                std::vector<RegId> leader(nr, -1);
                for (RegId r = 0; r < nr; ++r) {
                    if (block[r] < 0) {
                        continue;
                    }
                    if (leader[block[r]] < 0) {
                        leader[block[r]] = r;
                    } else {
                        c.constrain(r, leader[block[r]], Int(box[r].first - 1), Int(box[r].second + 1));
                    }
                }
                out[q].disjuncts.push_back(*close_form(c));
            }
        }
        for (auto& w : out) {
            w = normalize(w);
        }
        return out;
    }

    // Exact union of integer points as axis-aligned boxes, merging adjacent
    // boxes one coordinate at a time until nothing changes.
    static std::vector<std::vector<std::pair<Offset, Offset>>> merge_boxes(const std::vector<std::vector<Offset>>& pts) {
        using Box = std::vector<std::pair<Offset, Offset>>;
        std::vector<Box> boxes;
        for (const auto& p : pts) {
            Box b;
            for (Offset o : p) {
                b.emplace_back(o, o);
            }
            boxes.push_back(std::move(b));
        }
        std::sort(boxes.begin(), boxes.end());
        boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
        const std::size_t dims = boxes.empty() ? 0 : boxes[0].size();
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t d = 0; d < dims; ++d) {
                std::sort(boxes.begin(), boxes.end(), [d](const Box& x, const Box& y) {
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        if (i != d && x[i] != y[i]) {
                            return x[i] < y[i];
                        }
                    }
                    return x[d] < y[d];
                });
                std::vector<Box> merged;
                for (auto& b : boxes) {
                    if (!merged.empty()) {
                        Box& last = merged.back();
                        bool same = true;
                        for (std::size_t i = 0; i < dims && same; ++i) {
                            same = i == d || last[i] == b[i];
                        }
                        if (same && b[d].first <= last[d].second + 1) {
                            last[d].second = std::max(last[d].second, b[d].second);
                            changed = true;
                            continue;
                        }
                    }
                    merged.push_back(std::move(b));
                }
                boxes = std::move(merged);
            }
        }
        return boxes;
    }

    const Acra& acra_;
    int k_;
    Offset b_;
    std::size_t max_patterns_;
    std::vector<std::vector<RegId>> live_;
    std::vector<Pattern> patterns_;
    std::unordered_map<Pattern, int, PatternHash> index_;
    std::vector<std::vector<std::vector<int>>> edges_;
    std::deque<int> queue_;
    std::vector<char> alive_;
};

} // namespace

std::optional<InvariantMap> pattern_invariant(const Acra& acra, int k, const Int& b, std::size_t max_patterns) {
    if (k < 2) {
        throw std::invalid_argument("pattern_invariant requires k >= 2");
    }
    if (b < 1 || b > (Int(1) << 40)) {
        throw std::invalid_argument("pattern_invariant requires 1 <= b <= 2^40");
    }
    return PatternSearch(acra, k, static_cast<Offset>(b), max_patterns).run();
}

} // namespace acra
