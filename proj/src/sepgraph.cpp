// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/sepgraph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <stdexcept>

namespace acra {

namespace {

constexpr int kMaxRegisters = 64;

std::uint64_t reg_bit(RegId r) { return std::uint64_t{1} << r; }

// States p with q ->* p ->* q.
std::vector<char> cycle_component(const Acra& acra, StateId q) {
    const int n = acra.num_states();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::deque<StateId> queue{q};
    fwd[q] = 1;
    while (!queue.empty()) {
        const StateId p = queue.front();
        queue.pop_front();
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId t = acra.next(p, a);
            if (!fwd[t]) {
                fwd[t] = 1;
                queue.push_back(t);
            }
        }
    }
    bwd[q] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (StateId p = 0; p < n; ++p) {
            if (bwd[p]) {
                continue;
            }
            for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
                if (bwd[acra.next(p, a)]) {
                    bwd[p] = 1;
                    grew = true;
                    break;
                }
            }
        }
    }
    std::vector<char> scc(n, 0);
    for (StateId p = 0; p < n; ++p) {
        scc[p] = fwd[p] && bwd[p];
    }
    return scc;
}

std::vector<std::vector<RegId>> readers(const Acra& acra, StateId p, SymbolId a) {
    std::vector<std::vector<RegId>> out(acra.num_registers());
    for (RegId r = 0; r < acra.num_registers(); ++r) {
        out[acra.update(p, a, r).source].push_back(r);
    }
    return out;
}

// Builds the thread automaton from (q, id, u, v) over the component of q.
// With `track_map` false, the source map is dropped (a sound projection).
struct AutomatonBuild {
    WeightedDigraph graph;
    std::vector<SeparationCycleAutomaton::NodeInfo> nodes;
};

AutomatonBuild explore_threads(const Acra& acra, const std::vector<char>& scc, StateId q, RegId u, RegId v,
                               bool track_map) {
    using Key = std::tuple<StateId, std::vector<RegId>, RegId, RegId>;
    AutomatonBuild b;
    std::map<Key, int> index;
    std::vector<RegId> id(acra.num_registers());
    for (RegId r = 0; r < acra.num_registers(); ++r) {
        id[r] = r;
    }
    auto intern = [&](SeparationCycleAutomaton::NodeInfo info) {
        Key key{info.state, info.source_map, info.thread_a, info.thread_b};
        auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(b.nodes.size()));
        if (fresh) {
            b.nodes.push_back(std::move(info));
        }
        return std::pair{it->second, fresh};
    };
    intern({q, track_map ? id : std::vector<RegId>{}, u, v});
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        const auto node = b.nodes[x];
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId t = acra.next(node.state, a);
            if (!scc[t]) {
                continue;
            }
            std::vector<RegId> map;
            if (track_map) {
                map.resize(acra.num_registers());
                for (RegId r = 0; r < acra.num_registers(); ++r) {
                    map[r] = node.source_map[acra.update(node.state, a, r).source];
                }
            }
            const auto rd = readers(acra, node.state, a);
            for (RegId ta : rd[node.thread_a]) {
                for (RegId tb : rd[node.thread_b]) {
                    const auto [y, fresh] = intern({t, map, ta, tb});
                    if (fresh) {
                        queue.push_back(y);
                    }
                    const Int w = acra.update(node.state, a, ta).offset - acra.update(node.state, a, tb).offset;
                    b.graph.edges.push_back({x, y, w, a});
                }
            }
        }
    }
    b.graph.num_nodes = static_cast<int>(b.nodes.size());
    b.graph.source = 0;
    return b;
}

// Adds the sink and copies every edge entering an accepted node into it.
template <typename Accept>
WeightedDigraph with_sink(const WeightedDigraph& g, Accept accept) {
    WeightedDigraph out = g;
    const int sink = g.num_nodes;
    out.num_nodes = g.num_nodes + 1;
    out.target = sink;
    for (const auto& e : g.edges) {
        if (accept(e.dst)) {
            out.edges.push_back({e.src, sink, e.weight, e.label});
        }
    }
    return out;
}

Word labels(const WeightedDigraph& g, const std::vector<int>& path) {
    Word w;
    for (int e : path) {
        w.push_back(g.edges[e].label);
    }
    return w;
}

bool fixes(const std::vector<RegId>& map, std::uint64_t field) {
    for (RegId r = 0; r < static_cast<RegId>(map.size()); ++r) {
        if ((field & reg_bit(r)) && map[r] != r) {
            return false;
        }
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------

SeparationRelation::SeparationRelation(int num_registers)
    : n_(num_registers), bits_((static_cast<std::size_t>(num_registers) * num_registers + 63) / 64, 0) {}

std::size_t SeparationRelation::bit(RegId u, RegId v) const {
    if (u > v) {
        std::swap(u, v);
    }
    return static_cast<std::size_t>(u) * n_ + v;
}

bool SeparationRelation::contains(RegId u, RegId v) const {
    if (u == v) {
        return false;
    }
    const std::size_t b = bit(u, v);
    return (bits_[b / 64] >> (b % 64)) & 1U;
}

void SeparationRelation::insert(RegId u, RegId v) {
    if (u == v) {
        throw std::invalid_argument("separation relation is irreflexive");
    }
    const std::size_t b = bit(u, v);
    bits_[b / 64] |= std::uint64_t{1} << (b % 64);
}

bool SeparationRelation::empty() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t SeparationRelation::size() const {
    std::size_t s = 0;
    for (std::uint64_t w : bits_) {
        s += static_cast<std::size_t>(std::popcount(w));
    }
    return s;
}

bool SeparationRelation::subset_of(const SeparationRelation& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] & ~other.bits_[i]) {
            return false;
        }
    }
    return true;
}

std::uint64_t SeparationRelation::field() const {
    std::uint64_t f = 0;
    for (const auto& [u, v] : pairs()) {
        f |= reg_bit(u) | reg_bit(v);
    }
    return f;
}

SeparationRelation SeparationRelation::restrict_to(std::uint64_t regs) const {
    SeparationRelation out(n_);
    for (const auto& [u, v] : pairs()) {
        if ((regs & reg_bit(u)) && (regs & reg_bit(v))) {
            out.insert(u, v);
        }
    }
    return out;
}

std::vector<std::pair<RegId, RegId>> SeparationRelation::pairs() const {
    std::vector<std::pair<RegId, RegId>> out;
    for (RegId u = 0; u < n_; ++u) {
        for (RegId v = u + 1; v < n_; ++v) {
            if (contains(u, v)) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

std::size_t SeparationRelation::hash() const {
    std::size_t h = static_cast<std::size_t>(n_);
    for (std::uint64_t w : bits_) {
        h = h * 0x100000001b3ULL ^ static_cast<std::size_t>(w);
    }
    return h;
}

SepNode renaming_successor(const Acra& acra, const SepNode& node, SymbolId a) {
    const int n = acra.num_registers();
    SepNode out;
    out.state = acra.next(node.state, a);
    out.relation = SeparationRelation(n);
    out.parent = node.parent;
    out.steps = node.steps;
    out.steps.push_back(SepStep{SepStep::Kind::Renaming, Word{a}, {}});
    for (RegId u = 0; u < n; ++u) {
        for (RegId v = u + 1; v < n; ++v) {
            const RegId su = acra.update(node.state, a, u).source;
            const RegId sv = acra.update(node.state, a, v).source;
            if (node.relation.contains(su, sv)) {
                out.relation.insert(u, v);
            }
        }
    }
    return out;
}

SeparationCycleAutomaton build_separation_cycle_automaton(const Acra& acra, StateId q, const SeparationRelation& rel,
                                                          std::pair<RegId, RegId> pair) {
    auto built = explore_threads(acra, cycle_component(acra, q), q, pair.first, pair.second, true);
    const std::uint64_t field = rel.field();
    SeparationCycleAutomaton out;
    out.graph = with_sink(built.graph, [&](int x) {
        const auto& n = built.nodes[x];
        return n.state == q && n.thread_a == pair.first && n.thread_b == pair.second && fixes(n.source_map, field);
    });
    out.nodes = std::move(built.nodes);
    return out;
}

// ---------------------------------------------------------------------------

SeparationOracle::SeparationOracle(const Acra& acra) : acra_(acra), scc_(acra.num_states()) {
    if (acra.num_registers() > kMaxRegisters) {
        throw std::invalid_argument("separation analysis supports at most 64 registers");
    }
}

bool SeparationOracle::prefilter(StateId q, RegId u, RegId v) {
    const auto key = std::tuple{q, u, v};
    if (auto it = prefilter_.find(key); it != prefilter_.end()) {
        return it->second;
    }
    if (scc_[q].empty()) {
        scc_[q] = cycle_component(acra_, q);
    }
    const auto built = explore_threads(acra_, scc_[q], q, u, v, false);
    const auto g = with_sink(built.graph, [&](int x) {
        const auto& n = built.nodes[x];
        return n.state == q && n.thread_a == u && n.thread_b == v;
    });
    const bool ok = nonzero_reach(g).has_value();
    prefilter_.emplace(key, ok);
    return ok;
}

const SeparationOracle::Explored& SeparationOracle::explored(StateId q, RegId u, RegId v) {
    const auto key = std::tuple{q, u, v};
    auto& slot = explored_[key];
    if (!slot) {
        if (scc_[q].empty()) {
            scc_[q] = cycle_component(acra_, q);
        }
        auto built = explore_threads(acra_, scc_[q], q, u, v, true);
        slot = std::make_unique<Explored>(Explored{std::move(built.graph), std::move(built.nodes)});
    }
    return *slot;
}

std::optional<Word> SeparationOracle::query(const Explored& e, StateId q, std::uint64_t field, RegId u,
                                            RegId v) const {
    const auto g = with_sink(e.graph, [&](int x) {
        const auto& n = e.nodes[x];
        return n.state == q && n.thread_a == u && n.thread_b == v && fixes(n.source_map, field);
    });
    if (auto path = nonzero_reach(g)) {
        return labels(g, *path);
    }
    return std::nullopt;
}

std::optional<Word> SeparationOracle::separating_cycle(StateId q, std::uint64_t field, RegId u, RegId v) {
    if (u > v) {
        std::swap(u, v);
    }
    const auto key = std::tuple{q, field, u, v};
    if (auto it = answers_.find(key); it != answers_.end()) {
        return it->second;
    }
    std::optional<Word> answer;
    if (prefilter(q, u, v)) {
        answer = query(explored(q, u, v), q, field, u, v);
    }
    answers_.emplace(key, answer);
    return answer;
}

std::vector<std::pair<std::uint64_t, Word>> SeparationOracle::maximal_fields(StateId q, std::uint64_t field, RegId u,
                                                                             RegId v) {
    if (u > v) {
        std::swap(u, v);
    }
    std::vector<std::pair<std::uint64_t, Word>> found;
    if (!prefilter(q, u, v)) {
        return found;
    }
    // A maximal working subset is field & Fix(f) for the source map f at the
    // end of its witness cycle, so only those candidates need checking.
    const Explored& e = explored(q, u, v);
    std::vector<char> entered(e.nodes.size(), 0);
    for (const auto& edge : e.graph.edges) {
        entered[edge.dst] = 1;
    }
    std::set<std::uint64_t> candidates;
    for (std::size_t x = 0; x < e.nodes.size(); ++x) {
        const auto& n = e.nodes[x];
        if (!entered[x] || n.state != q || n.thread_a != u || n.thread_b != v) {
            continue;
        }
        std::uint64_t fixed = 0;
        for (RegId r = 0; r < static_cast<RegId>(n.source_map.size()); ++r) {
            if (n.source_map[r] == r) {
                fixed |= reg_bit(r);
            }
        }
        candidates.insert(field & fixed);
    }
    std::vector<std::uint64_t> ordered(candidates.begin(), candidates.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) > std::popcount(b); });
    for (std::uint64_t s : ordered) {
        const bool covered = std::any_of(found.begin(), found.end(), [&](const auto& f) { return (s & ~f.first) == 0; });
        if (covered) {
            continue;
        }
        if (auto cycle = separating_cycle(q, s, u, v)) {
            found.emplace_back(s, std::move(*cycle));
        }
    }
    return found;
}

std::optional<Word> separation_edge_exists(const Acra& acra, StateId q, const SeparationRelation& rel,
                                           std::pair<RegId, RegId> pair) {
    SeparationOracle oracle(acra);
    return oracle.separating_cycle(q, rel.field(), pair.first, pair.second);
}

// ---------------------------------------------------------------------------

bool SeparationGraph::contains(StateId q, const SeparationRelation& rel) const {
    return std::any_of(nodes.begin(), nodes.end(),
                       [&](const SepNode& n) { return n.state == q && rel.subset_of(n.relation); });
}

std::vector<SepStep> SeparationGraph::path_to(int node) const {
    std::vector<int> chain;
    for (int x = node; x >= 0; x = nodes[x].parent) {
        chain.push_back(x);
    }
    std::vector<SepStep> steps;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        steps.insert(steps.end(), nodes[*it].steps.begin(), nodes[*it].steps.end());
    }
    return steps;
}

Word SeparationGraph::witness(int node) const {
    Word w;
    for (const auto& s : path_to(node)) {
        w.insert(w.end(), s.word.begin(), s.word.end());
    }
    return w;
}

std::vector<RegId> max_clique(const SeparationRelation& rel, const std::vector<RegId>& regs) {
    std::vector<RegId> best, current;
    // Plain branch and bound; register sets are small.
    auto extend = [&](auto&& self, std::size_t from) -> void {
        if (current.size() > best.size()) {
            best = current;
        }
        for (std::size_t i = from; i < regs.size(); ++i) {
            if (current.size() + (regs.size() - i) <= best.size()) {
                return;
            }
            const bool ok = std::all_of(current.begin(), current.end(),
                                        [&](RegId c) { return rel.contains(c, regs[i]); });
            if (ok) {
                current.push_back(regs[i]);
                self(self, i + 1);
                current.pop_back();
            }
        }
    };
    extend(extend, 0);
    return best;
}

SeparationGraph explore_separation_graph(const Acra& acra, std::optional<int> stop_at_clique) {
    const int nr = acra.num_registers();
    const auto live = live_registers(acra);
    std::vector<std::uint64_t> live_mask(acra.num_states(), 0);
    std::vector<std::vector<RegId>> live_list(acra.num_states());
    for (StateId q = 0; q < acra.num_states(); ++q) {
        for (RegId r : live[q]) {
            live_mask[q] |= reg_bit(r);
            live_list[q].push_back(r);
        }
    }
    SeparationOracle oracle(acra);
    SeparationGraph g;
    std::vector<std::vector<int>> by_state(acra.num_states());
    std::deque<int> queue;
    bool done = false;

    // Pairs over registers dead at q never reach a live clique, so node
    // relations are kept restricted to live registers.
    auto try_add = [&](StateId q, const SeparationRelation& rel, int parent, std::vector<SepStep> steps) {
        const SeparationRelation r = rel.restrict_to(live_mask[q]);
        for (int other : by_state[q]) {
            if (r.subset_of(g.nodes[other].relation)) {
                return;
            }
        }
        g.nodes.push_back(SepNode{q, r, parent, std::move(steps)});
        const int id = static_cast<int>(g.nodes.size()) - 1;
        by_state[q].push_back(id);
        queue.push_back(id);
        if (stop_at_clique && static_cast<int>(max_clique(r, live_list[q]).size()) >= *stop_at_clique) {
            done = true;
        }
    };

    try_add(acra.initial(), SeparationRelation(nr), -1, {});
    while (!queue.empty() && !done) {
        const int id = queue.front();
        queue.pop_front();
        const StateId q = g.nodes[id].state;
        const SeparationRelation base = g.nodes[id].relation;

        // Separation edges: greedily add every pair that separates while
        // keeping the whole current field fixed.
        SeparationRelation grown = base;
        std::vector<SepStep> chain;
        std::vector<std::pair<RegId, RegId>> failed;
        for (std::size_t i = 0; i < live_list[q].size(); ++i) {
            for (std::size_t j = i + 1; j < live_list[q].size(); ++j) {
                const RegId u = live_list[q][i];
                const RegId v = live_list[q][j];
                if (grown.contains(u, v)) {
                    continue;
                }
                if (auto cycle = oracle.separating_cycle(q, grown.field(), u, v)) {
                    grown.insert(u, v);
                    chain.push_back(SepStep{SepStep::Kind::Separation, std::move(*cycle), {u, v}});
                } else {
                    failed.emplace_back(u, v);
                }
            }
        }
        if (!chain.empty()) {
            try_add(q, grown, id, std::move(chain));
        } else {
            // Nothing extends the full field: try the pairs again on maximal
            // sub-fields, dropping the pairs outside each.
            for (const auto& [u, v] : failed) {
                for (auto& [sub, cycle] : oracle.maximal_fields(q, base.field(), u, v)) {
                    SeparationRelation r = base.restrict_to(sub);
                    r.insert(u, v);
                    try_add(q, r, id, {SepStep{SepStep::Kind::Separation, std::move(cycle), {u, v}}});
                    if (done) {
                        break;
                    }
                }
            }
        }

        for (SymbolId a = 0; a < acra.num_symbols() && !done; ++a) {
            SepNode succ = renaming_successor(acra, SepNode{q, base, id, {}}, a);
            try_add(succ.state, succ.relation, id, std::move(succ.steps));
        }
    }
    return g;
}

std::optional<KSeparableWitness> k_separable(const Acra& acra, int k, SeparationGraph* graph_out) {
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    const auto live = live_registers(acra);
    SeparationGraph g = explore_separation_graph(acra, k);
    std::optional<KSeparableWitness> found;
    for (int i = 0; i < static_cast<int>(g.nodes.size()) && !found; ++i) {
        const auto& n = g.nodes[i];
        const std::vector<RegId> regs(live[n.state].begin(), live[n.state].end());
        auto clique = max_clique(n.relation, regs);
        if (static_cast<int>(clique.size()) >= k) {
            clique.resize(k);
            found = KSeparableWitness{i, n.state, clique};
        }
    }
    if (graph_out) {
        *graph_out = std::move(g);
    }
    return found;
}

int register_complexity(const Acra& acra) {
    const auto live = live_registers(acra);
    int cap = 0;
    for (const auto& l : live) {
        cap = std::max(cap, static_cast<int>(l.size()));
    }
    const SeparationGraph g = explore_separation_graph(acra, cap);
    int best = 0;
    for (const auto& n : g.nodes) {
        const std::vector<RegId> regs(live[n.state].begin(), live[n.state].end());
        best = std::max(best, static_cast<int>(max_clique(n.relation, regs).size()));
    }
    return best;
}

} // namespace acra
