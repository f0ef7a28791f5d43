// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/minimize.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "acra/sepgraph.hpp"

namespace acra {

namespace {

// Reachable configurations checked against every candidate invariant.
constexpr std::size_t kSampleSize = 4096;

bool all_trivial(const InvariantMap& invs, int num_registers) {
    const Wfi top = Wfi::top(num_registers);
    return std::all_of(invs.begin(), invs.end(), [&](const Wfi& d) { return d == top; });
}

RegId representative(const Dbc& c, const std::vector<RegId>& kept, RegId r) {
    for (RegId k : kept) {
        if (c.related(k, r)) {
            return k;
        }
    }
    throw EliminationError("kept set is not maximal");
}

int slot_of(const std::vector<RegId>& kept, RegId r) {
    return static_cast<int>(std::find(kept.begin(), kept.end(), r) - kept.begin());
}

std::string state_label(const Acra& acra, const AbstractState& s) {
    std::ostringstream os;
    os << acra.state_name(s.base) << '#' << s.disjunct;
    if (!s.eliminated.empty()) {
        os << '[';
        bool first = true;
        for (const auto& [r, e] : s.eliminated) {
            os << (first ? "" : ",") << acra.register_name(r) << '=' << acra.register_name(e.rep)
               << (e.offset.sign() < 0 ? "" : "+") << e.offset;
            first = false;
        }
        os << ']';
    }
    return os.str();
}

} // namespace

std::vector<RegId> kept_registers(const Dbc& c, const std::set<RegId>& live) {
    std::vector<RegId> kept;
    for (RegId r : live) {
        const bool unrelated = std::none_of(kept.begin(), kept.end(), [&](RegId k) { return c.related(k, r); });
        if (unrelated) {
            kept.push_back(r);
        }
    }
    return kept;
}

std::vector<Config> sample_configurations(const Acra& acra, std::size_t limit) {
    std::set<std::pair<StateId, Valuation>> seen;
    std::vector<Config> out{initial_config(acra)};
    seen.emplace(out[0].state, out[0].valuation);
    for (std::size_t i = 0; i < out.size() && out.size() < limit; ++i) {
        for (SymbolId a = 0; a < acra.num_symbols() && out.size() < limit; ++a) {
            Config next = step(acra, out[i], a);
            if (seen.emplace(next.state, next.valuation).second) {
                out.push_back(std::move(next));
            }
        }
    }
    return out;
}

EliminationResult elimination_construct_detailed(const Acra& acra, const InvariantMap& invs) {
    const int nr = acra.num_registers();
    const auto live = live_registers(acra);
    const bool all_live = std::all_of(live.begin(), live.end(),
                                      [&](const std::set<RegId>& l) { return static_cast<int>(l.size()) == nr; });
    if (all_live && all_trivial(invs, nr)) {
        EliminationResult r{acra, {}};
        for (StateId q = 0; q < acra.num_states(); ++q) {
            r.states.push_back(AbstractState{q, 0, {}});
        }
        return r;
    }

    // Kept sets per (state, disjunct).
    std::vector<std::vector<std::vector<RegId>>> kept(acra.num_states());
    std::size_t width = 0;
    for (StateId q = 0; q < acra.num_states(); ++q) {
        for (const Dbc& c : invs.at(q).disjuncts) {
            kept[q].push_back(kept_registers(c, live[q]));
            width = std::max(width, kept[q].back().size());
        }
    }
    width = std::max<std::size_t>(width, 1);

    const Valuation zero(static_cast<std::size_t>(nr), Int(0));
    const auto& init = invs.at(acra.initial()).disjuncts;
    int start = -1;
    for (int i = 0; i < static_cast<int>(init.size()) && start < 0; ++i) {
        if (init[i].satisfied_by(zero)) {
            start = i;
        }
    }
    if (start < 0) {
        throw EliminationError("zero valuation satisfies no initial disjunct");
    }

    std::vector<AbstractState> states;
    std::map<AbstractState, int> index;
    struct Edge {
        int target;
        std::vector<UpdateExpr> updates;
    };
    std::vector<std::vector<Edge>> edges;
    std::deque<int> queue;
    auto intern = [&](AbstractState s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(states.size()));
        if (fresh) {
            states.push_back(std::move(s));
            edges.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };

    {
        AbstractState s{acra.initial(), start, {}};
        const Dbc& c = init[start];
        const auto& k = kept[acra.initial()][start];
        for (RegId r : live[acra.initial()]) {
            if (slot_of(k, r) == static_cast<int>(k.size())) {
                s.eliminated[r] = Elimination{representative(c, k, r), 0};
            }
        }
        intern(std::move(s));
    }

    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const AbstractState cur = states[id];
        const auto& k = kept[cur.base][cur.disjunct];
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId t = acra.next(cur.base, a);
            // Each live target register as (kept source register, offset).
            std::map<RegId, Elimination> post;
            for (RegId r : live[t]) {
                const UpdateExpr& e = acra.update(cur.base, a, r);
                if (auto it = cur.eliminated.find(e.source); it != cur.eliminated.end()) {
                    post[r] = Elimination{it->second.rep, it->second.offset + e.offset};
                } else {
                    post[r] = Elimination{e.source, e.offset};
                }
            }
            const auto& cands = invs.at(t).disjuncts;
            int chosen = -1;
            for (int i = 0; i < static_cast<int>(cands.size()) && chosen < 0; ++i) {
                bool eligible = true;
                for (auto x = post.begin(); x != post.end() && eligible; ++x) {
                    for (auto y = std::next(x); y != post.end() && eligible; ++y) {
                        if (!cands[i].related(x->first, y->first)) {
                            continue;
                        }
                        eligible = x->second.rep == y->second.rep &&
                                   cands[i].bound(x->first, y->first).contains(x->second.offset - y->second.offset);
                    }
                }
                if (eligible) {
                    chosen = i;
                }
            }
            if (chosen < 0) {
                throw EliminationError("no safe successor disjunct at " + acra.state_name(t));
            }
            const Dbc& c = cands[chosen];
            const auto& kt = kept[t][chosen];
            AbstractState next{t, chosen, {}};
            for (RegId r : live[t]) {
                if (slot_of(kt, r) == static_cast<int>(kt.size())) {
                    const RegId rep = representative(c, kt, r);
                    next.eliminated[r] = Elimination{rep, post[r].offset - post[rep].offset};
                }
            }
            std::vector<UpdateExpr> updates(width);
            for (std::size_t j = 0; j < width; ++j) {
                if (j < kt.size()) {
                    const Elimination& src = post[kt[j]];
                    updates[j] = UpdateExpr{slot_of(k, src.rep), src.offset};
                } else {
                    updates[j] = UpdateExpr{static_cast<RegId>(j), 0};
                }
            }
            const int target = intern(std::move(next));
            edges[id].push_back(Edge{target, std::move(updates)});
        }
    }

    std::vector<std::string> names, regs;
    for (const auto& s : states) {
        names.push_back(state_label(acra, s));
    }
    for (std::size_t j = 0; j < width; ++j) {
        regs.push_back("r" + std::to_string(j + 1));
    }
    EliminationResult result{Acra(names, acra.symbol_names(), regs, 0), states};
    Acra& m = result.machine;
    for (int id = 0; id < static_cast<int>(states.size()); ++id) {
        const AbstractState& s = states[id];
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            m.set_transition(id, a, edges[id][a].target);
            for (std::size_t j = 0; j < width; ++j) {
                m.set_update(id, a, static_cast<RegId>(j), edges[id][a].updates[j]);
            }
        }
        if (const auto& out = acra.output(s.base)) {
            const auto& k = kept[s.base][s.disjunct];
            if (auto it = s.eliminated.find(out->source); it != s.eliminated.end()) {
                m.set_output(id, UpdateExpr{slot_of(k, it->second.rep), it->second.offset + out->offset});
            } else {
                m.set_output(id, UpdateExpr{slot_of(k, out->source), out->offset});
            }
        }
    }
    return result;
}

Acra elimination_construct(const Acra& acra, const InvariantMap& invs) {
    return elimination_construct_detailed(acra, invs).machine;
}

Acra minimize_registers(const Acra& acra, int max_bound_exponent, MinimizeReport* report) {
    MinimizeReport local;
    MinimizeReport& rep = report ? *report : local;
    rep = MinimizeReport{};
    rep.complexity = register_complexity(acra);
    if (acra.num_registers() == rep.complexity) {
        rep.abstract_states = acra.num_states();
        return acra;
    }
    const std::vector<Config> sample = sample_configurations(acra, kSampleSize);
    for (int e = 0; e <= max_bound_exponent; ++e) {
        const Int b = Int(1) << e;
        const InvariantMap seed = seed_non_sep(acra, rep.complexity + 1, b);
        if (!std::all_of(sample.begin(), sample.end(),
                         [&](const Config& c) { return satisfies(c.valuation, seed[c.state]); })) {
            continue;
        }
        auto found = pattern_invariant(acra, rep.complexity + 1, b);
        if (!found) {
            continue;
        }
        InvariantMap invs = std::move(*found);
        EliminationResult r = elimination_construct_detailed(acra, invs);
        rep.bound = b;
        rep.abstract_states = r.machine.num_states();
        for (const auto& d : invs) {
            rep.disjunct_counts.push_back(static_cast<int>(d.disjuncts.size()));
        }
        rep.invariants = std::move(invs);
        return std::move(r.machine);
    }
    std::ostringstream os;
    os << "deepening exhausted: register complexity " << rep.complexity << ", no bound up to 2^" << max_bound_exponent
       << " gives an invariant admitting the zero valuation";
    throw DeepeningExhausted(os.str());
}

} // namespace acra
