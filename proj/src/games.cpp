// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/games.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace acra {

std::vector<std::vector<std::vector<int>>> AcraGame::moves() const {
    std::vector<std::vector<std::vector<int>>> m(num_states(), std::vector<std::vector<int>>(num_symbols()));
    for (int i = 0; i < static_cast<int>(transitions.size()); ++i) {
        m[transitions[i].from][transitions[i].symbol].push_back(i);
    }
    return m;
}

Int AcraGame::max_constant() const {
    Int c = 0;
    for (const auto& t : transitions) {
        for (const auto& u : t.updates) {
            c = std::max(c, Int(abs(u.offset)));
        }
    }
    for (const auto& o : outputs) {
        if (o) {
            c = std::max(c, Int(abs(o->offset)));
        }
    }
    return c;
}

void check_game(const AcraGame& game) {
    std::vector<std::string> errors;
    auto unique = [&](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second) {
                errors.push_back(std::string("duplicate ") + what + " \"" + n + "\"");
            }
        }
    };
    unique(game.states, "state");
    unique(game.alphabet, "symbol");
    unique(game.registers, "register");
    const int nq = game.num_states();
    const int nr = game.num_registers();
    if (game.initial < 0 || game.initial >= nq) {
        errors.emplace_back("undeclared initial state");
    }
    if (static_cast<int>(game.outputs.size()) != nq) {
        errors.emplace_back("outputs must cover every state");
    }
    const bool natural = game.domain == Domain::Natural;
    bool any_accepting = false;
    for (std::size_t q = 0; q < game.outputs.size(); ++q) {
        if (const auto& o = game.outputs[q]) {
            any_accepting = true;
            if (o->source < 0 || o->source >= nr) {
                errors.push_back("undeclared register in output of " + game.states[q]);
            }
            if (natural && o->offset.sign() < 0) {
                errors.push_back("negative output offset in a game over the naturals at " + game.states[q]);
            }
        }
    }
    if (!any_accepting) {
        errors.emplace_back("empty accepting set");
    }
    for (const auto& t : game.transitions) {
        if (t.from < 0 || t.from >= nq || t.to < 0 || t.to >= nq) {
            errors.emplace_back("undeclared state in transition");
            continue;
        }
        if (t.symbol < 0 || t.symbol >= game.num_symbols()) {
            errors.emplace_back("undeclared symbol in transition");
        }
        if (static_cast<int>(t.updates.size()) != nr) {
            errors.emplace_back("transition update map must cover every register");
            continue;
        }
        for (const auto& u : t.updates) {
            if (u.source < 0 || u.source >= nr) {
                errors.emplace_back("undeclared register in update");
            }
            if (natural && u.offset.sign() < 0) {
                errors.push_back("negative update offset in a game over the naturals from " + game.states[t.from]);
            }
        }
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

ReachSolution solve_reach_game(const ReachGame& g) {
    const int n = g.num_states;
    ReachSolution s;
    s.winning.assign(n, 0);
    s.strategy.assign(n, kNoMove);
    s.rank.assign(n, -1);
    // remaining[src * symbols + a] counts a-edges out of src not yet winning.
    std::vector<int> remaining(static_cast<std::size_t>(n) * g.num_symbols, 0);
    std::vector<std::vector<int>> preds(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        ++remaining[static_cast<std::size_t>(g.edges[e].src) * g.num_symbols + g.edges[e].symbol];
        preds[g.edges[e].dst].push_back(e);
    }
    std::deque<int> queue;
    for (int x = 0; x < n; ++x) {
        if (g.accepting[x]) {
            s.winning[x] = 1;
            s.strategy[x] = kStop;
            s.rank[x] = 0;
            queue.push_back(x);
        }
    }
    while (!queue.empty()) {
        const int w = queue.front();
        queue.pop_front();
        for (int e : preds[w]) {
            const auto& edge = g.edges[e];
            int& left = remaining[static_cast<std::size_t>(edge.src) * g.num_symbols + edge.symbol];
            if (--left == 0 && !s.winning[edge.src]) {
                s.winning[edge.src] = 1;
                s.strategy[edge.src] = edge.symbol;
                s.rank[edge.src] = s.rank[w] + 1;
                queue.push_back(edge.src);
            }
        }
    }
    return s;
}

std::int64_t ClampedProduct::encode(StateId q, const std::vector<int>& clamped) const {
    std::int64_t idx = q;
    for (int v : clamped) {
        idx = idx * (budget + 2) + v;
    }
    return idx;
}

std::pair<StateId, std::vector<int>> ClampedProduct::decode(std::int64_t index) const {
    std::vector<int> vals(num_registers);
    for (int r = num_registers - 1; r >= 0; --r) {
        vals[r] = static_cast<int>(index % (budget + 2));
        index /= budget + 2;
    }
    return {static_cast<StateId>(index), vals};
}

int ClampedStrategy::lookup(StateId q, const Valuation& exact) const {
    std::int64_t idx = q;
    for (const Int& v : exact) {
        const int c = v > budget ? budget + 1 : static_cast<int>(v);
        idx = idx * (budget + 2) + c;
    }
    return action.at(static_cast<std::size_t>(idx));
}

GameSolution solve_game_n(const AcraGame& game, int budget) {
    if (game.domain != Domain::Natural) {
        throw std::invalid_argument("games over the integers are undecidable; only the naturals are solved");
    }
    GameSolution sol;
    sol.product = clamped_product(game, budget);
    sol.solution = solve_reach_game(sol.product.game);
    sol.winning = sol.solution.winning[sol.product.game.initial];
    sol.strategy.budget = budget;
    sol.strategy.num_registers = game.num_registers();
    sol.strategy.action.assign(sol.product.game.num_states, kNoMove);
    for (int x = 0; x < sol.product.game.num_states; ++x) {
        if (sol.solution.winning[x]) {
            sol.strategy.action[x] = sol.solution.strategy[x];
        }
    }
    return sol;
}

std::optional<int> optimal_budget(const AcraGame& game) {
    if (game.domain != Domain::Natural) {
        throw std::invalid_argument("games over the integers are undecidable; only the naturals are solved");
    }
    const Int cap = game.max_constant() * game.num_states();
    if (cap > 1'000'000) {
        throw std::invalid_argument("budget bound too large for the clamped product");
    }
    int hi = static_cast<int>(cap);
    if (!solve_game_n(game, hi).winning) {
        return std::nullopt;
    }
    int lo = 0;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (solve_game_n(game, mid).winning) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

PlayResult play_strategy(const AcraGame& game, const ClampedStrategy& strategy, const Adversary& adversary,
                         int max_steps) {
    const auto moves = game.moves();
    PlayResult r;
    Config c{game.initial, Valuation(static_cast<std::size_t>(game.num_registers()), Int(0))};
    r.run.push_back(c);
    for (int steps = 0;; ++steps) {
        const int act = strategy.lookup(c.state, c.valuation);
        if (act == kNoMove) {
            throw std::runtime_error("strategy undefined at " + game.states[c.state]);
        }
        if (act == kStop) {
            const auto& out = game.outputs[c.state];
            r.outcome = PlayResult::Outcome::Stopped;
            r.output = c.valuation[out->source] + out->offset;
            return r;
        }
        if (steps >= max_steps) {
            r.outcome = PlayResult::Outcome::Timeout;
            return r;
        }
        const auto& cands = moves[c.state][act];
        if (cands.empty()) {
            throw std::runtime_error("strategy plays an unplayable symbol at " + game.states[c.state]);
        }
        const auto& t = game.transitions.at(cands.at(adversary(c, act, cands)));
        Config next{t.to, Valuation(c.valuation.size())};
        for (std::size_t u = 0; u < t.updates.size(); ++u) {
            next.valuation[u] = c.valuation[t.updates[u].source] + t.updates[u].offset;
        }
        c = std::move(next);
        r.run.push_back(c);
    }
}

namespace {

struct MemoKey {
    StateId q;
    int depth;
    std::vector<Int> vals;
    bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
        std::size_t h = static_cast<std::size_t>(k.q) * 1000003U + static_cast<std::size_t>(k.depth);
        for (const auto& v : k.vals) {
            h = h * 0x100000001b3ULL ^ hash_int(v);
        }
        return h;
    }
};

class Minimax {
  public:
    explicit Minimax(const AcraGame& g) : game_(g), moves_(g.moves()) {}

    // Values are translation-invariant: shifting every register by t shifts
    // every reachable output by t, so the memo stores normalized valuations.
    std::optional<Int> value(StateId q, const std::vector<Int>& vals, int depth) {
        Int shift = 0;
        if (!vals.empty()) {
            shift = *std::min_element(vals.begin(), vals.end());
        }
        MemoKey key{q, depth, vals};
        for (auto& v : key.vals) {
            v -= shift;
        }
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second ? std::optional<Int>(*it->second + shift) : std::nullopt;
        }
        auto v = compute(q, key.vals, depth);
        memo_.emplace(key, v);
        return v ? std::optional<Int>(*v + shift) : std::nullopt;
    }

  private:
    std::optional<Int> compute(StateId q, const std::vector<Int>& vals, int depth) {
        std::optional<Int> best;
        if (const auto& out = game_.outputs[q]) {
            best = vals[out->source] + out->offset;
        }
        if (depth == 0) {
            return best;
        }
        for (SymbolId a = 0; a < game_.num_symbols(); ++a) {
            const auto& cands = moves_[q][a];
            if (cands.empty()) {
                continue;
            }
            std::optional<Int> worst;
            bool infinite = false;
            for (int ti : cands) {
                const auto& t = game_.transitions[ti];
                std::vector<Int> next(vals.size());
                for (std::size_t u = 0; u < vals.size(); ++u) {
                    next[u] = vals[t.updates[u].source] + t.updates[u].offset;
                }
                const auto v = value(t.to, next, depth - 1);
                if (!v) {
                    infinite = true;
                    break;
                }
                if (!worst || *v > *worst) {
                    worst = v;
                }
            }
            if (!infinite && (!best || *worst < *best)) {
                best = worst;
            }
        }
        return best;
    }

    const AcraGame& game_;
    std::vector<std::vector<std::vector<int>>> moves_;
    std::unordered_map<MemoKey, std::optional<Int>, MemoHash> memo_;
};

} // namespace

std::optional<Int> brute_force_game_value(const AcraGame& game, int depth_bound) {
    if (depth_bound < 0) {
        throw std::invalid_argument("depth bound must be non-negative");
    }
    Minimax m(game);
    return m.value(game.initial, std::vector<Int>(static_cast<std::size_t>(game.num_registers()), Int(0)),
                   depth_bound);
}

} // namespace acra
