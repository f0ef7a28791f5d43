// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <functional>

#include "doctest.h"

#include "support/fixtures.hpp"

using namespace acra;
using namespace acra::testing;

namespace {

AcraGame::Transition tr(StateId from, SymbolId a, StateId to, std::vector<UpdateExpr> updates) {
    return AcraGame::Transition{from, a, to, std::move(updates)};
}

// From q0 on a the adversary adds 1 or 2 to v and lands in qf, which outputs v.
AcraGame plus_one_or_two() {
    AcraGame g;
    g.states = {"q0", "qf"};
    g.alphabet = {"a"};
    g.registers = {"v"};
    g.transitions = {tr(0, 0, 1, {{0, 1}}), tr(0, 0, 1, {{0, 2}})};
    g.outputs = {std::nullopt, UpdateExpr{0, 0}};
    return g;
}

// Single self-loop adding 1 to v at an accepting state outputting v.
AcraGame counter_loop() {
    AcraGame g;
    g.states = {"q"};
    g.alphabet = {"a"};
    g.registers = {"v"};
    g.transitions = {tr(0, 0, 0, {{0, 1}})};
    g.outputs = {UpdateExpr{0, 0}};
    return g;
}

ReachGame projection(const AcraGame& g) {
    ReachGame r;
    r.num_states = g.num_states();
    r.num_symbols = g.num_symbols();
    for (const auto& t : g.transitions) {
        r.edges.push_back({t.from, t.symbol, t.to});
    }
    r.initial = g.initial;
    for (StateId q = 0; q < g.num_states(); ++q) {
        r.accepting.push_back(g.accepting(q) ? 1 : 0);
    }
    return r;
}

// Follows the strategy against every adversary choice. Returns false if some
// branch fails to stop at an accepting state with output <= budget.
bool wins_against_all(const AcraGame& g, const ClampedStrategy& s, const Config& c, int budget, int depth) {
    if (depth < 0) {
        return false;
    }
    const int act = s.lookup(c.state, c.valuation);
    if (act == kStop) {
        const auto& out = g.outputs[c.state];
        return out && c.valuation[out->source] + out->offset <= budget;
    }
    if (act == kNoMove) {
        return false;
    }
    bool any = false;
    for (const auto& t : g.transitions) {
        if (t.from != c.state || t.symbol != act) {
            continue;
        }
        any = true;
        Valuation next(c.valuation.size());
        for (std::size_t r = 0; r < next.size(); ++r) {
            next[r] = c.valuation[t.updates[r].source] + t.updates[r].offset;
        }
        if (!wins_against_all(g, s, Config{t.to, next}, budget, depth - 1)) {
            return false;
        }
    }
    return any;
}

Config start(const AcraGame& g) { return Config{g.initial, Valuation(static_cast<std::size_t>(g.num_registers()), Int(0))}; }

std::int64_t product_size(const AcraGame& g, int budget) {
    std::int64_t n = g.num_states();
    for (int r = 0; r < g.num_registers(); ++r) {
        n *= budget + 2;
    }
    return n;
}

} // namespace

TEST_SUITE("games") {

TEST_CASE("validation") {
    CHECK_NOTHROW(check_game(plus_one_or_two()));
    AcraGame bad = plus_one_or_two();
    bad.transitions[0].updates[0].offset = -1;
    CHECK_THROWS_AS(check_game(bad), ValidationError);
    AcraGame out = plus_one_or_two();
    out.outputs[1] = UpdateExpr{0, -3};
    CHECK_THROWS_AS(check_game(out), ValidationError);
    AcraGame z = bad;
    z.domain = Domain::Integer;
    CHECK_NOTHROW(check_game(z));
    CHECK_THROWS_AS(solve_game_n(z, 1), std::invalid_argument);
    CHECK_THROWS_AS(optimal_budget(z), std::invalid_argument);
    CHECK_THROWS_AS(clamped_product(z, 1), std::invalid_argument);
}

TEST_CASE("clamped product") {
    AcraGame g = plus_one_or_two();
    const ClampedProduct p = clamped_product(g, 3);
    CHECK(p.game.num_states == 10);
    CHECK(p.encode(1, {2}) != p.encode(1, {3}));
    CHECK(p.decode(p.encode(1, {4})) == std::pair<StateId, std::vector<int>>{1, {4}});

    // qf outputs v; at budget 2 the clamped value 3 is over budget.
    const ClampedProduct p2 = clamped_product(g, 2);
    CHECK(p2.game.accepting[p2.encode(1, {3})] == 0);
    CHECK(p2.game.accepting[p2.encode(1, {2})] == 1);

    const AcraGame loop = counter_loop();
    const ClampedProduct l = clamped_product(loop, 2);
    bool found = false;
    for (const auto& e : l.game.edges) {
        if (e.src == l.encode(0, {2})) {
            CHECK(e.dst == l.encode(0, {3}));
            found = true;
        }
        if (e.src == l.encode(0, {3})) {
            CHECK(e.dst == l.encode(0, {3}));
        }
    }
    CHECK(found);
}

TEST_CASE("reachability games") {
    SUBCASE("accepting initial state") {
        ReachGame g{1, 1, {}, 0, {1}};
        const auto s = solve_reach_game(g);
        CHECK(s.winning[0]);
        CHECK(s.strategy[0] == kStop);
    }
    SUBCASE("chain") {
        ReachGame g{3, 1, {{0, 0, 1}, {1, 0, 2}}, 0, {0, 0, 1}};
        const auto s = solve_reach_game(g);
        CHECK(s.winning[0]);
        CHECK(s.strategy[0] == 0);
        CHECK(s.rank[0] == 2);
    }
    SUBCASE("a symbol with a dead-end successor is not a winning choice") {
        // On a the adversary may go to the sink 2; b leads to acceptance.
        ReachGame g{4, 2, {{0, 0, 3}, {0, 0, 2}, {0, 1, 1}, {1, 1, 3}}, 0, {0, 0, 0, 1}};
        const auto s = solve_reach_game(g);
        CHECK(s.winning[0]);
        CHECK(s.strategy[0] == 1);
        CHECK_FALSE(s.winning[2]);
        CHECK(s.strategy[2] == kNoMove);
    }
    SUBCASE("symbols without transitions are not playable") {
        ReachGame g{2, 2, {{0, 0, 1}}, 0, {0, 0}};
        CHECK_FALSE(solve_reach_game(g).winning[0]);
    }
}

TEST_CASE("the +1/+2 game") {
    const AcraGame g = plus_one_or_two();
    CHECK(solve_game_n(g, 2).winning);
    CHECK_FALSE(solve_game_n(g, 1).winning);
    CHECK_FALSE(solve_game_n(g, 0).winning);
    CHECK(optimal_budget(g) == 2);
    CHECK(brute_force_game_value(g, 2) == Int(2));
    CHECK(brute_force_game_value(g, 0) == std::nullopt);

    const auto sol = solve_game_n(g, 2);
    CHECK(wins_against_all(g, sol.strategy, start(g), 2, 10));
    for (int pick = 0; pick < 2; ++pick) {
        const auto r = play_strategy(
            g, sol.strategy, [&](const Config&, SymbolId, const std::vector<int>&) { return pick; }, 10);
        CHECK(r.outcome == PlayResult::Outcome::Stopped);
        REQUIRE(r.output.has_value());
        CHECK(*r.output <= 2);
        CHECK(*r.output == pick + 1);
    }
}

TEST_CASE("trivial and hopeless games") {
    AcraGame g;
    g.states = {"q"};
    g.alphabet = {"a"};
    g.registers = {"v"};
    g.transitions = {tr(0, 0, 0, {{0, 0}})};
    g.outputs = {UpdateExpr{0, 0}};
    CHECK(optimal_budget(g) == 0);
    CHECK(brute_force_game_value(g, 3) == Int(0));
    const auto r = play_strategy(g, solve_game_n(g, 0).strategy,
                                 [](const Config&, SymbolId, const std::vector<int>&) { return 0; }, 5);
    CHECK(r.output == Int(0));

    AcraGame h;
    h.states = {"q0", "q1", "qf"};
    h.alphabet = {"a"};
    h.registers = {"v"};
    h.transitions = {tr(0, 0, 1, {{0, 1}}), tr(1, 0, 0, {{0, 1}}), tr(2, 0, 2, {{0, 0}})};
    h.outputs = {std::nullopt, std::nullopt, UpdateExpr{0, 0}};
    for (int k = 0; k < 5; ++k) {
        CHECK_FALSE(solve_game_n(h, k).winning);
    }
    CHECK_FALSE(optimal_budget(h).has_value());
    CHECK_FALSE(brute_force_game_value(h, 6).has_value());
    // A strategy that never wins times out.
    ClampedStrategy lose = solve_game_n(h, 1).strategy;
    std::fill(lose.action.begin(), lose.action.end(), 0);
    const auto t = play_strategy(h, lose, [](const Config&, SymbolId, const std::vector<int>&) { return 0; }, 7);
    CHECK(t.outcome == PlayResult::Outcome::Timeout);
    CHECK_FALSE(t.output.has_value());
    CHECK(t.run.size() == 8);
}

TEST_CASE("the system may stop early") {
    // Accepting start outputs v + 1; continuing costs nothing but the loop
    // leads to a state outputting v.
    AcraGame g;
    g.states = {"q0", "q1"};
    g.alphabet = {"a"};
    g.registers = {"v"};
    g.transitions = {tr(0, 0, 1, {{0, 0}}), tr(1, 0, 1, {{0, 1}})};
    g.outputs = {UpdateExpr{0, 1}, UpdateExpr{0, 0}};
    CHECK(optimal_budget(g) == 0);
    const auto sol = solve_game_n(g, 1);
    CHECK(sol.strategy.lookup(0, vals({0})) == kStop);
    CHECK(solve_game_n(g, 0).strategy.lookup(0, vals({0})) == 0);
}

TEST_CASE("property: winning sets are downward closed") {
    std::mt19937 rng(41);
    for (int i = 0; i < 100; ++i) {
        const AcraGame g = random_game(rng);
        for (int k = 0; k <= 3; ++k) {
            const auto sol = solve_game_n(g, k);
            const auto& p = sol.product;
            for (std::int64_t x = 0; x < p.game.num_states; ++x) {
                if (!sol.solution.winning[x]) {
                    continue;
                }
                auto [q, v] = p.decode(x);
                for (std::size_t r = 0; r < v.size(); ++r) {
                    if (v[r] > 0) {
                        auto lower = v;
                        --lower[r];
                        CHECK(sol.solution.winning[p.encode(q, lower)]);
                    }
                }
            }
        }
    }
}

TEST_CASE("property: winning is monotone in the budget") {
    std::mt19937 rng(42);
    for (int i = 0; i < 100; ++i) {
        const AcraGame g = random_game(rng);
        bool prev = false;
        for (int k = 0; k <= 8; ++k) {
            const bool cur = solve_game_n(g, k).winning;
            CHECK((!prev || cur));
            prev = cur;
        }
    }
}

TEST_CASE("property: optimal budget matches the minimax oracle") {
    std::mt19937 rng(43);
    int finite = 0;
    for (int i = 0; i < 100; ++i) {
        const AcraGame g = random_game(rng);
        const auto best = optimal_budget(g);
        const int kmax = static_cast<int>(g.max_constant() * g.num_states());
        const int depth = static_cast<int>(product_size(g, kmax));
        const auto value = brute_force_game_value(g, depth);
        if (best) {
            ++finite;
            REQUIRE(value.has_value());
            CHECK(*value == *best);
        } else {
            CHECK_FALSE(value.has_value());
        }
    }
    CHECK(finite > 20);
}

TEST_CASE("property: winning strategies win against every adversary") {
    std::mt19937 rng(44);
    for (int i = 0; i < 100; ++i) {
        const AcraGame g = random_game(rng);
        for (int k = 0; k <= 4; ++k) {
            const auto sol = solve_game_n(g, k);
            if (!sol.winning) {
                continue;
            }
            CHECK(wins_against_all(g, sol.strategy, start(g), k, static_cast<int>(product_size(g, k))));
            std::uniform_int_distribution<int> pick(0, 7);
            const auto r = play_strategy(
                g, sol.strategy,
                [&](const Config&, SymbolId, const std::vector<int>& c) { return pick(rng) % static_cast<int>(c.size()); },
                static_cast<int>(product_size(g, k)));
            CHECK(r.outcome == PlayResult::Outcome::Stopped);
            CHECK(*r.output <= k);
        }
    }
}

TEST_CASE("property: the small-strategy budget suffices") {
    std::mt19937 rng(45);
    int exercised = 0;
    for (int i = 0; i < 150; ++i) {
        const AcraGame g = random_game(rng);
        if (!solve_reach_game(projection(g)).winning[g.initial]) {
            continue;
        }
        ++exercised;
        CHECK(solve_game_n(g, static_cast<int>(g.max_constant() * g.num_states())).winning);
    }
    CHECK(exercised > 20);
}

TEST_CASE("property: the parallel product matches the serial one") {
    std::mt19937 rng(46);
    for (int i = 0; i < 60; ++i) {
        const AcraGame g = random_game(rng);
        for (int k = 0; k <= 4; ++k) {
            const auto a = clamped_product(g, k);
            const auto b = clamped_product_serial(g, k);
            REQUIRE(a.game.num_states == product_size(g, k));
            CHECK(a.game.num_states == b.game.num_states);
            CHECK(a.game.initial == b.game.initial);
            CHECK(a.game.accepting == b.game.accepting);
            REQUIRE(a.game.edges.size() == b.game.edges.size());
            for (std::size_t e = 0; e < a.game.edges.size(); ++e) {
                CHECK(a.game.edges[e].src == b.game.edges[e].src);
                CHECK(a.game.edges[e].dst == b.game.edges[e].dst);
                CHECK(a.game.edges[e].symbol == b.game.edges[e].symbol);
            }
        }
    }
}

} // TEST_SUITE
