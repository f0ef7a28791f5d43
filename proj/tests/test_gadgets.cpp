// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <functional>
#include <map>
#include <tuple>
#include <set>

#include "doctest.h"

#include "support/fixtures.hpp"

using namespace acra;
using namespace acra::testing;

namespace {

Dfa dfa(std::vector<std::string> alphabet, int n, std::vector<int> delta, int accepting) {
    Dfa d;
    d.alphabet = std::move(alphabet);
    for (int i = 0; i < n; ++i) {
        d.states.push_back("s" + std::to_string(i));
    }
    d.delta = std::move(delta);
    d.accepting = accepting;
    return d;
}

Dfa mod_counter(int m, int accepting) {
    std::vector<int> delta;
    for (int i = 0; i < m; ++i) {
        delta.push_back((i + 1) % m);
    }
    return dfa({"a"}, m, delta, accepting);
}

// Length of a shortest common word, by stepping the set of state tuples
// reachable with words of each exact length. Lengths past the tuple count
// repeat earlier sets.
std::optional<std::size_t> common_length(const std::vector<Dfa>& ds) {
    std::size_t bound = 1;
    std::vector<int> start, goal;
    for (const auto& d : ds) {
        bound *= static_cast<std::size_t>(d.num_states());
        start.push_back(d.initial);
        goal.push_back(d.accepting);
    }
    std::set<std::vector<int>> level{start};
    for (std::size_t len = 0; len <= bound; ++len) {
        if (level.count(goal) != 0) {
            return len;
        }
        std::set<std::vector<int>> next;
        for (const auto& t : level) {
            for (int a = 0; a < ds[0].num_symbols(); ++a) {
                std::vector<int> u(t.size());
                for (std::size_t i = 0; i < t.size(); ++i) {
                    u[i] = ds[i].next(t[i], a);
                }
                next.insert(std::move(u));
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

// Halting by unrolling: a configuration halts within d steps if it accepts or
// its successors (one or both) halt within d - 1. Memoized on (config, d).
class Unroller {
  public:
    explicit Unroller(const AltTm& tm) : tm_(tm) {}

    bool halts() {
        const int configs = tm_.num_states() * (1 << tm_.tape_length) * tm_.tape_length;
        return within(tm_.initial, 0, 1, configs);
    }

  private:
    bool within(int q, unsigned tape, int pos, int depth) {
        if (tm_.accepting[q]) {
            return true;
        }
        if (depth == 0) {
            return false;
        }
        const auto key = std::tuple{q, tape, pos, depth};
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        bool any = false;
        bool all = true;
        for (int move = 1; move <= 2; ++move) {
            const int read = static_cast<int>((tape >> (pos - 1)) & 1U);
            const auto& act = tm_.action(q, read, move);
            const unsigned next_tape = (tape & ~(1U << (pos - 1))) | (static_cast<unsigned>(act.write) << (pos - 1));
            const int next_pos = std::clamp(pos + act.dir, 1, tm_.tape_length);
            const bool h = within(act.next, next_tape, next_pos, depth - 1);
            any = any || h;
            all = all && h;
        }
        const bool out = tm_.kinds[q] == AltTm::Kind::Or ? any : all;
        memo_.emplace(key, out);
        return out;
    }

    const AltTm& tm_;
    std::map<std::tuple<int, unsigned, int, int>, bool> memo_;
};

bool halts_oracle(const AltTm& tm) { return Unroller(tm).halts(); }

AltTm one_state(AltTm::Kind kind, bool accepting, AltTm::Action act) {
    AltTm tm;
    tm.states = {"p"};
    tm.kinds = {kind};
    tm.accepting = {static_cast<char>(accepting)};
    tm.delta.assign(4, act);
    return tm;
}

TwoCounterInstr inc(int c) { return {TwoCounterInstr::Op::Inc, c, 0, 0}; }
TwoCounterInstr dec(int c) { return {TwoCounterInstr::Op::Dec, c, 0, 0}; }
TwoCounterInstr branch(int c, int nonneg, int neg) { return {TwoCounterInstr::Op::Branch, c, nonneg, neg}; }
TwoCounterInstr halt() { return {TwoCounterInstr::Op::Halt, 1, 0, 0}; }

} // namespace

TEST_SUITE("gadgets") {

TEST_CASE("separation gadget shape") {
    const Dfa even = dfa({"a", "b"}, 2, {1, 0, 1, 0}, 0);
    const Dfa odd = dfa({"a", "b"}, 2, {1, 0, 1, 0}, 1);
    const Acra g = separation_gadget({even, odd});
    CHECK_NOTHROW(check_well_formed(g));
    // q0, q1, qf, qz plus one output state per DFA.
    CHECK(g.num_states() == 2 + 4);
    CHECK(g.num_registers() == 6);
    CHECK(g.num_symbols() == 2 + 3);
    CHECK_FALSE(evaluate(g, {}).has_value());
    const SymbolId hash = g.find_symbol("#").value();
    CHECK(evaluate(g, {hash, hash}) == Int(0));
    CHECK(evaluate(g, {0, hash, hash, 1, 1}) == Int(2));
    // Each q0 step adds 1 to DFA 1's accepting register, which is also its
    // start register; a1 twice then reads it at the first output state.
    const SymbolId a1 = g.find_symbol("a1").value();
    CHECK(evaluate(g, {0, 0, hash, a1, a1}) == Int(2));
    CHECK(evaluate(g, {0, 0, hash, 0, a1, a1}) == Int(0));

    Dfa other = even;
    other.alphabet = {"a", "c"};
    CHECK_THROWS_AS(separation_gadget({even, other}), ValidationError);
    Dfa clash = dfa({"#"}, 1, {0}, 0);
    CHECK_THROWS_AS(separation_gadget({clash}), ValidationError);
    CHECK_THROWS_AS(separation_gadget({}), ValidationError);
}

TEST_CASE("DFA intersection examples") {
    const Dfa even = dfa({"a"}, 2, {1, 0}, 0);
    const Dfa odd = dfa({"a"}, 2, {1, 0}, 1);
    CHECK_FALSE(dfa_intersection_nonempty({even, odd}).has_value());
    CHECK(dfa_intersection_nonempty({even}) == std::vector<int>{});
    CHECK(dfa_intersection_nonempty({mod_counter(2, 0), mod_counter(3, 0)}) == std::vector<int>{});
    // Nonempty words only: (aa)+ and (aaa)+ via counters that start off the accepting state.
    Dfa two = dfa({"a"}, 3, {1, 2, 1}, 2);
    Dfa three = dfa({"a"}, 4, {1, 2, 3, 1}, 3);
    const auto w = dfa_intersection_nonempty({two, three});
    REQUIRE(w.has_value());
    CHECK(w->size() == 6);
    CHECK(common_length({two, three}) == 6U);
}

TEST_CASE("property: gadget separability matches DFA intersection") {
    std::mt19937 rng(51);
    int nonempty = 0;
    for (int i = 0; i < 60; ++i) {
        std::uniform_int_distribution<int> k_d(2, 3);
        const int k = k_d(rng);
        std::vector<Dfa> ds;
        for (int j = 0; j < k; ++j) {
            ds.push_back(random_dfa(rng, 4, {"a", "b"}));
        }
        const auto oracle = common_length(ds);
        const auto fast = dfa_intersection_nonempty(ds);
        REQUIRE(oracle.has_value() == fast.has_value());
        if (fast) {
            ++nonempty;
            CHECK(fast->size() == *oracle);
        }
        const Acra g = separation_gadget(ds);
        CHECK(k_separable(g, k + 2).has_value() == oracle.has_value());
    }
    CHECK(nonempty > 5);
    CHECK(nonempty < 55);
}

TEST_CASE("property: register values before the final phase take few distinct values") {
    std::mt19937 rng(52);
    for (int i = 0; i < 60; ++i) {
        std::uniform_int_distribution<int> k_d(2, 3);
        const int k = k_d(rng);
        std::vector<Dfa> ds;
        for (int j = 0; j < k; ++j) {
            ds.push_back(random_dfa(rng, 4, {"a", "b"}));
        }
        const Acra g = separation_gadget(ds);
        const SymbolId hash = g.find_symbol("#").value();
        std::uniform_int_distribution<int> sym(0, g.num_symbols() - 1);
        std::uniform_int_distribution<int> len(0, 12);
        for (int trial = 0; trial < 10; ++trial) {
            Config c = initial_config(g);
            bool hashes = false;
            const int n = len(rng);
            for (int s = 0; s < n; ++s) {
                const SymbolId a = hashes ? sym(rng) % 2 : static_cast<SymbolId>(sym(rng));
                hashes = hashes || a == hash;
                c = step(g, c, a);
                std::set<Int> distinct(c.valuation.begin(), c.valuation.end());
                CHECK(static_cast<int>(distinct.size()) <= k + 1);
            }
        }
    }
}

TEST_CASE("alternating machine oracle") {
    const AltTm::Action stay{0, 0, 1};
    CHECK(atm_halts(one_state(AltTm::Kind::Or, true, stay)));
    CHECK_FALSE(atm_halts(one_state(AltTm::Kind::Or, false, stay)));
    CHECK_FALSE(atm_halts(one_state(AltTm::Kind::And, false, stay)));

    AltTm or_tm;
    or_tm.states = {"p", "acc", "loop"};
    or_tm.kinds = {AltTm::Kind::Or, AltTm::Kind::Or, AltTm::Kind::Or};
    or_tm.accepting = {0, 1, 0};
    or_tm.tape_length = 2;
    CHECK_THROWS_AS(check_alt_tm(or_tm), ValidationError);
    or_tm.delta.resize(12);
    for (int q = 0; q < 3; ++q) {
        for (int r = 0; r < 2; ++r) {
            or_tm.action(q, r, 1) = {2, 0, 1};
            or_tm.action(q, r, 2) = {q == 0 ? 1 : 2, 1, -1};
        }
    }
    CHECK(atm_halts(or_tm));
    AltTm and_tm = or_tm;
    and_tm.kinds[0] = AltTm::Kind::And;
    CHECK_FALSE(atm_halts(and_tm));
    CHECK(or_tm.head_after(1, -1) == 1);
    CHECK(or_tm.head_after(2, 1) == 2);
}

TEST_CASE("ATM game gadget") {
    const AltTm acc = one_state(AltTm::Kind::Or, true, {0, 0, 1});
    const AcraGame g = atm_game_gadget(acc);
    CHECK_NOTHROW(check_game(g));
    CHECK(g.num_registers() == 3);
    CHECK(g.num_symbols() == 4);
    const auto sol = solve_game_n(g, 0);
    CHECK(sol.winning);
    // One move into the start configuration, then stop.
    const auto r = play_strategy(g, sol.strategy, [](const Config&, SymbolId, const std::vector<int>& c) {
        return static_cast<int>(c.size()) - 1; }, 10);
    CHECK(r.outcome == PlayResult::Outcome::Stopped);
    CHECK(r.run.size() == 2);
    CHECK(r.output == Int(0));

    const AltTm loop = one_state(AltTm::Kind::Or, false, {0, 0, 1});
    CHECK_FALSE(solve_game_n(atm_game_gadget(loop), 0).winning);

    std::mt19937 rng(3);
    const AcraGame w = atm_game_gadget(random_alt_tm(rng, 3, 2));
    CHECK(w.num_registers() == 5);
    CHECK(w.num_states() == 1 + 3 * 2 * 2 + 2 * 2);
}

TEST_CASE("property: ATM oracle agrees with unrolling") {
    std::mt19937 rng(53);
    int halting = 0;
    for (int i = 0; i < 300; ++i) {
        std::uniform_int_distribution<int> q_d(1, 3), n_d(1, 3);
        const AltTm tm = random_alt_tm(rng, q_d(rng), n_d(rng));
        const bool h = halts_oracle(tm);
        halting += h ? 1 : 0;
        CHECK(atm_halts(tm) == h);
    }
    CHECK(halting > 30);
    CHECK(halting < 270);
}

TEST_CASE("property: ATM gadget agrees with halting") {
    std::mt19937 rng(54);
    int halting = 0;
    for (int i = 0; i < 40; ++i) {
        std::uniform_int_distribution<int> q_d(1, 3), n_d(1, 2);
        const AltTm tm = random_alt_tm(rng, q_d(rng), n_d(rng));
        const bool h = halts_oracle(tm);
        halting += h ? 1 : 0;
        CHECK(solve_game_n(atm_game_gadget(tm), 0).winning == h);
    }
    CHECK(halting > 5);
}

TEST_CASE("two-counter simulation") {
    CHECK(run_two_counter({halt()}, 0) == TwoCounterOutcome::Halted);
    CHECK(run_two_counter({inc(1), branch(1, 1, 3)}, 1000) == TwoCounterOutcome::Timeout);
    CHECK(run_two_counter({dec(1), branch(1, 1, 3), halt()}, 1000) == TwoCounterOutcome::Halted);
    CHECK(run_two_counter({inc(2)}, 5) == TwoCounterOutcome::Halted);
    CHECK_THROWS_AS(run_two_counter({branch(1, 0, 1)}, 5), ValidationError);
    CHECK_THROWS_AS(run_two_counter({}, 5), ValidationError);
    CHECK_THROWS_AS(run_two_counter({{TwoCounterInstr::Op::Inc, 3, 0, 0}}, 5), ValidationError);
}

TEST_CASE("two-counter gadget") {
    const AcraGame h = two_counter_gadget({halt()});
    CHECK(h.num_states() == 1 + 4);
    CHECK(h.num_symbols() == 4);
    CHECK(h.num_registers() == 5);
    CHECK(h.domain == Domain::Integer);
    REQUIRE(h.outputs[h.initial].has_value());
    CHECK(h.outputs[h.initial]->offset == 0);
    CHECK(h.registers[h.outputs[h.initial]->source] == "z");

    const AcraGame g = two_counter_gadget({inc(1), halt()});
    CHECK(g.num_states() == 2 + 4);
    CHECK_THROWS_AS(solve_game_n(g, 0), std::invalid_argument);
    // A trailing increment falls off the end into an implicit halt location.
    CHECK(two_counter_gadget({inc(1)}).num_states() == 2 + 4);
}

TEST_CASE("property: the honest run tracks both counters") {
    std::mt19937 rng(55);
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> n_d(1, 6), op_d(0, 3), c_d(1, 2);
        const int n = n_d(rng);
        std::uniform_int_distribution<int> t_d(1, n + 1);
        TwoCounterProgram prog;
        for (int j = 0; j < n; ++j) {
            switch (op_d(rng)) {
            case 0: prog.push_back(inc(c_d(rng))); break;
            case 1: prog.push_back(dec(c_d(rng))); break;
            case 2: prog.push_back(branch(c_d(rng), t_d(rng), t_d(rng))); break;
            default: prog.push_back(halt()); break;
            }
        }
        const AcraGame g = two_counter_gadget(prog);
        const int locations = g.num_states() - 4;
        Config c{g.initial, Valuation(5, Int(0))};
        long long counter[3] = {0, 0, 0};
        int pc = 1;
        for (int steps = 0; steps < 60; ++steps) {
            REQUIRE(c.state == pc - 1);
            for (int k = 1; k <= 2; ++k) {
                CHECK(c.valuation[(k - 1) * 2] == Int(counter[k]));
                CHECK(c.valuation[(k - 1) * 2 + 1] == Int(-counter[k]));
            }
            if (pc == n + 1 || prog[pc - 1].op == TwoCounterInstr::Op::Halt) {
                CHECK(g.outputs[c.state].has_value());
                break;
            }
            const auto& ins = prog[pc - 1];
            const SymbolId claim = static_cast<SymbolId>((counter[1] >= 0 ? 2 : 0) + (counter[2] >= 0 ? 1 : 0));
            const AcraGame::Transition* next = nullptr;
            for (const auto& t : g.transitions) {
                if (t.from == c.state && t.symbol == claim && t.to < locations) {
                    next = &t;
                }
            }
            REQUIRE(next != nullptr);
            Valuation v(c.valuation.size());
            for (std::size_t r = 0; r < v.size(); ++r) {
                v[r] = c.valuation[next->updates[r].source] + next->updates[r].offset;
            }
            c = Config{next->to, v};
            switch (ins.op) {
            case TwoCounterInstr::Op::Inc: ++counter[ins.counter]; ++pc; break;
            case TwoCounterInstr::Op::Dec: --counter[ins.counter]; ++pc; break;
            case TwoCounterInstr::Op::Branch: pc = counter[ins.counter] >= 0 ? ins.if_nonneg : ins.if_negative; break;
            case TwoCounterInstr::Op::Halt: break;
            }
        }
    }
}

TEST_CASE("property: challenge outputs punish false sign claims") {
    // At budget 0 a challenge state is safe for the system exactly when the
    // claim it answers for is true.
    const AcraGame g = two_counter_gadget({branch(1, 2, 2), halt()});
    const int first = g.num_states() - 4;
    for (long long value : {-3LL, -1LL, 0LL, 2LL}) {
        for (int c = 1; c <= 2; ++c) {
            Valuation v(5, Int(0));
            v[(c - 1) * 2] = value;
            v[(c - 1) * 2 + 1] = -value;
            const auto neg = *g.outputs[first + (c - 1) * 2];
            const auto nonneg = *g.outputs[first + (c - 1) * 2 + 1];
            CHECK((v[neg.source] + neg.offset <= 0) == (value < 0));
            CHECK((v[nonneg.source] + nonneg.offset <= 0) == (value >= 0));
        }
    }
}

} // TEST_SUITE
