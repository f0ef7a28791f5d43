// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/gadgets.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace acra {

namespace {

std::vector<UpdateExpr> identity_updates(int n) {
    std::vector<UpdateExpr> u(n);
    for (int r = 0; r < n; ++r) {
        u[r] = UpdateExpr{r, 0};
    }
    return u;
}

// Symbol index of `name` in `dfa`, for DFAs declaring the alphabet in a
// different order.
std::vector<int> align(const Dfa& reference, const Dfa& other) {
    std::vector<int> map(reference.num_symbols());
    for (int a = 0; a < reference.num_symbols(); ++a) {
        auto it = std::find(other.alphabet.begin(), other.alphabet.end(), reference.alphabet[a]);
        if (it == other.alphabet.end() || other.num_symbols() != reference.num_symbols()) {
            throw ValidationError({"DFAs must share an alphabet"});
        }
        map[a] = static_cast<int>(it - other.alphabet.begin());
    }
    return map;
}

} // namespace

void check_dfa(const Dfa& dfa) {
    std::vector<std::string> errors;
    if (dfa.states.empty()) {
        errors.emplace_back("DFA has no states");
    }
    if (dfa.delta.size() != dfa.states.size() * dfa.alphabet.size()) {
        errors.emplace_back("DFA transition map is not total");
    }
    for (int t : dfa.delta) {
        if (t < 0 || t >= dfa.num_states()) {
            errors.emplace_back("DFA transition to undeclared state");
            break;
        }
    }
    if (dfa.initial < 0 || dfa.initial >= dfa.num_states()) {
        errors.emplace_back("undeclared DFA initial state");
    }
    if (dfa.accepting < 0 || dfa.accepting >= dfa.num_states()) {
        errors.emplace_back("undeclared DFA accepting state");
    }
    std::set<std::string> seen(dfa.states.begin(), dfa.states.end());
    if (seen.size() != dfa.states.size()) {
        errors.emplace_back("duplicate DFA state");
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

Acra separation_gadget(const std::vector<Dfa>& dfas) {
    if (dfas.empty()) {
        throw ValidationError({"separation gadget needs at least one DFA"});
    }
    for (const auto& d : dfas) {
        check_dfa(d);
    }
    const int k = static_cast<int>(dfas.size());
    std::vector<std::vector<int>> maps;
    for (const auto& d : dfas) {
        maps.push_back(align(dfas[0], d));
    }
    const int sigma = dfas[0].num_symbols();

    std::vector<std::string> symbols = dfas[0].alphabet;
    symbols.emplace_back("#");
    for (int i = 1; i <= k; ++i) {
        symbols.push_back("a" + std::to_string(i));
    }
    if (std::set<std::string>(symbols.begin(), symbols.end()).size() != symbols.size()) {
        throw ValidationError({"DFA alphabet clashes with the gadget's control symbols"});
    }
    const SymbolId hash = sigma;
    auto control = [&](int i) { return static_cast<SymbolId>(sigma + i); }; // a_i, 1-based

    std::vector<std::string> regs{"u", "z"};
    std::vector<int> base(k);
    for (int i = 0; i < k; ++i) {
        base[i] = static_cast<int>(regs.size());
        for (const auto& s : dfas[i].states) {
            regs.push_back("v" + std::to_string(i + 1) + "_" + s);
        }
    }
    const RegId u = 0;
    const RegId z = 1;

    std::vector<std::string> states{"q0", "q1", "qf", "qz"};
    for (int i = 1; i <= k; ++i) {
        states.push_back("qout" + std::to_string(i));
    }
    const StateId q0 = 0, q1 = 1, qf = 2, qz = 3;
    Acra m(states, symbols, regs, q0);
    const int ns = static_cast<int>(symbols.size());

    for (SymbolId a = 0; a < ns; ++a) {
        if (a == hash) {
            m.set_transition(q0, a, q1);
        } else {
            m.set_transition(q0, a, q0);
            for (int i = 0; i < k; ++i) {
                const RegId vf = base[i] + dfas[i].accepting;
                m.set_update(q0, a, vf, UpdateExpr{vf, i + 1});
            }
        }
        if (a < sigma) {
            m.set_transition(q1, a, q1);
            for (int i = 0; i < k; ++i) {
                for (int s = 0; s < dfas[i].num_states(); ++s) {
                    m.set_update(q1, a, base[i] + s, UpdateExpr{base[i] + dfas[i].next(s, maps[i][a]), 0});
                }
            }
            m.set_transition(qf, a, qf);
            m.set_update(qf, a, u, UpdateExpr{u, 1});
        } else {
            m.set_transition(q1, a, qf);
            m.set_transition(qf, a, a == hash ? qz : 4 + (a - control(1)));
        }
        // q_z has no moves of its own; it keeps its registers on every symbol.
        m.set_transition(qz, a, qz);
        for (int i = 0; i < k; ++i) {
            m.set_transition(4 + i, a, 4 + i);
        }
    }
    m.set_output(qf, UpdateExpr{u, 0});
    m.set_output(qz, UpdateExpr{z, 0});
    for (int i = 0; i < k; ++i) {
        m.set_output(4 + i, UpdateExpr{base[i] + dfas[i].initial, 0});
    }
    return m;
}

std::optional<std::vector<int>> dfa_intersection_nonempty(const std::vector<Dfa>& dfas) {
    if (dfas.empty()) {
        return std::vector<int>{};
    }
    std::vector<std::vector<int>> maps;
    for (const auto& d : dfas) {
        check_dfa(d);
        maps.push_back(align(dfas[0], d));
    }
    using Tuple = std::vector<int>;
    Tuple start, goal;
    for (const auto& d : dfas) {
        start.push_back(d.initial);
        goal.push_back(d.accepting);
    }
    std::map<Tuple, std::pair<Tuple, int>> parent;
    parent.emplace(start, std::pair{Tuple{}, -1});
    std::deque<Tuple> queue{start};
    while (!queue.empty()) {
        const Tuple cur = queue.front();
        queue.pop_front();
        if (cur == goal) {
            std::vector<int> w;
            for (Tuple t = cur; parent[t].second >= 0; t = parent[t].first) {
                w.push_back(parent[t].second);
            }
            return std::vector<int>(w.rbegin(), w.rend());
        }
        for (int a = 0; a < dfas[0].num_symbols(); ++a) {
            Tuple next(cur.size());
            for (std::size_t i = 0; i < dfas.size(); ++i) {
                next[i] = dfas[i].next(cur[i], maps[i][a]);
            }
            if (parent.emplace(next, std::pair{cur, a}).second) {
                queue.push_back(next);
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

int AltTm::head_after(int pos, int dir) const { return std::clamp(pos + dir, 1, tape_length); }

void check_alt_tm(const AltTm& tm) {
    std::vector<std::string> errors;
    const auto n = static_cast<std::size_t>(tm.num_states());
    if (n == 0) {
        errors.emplace_back("machine has no states");
    }
    if (tm.kinds.size() != n || tm.accepting.size() != n) {
        errors.emplace_back("every state needs a kind and an accepting flag");
    }
    if (tm.delta.size() != n * 4) {
        errors.emplace_back("transition map is not total over (state, symbol, move)");
    }
    for (const auto& act : tm.delta) {
        if (act.next < 0 || act.next >= tm.num_states() || (act.write != 0 && act.write != 1) ||
            (act.dir != -1 && act.dir != 1)) {
            errors.emplace_back("malformed transition");
            break;
        }
    }
    if (tm.initial < 0 || tm.initial >= tm.num_states()) {
        errors.emplace_back("undeclared initial state");
    }
    if (tm.tape_length < 1 || tm.tape_length > 20) {
        errors.emplace_back("tape length must be between 1 and 20");
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

bool atm_halts(const AltTm& tm) {
    check_alt_tm(tm);
    const int n = tm.tape_length;
    const std::size_t tapes = std::size_t{1} << n;
    auto id = [&](int q, std::size_t tape, int pos) { return (static_cast<std::size_t>(q) * tapes + tape) * n + (pos - 1); };
    const std::size_t total = static_cast<std::size_t>(tm.num_states()) * tapes * n;
    std::vector<char> halts(total, 0);
    auto successor = [&](int q, std::size_t tape, int pos, int move) {
        const int read = static_cast<int>((tape >> (pos - 1)) & 1U);
        const auto& act = tm.action(q, read, move);
        std::size_t written = tape & ~(std::size_t{1} << (pos - 1));
        written |= static_cast<std::size_t>(act.write) << (pos - 1);
        return id(act.next, written, tm.head_after(pos, act.dir));
    };
    for (bool grew = true; grew;) {
        grew = false;
        for (int q = 0; q < tm.num_states(); ++q) {
            for (std::size_t tape = 0; tape < tapes; ++tape) {
                for (int pos = 1; pos <= n; ++pos) {
                    char& h = halts[id(q, tape, pos)];
                    if (h) {
                        continue;
                    }
                    const bool s1 = halts[successor(q, tape, pos, 1)];
                    const bool s2 = halts[successor(q, tape, pos, 2)];
                    const bool now = tm.accepting[q] || (tm.kinds[q] == AltTm::Kind::Or ? (s1 || s2) : (s1 && s2));
                    if (now) {
                        h = 1;
                        grew = true;
                    }
                }
            }
        }
    }
    return halts[id(tm.initial, 0, 1)];
}

AcraGame atm_game_gadget(const AltTm& tm) {
    check_alt_tm(tm);
    const int n = tm.tape_length;
    AcraGame g;
    g.domain = Domain::Natural;
    for (int a = 0; a <= 1; ++a) {
        for (int mv = 1; mv <= 2; ++mv) {
            g.alphabet.push_back(std::to_string(a) + std::to_string(mv));
        }
    }
    auto symbol = [](int a, int mv) { return a * 2 + (mv - 1); };
    for (int i = 1; i <= n; ++i) {
        g.registers.push_back("v" + std::to_string(i));
    }
    for (int i = 1; i <= n; ++i) {
        g.registers.push_back("m" + std::to_string(i));
    }
    g.registers.emplace_back("z");
    const int nr = static_cast<int>(g.registers.size());
    auto vreg = [](int i) { return i - 1; };
    auto mreg = [n](int i) { return n + i - 1; };
    const RegId z = nr - 1;

    g.states.emplace_back("q0'");
    auto config = [&](int q, int i, int mv) { return 1 + ((q * n) + (i - 1)) * 2 + (mv - 1); };
    for (int q = 0; q < tm.num_states(); ++q) {
        for (int i = 1; i <= n; ++i) {
            for (int mv = 1; mv <= 2; ++mv) {
                g.states.push_back("<" + tm.states[q] + "," + std::to_string(i) + "," + std::to_string(mv) + ">");
            }
        }
    }
    const int first_challenge = static_cast<int>(g.states.size());
    auto challenge = [&](int i, int a) { return first_challenge + (i - 1) * 2 + a; };
    for (int i = 1; i <= n; ++i) {
        for (int a = 0; a <= 1; ++a) {
            g.states.push_back("c" + std::to_string(i) + "," + std::to_string(a));
        }
    }
    g.initial = 0;
    g.outputs.assign(g.states.size(), std::nullopt);

    {
        auto upd = identity_updates(nr);
        for (int i = 1; i <= n; ++i) {
            upd[vreg(i)] = UpdateExpr{z, 0};
            upd[mreg(i)] = UpdateExpr{z, 1};
        }
        for (SymbolId s = 0; s < static_cast<SymbolId>(g.alphabet.size()); ++s) {
            g.transitions.push_back({0, s, config(tm.initial, 1, 1), upd});
        }
    }
    for (int q = 0; q < tm.num_states(); ++q) {
        for (int i = 1; i <= n; ++i) {
            for (int from_mv = 1; from_mv <= 2; ++from_mv) {
                const StateId src = config(q, i, from_mv);
                for (int a = 0; a <= 1; ++a) {
                    for (int claimed = 1; claimed <= 2; ++claimed) {
                        const SymbolId s = symbol(a, claimed);
                        // Or-states follow the claimed move; the adversary picks
                        // the move at and-states.
                        for (int mv = 1; mv <= 2; ++mv) {
                            if (tm.kinds[q] == AltTm::Kind::Or && mv != claimed) {
                                continue;
                            }
                            const auto& act = tm.action(q, a, mv);
                            auto upd = identity_updates(nr);
                            upd[vreg(i)] = UpdateExpr{z, act.write};
                            upd[mreg(i)] = UpdateExpr{z, 1 - act.write};
                            g.transitions.push_back({src, s, config(act.next, tm.head_after(i, act.dir), mv), upd});
                        }
                        g.transitions.push_back({src, s, challenge(i, a), identity_updates(nr)});
                    }
                }
                if (tm.accepting[q]) {
                    g.outputs[src] = UpdateExpr{z, 0};
                }
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        g.outputs[challenge(i, 0)] = UpdateExpr{vreg(i), 0};
        g.outputs[challenge(i, 1)] = UpdateExpr{mreg(i), 0};
    }
    return g;
}

// ---------------------------------------------------------------------------

void check_two_counter(const TwoCounterProgram& prog) {
    std::vector<std::string> errors;
    const int n = static_cast<int>(prog.size());
    if (n == 0) {
        errors.emplace_back("empty program");
    }
    for (int i = 0; i < n; ++i) {
        const auto& ins = prog[i];
        if (ins.op != TwoCounterInstr::Op::Halt && ins.counter != 1 && ins.counter != 2) {
            errors.push_back("instruction " + std::to_string(i + 1) + ": counter must be 1 or 2");
        }
        if (ins.op == TwoCounterInstr::Op::Branch) {
            for (int t : {ins.if_nonneg, ins.if_negative}) {
                if (t < 1 || t > n + 1) {
                    errors.push_back("instruction " + std::to_string(i + 1) + ": branch target out of range");
                }
            }
        }
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

TwoCounterOutcome run_two_counter(const TwoCounterProgram& prog, int max_steps) {
    check_two_counter(prog);
    const int n = static_cast<int>(prog.size());
    Int c[3] = {0, 0, 0};
    int pc = 1;
    for (int steps = 0;; ++steps) {
        if (pc == n + 1 || prog[pc - 1].op == TwoCounterInstr::Op::Halt) {
            return TwoCounterOutcome::Halted;
        }
        if (steps >= max_steps) {
            return TwoCounterOutcome::Timeout;
        }
        const auto& ins = prog[pc - 1];
        switch (ins.op) {
        case TwoCounterInstr::Op::Inc: ++c[ins.counter]; ++pc; break;
        case TwoCounterInstr::Op::Dec: --c[ins.counter]; ++pc; break;
        case TwoCounterInstr::Op::Branch: pc = c[ins.counter] >= 0 ? ins.if_nonneg : ins.if_negative; break;
        case TwoCounterInstr::Op::Halt: break;
        }
    }
}

AcraGame two_counter_gadget(const TwoCounterProgram& prog) {
    check_two_counter(prog);
    const int n = static_cast<int>(prog.size());
    bool implicit_halt = prog.back().op == TwoCounterInstr::Op::Inc || prog.back().op == TwoCounterInstr::Op::Dec;
    for (const auto& ins : prog) {
        if (ins.op == TwoCounterInstr::Op::Branch && (ins.if_nonneg == n + 1 || ins.if_negative == n + 1)) {
            implicit_halt = true;
        }
    }
    const int locations = n + (implicit_halt ? 1 : 0);

    AcraGame g;
    g.domain = Domain::Integer;
    g.alphabet = {"--", "-+", "+-", "++"};
    g.registers = {"v1", "m1", "v2", "m2", "z"};
    const RegId z = 4;
    auto vreg = [](int c) { return (c - 1) * 2; };
    auto mreg = [](int c) { return (c - 1) * 2 + 1; };
    auto nonneg_claim = [](SymbolId s, int c) { return c == 1 ? (s & 2) != 0 : (s & 1) != 0; };
    for (int i = 1; i <= locations; ++i) {
        g.states.push_back("l" + std::to_string(i));
    }
    const int first_challenge = locations;
    g.states.insert(g.states.end(), {"c1<0", "c1>=0", "c2<0", "c2>=0"});
    auto challenge = [&](int c, bool nonneg) { return first_challenge + (c - 1) * 2 + (nonneg ? 1 : 0); };
    g.initial = 0;
    g.outputs.assign(g.states.size(), std::nullopt);

    for (int i = 1; i <= locations; ++i) {
        const StateId l = i - 1;
        if (i == n + 1 || prog[i - 1].op == TwoCounterInstr::Op::Halt) {
            g.outputs[l] = UpdateExpr{z, 0};
            continue;
        }
        const auto& ins = prog[i - 1];
        for (SymbolId s = 0; s < 4; ++s) {
            auto upd = identity_updates(5);
            switch (ins.op) {
            case TwoCounterInstr::Op::Inc:
            case TwoCounterInstr::Op::Dec: {
                const int d = ins.op == TwoCounterInstr::Op::Inc ? 1 : -1;
                upd[vreg(ins.counter)] = UpdateExpr{vreg(ins.counter), d};
                upd[mreg(ins.counter)] = UpdateExpr{mreg(ins.counter), -d};
                g.transitions.push_back({l, s, i, upd});
                break;
            }
            case TwoCounterInstr::Op::Branch: {
                const bool nonneg = nonneg_claim(s, ins.counter);
                const int target = nonneg ? ins.if_nonneg : ins.if_negative;
                g.transitions.push_back({l, s, target - 1, upd});
                g.transitions.push_back({l, s, challenge(ins.counter, nonneg), upd});
                break;
            }
            case TwoCounterInstr::Op::Halt: break;
            }
        }
    }
    for (int c = 1; c <= 2; ++c) {
        g.outputs[challenge(c, false)] = UpdateExpr{vreg(c), 1};
        g.outputs[challenge(c, true)] = UpdateExpr{mreg(c), 0};
    }
    return g;
}

} // namespace acra
