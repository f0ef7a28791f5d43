// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>
#include <vector>

#include "acra/core.hpp"
#include "acra/gadgets.hpp"
#include "acra/games.hpp"
#include "acra/io.hpp"
#include "acra/sepgraph.hpp"

#ifndef ACRA_TEST_DATA_DIR
#error "ACRA_TEST_DATA_DIR must point at tests/data"
#endif

namespace acra::testing {

inline std::string data_path(const std::string& file) { return std::string(ACRA_TEST_DATA_DIR) + "/" + file; }

inline Acra load_machine(const std::string& name) { return acra_from_json(read_json_file(data_path(name + ".json"))); }

inline Acra m1() { return load_machine("m1"); }
inline Acra m2() { return load_machine("m2"); }
inline Acra m3() { return load_machine("m3"); }
inline Acra m4() { return load_machine("m4"); }
inline Acra m5() { return load_machine("m5"); }

/// One symbol per character.
inline Word word(const Acra& m, const std::string& s) {
    Word w;
    for (char c : s) {
        w.push_back(m.find_symbol(std::string(1, c)).value());
    }
    return w;
}

inline RegId reg(const Acra& m, const std::string& name) { return m.find_register(name).value(); }
inline StateId state(const Acra& m, const std::string& name) { return m.find_state(name).value(); }

inline Valuation vals(std::initializer_list<long long> xs) {
    Valuation v;
    for (long long x : xs) {
        v.emplace_back(x);
    }
    return v;
}

struct RandomMachineSpec {
    int max_states = 4;
    int max_registers = 4;
    int symbols = 2;
    int min_offset = -2;
    int max_offset = 2;
};

/// Random machine whose initial state is accepting, so the domain is never empty.
inline Acra random_machine(std::mt19937& rng, const RandomMachineSpec& spec = {}) {
    std::uniform_int_distribution<int> nq_d(1, spec.max_states);
    std::uniform_int_distribution<int> nr_d(1, spec.max_registers);
    const int nq = nq_d(rng);
    const int nr = nr_d(rng);
    std::vector<std::string> states, symbols, regs;
    for (int i = 0; i < nq; ++i) {
        states.push_back("q" + std::to_string(i));
    }
    for (int i = 0; i < spec.symbols; ++i) {
        symbols.emplace_back(1, static_cast<char>('a' + i));
    }
    for (int i = 0; i < nr; ++i) {
        regs.push_back("r" + std::to_string(i));
    }
    Acra m(states, symbols, regs, 0);
    std::uniform_int_distribution<int> q_d(0, nq - 1), r_d(0, nr - 1), off_d(spec.min_offset, spec.max_offset);
    std::bernoulli_distribution coin(0.5), keep(0.6);
    for (int q = 0; q < nq; ++q) {
        for (int a = 0; a < spec.symbols; ++a) {
            m.set_transition(q, a, q_d(rng));
            for (int r = 0; r < nr; ++r) {
                const RegId src = keep(rng) ? r : r_d(rng);
                m.set_update(q, a, r, UpdateExpr{src, off_d(rng)});
            }
        }
        if (q == 0 || coin(rng)) {
            m.set_output(q, UpdateExpr{r_d(rng), off_d(rng)});
        }
    }
    return m;
}

/// Random game over the naturals.
inline AcraGame random_game(std::mt19937& rng, int max_states = 3, int max_registers = 2, int max_offset = 2) {
    std::uniform_int_distribution<int> nq_d(1, max_states), nr_d(1, max_registers), ns_d(1, 2);
    const int nq = nq_d(rng), nr = nr_d(rng), ns = ns_d(rng);
    AcraGame g;
    for (int i = 0; i < nq; ++i) {
        g.states.push_back("q" + std::to_string(i));
    }
    for (int i = 0; i < ns; ++i) {
        g.alphabet.emplace_back(1, static_cast<char>('a' + i));
    }
    for (int i = 0; i < nr; ++i) {
        g.registers.push_back("r" + std::to_string(i));
    }
    std::uniform_int_distribution<int> q_d(0, nq - 1), r_d(0, nr - 1), off_d(0, max_offset), fan_d(0, 2);
    std::bernoulli_distribution coin(0.4), keep(0.7);
    for (int q = 0; q < nq; ++q) {
        for (int a = 0; a < ns; ++a) {
            const int fan = fan_d(rng);
            for (int t = 0; t < fan; ++t) {
                AcraGame::Transition tr{q, a, q_d(rng), {}};
                for (int r = 0; r < nr; ++r) {
                    tr.updates.push_back(UpdateExpr{keep(rng) ? r : r_d(rng), off_d(rng)});
                }
                g.transitions.push_back(std::move(tr));
            }
        }
    }
    g.outputs.assign(nq, std::nullopt);
    bool any = false;
    for (int q = 0; q < nq; ++q) {
        if (coin(rng)) {
            g.outputs[q] = UpdateExpr{r_d(rng), off_d(rng)};
            any = true;
        }
    }
    if (!any) {
        g.outputs[q_d(rng)] = UpdateExpr{r_d(rng), off_d(rng)};
    }
    g.domain = Domain::Natural;
    return g;
}

inline Dfa random_dfa(std::mt19937& rng, int max_states, const std::vector<std::string>& alphabet) {
    std::uniform_int_distribution<int> n_d(1, max_states);
    const int n = n_d(rng);
    Dfa d;
    d.alphabet = alphabet;
    for (int i = 0; i < n; ++i) {
        d.states.push_back("s" + std::to_string(i));
    }
    std::uniform_int_distribution<int> q_d(0, n - 1);
    for (int i = 0; i < n * static_cast<int>(alphabet.size()); ++i) {
        d.delta.push_back(q_d(rng));
    }
    d.initial = 0;
    d.accepting = q_d(rng);
    return d;
}

inline WeightedDigraph random_digraph(std::mt19937& rng, int max_nodes = 8, int max_weight = 3) {
    std::uniform_int_distribution<int> n_d(1, max_nodes);
    WeightedDigraph g;
    g.num_nodes = n_d(rng);
    std::uniform_int_distribution<int> v_d(0, g.num_nodes - 1), w_d(-max_weight, max_weight);
    std::uniform_int_distribution<int> m_d(0, 2 * g.num_nodes);
    const int m = m_d(rng);
    for (int i = 0; i < m; ++i) {
        g.edges.push_back({v_d(rng), v_d(rng), Int(w_d(rng)), -1});
    }
    g.source = v_d(rng);
    g.target = v_d(rng);
    return g;
}

inline AltTm random_alt_tm(std::mt19937& rng, int num_states, int tape_length) {
    AltTm tm;
    tm.tape_length = tape_length;
    std::bernoulli_distribution coin(0.5), rare(0.25);
    std::uniform_int_distribution<int> q_d(0, num_states - 1);
    for (int q = 0; q < num_states; ++q) {
        tm.states.push_back("p" + std::to_string(q));
        tm.kinds.push_back(coin(rng) ? AltTm::Kind::And : AltTm::Kind::Or);
        tm.accepting.push_back(rare(rng) ? 1 : 0);
    }
    for (int i = 0; i < num_states * 4; ++i) {
        tm.delta.push_back(AltTm::Action{q_d(rng), coin(rng) ? 1 : 0, coin(rng) ? 1 : -1});
    }
    tm.initial = 0;
    return tm;
}

/// Every string over `num_symbols` symbols of length <= max_len, shortest first.
inline std::vector<Word> all_words(int num_symbols, int max_len) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (int a = 0; a < num_symbols; ++a) {
                Word w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        }
        begin = end;
    }
    return out;
}

} // namespace acra::testing
