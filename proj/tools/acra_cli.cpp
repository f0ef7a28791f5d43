// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
//
// acra: command-line front end. Results go to stdout as JSON, diagnostics to
// stderr. Exit status: 0 success, 1 negative answer, 2 bad input.

#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "acra/gadgets.hpp"
#include "acra/games.hpp"
#include "acra/io.hpp"
#include "acra/minimize.hpp"
#include "acra/sepgraph.hpp"

namespace {

using acra::Json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

int emit(const Json& j, int code = kOk) {
    std::cout << j.dump(2) << '\n';
    return code;
}

acra::Word parse_word(const acra::Acra& m, const std::string& text, const std::string& sep) {
    std::vector<std::string> tokens;
    if (sep.empty()) {
        for (char c : text) {
            tokens.emplace_back(1, c);
        }
    } else if (!text.empty()) {
        std::size_t start = 0;
        for (std::size_t pos; (pos = text.find(sep, start)) != std::string::npos; start = pos + sep.size()) {
            tokens.push_back(text.substr(start, pos - start));
        }
        tokens.push_back(text.substr(start));
    }
    acra::Word w;
    for (const auto& t : tokens) {
        auto a = m.find_symbol(t);
        if (!a) {
            throw std::invalid_argument("symbol not in alphabet: \"" + t + "\"");
        }
        w.push_back(*a);
    }
    return w;
}

Json word_json(const acra::Acra& m, const acra::Word& w) {
    Json arr = Json::array();
    for (auto a : w) {
        arr.push_back(m.symbol_name(a));
    }
    return arr;
}

acra::Acra load_acra(const std::string& path) { return acra::acra_from_json(acra::read_json_file(path)); }

Json relation_json(const acra::Acra& m, const acra::SeparationRelation& rel) {
    Json arr = Json::array();
    for (auto [u, v] : rel.pairs()) {
        arr.push_back({m.register_name(u), m.register_name(v)});
    }
    return arr;
}

Json report_json(const acra::Acra& m, const acra::MinimizeReport& r) {
    Json counts = Json::object();
    for (acra::StateId q = 0; q < m.num_states() && q < static_cast<int>(r.disjunct_counts.size()); ++q) {
        counts[m.state_name(q)] = r.disjunct_counts[q];
    }
    return Json{{"registerComplexity", r.complexity},
                {"bound", r.bound ? acra::int_to_json(*r.bound) : Json(nullptr)},
                {"disjunctCounts", std::move(counts)},
                {"abstractStates", r.abstract_states},
                {"invariants", acra::invariants_to_json(m, r.invariants)}};
}

Json strategy_json(const acra::AcraGame& g, const acra::GameSolution& sol) {
    Json arr = Json::array();
    const auto& p = sol.product;
    for (std::int64_t x = 0; x < p.game.num_states; ++x) {
        const int act = sol.strategy.action[x];
        if (act == acra::kNoMove) {
            continue;
        }
        auto [q, vals] = p.decode(x);
        Json v = Json::array();
        for (int c : vals) {
            // budget + 1 stands for every value above the budget
            v.push_back(c > p.budget ? Json(">" + std::to_string(p.budget)) : Json(c));
        }
        arr.push_back({{"state", g.states[q]},
                       {"valuation", std::move(v)},
                       {"action", act == acra::kStop ? Json("stop") : Json(g.alphabet[act])}});
    }
    return arr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analyses for additive cost register automata"};
    app.require_subcommand(1);

    std::string file, file2, word, sep, out_path;
    std::vector<std::string> files;
    int k = 0, max_len = 0, samples = 5, budget = 0, max_bound_exp = 20;

    auto* eval = app.add_subcommand("eval", "Evaluate a machine on a string");
    eval->add_option("FILE", file)->required();
    eval->add_option("STRING", word)->required();
    eval->add_option("--sep", sep, "Symbol separator for multi-character symbols");

    auto* trim_cmd = app.add_subcommand("trim", "Drop unreachable states");
    trim_cmd->add_option("FILE", file)->required();

    auto* norm = app.add_subcommand("normalize", "Trim and reset dead registers");
    norm->add_option("FILE", file)->required();

    auto* complexity = app.add_subcommand("complexity", "Register complexity");
    complexity->add_option("FILE", file)->required();

    auto* separable = app.add_subcommand("separable", "Decide k-separability");
    separable->add_option("FILE", file)->required();
    separable->add_option("--k", k)->required()->check(CLI::PositiveNumber);

    auto* minimize = app.add_subcommand("minimize", "Build an equivalent machine with the fewest registers");
    minimize->add_option("FILE", file)->required();
    minimize->add_option("--max-bound-exp", max_bound_exp)->check(CLI::Range(0, 62));
    minimize->add_option("-o", out_path, "Write the machine here and the report to stdout");

    auto* equiv = app.add_subcommand("equiv", "Compare two machines on all strings up to a length");
    equiv->add_option("FILE1", file)->required();
    equiv->add_option("FILE2", file2)->required();
    equiv->add_option("--max-len", max_len)->required()->check(CLI::NonNegativeNumber);
    equiv->add_option("--sep", sep, "Separator used when printing the counterexample");

    auto* pump = app.add_subcommand("pump", "Extract and check a pumping witness");
    pump->add_option("FILE", file)->required();
    pump->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    pump->add_option("--samples", samples)->check(CLI::NonNegativeNumber);

    auto* game = app.add_subcommand("game-solve", "Solve a game over the naturals");
    game->add_option("FILE", file)->required();
    auto* budget_opt = game->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
    auto* optimal = game->add_flag("--optimal", "Search for the least winning budget");
    budget_opt->excludes(optimal);

    auto* gadget = app.add_subcommand("gadget", "Build a reduction gadget");
    gadget->require_subcommand(1);
    auto* g_dfa = gadget->add_subcommand("dfa-sep", "Separation gadget from DFAs");
    g_dfa->add_option("FILES", files)->required();
    auto* g_atm = gadget->add_subcommand("atm", "Game from an alternating machine");
    g_atm->add_option("FILE", file)->required();
    auto* g_tc = gadget->add_subcommand("two-counter", "Game from a two-counter program");
    g_tc->add_option("FILE", file)->required();

    auto* oracle = app.add_subcommand("oracle", "Reference deciders");
    oracle->require_subcommand(1);
    auto* o_dfa = oracle->add_subcommand("dfa-intersect", "DFA intersection emptiness");
    o_dfa->add_option("FILES", files)->required();
    auto* o_atm = oracle->add_subcommand("atm-halts", "Alternating machine acceptance");
    o_atm->add_option("FILE", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*eval) {
            const auto m = load_acra(file);
            const auto v = acra::evaluate(m, parse_word(m, word, sep));
            return emit({{"value", v ? acra::int_to_json(*v) : Json(nullptr)}});
        }
        if (*trim_cmd) {
            return emit(acra::acra_to_json(acra::trim(load_acra(file))));
        }
        if (*norm) {
            return emit(acra::acra_to_json(acra::prepare(load_acra(file))));
        }
        if (*complexity) {
            return emit({{"registerComplexity", acra::register_complexity(acra::prepare(load_acra(file)))}});
        }
        if (*separable) {
            const auto m = acra::prepare(load_acra(file));
            acra::SeparationGraph graph;
            const auto w = acra::k_separable(m, k, &graph);
            Json nodes = Json::array();
            for (const auto& n : graph.nodes) {
                nodes.push_back({{"state", m.state_name(n.state)}, {"relation", relation_json(m, n.relation)}});
            }
            Json j{{"separable", w.has_value()}};
            if (w) {
                Json clique = Json::array();
                for (auto r : w->clique) {
                    clique.push_back(m.register_name(r));
                }
                j["state"] = m.state_name(w->state);
                j["clique"] = std::move(clique);
                j["witness"] = word_json(m, graph.witness(w->node));
            }
            j["nodes"] = std::move(nodes);
            return emit(j, w ? kOk : kNegative);
        }
        if (*minimize) {
            const auto m = acra::prepare(load_acra(file));
            acra::MinimizeReport report;
            const auto result = acra::minimize_registers(m, max_bound_exp, &report);
            if (out_path.empty()) {
                return emit(acra::acra_to_json(result));
            }
            std::ofstream out(out_path);
            if (!out) {
                throw acra::ParseError("cannot write " + out_path);
            }
            out << acra::acra_to_json(result).dump(2) << '\n';
            return emit(report_json(m, report));
        }
        if (*equiv) {
            const auto a = load_acra(file);
            const auto b = load_acra(file2);
            const auto cex = acra::bounded_equiv(a, b, max_len);
            if (!cex) {
                return emit({{"equal", true}});
            }
            return emit({{"equal", false}, {"counterexample", acra::format_word(a, *cex, sep)}}, kNegative);
        }
        if (*pump) {
            const auto m = acra::prepare(load_acra(file));
            if (!acra::k_separable(m, k)) {
                return emit({{"separable", false}}, kNegative);
            }
            const auto w = acra::pump_witness(m, k);
            std::mt19937 rng(20240611U);
            std::uniform_int_distribution<int> exp(0, 6);
            std::vector<std::vector<int>> pts(static_cast<std::size_t>(samples));
            for (auto& p : pts) {
                for (std::size_t i = 0; i < w.cycles.size(); ++i) {
                    p.push_back(exp(rng));
                }
            }
            const bool ok = acra::verify_pump_witness(m, w, pts);
            Json j = acra::pump_witness_to_json(m, w);
            j["verified"] = ok;
            return emit(j, ok ? kOk : kNegative);
        }
        if (*game) {
            const auto g = acra::game_from_json(acra::read_json_file(file));
            if (*optimal) {
                const auto b = acra::optimal_budget(g);
                return emit({{"optimalBudget", b ? Json(*b) : Json(nullptr)}}, b ? kOk : kNegative);
            }
            const auto sol = acra::solve_game_n(g, budget);
            return emit({{"winning", sol.winning}, {"budget", budget}, {"strategy", strategy_json(g, sol)}},
                        sol.winning ? kOk : kNegative);
        }
        if (*g_dfa) {
            std::vector<acra::Dfa> dfas;
            for (const auto& f : files) {
                dfas.push_back(acra::dfa_from_json(acra::read_json_file(f)));
            }
            return emit(acra::acra_to_json(acra::separation_gadget(dfas)));
        }
        if (*g_atm) {
            return emit(acra::game_to_json(acra::atm_game_gadget(acra::alt_tm_from_json(acra::read_json_file(file)))));
        }
        if (*g_tc) {
            return emit(
                acra::game_to_json(acra::two_counter_gadget(acra::two_counter_from_json(acra::read_json_file(file)))));
        }
        if (*o_dfa) {
            std::vector<acra::Dfa> dfas;
            for (const auto& f : files) {
                dfas.push_back(acra::dfa_from_json(acra::read_json_file(f)));
            }
            const auto w = acra::dfa_intersection_nonempty(dfas);
            Json j{{"nonempty", w.has_value()}};
            if (w) {
                Json syms = Json::array();
                for (int a : *w) {
                    syms.push_back(dfas[0].alphabet[a]);
                }
                j["witness"] = std::move(syms);
            }
            return emit(j, w ? kOk : kNegative);
        }
        if (*o_atm) {
            const bool h = acra::atm_halts(acra::alt_tm_from_json(acra::read_json_file(file)));
            return emit({{"halts", h}}, h ? kOk : kNegative);
        }
    } catch (const acra::ValidationError& e) {
        for (const auto& msg : e.errors()) {
            std::cerr << "error: " << msg << '\n';
        }
        return kInputError;
    } catch (const acra::DeepeningExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNegative;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
