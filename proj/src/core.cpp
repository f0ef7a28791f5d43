// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/core.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace acra {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::ostringstream os;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        os << (i ? "; " : "") << errors[i];
    }
    return os.str();
}

template <typename T>
std::optional<int> find_name(const std::vector<T>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - names.begin());
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

Acra::Acra(std::vector<std::string> states, std::vector<std::string> alphabet, std::vector<std::string> registers,
           StateId initial)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), registers_(std::move(registers)), initial_(initial) {
    const std::size_t n = states_.size() * alphabet_.size();
    delta_.resize(n);
    mu_.resize(n * registers_.size());
    output_.resize(states_.size());
    // Default: self-loops with identity updates.
    for (StateId q = 0; q < num_states(); ++q) {
        for (SymbolId a = 0; a < num_symbols(); ++a) {
            set_transition(q, a, q);
        }
    }
}

std::optional<StateId> Acra::find_state(const std::string& name) const { return find_name(states_, name); }
std::optional<SymbolId> Acra::find_symbol(const std::string& name) const { return find_name(alphabet_, name); }
std::optional<RegId> Acra::find_register(const std::string& name) const { return find_name(registers_, name); }

void Acra::set_transition(StateId q, SymbolId a, StateId target) {
    delta_[index(q, a)] = target;
    for (RegId r = 0; r < num_registers(); ++r) {
        mu_[index(q, a) * registers_.size() + r] = UpdateExpr{r, 0};
    }
}

void Acra::set_update(StateId q, SymbolId a, RegId r, UpdateExpr e) {
    mu_[index(q, a) * registers_.size() + r] = std::move(e);
}

void Acra::set_output(StateId q, std::optional<OutputExpr> out) { output_[q] = std::move(out); }

void check_well_formed(const Acra& acra) {
    std::vector<std::string> errors;
    auto check_unique = [&](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second) {
                errors.push_back(std::string("duplicate ") + what + " \"" + n + "\"");
            }
        }
    };
    check_unique(acra.state_names(), "state");
    check_unique(acra.symbol_names(), "symbol");
    check_unique(acra.register_names(), "register");
    if (acra.num_states() == 0) {
        errors.emplace_back("no states");
    }
    if (acra.initial() < 0 || acra.initial() >= acra.num_states()) {
        errors.emplace_back("undeclared initial state");
    }
    bool any_accepting = false;
    for (StateId q = 0; q < acra.num_states(); ++q) {
        if (acra.accepting(q)) {
            any_accepting = true;
            const RegId src = acra.output(q)->source;
            if (src < 0 || src >= acra.num_registers()) {
                errors.push_back("undeclared register in output of " + acra.state_name(q));
            }
        }
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId t = acra.next(q, a);
            if (t < 0 || t >= acra.num_states()) {
                errors.push_back("undeclared state as target of " + acra.state_name(q));
            }
            for (RegId r = 0; r < acra.num_registers(); ++r) {
                const RegId src = acra.update(q, a, r).source;
                if (src < 0 || src >= acra.num_registers()) {
                    errors.push_back("undeclared register in update of " + acra.state_name(q));
                }
            }
        }
    }
    if (!any_accepting) {
        errors.emplace_back("empty accepting set");
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

Config initial_config(const Acra& acra) {
    return Config{acra.initial(), Valuation(static_cast<std::size_t>(acra.num_registers()), Int(0))};
}

Config step(const Acra& acra, const Config& config, SymbolId symbol) {
    if (symbol < 0 || symbol >= acra.num_symbols()) {
        throw std::invalid_argument("symbol not in alphabet");
    }
    Config out;
    out.state = acra.next(config.state, symbol);
    out.valuation.resize(config.valuation.size());
    for (RegId r = 0; r < acra.num_registers(); ++r) {
        const UpdateExpr& e = acra.update(config.state, symbol, r);
        out.valuation[r] = config.valuation[e.source] + e.offset;
    }
    return out;
}

Config run(const Acra& acra, const Word& input) {
    Config c = initial_config(acra);
    for (SymbolId a : input) {
        c = step(acra, c, a);
    }
    return c;
}

std::optional<Int> output_value(const Acra& acra, const Config& config) {
    const auto& out = acra.output(config.state);
    if (!out) {
        return std::nullopt;
    }
    return config.valuation[out->source] + out->offset;
}

std::optional<Int> evaluate(const Acra& acra, const Word& input) { return output_value(acra, run(acra, input)); }

Acra trim(const Acra& acra) {
    std::vector<bool> reached(acra.num_states(), false);
    std::deque<StateId> queue{acra.initial()};
    reached[acra.initial()] = true;
    while (!queue.empty()) {
        const StateId q = queue.front();
        queue.pop_front();
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId t = acra.next(q, a);
            if (!reached[t]) {
                reached[t] = true;
                queue.push_back(t);
            }
        }
    }
    std::vector<StateId> renumber(acra.num_states(), -1);
    std::vector<std::string> names;
    bool any_accepting = false;
    for (StateId q = 0; q < acra.num_states(); ++q) {
        if (reached[q]) {
            renumber[q] = static_cast<StateId>(names.size());
            names.push_back(acra.state_name(q));
            any_accepting = any_accepting || acra.accepting(q);
        }
    }
    if (!any_accepting) {
        throw EmptyDomainError();
    }
    Acra out(names, acra.symbol_names(), acra.register_names(), renumber[acra.initial()]);
    for (StateId q = 0; q < acra.num_states(); ++q) {
        if (!reached[q]) {
            continue;
        }
        const StateId nq = renumber[q];
        out.set_output(nq, acra.output(q));
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            out.set_transition(nq, a, renumber[acra.next(q, a)]);
            for (RegId r = 0; r < acra.num_registers(); ++r) {
                out.set_update(nq, a, r, acra.update(q, a, r));
            }
        }
    }
    return out;
}

ComposedUpdate compose(const Acra& acra, StateId q, const Word& word) {
    ComposedUpdate c;
    c.end = q;
    c.updates.resize(acra.num_registers());
    for (RegId r = 0; r < acra.num_registers(); ++r) {
        c.updates[r] = UpdateExpr{r, 0};
    }
    for (SymbolId a : word) {
        std::vector<UpdateExpr> next(c.updates.size());
        for (RegId r = 0; r < acra.num_registers(); ++r) {
            const UpdateExpr& e = acra.update(c.end, a, r);
            next[r] = UpdateExpr{c.updates[e.source].source, c.updates[e.source].offset + e.offset};
        }
        c.updates = std::move(next);
        c.end = acra.next(c.end, a);
    }
    return c;
}

SuffixSummary suffix_summary(const Acra& acra, StateId q, const Word& suffix) {
    const ComposedUpdate c = compose(acra, q, suffix);
    const auto& out = acra.output(c.end);
    if (!out) {
        return std::nullopt;
    }
    const UpdateExpr& e = c.updates[out->source];
    return UpdateExpr{e.source, e.offset + out->offset};
}

std::vector<std::set<RegId>> live_registers(const Acra& acra) {
    std::vector<std::set<RegId>> live(acra.num_states());
    // Work-list over (state, register) facts.
    std::deque<std::pair<StateId, RegId>> work;
    for (StateId q = 0; q < acra.num_states(); ++q) {
        if (acra.accepting(q) && live[q].insert(acra.output(q)->source).second) {
            work.emplace_back(q, acra.output(q)->source);
        }
    }
    std::vector<std::vector<std::pair<StateId, SymbolId>>> preds(acra.num_states());
    for (StateId p = 0; p < acra.num_states(); ++p) {
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            preds[acra.next(p, a)].emplace_back(p, a);
        }
    }
    while (!work.empty()) {
        const auto [q, u] = work.front();
        work.pop_front();
        for (const auto& [p, a] : preds[q]) {
            const RegId v = acra.update(p, a, u).source;
            if (live[p].insert(v).second) {
                work.emplace_back(p, v);
            }
        }
    }
    return live;
}

RegId representative_live(const std::set<RegId>& live) { return live.empty() ? 0 : *live.begin(); }

Acra normalize_live(const Acra& acra) {
    const auto live = live_registers(acra);
    Acra out = acra;
    for (StateId p = 0; p < acra.num_states(); ++p) {
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            const StateId q = acra.next(p, a);
            const UpdateExpr rep = acra.update(p, a, representative_live(live[q]));
            for (RegId r = 0; r < acra.num_registers(); ++r) {
                if (!live[q].count(r)) {
                    out.set_update(p, a, r, rep);
                }
            }
        }
    }
    return out;
}

Acra prepare(const Acra& acra) { return normalize_live(trim(acra)); }

Word word_from_index(std::uint64_t index, int len, int num_symbols) {
    Word w(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        w[i] = static_cast<SymbolId>(index % static_cast<std::uint64_t>(num_symbols));
        index /= static_cast<std::uint64_t>(num_symbols);
    }
    return w;
}

std::string format_word(const Acra& acra, const Word& w, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) {
            s += sep;
        }
        s += acra.symbol_name(w[i]);
    }
    return s;
}

} // namespace acra
