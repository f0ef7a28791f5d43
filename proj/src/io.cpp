// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include "acra/io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace acra {

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

Json int_to_json(const Int& x) {
    if (fits_int64(x)) {
        return static_cast<std::int64_t>(x);
    }
    return to_string(x);
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) {
        return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
        if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) {
            return Int(s);
        }
    }
    throw ValidationError({"expected an integer, got " + j.dump()});
}

namespace {

// Collects errors while reading one description so the caller sees all of them.
class Reader {
  public:
    std::vector<std::string> errors;

    const Json* field(const Json& obj, const char* key, bool required = true) {
        if (!obj.is_object()) {
            errors.emplace_back("expected an object, got " + obj.dump());
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) {
                errors.push_back(std::string("missing field \"") + key + "\"");
            }
            return nullptr;
        }
        return &*it;
    }

    std::vector<std::string> names(const Json& obj, const char* key) {
        std::vector<std::string> out;
        const Json* arr = field(obj, key);
        if (!arr) {
            return out;
        }
        if (!arr->is_array()) {
            errors.push_back(std::string("\"") + key + "\" must be a list");
            return out;
        }
        for (const auto& e : *arr) {
            if (e.is_string()) {
                out.push_back(e.get<std::string>());
            } else {
                errors.push_back(std::string("non-string entry in \"") + key + "\"");
            }
        }
        return out;
    }

    std::string str(const Json& obj, const char* key) {
        const Json* v = field(obj, key);
        if (v && v->is_string()) {
            return v->get<std::string>();
        }
        if (v) {
            errors.push_back(std::string("\"") + key + "\" must be a string");
        }
        return {};
    }

    std::optional<Int> integer(const Json& obj, const char* key, bool required = true) {
        const Json* v = field(obj, key, required);
        if (!v) {
            return std::nullopt;
        }
        try {
            return int_from_json(*v);
        } catch (const ValidationError& e) {
            errors.push_back(std::string("\"") + key + "\": " + e.errors().front());
            return std::nullopt;
        }
    }

    int index(const std::map<std::string, int>& table, const std::string& name, const char* what) {
        auto it = table.find(name);
        if (it == table.end()) {
            errors.push_back(std::string("undeclared ") + what + " \"" + name + "\"");
            return -1;
        }
        return it->second;
    }

    void expect_type(const Json& j, const std::string& type) {
        const Json* t = field(j, "type");
        if (t && (!t->is_string() || t->get<std::string>() != type)) {
            errors.push_back("expected \"type\":\"" + type + "\"");
        }
    }

    void finish() {
        if (!errors.empty()) {
            throw ValidationError(errors);
        }
    }
};

std::map<std::string, int> table(const std::vector<std::string>& names, const char* what,
                                 std::vector<std::string>& errors) {
    std::map<std::string, int> t;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) {
        if (!t.emplace(names[i], i).second) {
            errors.push_back(std::string("duplicate ") + what + " \"" + names[i] + "\"");
        }
    }
    return t;
}

// Shared between machines and games: the state list with outputs.
struct StateList {
    std::vector<std::string> names;
    std::vector<std::optional<UpdateExpr>> outputs;
};

std::optional<UpdateExpr> read_expr(Reader& r, const Json& e, const std::map<std::string, int>& regs) {
    const std::string reg = r.str(e, "reg");
    const auto off = r.integer(e, "offset", false);
    const int src = r.index(regs, reg, "register");
    if (src < 0) {
        return std::nullopt;
    }
    return UpdateExpr{src, off.value_or(0)};
}

StateList read_states(Reader& r, const Json& j, const std::map<std::string, int>& regs) {
    StateList s;
    const Json* arr = r.field(j, "states");
    if (!arr) {
        return s;
    }
    if (!arr->is_array()) {
        r.errors.emplace_back("\"states\" must be a list");
        return s;
    }
    for (const auto& st : *arr) {
        s.names.push_back(r.str(st, "name"));
        const Json* acc = r.field(st, "accepting", false);
        const bool accepting = acc && acc->is_boolean() && acc->get<bool>();
        if (acc && !acc->is_boolean()) {
            r.errors.push_back("\"accepting\" must be a boolean in state " + s.names.back());
        }
        const Json* out = r.field(st, "output", false);
        if (accepting != (out != nullptr)) {
            r.errors.push_back("state " + s.names.back() + ": \"output\" must be present exactly when accepting");
        }
        s.outputs.push_back(out ? read_expr(r, *out, regs) : std::nullopt);
    }
    return s;
}

std::vector<UpdateExpr> read_updates(Reader& r, const Json& t, const std::map<std::string, int>& regs) {
    std::vector<UpdateExpr> upd(regs.size());
    for (int i = 0; i < static_cast<int>(upd.size()); ++i) {
        upd[i] = UpdateExpr{i, 0};
    }
    const Json* u = r.field(t, "updates", false);
    if (!u) {
        return upd;
    }
    if (!u->is_object()) {
        r.errors.emplace_back("\"updates\" must be an object");
        return upd;
    }
    for (const auto& [name, e] : u->items()) {
        const int dst = r.index(regs, name, "register");
        auto expr = read_expr(r, e, regs);
        if (dst >= 0 && expr) {
            upd[dst] = *expr;
        }
    }
    return upd;
}

Json expr_to_json(const std::vector<std::string>& regs, const UpdateExpr& e) {
    return Json{{"reg", regs[e.source]}, {"offset", int_to_json(e.offset)}};
}

Json states_to_json(const std::vector<std::string>& names, const std::vector<std::string>& regs,
                    const std::function<const std::optional<UpdateExpr>&(int)>& output) {
    Json arr = Json::array();
    for (int q = 0; q < static_cast<int>(names.size()); ++q) {
        Json s{{"name", names[q]}, {"accepting", output(q).has_value()}};
        if (output(q)) {
            s["output"] = expr_to_json(regs, *output(q));
        }
        arr.push_back(std::move(s));
    }
    return arr;
}

Json updates_to_json(const std::vector<std::string>& regs, const std::function<const UpdateExpr&(int)>& update) {
    Json u = Json::object();
    for (int r = 0; r < static_cast<int>(regs.size()); ++r) {
        const auto& e = update(r);
        if (e.source != r || e.offset != 0) {
            u[regs[r]] = expr_to_json(regs, e);
        }
    }
    return u;
}

} // namespace

Acra acra_from_json(const Json& j) {
    Reader r;
    r.expect_type(j, "acra");
    const auto alphabet = r.names(j, "alphabet");
    const auto registers = r.names(j, "registers");
    const auto syms = table(alphabet, "symbol", r.errors);
    const auto regs = table(registers, "register", r.errors);
    StateList st = read_states(r, j, regs);
    const auto states = table(st.names, "state", r.errors);
    const int q0 = r.index(states, r.str(j, "initial"), "state");
    if (st.names.empty()) {
        r.errors.emplace_back("no states");
    }
    r.finish();

    Acra m(st.names, alphabet, registers, q0);
    bool any_accepting = false;
    for (int q = 0; q < m.num_states(); ++q) {
        m.set_output(q, st.outputs[q]);
        any_accepting = any_accepting || st.outputs[q].has_value();
    }
    if (!any_accepting) {
        r.errors.emplace_back("empty accepting set");
    }
    std::vector<char> seen(static_cast<std::size_t>(m.num_states()) * m.num_symbols(), 0);
    const Json* trans = r.field(j, "transitions");
    if (trans && trans->is_array()) {
        for (const auto& t : *trans) {
            const int from = r.index(states, r.str(t, "from"), "state");
            const int a = r.index(syms, r.str(t, "symbol"), "symbol");
            const int to = r.index(states, r.str(t, "to"), "state");
            auto upd = read_updates(r, t, regs);
            if (from < 0 || a < 0 || to < 0) {
                continue;
            }
            char& s = seen[static_cast<std::size_t>(from) * m.num_symbols() + a];
            if (s) {
                r.errors.push_back("duplicate transition from " + st.names[from] + " on " + alphabet[a]);
                continue;
            }
            s = 1;
            m.set_transition(from, a, to);
            for (int x = 0; x < m.num_registers(); ++x) {
                m.set_update(from, a, x, upd[x]);
            }
        }
    } else if (trans) {
        r.errors.emplace_back("\"transitions\" must be a list");
    }
    for (int q = 0; q < m.num_states(); ++q) {
        for (int a = 0; a < m.num_symbols(); ++a) {
            if (!seen[static_cast<std::size_t>(q) * m.num_symbols() + a]) {
                r.errors.push_back("non-total delta: no transition from " + st.names[q] + " on " + alphabet[a]);
            }
        }
    }
    r.finish();
    check_well_formed(m);
    return m;
}

Json acra_to_json(const Acra& m) {
    Json j;
    j["type"] = "acra";
    j["alphabet"] = m.symbol_names();
    j["registers"] = m.register_names();
    j["states"] = states_to_json(m.state_names(), m.register_names(),
                                 [&](int q) -> const std::optional<UpdateExpr>& { return m.output(q); });
    j["initial"] = m.state_name(m.initial());
    Json trans = Json::array();
    for (StateId q = 0; q < m.num_states(); ++q) {
        for (SymbolId a = 0; a < m.num_symbols(); ++a) {
            Json t{{"from", m.state_name(q)}, {"symbol", m.symbol_name(a)}, {"to", m.state_name(m.next(q, a))}};
            Json u = updates_to_json(m.register_names(), [&](int r) -> const UpdateExpr& { return m.update(q, a, r); });
            if (!u.empty()) {
                t["updates"] = std::move(u);
            }
            trans.push_back(std::move(t));
        }
    }
    j["transitions"] = std::move(trans);
    return j;
}

AcraGame game_from_json(const Json& j) {
    Reader r;
    r.expect_type(j, "acra-game");
    AcraGame g;
    g.alphabet = r.names(j, "alphabet");
    g.registers = r.names(j, "registers");
    const auto syms = table(g.alphabet, "symbol", r.errors);
    const auto regs = table(g.registers, "register", r.errors);
    StateList st = read_states(r, j, regs);
    g.states = st.names;
    g.outputs = st.outputs;
    const auto states = table(g.states, "state", r.errors);
    g.initial = r.index(states, r.str(j, "initial"), "state");
    const std::string domain = r.str(j, "domain");
    if (domain == "N") {
        g.domain = Domain::Natural;
    } else if (domain == "Z") {
        g.domain = Domain::Integer;
    } else {
        r.errors.emplace_back("\"domain\" must be \"N\" or \"Z\"");
    }
    const Json* trans = r.field(j, "transitions");
    if (trans && trans->is_array()) {
        for (const auto& t : *trans) {
            AcraGame::Transition tr;
            tr.from = r.index(states, r.str(t, "from"), "state");
            tr.symbol = r.index(syms, r.str(t, "symbol"), "symbol");
            tr.to = r.index(states, r.str(t, "to"), "state");
            tr.updates = read_updates(r, t, regs);
            g.transitions.push_back(std::move(tr));
        }
    } else if (trans) {
        r.errors.emplace_back("\"transitions\" must be a list");
    }
    r.finish();
    check_game(g);
    return g;
}

Json game_to_json(const AcraGame& g) {
    Json j;
    j["type"] = "acra-game";
    j["domain"] = g.domain == Domain::Natural ? "N" : "Z";
    j["alphabet"] = g.alphabet;
    j["registers"] = g.registers;
    j["states"] = states_to_json(g.states, g.registers,
                                 [&](int q) -> const std::optional<UpdateExpr>& { return g.outputs[q]; });
    j["initial"] = g.states[g.initial];
    Json trans = Json::array();
    for (const auto& t : g.transitions) {
        Json e{{"from", g.states[t.from]}, {"symbol", g.alphabet[t.symbol]}, {"to", g.states[t.to]}};
        Json u = updates_to_json(g.registers, [&](int x) -> const UpdateExpr& { return t.updates[x]; });
        if (!u.empty()) {
            e["updates"] = std::move(u);
        }
        trans.push_back(std::move(e));
    }
    j["transitions"] = std::move(trans);
    return j;
}

Dfa dfa_from_json(const Json& j) {
    Reader r;
    r.expect_type(j, "dfa");
    Dfa d;
    d.alphabet = r.names(j, "alphabet");
    d.states = r.names(j, "states");
    const auto syms = table(d.alphabet, "symbol", r.errors);
    const auto states = table(d.states, "state", r.errors);
    d.initial = r.index(states, r.str(j, "initial"), "state");
    d.accepting = r.index(states, r.str(j, "accepting"), "state");
    d.delta.assign(d.states.size() * d.alphabet.size(), -1);
    const Json* trans = r.field(j, "transitions");
    if (trans && trans->is_array()) {
        for (const auto& t : *trans) {
            const int from = r.index(states, r.str(t, "from"), "state");
            const int a = r.index(syms, r.str(t, "symbol"), "symbol");
            const int to = r.index(states, r.str(t, "to"), "state");
            if (from >= 0 && a >= 0 && to >= 0) {
                int& slot = d.delta[static_cast<std::size_t>(from) * d.alphabet.size() + a];
                if (slot >= 0) {
                    r.errors.push_back("duplicate transition from " + d.states[from] + " on " + d.alphabet[a]);
                }
                slot = to;
            }
        }
    }
    r.finish();
    check_dfa(d);
    return d;
}

Json dfa_to_json(const Dfa& d) {
    Json trans = Json::array();
    for (int q = 0; q < d.num_states(); ++q) {
        for (int a = 0; a < d.num_symbols(); ++a) {
            trans.push_back({{"from", d.states[q]}, {"symbol", d.alphabet[a]}, {"to", d.states[d.next(q, a)]}});
        }
    }
    return Json{{"type", "dfa"},           {"alphabet", d.alphabet},
                {"states", d.states},      {"initial", d.states[d.initial]},
                {"accepting", d.states[d.accepting]}, {"transitions", std::move(trans)}};
}

AltTm alt_tm_from_json(const Json& j) {
    Reader r;
    r.expect_type(j, "alt-tm");
    AltTm tm;
    if (auto n = r.integer(j, "tapeLength")) {
        tm.tape_length = *n >= 1 && *n <= 20 ? static_cast<int>(*n) : 0;
    }
    const Json* arr = r.field(j, "states");
    if (arr && arr->is_array()) {
        for (const auto& s : *arr) {
            tm.states.push_back(r.str(s, "name"));
            const std::string kind = r.str(s, "kind");
            if (kind != "or" && kind != "and") {
                r.errors.push_back("state " + tm.states.back() + ": \"kind\" must be \"or\" or \"and\"");
            }
            tm.kinds.push_back(kind == "and" ? AltTm::Kind::And : AltTm::Kind::Or);
            const Json* acc = r.field(s, "accepting", false);
            tm.accepting.push_back(acc && acc->is_boolean() && acc->get<bool>() ? 1 : 0);
        }
    }
    const auto states = table(tm.states, "state", r.errors);
    tm.initial = r.index(states, r.str(j, "initial"), "state");
    tm.delta.assign(tm.states.size() * 4, AltTm::Action{-1, 0, 1});
    std::vector<char> seen(tm.delta.size(), 0);
    const Json* trans = r.field(j, "transitions");
    if (trans && trans->is_array()) {
        for (const auto& t : *trans) {
            const int from = r.index(states, r.str(t, "from"), "state");
            const int to = r.index(states, r.str(t, "to"), "state");
            const auto read = r.integer(t, "read");
            const auto move = r.integer(t, "move");
            const auto write = r.integer(t, "write");
            const std::string dir = r.str(t, "dir");
            if (from < 0 || to < 0 || !read || !move || !write) {
                continue;
            }
            if ((*read != 0 && *read != 1) || (*move != 1 && *move != 2) || (*write != 0 && *write != 1) ||
                (dir != "L" && dir != "R")) {
                r.errors.push_back("malformed transition from " + tm.states[from]);
                continue;
            }
            const auto slot = (static_cast<std::size_t>(from) * 2 + static_cast<int>(*read)) * 2 +
                              (static_cast<int>(*move) - 1);
            if (seen[slot]) {
                r.errors.push_back("duplicate transition from " + tm.states[from]);
            }
            seen[slot] = 1;
            tm.delta[slot] = AltTm::Action{to, static_cast<int>(*write), dir == "L" ? -1 : 1};
        }
    }
    for (std::size_t s = 0; s < seen.size(); ++s) {
        if (!seen[s]) {
            r.errors.push_back("non-total delta: state " + tm.states[s / 4] + " lacks (read " +
                               std::to_string((s / 2) % 2) + ", move " + std::to_string(s % 2 + 1) + ")");
        }
    }
    r.finish();
    check_alt_tm(tm);
    return tm;
}

Json alt_tm_to_json(const AltTm& tm) {
    Json states = Json::array();
    Json trans = Json::array();
    for (int q = 0; q < tm.num_states(); ++q) {
        states.push_back({{"name", tm.states[q]},
                          {"kind", tm.kinds[q] == AltTm::Kind::And ? "and" : "or"},
                          {"accepting", static_cast<bool>(tm.accepting[q])}});
        for (int read = 0; read <= 1; ++read) {
            for (int move = 1; move <= 2; ++move) {
                const auto& a = tm.action(q, read, move);
                trans.push_back({{"from", tm.states[q]},
                                 {"read", read},
                                 {"move", move},
                                 {"to", tm.states[a.next]},
                                 {"write", a.write},
                                 {"dir", a.dir < 0 ? "L" : "R"}});
            }
        }
    }
    return Json{{"type", "alt-tm"},
                {"tapeLength", tm.tape_length},
                {"states", std::move(states)},
                {"initial", tm.states[tm.initial]},
                {"transitions", std::move(trans)}};
}

TwoCounterProgram two_counter_from_json(const Json& j) {
    Reader r;
    r.expect_type(j, "two-counter");
    TwoCounterProgram prog;
    const Json* arr = r.field(j, "program");
    if (arr && arr->is_array()) {
        for (const auto& ins : *arr) {
            TwoCounterInstr in;
            const std::string op = r.str(ins, "op");
            if (op == "inc" || op == "dec" || op == "branch") {
                in.op = op == "inc" ? TwoCounterInstr::Op::Inc
                        : op == "dec" ? TwoCounterInstr::Op::Dec
                                      : TwoCounterInstr::Op::Branch;
                in.counter = static_cast<int>(r.integer(ins, "counter").value_or(0));
            } else if (op == "halt") {
                in.op = TwoCounterInstr::Op::Halt;
            } else {
                r.errors.push_back("unknown instruction \"" + op + "\"");
            }
            if (in.op == TwoCounterInstr::Op::Branch) {
                in.if_nonneg = static_cast<int>(r.integer(ins, "ifNonneg").value_or(0));
                in.if_negative = static_cast<int>(r.integer(ins, "ifNegative").value_or(0));
            }
            prog.push_back(in);
        }
    } else if (arr) {
        r.errors.emplace_back("\"program\" must be a list");
    }
    r.finish();
    check_two_counter(prog);
    return prog;
}

Json two_counter_to_json(const TwoCounterProgram& prog) {
    Json arr = Json::array();
    for (const auto& in : prog) {
        switch (in.op) {
        case TwoCounterInstr::Op::Inc: arr.push_back({{"op", "inc"}, {"counter", in.counter}}); break;
        case TwoCounterInstr::Op::Dec: arr.push_back({{"op", "dec"}, {"counter", in.counter}}); break;
        case TwoCounterInstr::Op::Branch:
            arr.push_back({{"op", "branch"},
                           {"counter", in.counter},
                           {"ifNonneg", in.if_nonneg},
                           {"ifNegative", in.if_negative}});
            break;
        case TwoCounterInstr::Op::Halt: arr.push_back({{"op", "halt"}}); break;
        }
    }
    return Json{{"type", "two-counter"}, {"program", std::move(arr)}};
}

Json wfi_to_json(const Acra& acra, const Wfi& d) {
    Json out = Json::array();
    for (const auto& c : d.disjuncts) {
        Json atoms = Json::array();
        for (RegId u = 0; u < c.size(); ++u) {
            for (RegId v = u + 1; v < c.size(); ++v) {
                const Bound b = c.bound(u, v);
                if (b.trivial()) {
                    continue;
                }
                atoms.push_back({{"pair", {acra.register_name(u), acra.register_name(v)}},
                                 {"lo", b.lo ? int_to_json(*b.lo) : Json("-inf")},
                                 {"hi", b.hi ? int_to_json(*b.hi) : Json("+inf")}});
            }
        }
        out.push_back(std::move(atoms));
    }
    return out;
}

Json invariants_to_json(const Acra& acra, const InvariantMap& invs) {
    Json out = Json::object();
    for (StateId q = 0; q < acra.num_states() && q < static_cast<int>(invs.size()); ++q) {
        out[acra.state_name(q)] = wfi_to_json(acra, invs[q]);
    }
    return out;
}

Json pump_witness_to_json(const Acra& acra, const PumpWitness& w) {
    auto words = [&](const std::vector<Word>& ws) {
        Json a = Json::array();
        for (const auto& x : ws) {
            Json syms = Json::array();
            for (SymbolId s : x) {
                syms.push_back(acra.symbol_name(s));
            }
            a.push_back(std::move(syms));
        }
        return a;
    };
    Json coeffs = Json::array();
    for (const auto& row : w.coefficients) {
        Json r = Json::array();
        for (const auto& c : row) {
            r.push_back(int_to_json(c));
        }
        coeffs.push_back(std::move(r));
    }
    Json intercepts = Json::array();
    for (const auto& d : w.intercepts) {
        intercepts.push_back(int_to_json(d));
    }
    Json clique = Json::array();
    for (RegId r : w.clique) {
        clique.push_back(acra.register_name(r));
    }
    return Json{{"state", acra.state_name(w.state)}, {"clique", std::move(clique)},
                {"prefixes", words(w.prefixes)},     {"cycles", words(w.cycles)},
                {"suffixes", words(w.suffixes)},     {"coefficients", std::move(coeffs)},
                {"intercepts", std::move(intercepts)}};
}

} // namespace acra
