// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <deque>
#include <map>
#include <stdexcept>

#include "acra/sepgraph.hpp"

namespace acra {

namespace {

bool is_identity(const std::vector<RegId>& f) {
    for (RegId r = 0; r < static_cast<RegId>(f.size()); ++r) {
        if (f[r] != r) {
            return false;
        }
    }
    return true;
}

std::vector<RegId> compose_maps(const std::vector<RegId>& g, const std::vector<RegId>& f) {
    std::vector<RegId> out(f.size());
    for (std::size_t r = 0; r < f.size(); ++r) {
        out[r] = g[f[r]];
    }
    return out;
}

// Shortest suffix from q whose summary is (r, c) for some c.
Word extracting_suffix(const Acra& acra, StateId q, RegId r) {
    using Key = std::pair<StateId, RegId>;
    std::map<Key, std::pair<Key, SymbolId>> parent;
    std::deque<Key> queue{{q, r}};
    parent[{q, r}] = {{-1, -1}, -1};
    while (!queue.empty()) {
        const Key cur = queue.front();
        queue.pop_front();
        const auto& [p, t] = cur;
        if (acra.accepting(p) && acra.output(p)->source == t) {
            Word w;
            for (Key k = cur; parent[k].second >= 0; k = parent[k].first) {
                w.push_back(parent[k].second);
            }
            return Word(w.rbegin(), w.rend());
        }
        for (SymbolId a = 0; a < acra.num_symbols(); ++a) {
            for (RegId s = 0; s < acra.num_registers(); ++s) {
                if (acra.update(p, a, s).source != t) {
                    continue;
                }
                const Key nk{acra.next(p, a), s};
                if (parent.emplace(nk, std::pair{cur, a}).second) {
                    queue.push_back(nk);
                }
            }
        }
    }
    throw std::logic_error("clique register is not live");
}

Word repeat(const Word& w, int times) {
    Word out;
    for (int i = 0; i < times; ++i) {
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

} // namespace

Word pumped_word(const PumpWitness& w, const std::vector<int>& exponents, std::size_t suffix) {
    Word out = w.prefixes.at(0);
    for (std::size_t j = 0; j < w.cycles.size(); ++j) {
        const Word block = repeat(w.cycles[j], exponents.at(j));
        out.insert(out.end(), block.begin(), block.end());
        out.insert(out.end(), w.prefixes[j + 1].begin(), w.prefixes[j + 1].end());
    }
    out.insert(out.end(), w.suffixes.at(suffix).begin(), w.suffixes.at(suffix).end());
    return out;
}

PumpWitness pump_witness(const Acra& acra, int k) {
    SeparationGraph graph;
    const auto found = k_separable(acra, k, &graph);
    if (!found) {
        throw std::invalid_argument("machine is not k-separable");
    }
    PumpWitness w;
    w.state = found->state;
    w.clique = found->clique;
    w.prefixes.emplace_back();
    StateId at = acra.initial();
    for (const SepStep& s : graph.path_to(found->node)) {
        if (s.kind == SepStep::Kind::Renaming) {
            w.prefixes.back().insert(w.prefixes.back().end(), s.word.begin(), s.word.end());
            at = compose(acra, at, s.word).end;
            continue;
        }
        // A cycle whose source map is not the identity is replaced by the
        // power tau^p with idempotent map; one copy moves into the prefix so
        // every further repetition adds a constant to the fixed registers.
        const ComposedUpdate c = compose(acra, at, s.word);
        std::vector<RegId> f(acra.num_registers());
        for (RegId r = 0; r < acra.num_registers(); ++r) {
            f[r] = c.updates[r].source;
        }
        Word tau = s.word;
        if (!is_identity(f)) {
            int p = 1;
            std::vector<RegId> g = f;
            while (compose_maps(g, g) != g) {
                g = compose_maps(g, f);
                ++p;
            }
            tau = repeat(s.word, p);
            w.prefixes.back().insert(w.prefixes.back().end(), tau.begin(), tau.end());
        }
        w.cycles.push_back(std::move(tau));
        w.prefixes.emplace_back();
    }
    for (RegId r : w.clique) {
        w.suffixes.push_back(extracting_suffix(acra, w.state, r));
    }

    const std::size_t m = w.cycles.size();
    std::vector<int> zero(m, 0);
    for (std::size_t i = 0; i < w.suffixes.size(); ++i) {
        const auto base = evaluate(acra, pumped_word(w, zero, i));
        if (!base) {
            throw std::logic_error("pumped word leaves the domain");
        }
        w.intercepts.push_back(*base);
        std::vector<Int> row;
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<int> unit(m, 0);
            unit[j] = 1;
            const auto v = evaluate(acra, pumped_word(w, unit, i));
            if (!v) {
                throw std::logic_error("pumped word leaves the domain");
            }
            row.push_back(*v - *base);
        }
        w.coefficients.push_back(std::move(row));
    }
    return w;
}

bool verify_pump_witness(const Acra& acra, const PumpWitness& w, const std::vector<std::vector<int>>& samples) {
    const std::size_t k = w.suffixes.size();
    if (w.coefficients.size() != k || w.intercepts.size() != k || w.prefixes.size() != w.cycles.size() + 1) {
        return false;
    }
    for (const auto& cycle : w.cycles) {
        if (cycle.empty()) {
            return false;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (w.coefficients[i] == w.coefficients[j]) {
                return false;
            }
        }
    }
    for (const auto& x : samples) {
        if (x.size() != w.cycles.size()) {
            return false;
        }
        for (std::size_t i = 0; i < k; ++i) {
            Int expected = w.intercepts[i];
            for (std::size_t j = 0; j < x.size(); ++j) {
                expected += w.coefficients[i][j] * x[j];
            }
            const auto got = evaluate(acra, pumped_word(w, x, i));
            if (!got || *got != expected) {
                return false;
            }
        }
    }
    return true;
}

} // namespace acra
