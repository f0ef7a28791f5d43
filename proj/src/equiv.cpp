// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#include <limits>
#include <stdexcept>

#include "acra/core.hpp"

namespace acra {

namespace {

// Maps symbols of `a` onto the same-named symbols of `b`.
std::vector<SymbolId> align_alphabets(const Acra& a, const Acra& b) {
    if (a.num_symbols() != b.num_symbols()) {
        throw std::invalid_argument("alphabets differ");
    }
    std::vector<SymbolId> map(a.num_symbols());
    for (SymbolId s = 0; s < a.num_symbols(); ++s) {
        const auto t = b.find_symbol(a.symbol_name(s));
        if (!t) {
            throw std::invalid_argument("alphabets differ");
        }
        map[s] = *t;
    }
    return map;
}

std::uint64_t count_words(int num_symbols, int len) {
    std::uint64_t n = 1;
    for (int i = 0; i < len; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(num_symbols)) {
            throw std::invalid_argument("bounded equivalence length too large");
        }
        n *= static_cast<std::uint64_t>(num_symbols);
    }
    return n;
}

bool agree_on(const Acra& a, const Acra& b, const std::vector<SymbolId>& map, const Word& w) {
    Word wb(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        wb[i] = map[w[i]];
    }
    return evaluate(a, w) == evaluate(b, wb);
}

} // namespace

std::optional<Word> bounded_equiv_serial(const Acra& a, const Acra& b, int max_len) {
    const auto map = align_alphabets(a, b);
    const int s = a.num_symbols();
    for (int len = 0; len <= max_len; ++len) {
        const std::uint64_t n = s == 0 ? (len == 0 ? 1 : 0) : count_words(s, len);
        for (std::uint64_t i = 0; i < n; ++i) {
            Word w = word_from_index(i, len, s);
            if (!agree_on(a, b, map, w)) {
                return w;
            }
        }
    }
    return std::nullopt;
}

std::optional<Word> bounded_equiv(const Acra& a, const Acra& b, int max_len) {
    const auto map = align_alphabets(a, b);
    const int s = a.num_symbols();
    for (int len = 0; len <= max_len; ++len) {
        const std::uint64_t n = s == 0 ? (len == 0 ? 1 : 0) : count_words(s, len);
        std::uint64_t first = n;
        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64) reduction(min : first)
        for (std::int64_t i = 0; i < count; ++i) {
            const auto idx = static_cast<std::uint64_t>(i);
            if (idx < first && !agree_on(a, b, map, word_from_index(idx, len, s))) {
                first = idx;
            }
        }
        if (first < n) {
            return word_from_index(first, len, s);
        }
    }
    return std::nullopt;
}

} // namespace acra
