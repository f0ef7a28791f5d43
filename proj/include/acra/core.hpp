// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acra/integer.hpp"

namespace acra {

using StateId = int;
using SymbolId = int;
using RegId = int;
using Word = std::vector<SymbolId>;
using Valuation = std::vector<Int>;

/// Raised when a description violates a well-formedness rule. Carries every
/// problem found, not just the first.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

/// Raised by trim when no accepting state is reachable.
class EmptyDomainError : public std::runtime_error {
  public:
    EmptyDomainError() : std::runtime_error("empty domain") {}
};

/// `source + offset`; used for both register updates and outputs.
struct UpdateExpr {
    RegId source = 0;
    Int offset = 0;

    bool operator==(const UpdateExpr&) const = default;
};
using OutputExpr = UpdateExpr;

struct Config {
    StateId state = 0;
    Valuation valuation;

    bool operator==(const Config&) const = default;
};

/// Undefined is represented by an empty optional.
using SuffixSummary = std::optional<UpdateExpr>;

/// A deterministic additive cost register automaton. Identifiers are dense
/// indices into the name tables; declaration order is the canonical order.
class Acra {
  public:
    Acra() = default;
    Acra(std::vector<std::string> states, std::vector<std::string> alphabet, std::vector<std::string> registers,
         StateId initial);

    int num_states() const { return static_cast<int>(states_.size()); }
    int num_symbols() const { return static_cast<int>(alphabet_.size()); }
    int num_registers() const { return static_cast<int>(registers_.size()); }

    const std::vector<std::string>& state_names() const { return states_; }
    const std::vector<std::string>& symbol_names() const { return alphabet_; }
    const std::vector<std::string>& register_names() const { return registers_; }
    const std::string& state_name(StateId q) const { return states_.at(q); }
    const std::string& symbol_name(SymbolId a) const { return alphabet_.at(a); }
    const std::string& register_name(RegId r) const { return registers_.at(r); }

    std::optional<StateId> find_state(const std::string& name) const;
    std::optional<SymbolId> find_symbol(const std::string& name) const;
    std::optional<RegId> find_register(const std::string& name) const;

    StateId initial() const { return initial_; }
    void set_initial(StateId q) { initial_ = q; }

    StateId next(StateId q, SymbolId a) const { return delta_[index(q, a)]; }
    const UpdateExpr& update(StateId q, SymbolId a, RegId r) const {
        return mu_[index(q, a) * registers_.size() + r];
    }
    bool accepting(StateId q) const { return output_[q].has_value(); }
    const std::optional<OutputExpr>& output(StateId q) const { return output_[q]; }

    /// Sets the target of (q,a) and resets its updates to the identity.
    void set_transition(StateId q, SymbolId a, StateId target);
    void set_update(StateId q, SymbolId a, RegId r, UpdateExpr e);
    void set_output(StateId q, std::optional<OutputExpr> out);

    bool operator==(const Acra&) const = default;

  private:
    std::size_t index(StateId q, SymbolId a) const { return static_cast<std::size_t>(q) * alphabet_.size() + a; }

    std::vector<std::string> states_;
    std::vector<std::string> alphabet_;
    std::vector<std::string> registers_;
    StateId initial_ = 0;
    std::vector<StateId> delta_;
    std::vector<UpdateExpr> mu_;
    std::vector<std::optional<OutputExpr>> output_;
};

/// Checks the structural invariants of an already-built machine and throws
/// ValidationError listing every violation.
void check_well_formed(const Acra& acra);

Config initial_config(const Acra& acra);

/// One transition; all updates read the pre-step valuation.
Config step(const Acra& acra, const Config& config, SymbolId symbol);

Config run(const Acra& acra, const Word& input);

std::optional<Int> evaluate(const Acra& acra, const Word& input);

/// Output value of a configuration, if its state is accepting.
std::optional<Int> output_value(const Acra& acra, const Config& config);

/// Restricts to states reachable from the initial state, keeping declaration
/// order. Throws EmptyDomainError if no accepting state is reachable.
Acra trim(const Acra& acra);

/// Composite effect of reading `word` from `q`: end state plus, for every
/// register, the register it was copied from at the start and the total offset.
struct ComposedUpdate {
    StateId end = 0;
    std::vector<UpdateExpr> updates;
};
ComposedUpdate compose(const Acra& acra, StateId q, const Word& word);

SuffixSummary suffix_summary(const Acra& acra, StateId q, const Word& suffix);

/// live[q] = registers whose value can reach the output from q.
std::vector<std::set<RegId>> live_registers(const Acra& acra);

/// Register copied into dead registers on entry to q: least live register, or
/// register 0 when nothing is live.
RegId representative_live(const std::set<RegId>& live);

/// Rewrites every transition into q so dead registers copy the representative
/// live register of q.
Acra normalize_live(const Acra& acra);

/// Trim followed by live normalization; the form every analysis expects.
Acra prepare(const Acra& acra);

/// All strings of length <= max_len compared; returns the length-lexicographic
/// least disagreement, or nothing if the machines agree. OpenMP-parallel over
/// strings of each length.
std::optional<Word> bounded_equiv(const Acra& a, const Acra& b, int max_len);

/// Serial reference for bounded_equiv.
std::optional<Word> bounded_equiv_serial(const Acra& a, const Acra& b, int max_len);

/// The i-th string of length `len` in lexicographic order.
Word word_from_index(std::uint64_t index, int len, int num_symbols);

std::string format_word(const Acra& acra, const Word& w, const std::string& sep = "");

} // namespace acra
