// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acra/core.hpp"

namespace acra {

/// Symmetric irreflexive relation over registers, stored as a bitset over
/// unordered pairs u < v.
class SeparationRelation {
  public:
    SeparationRelation() = default;
    explicit SeparationRelation(int num_registers);

    int num_registers() const { return n_; }
    bool contains(RegId u, RegId v) const;
    void insert(RegId u, RegId v);
    bool empty() const;
    std::size_t size() const;
    bool subset_of(const SeparationRelation& other) const;
    /// Registers occurring in some pair.
    std::uint64_t field() const;
    /// Pairs with both ends in `regs`.
    SeparationRelation restrict_to(std::uint64_t regs) const;
    std::vector<std::pair<RegId, RegId>> pairs() const;

    bool operator==(const SeparationRelation&) const = default;
    bool operator<(const SeparationRelation& o) const { return bits_ < o.bits_; }
    std::size_t hash() const;

  private:
    std::size_t bit(RegId u, RegId v) const;

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// One step on a path through the separation graph.
struct SepStep {
    enum class Kind { Renaming, Separation } kind = Kind::Renaming;
    Word word;                    // the symbol (renaming) or the cycle (separation)
    std::pair<RegId, RegId> pair; // separated pair (separation only)
};

struct SepNode {
    StateId state = 0;
    SeparationRelation relation;
    int parent = -1;
    std::vector<SepStep> steps; // from the parent to this node
};

struct WeightedDigraph {
    struct Edge {
        int src = 0;
        int dst = 0;
        Int weight;
        SymbolId label = -1;
    };
    int num_nodes = 0;
    std::vector<Edge> edges;
    int source = 0;
    int target = 0;
};

/// A source->target path (edge indices) of non-zero total weight, if any.
/// Paths of length zero have weight zero, so they never qualify.
std::optional<std::vector<int>> nonzero_reach(const WeightedDigraph& g);

/// Reference oracle: dynamic programming over walks of length <= max_len.
bool nonzero_reach_bruteforce(const WeightedDigraph& g, int max_len);

Int path_weight(const WeightedDigraph& g, const std::vector<int>& path);

SepNode renaming_successor(const Acra& acra, const SepNode& node, SymbolId a);

/// Lazily generated one-counter encoding for separating {u,v} at q. Node 0 is
/// the start node; the last node is a sink target entered by a copy of every
/// edge into a target-shaped node. Nodes carry the machine state, full source
/// map and the two threads.
struct SeparationCycleAutomaton {
    WeightedDigraph graph;
    struct NodeInfo {
        StateId state;
        std::vector<RegId> source_map;
        RegId thread_a;
        RegId thread_b;
    };
    std::vector<NodeInfo> nodes; // excludes the sink
};

SeparationCycleAutomaton build_separation_cycle_automaton(const Acra& acra, StateId q, const SeparationRelation& rel,
                                                          std::pair<RegId, RegId> pair);

/// Cached separation queries over one machine. Not thread-safe.
class SeparationOracle {
  public:
    explicit SeparationOracle(const Acra& acra);

    /// Cycle at q separating {u,v} while fixing every register in `field`.
    std::optional<Word> separating_cycle(StateId q, std::uint64_t field, RegId u, RegId v);

    /// The maximal subsets S of `field` for which a separating cycle fixing S
    /// exists, each with its cycle.
    std::vector<std::pair<std::uint64_t, Word>> maximal_fields(StateId q, std::uint64_t field, RegId u, RegId v);

  private:
    struct Explored {
        WeightedDigraph graph; // no sink yet
        std::vector<SeparationCycleAutomaton::NodeInfo> nodes;
    };
    bool prefilter(StateId q, RegId u, RegId v);
    const Explored& explored(StateId q, RegId u, RegId v);
    std::optional<Word> query(const Explored& e, StateId q, std::uint64_t field, RegId u, RegId v) const;

    const Acra& acra_;
    std::vector<std::vector<char>> scc_; // scc_[q][p]: p on a cycle through q
    std::map<std::tuple<StateId, RegId, RegId>, bool> prefilter_;
    std::map<std::tuple<StateId, RegId, RegId>, std::unique_ptr<Explored>> explored_;
    std::map<std::tuple<StateId, std::uint64_t, RegId, RegId>, std::optional<Word>> answers_;
};

std::optional<Word> separation_edge_exists(const Acra& acra, StateId q, const SeparationRelation& rel,
                                           std::pair<RegId, RegId> pair);

struct SeparationGraph {
    std::vector<SepNode> nodes; // breadth-first discovery order; node 0 is <q0, {}>

    /// True if <q, rel> is reachable, i.e. dominated by an explored node.
    bool contains(StateId q, const SeparationRelation& rel) const;
    /// Path of steps from the initial node.
    std::vector<SepStep> path_to(int node) const;
    Word witness(int node) const;
};

/// Forward exploration from <q0, {}>. With `stop_at_clique` set, stops at the
/// first node carrying a clique of live registers of that size.
SeparationGraph explore_separation_graph(const Acra& acra, std::optional<int> stop_at_clique = std::nullopt);

struct KSeparableWitness {
    int node = 0;
    StateId state = 0;
    std::vector<RegId> clique;
};

/// Largest clique of registers in `regs` pairwise related by `rel`.
std::vector<RegId> max_clique(const SeparationRelation& rel, const std::vector<RegId>& regs);

std::optional<KSeparableWitness> k_separable(const Acra& acra, int k, SeparationGraph* graph_out = nullptr);

int register_complexity(const Acra& acra);

struct PumpWitness {
    std::vector<Word> prefixes;        // sigma_0 .. sigma_m
    std::vector<Word> cycles;          // tau_1 .. tau_m
    std::vector<Word> suffixes;        // w_1 .. w_k
    std::vector<std::vector<Int>> coefficients; // c[i][j]
    std::vector<Int> intercepts;       // d[i]
    std::vector<RegId> clique;
    StateId state = 0;
};

Word pumped_word(const PumpWitness& w, const std::vector<int>& exponents, std::size_t suffix);

PumpWitness pump_witness(const Acra& acra, int k);

bool verify_pump_witness(const Acra& acra, const PumpWitness& w, const std::vector<std::vector<int>>& samples);

} // namespace acra
