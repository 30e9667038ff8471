#ifndef CHAINDYN_ANALYSIS_HPP
#define CHAINDYN_ANALYSIS_HPP

#include "chaindyn/chains.hpp"
#include "chaindyn/hyperspace.hpp"
#include "chaindyn/system.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chaindyn {

/// Strongly connected components with their periods.
struct SccDecomposition {
    std::vector<Index> component_of;
    /// Members of each component, ascending; components ordered by smallest member.
    std::vector<std::vector<Index>> components;
    /// Condensation DAG edges between distinct components, ascending.
    std::vector<std::pair<Index, Index>> dag_edges;
    /// gcd of cycle lengths per component, 0 when the component carries no cycle.
    std::vector<std::size_t> period;

    std::size_t count() const noexcept { return components.size(); }
    bool has_cycle(Index c) const { return period.at(c) > 0; }
};

SccDecomposition scc_decompose(const TransitionGraph& graph);

/// A chain together with the name of the graph that certifies it:
/// "base", "product:n", "iterate:n" or "hyper:n".
struct LabeledChain {
    std::string graph;
    Chain chain;
};

/// Verdict of one chain property at one resolution.
///
/// Positive verdicts carry re-validatable witnesses, negative ones a concrete
/// counterexample (a chain-less pair, a period, a failing iterate, or a
/// cycling reachable-set sequence).
struct ChainPropertyResult {
    std::string property;
    bool verdict = false;
    std::optional<double> epsilon;

    std::vector<LabeledChain> witnesses;
    std::vector<std::vector<Index>> components;
    std::optional<std::size_t> minimal_n;
    std::optional<std::size_t> n_e;
    std::vector<bool> recurrent;

    std::string counterexample_graph;
    std::optional<std::pair<Index, Index>> no_chain;
    std::optional<std::size_t> period;
    std::optional<int> failing_n;
    std::optional<Index> failing_vertex;
    std::vector<Index> exact_set;
    std::optional<std::pair<std::size_t, std::size_t>> reach_cycle; ///< (first step, period) of a covering failure

    /// Quantifier bounds used, e.g. {"n_max", 6}.
    std::map<std::string, std::size_t> bounds;
};

/// A closed chain from vertex 0 through every vertex, or NoChain if none.
Chain transitivity_tour(const TransitionGraph& graph);

/// One strongly connected component carrying a cycle; no witness search.
bool is_transitive_graph(const TransitionGraph& graph);

// Graph-level decision procedures. `label` names the graph in witnesses.
ChainPropertyResult chain_transitivity(const TransitionGraph& graph, const std::string& label = "base");
ChainPropertyResult chain_mixing(const TransitionGraph& graph, std::size_t cap = 0);
ChainPropertyResult chain_weak_mixing(const TransitionGraph& graph, const Budget& budget = {});
ChainPropertyResult chain_recurrence(const TransitionGraph& graph);
ChainPropertyResult exactness(const TransitionGraph& graph, std::span<const Index> u, std::size_t cap = 0);
/// Exactness from every non-empty U, which reduces to every singleton.
ChainPropertyResult exactness_everywhere(const TransitionGraph& graph, std::size_t cap = 0);
std::vector<std::vector<Index>> internally_chain_transitive_sets(const TransitionGraph& graph);

/// Wielandt bound N^2 - 2N + 2 (1 for a single vertex).
std::size_t wielandt_bound(std::size_t n);

// System-level wrappers building the transition graph at E.
ChainPropertyResult is_chain_transitive(const MapSystem& system, const Entourage& e);
std::vector<std::vector<Index>> internally_chain_transitive_subsets(const MapSystem& system, const Entourage& e);
ChainPropertyResult is_chain_mixing(const MapSystem& system, const Entourage& e, std::size_t cap = 0);
ChainPropertyResult is_chain_weakly_mixing(const MapSystem& system, const Entourage& e, const Budget& budget = {});
/// f^n transitive for n = 1..n_max, each iterate composed before discretizing.
ChainPropertyResult is_totally_chain_transitive(const MapSystem& system, const Entourage& e, int n_max = 6);
ChainPropertyResult is_exact_by_chains(const MapSystem& system, const Entourage& e, std::span<const Index> u,
                                       std::size_t cap = 0);
ChainPropertyResult is_chain_recurrent(const MapSystem& system, const Entourage& e);
ChainPropertyResult is_hyper_transitive(const MapSystem& system, const Entourage& e, std::size_t n,
                                        const Budget& budget = {});
ChainPropertyResult is_product_transitive(const MapSystem& system, const Entourage& e, int n,
                                          const Budget& budget = {});

} // namespace chaindyn

#endif
