#ifndef CHAINDYN_CHAINS_HPP
#define CHAINDYN_CHAINS_HPP

#include "chaindyn/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace chaindyn {

/// A certified chain x_0, ..., x_m (m >= 1) of some transition graph.
///
/// Instances only come out of validate_chain, the searches and concatenate,
/// so every Chain satisfies the chain condition on the graph it names.
class Chain {
public:
    std::uint64_t graph_id() const noexcept { return graph_id_; }
    const std::vector<Index>& points() const noexcept { return points_; }
    /// Number of steps, not points.
    std::size_t length() const noexcept { return points_.size() - 1; }
    Index front() const { return points_.front(); }
    Index back() const { return points_.back(); }

    bool operator==(const Chain& other) const = default;

private:
    friend Chain validate_chain(const TransitionGraph& graph, std::vector<Index> points);
    friend Chain concatenate(const Chain& first, const Chain& second);

    Chain(std::uint64_t graph_id, std::vector<Index> points) : graph_id_(graph_id), points_(std::move(points)) {}

    std::uint64_t graph_id_;
    std::vector<Index> points_;
};

/// Throws NotAChain(i) at the first broken step, InvalidParameter for fewer
/// than two points or an out-of-range index.
Chain validate_chain(const TransitionGraph& graph, std::vector<Index> points);

/// Joins chains sharing the junction point; lengths add.
Chain concatenate(const Chain& first, const Chain& second);

/// Shortest chain x -> y with at least one step; lexicographically smallest
/// among the shortest. Throws NoChain.
Chain find_chain(const TransitionGraph& graph, Index x, Index y);

/// Chain of exactly n steps, lexicographically smallest, or nullopt.
std::optional<Chain> find_chain_exact_length(const TransitionGraph& graph, Index x, Index y, std::size_t n);

/// Every n <= max_len admitting an exact-length-n chain z -> z, ascending.
std::vector<std::size_t> cycle_lengths_through(const TransitionGraph& graph, Index z, std::size_t max_len);

/// Two cycles through z with coprime lengths, preferring the smallest (r, r+1)
/// pair. max_len == 0 selects the default cap N^2.
std::optional<std::pair<Chain, Chain>> coprime_cycles(const TransitionGraph& graph, Index z, std::size_t max_len = 0);

/// Vertices reachable from `from` in one or more steps.
BitRow reachable_from(const TransitionGraph& graph, Index from);

/// Default scan cap for cycle searches: N^2 (at least 2).
std::size_t default_length_cap(const TransitionGraph& graph);

} // namespace chaindyn

#endif
