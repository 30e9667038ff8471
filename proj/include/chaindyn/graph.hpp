#ifndef CHAINDYN_GRAPH_HPP
#define CHAINDYN_GRAPH_HPP

#include "chaindyn/uniform.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace chaindyn {

/// Vertex and edge caps for product and hyperspace constructions.
struct Budget {
    std::size_t max_vertices = 200000;
    std::size_t max_edges = 20000000;

    /// `base` with CHAINDYN_MAX_VERTICES / CHAINDYN_MAX_EDGES applied when set.
    static Budget from_environment(Budget base);
    static Budget from_environment();
};

/// Directed graph in compressed-row form; successor lists are ascending.
///
/// Edge x -> y encodes the chain condition (f(x), y) in E for whichever system
/// and entourage built it. Every instance carries a process-unique id so that
/// chains can tell which graph certified them.
class TransitionGraph {
public:
    TransitionGraph();
    explicit TransitionGraph(const std::vector<std::vector<Index>>& adjacency);
    TransitionGraph(std::vector<std::size_t> offsets, std::vector<Index> targets);

    std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size(); }

    std::span<const Index> successors(Index v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t out_degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(Index u, Index v) const;

    TransitionGraph reversed() const;
    /// Row u as a bitset of successors.
    BitRow successor_bits(Index u) const;
    /// Union of successors of every member of `set`.
    BitRow step(const BitRow& set) const;

    std::vector<Index> dead_vertices() const;
    bool has_dead_vertices() const { return !dead_vertices().empty(); }

    std::uint64_t id() const noexcept { return id_; }

    /// max_x min_y d(f(x), y); 0 for table maps. Set by system builders.
    double covering_radius = 0.0;
    /// Threshold used to build the graph, when metric.
    std::optional<double> epsilon;

    bool operator==(const TransitionGraph& other) const {
        return offsets_ == other.offsets_ && targets_ == other.targets_;
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Index> targets_;
    std::uint64_t id_;
};

/// n-fold tensor power: tuple u -> tuple v iff u_i -> v_i for every coordinate.
/// Tuples are encoded mixed-radix with the first coordinate most significant.
TransitionGraph tensor_power(const TransitionGraph& base, int n, const Budget& budget = {});

std::size_t checked_power(std::size_t base, int n, std::size_t cap, const char* what);

} // namespace chaindyn

#endif
