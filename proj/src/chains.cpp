#include "chaindyn/chains.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

namespace chaindyn {

namespace {

constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();

void check_vertex(const TransitionGraph& graph, Index v) {
    if (v >= graph.vertex_count()) throw InvalidParameter("vertex " + std::to_string(v) + " out of range");
}

/// dist[v] = fewest steps from v to target (0 at the target itself).
std::vector<std::size_t> distances_to(const TransitionGraph& graph, Index target) {
    const TransitionGraph reverse = graph.reversed();
    std::vector<std::size_t> dist(graph.vertex_count(), unreachable);
    std::deque<Index> queue{target};
    dist[target] = 0;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index u : reverse.successors(v))
            if (dist[u] == unreachable) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
    }
    return dist;
}

} // namespace

Chain validate_chain(const TransitionGraph& graph, std::vector<Index> points) {
    if (points.size() < 2) throw InvalidParameter("a chain needs at least two points (length >= 1)");
    for (Index p : points) check_vertex(graph, p);
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!graph.has_edge(points[i], points[i + 1])) throw NotAChain(i);
    return Chain(graph.id(), std::move(points));
}

Chain concatenate(const Chain& first, const Chain& second) {
    if (first.graph_id() != second.graph_id()) throw InvalidParameter("chains belong to different graphs");
    if (first.back() != second.front())
        throw EndpointMismatch("cannot concatenate: chain ends at " + std::to_string(first.back()) +
                               " but the next starts at " + std::to_string(second.front()));
    std::vector<Index> points = first.points();
    points.insert(points.end(), second.points().begin() + 1, second.points().end());
    return Chain(first.graph_id(), std::move(points));
}

Chain find_chain(const TransitionGraph& graph, Index x, Index y) {
    check_vertex(graph, x);
    check_vertex(graph, y);
    const auto dist = distances_to(graph, y);
    std::size_t best = unreachable;
    for (Index s : graph.successors(x)) best = std::min(best, dist[s]);
    if (best == unreachable) throw NoChain(x, y);

    std::vector<Index> points{x};
    Index current = x;
    std::size_t remaining = best + 1;
    while (remaining > 0) {
        for (Index s : graph.successors(current))
            if (dist[s] == remaining - 1) {
                current = s;
                break;
            }
        points.push_back(current);
        --remaining;
    }
    return validate_chain(graph, std::move(points));
}

std::optional<Chain> find_chain_exact_length(const TransitionGraph& graph, Index x, Index y, std::size_t n) {
    check_vertex(graph, x);
    check_vertex(graph, y);
    if (n < 1) throw InvalidParameter("chains have length >= 1");
    const TransitionGraph reverse = graph.reversed();
    // layers[k] = vertices with an exact-length-k chain to y.
    std::vector<BitRow> layers;
    layers.reserve(n + 1);
    layers.emplace_back(graph.vertex_count());
    layers.back().set(y);
    for (std::size_t k = 1; k <= n; ++k) {
        layers.push_back(reverse.step(layers.back()));
        if (layers.back().none()) return std::nullopt;
    }
    if (!layers[n].test(x)) return std::nullopt;

    std::vector<Index> points{x};
    Index current = x;
    for (std::size_t k = n; k > 0; --k) {
        for (Index s : graph.successors(current))
            if (layers[k - 1].test(s)) {
                current = s;
                break;
            }
        points.push_back(current);
    }
    return validate_chain(graph, std::move(points));
}

std::vector<std::size_t> cycle_lengths_through(const TransitionGraph& graph, Index z, std::size_t max_len) {
    check_vertex(graph, z);
    if (max_len < 1) throw InvalidParameter("max_len must be >= 1");
    std::vector<std::size_t> lengths;
    BitRow frontier = graph.successor_bits(z);
    for (std::size_t k = 1; k <= max_len && frontier.any(); ++k) {
        if (frontier.test(z)) lengths.push_back(k);
        if (k < max_len) frontier = graph.step(frontier);
    }
    return lengths;
}

std::size_t default_length_cap(const TransitionGraph& graph) {
    const std::size_t n = graph.vertex_count();
    return std::max<std::size_t>(2, n * n);
}

std::optional<std::pair<Chain, Chain>> coprime_cycles(const TransitionGraph& graph, Index z, std::size_t max_len) {
    if (max_len == 0) max_len = default_length_cap(graph);
    if (max_len < 2) throw InvalidParameter("max_len must be >= 2");
    const auto lengths = cycle_lengths_through(graph, z, max_len);
    const std::set<std::size_t> present(lengths.begin(), lengths.end());

    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t r : lengths)
        if (present.count(r + 1)) {
            pick = {r, r + 1};
            break;
        }
    for (std::size_t i = 0; !pick && i < lengths.size(); ++i)
        for (std::size_t j = i + 1; j < lengths.size(); ++j)
            if (std::gcd(lengths[i], lengths[j]) == 1) {
                pick = {lengths[i], lengths[j]};
                break;
            }
    if (!pick) return std::nullopt;
    auto first = find_chain_exact_length(graph, z, z, pick->first);
    auto second = find_chain_exact_length(graph, z, z, pick->second);
    if (!first || !second) throw Error("cycle length scan and exact-length search disagree");
    return std::make_pair(std::move(*first), std::move(*second));
}

BitRow reachable_from(const TransitionGraph& graph, Index from) {
    check_vertex(graph, from);
    BitRow seen(graph.vertex_count());
    std::deque<Index> queue;
    for (Index s : graph.successors(from))
        if (!seen.test(s)) {
            seen.set(s);
            queue.push_back(s);
        }
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index s : graph.successors(v))
            if (!seen.test(s)) {
                seen.set(s);
                queue.push_back(s);
            }
    }
    return seen;
}

} // namespace chaindyn
