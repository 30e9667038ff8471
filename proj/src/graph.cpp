#include "chaindyn/graph.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

namespace chaindyn {

namespace {

std::uint64_t next_graph_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

std::size_t env_size(const char* name, std::size_t fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) throw InvalidParameter(std::string("invalid value for ") + name);
    return static_cast<std::size_t>(v);
}

} // namespace

Budget Budget::from_environment(Budget b) {
    b.max_vertices = env_size("CHAINDYN_MAX_VERTICES", b.max_vertices);
    b.max_edges = env_size("CHAINDYN_MAX_EDGES", b.max_edges);
    return b;
}

Budget Budget::from_environment() { return from_environment(Budget{}); }

TransitionGraph::TransitionGraph() : offsets_{0}, id_(next_graph_id()) {}

TransitionGraph::TransitionGraph(const std::vector<std::vector<Index>>& adjacency) : id_(next_graph_id()) {
    const std::size_t n = adjacency.size();
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (const auto& succ : adjacency) {
        std::vector<Index> sorted = succ;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (Index v : sorted) {
            if (v >= n) throw InvalidParameter("edge target out of range");
            targets_.push_back(v);
        }
        offsets_.push_back(targets_.size());
    }
}

TransitionGraph::TransitionGraph(std::vector<std::size_t> offsets, std::vector<Index> targets)
    : offsets_(std::move(offsets)), targets_(std::move(targets)), id_(next_graph_id()) {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != targets_.size())
        throw InvalidParameter("malformed adjacency offsets");
    const std::size_t n = offsets_.size() - 1;
    for (std::size_t v = 0; v < n; ++v) {
        if (offsets_[v] > offsets_[v + 1]) throw InvalidParameter("malformed adjacency offsets");
        for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
            if (targets_[k] >= n) throw InvalidParameter("edge target out of range");
            if (k > offsets_[v] && targets_[k] <= targets_[k - 1])
                throw InvalidParameter("successor lists must be strictly ascending");
        }
    }
}

bool TransitionGraph::has_edge(Index u, Index v) const {
    if (u >= vertex_count() || v >= vertex_count()) return false;
    auto s = successors(u);
    return std::binary_search(s.begin(), s.end(), v);
}

TransitionGraph TransitionGraph::reversed() const {
    const std::size_t n = vertex_count();
    std::vector<std::size_t> offsets(n + 1, 0);
    for (Index t : targets_) ++offsets[t + 1];
    for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    std::vector<Index> targets(targets_.size());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    // Sources are visited in ascending order, so each reversed row comes out sorted.
    for (Index u = 0; u < n; ++u)
        for (Index v : successors(u)) targets[fill[v]++] = u;
    TransitionGraph r(std::move(offsets), std::move(targets));
    r.covering_radius = covering_radius;
    r.epsilon = epsilon;
    return r;
}

BitRow TransitionGraph::successor_bits(Index u) const {
    BitRow row(vertex_count());
    for (Index v : successors(u)) row.set(v);
    return row;
}

BitRow TransitionGraph::step(const BitRow& set) const {
    BitRow out(vertex_count());
    for (auto u = set.find_first(); u != BitRow::npos; u = set.find_next(u))
        for (Index v : successors(static_cast<Index>(u))) out.set(v);
    return out;
}

std::vector<Index> TransitionGraph::dead_vertices() const {
    std::vector<Index> dead;
    for (Index v = 0; v < vertex_count(); ++v)
        if (out_degree(v) == 0) dead.push_back(v);
    return dead;
}

std::size_t checked_power(std::size_t base, int n, std::size_t cap, const char* what) {
    // Saturates at SIZE_MAX so the reported request stays exact whenever it fits.
    constexpr std::size_t saturated = std::numeric_limits<std::size_t>::max();
    std::size_t total = 1;
    for (int k = 0; k < n; ++k) total = (base != 0 && total > saturated / base) ? saturated : total * base;
    if (total > cap) throw BudgetExceeded(what, total, cap);
    return total;
}

TransitionGraph tensor_power(const TransitionGraph& base, int n, const Budget& budget) {
    if (n < 1) throw InvalidParameter("product order must be >= 1");
    const std::size_t N = base.vertex_count();
    const std::string label = "product system X^(" + std::to_string(n) + ")";
    const std::size_t vertices = checked_power(N, n, budget.max_vertices, label.c_str());
    checked_power(base.edge_count(), n, budget.max_edges, (label + " edges").c_str());

    std::vector<std::size_t> offsets;
    offsets.reserve(vertices + 1);
    offsets.push_back(0);
    std::vector<Index> targets;
    std::vector<Index> coords(static_cast<std::size_t>(n));
    std::vector<std::size_t> pos(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < vertices; ++t) {
        std::size_t rest = t;
        for (int i = n - 1; i >= 0; --i) {
            coords[i] = static_cast<Index>(rest % N);
            rest /= N;
        }
        bool empty = false;
        for (int i = 0; i < n; ++i) {
            pos[i] = 0;
            if (base.out_degree(coords[i]) == 0) empty = true;
        }
        if (!empty) {
            // Odometer over successor choices; lexicographic in coordinates gives ascending codes.
            while (true) {
                std::size_t code = 0;
                for (int i = 0; i < n; ++i) code = code * N + base.successors(coords[i])[pos[i]];
                targets.push_back(static_cast<Index>(code));
                int i = n - 1;
                while (i >= 0) {
                    if (++pos[i] < base.out_degree(coords[i])) break;
                    pos[i] = 0;
                    --i;
                }
                if (i < 0) break;
            }
        }
        offsets.push_back(targets.size());
    }
    TransitionGraph g(std::move(offsets), std::move(targets));
    g.epsilon = base.epsilon;
    g.covering_radius = base.covering_radius;
    return g;
}

} // namespace chaindyn
