#include "chaindyn/analysis.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

namespace chaindyn {

namespace {

constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();

/// gcd of (level(u) + 1 - level(v)) over edges inside the component; 0 if none.
std::size_t component_period(const TransitionGraph& graph, const std::vector<Index>& members,
                             const std::vector<Index>& component_of, Index c) {
    std::vector<std::size_t> level(graph.vertex_count(), unset);
    std::deque<Index> queue{members.front()};
    level[members.front()] = 0;
    std::size_t g = 0;
    while (!queue.empty()) {
        const Index u = queue.front();
        queue.pop_front();
        for (Index v : graph.successors(u)) {
            if (component_of[v] != c) continue;
            if (level[v] == unset) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
                g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
            }
        }
    }
    return g;
}

/// Some pair (x, y) with no chain x -> y; requires the graph not be transitive.
std::pair<Index, Index> missing_pair(const TransitionGraph& graph) {
    const std::size_t n = graph.vertex_count();
    const BitRow forward = reachable_from(graph, 0);
    for (Index y = 1; y < n; ++y)
        if (!forward.test(y)) return {0, y};
    const BitRow backward = reachable_from(graph.reversed(), 0);
    for (Index x = 1; x < n; ++x)
        if (!backward.test(x)) return {x, 0};
    // Everything reaches 0 and back, so only a loopless single vertex remains.
    return {0, 0};
}

bool all_set(const BitRow& r) { return r.count() == r.size(); }

} // namespace

std::size_t wielandt_bound(std::size_t n) { return n <= 1 ? 1 : n * n - 2 * n + 2; }

SccDecomposition scc_decompose(const TransitionGraph& graph) {
    const std::size_t n = graph.vertex_count();
    std::vector<std::size_t> index(n, unset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<Index> stack;
    std::vector<std::vector<Index>> raw;
    std::size_t counter = 0;

    struct Frame {
        Index v;
        std::size_t next;
    };
    for (Index root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto succ = graph.successors(f.v);
            if (f.next < succ.size()) {
                const Index w = succ[f.next++];
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const Index v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<Index> comp;
                Index w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                raw.push_back(std::move(comp));
            }
        }
    }

    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    SccDecomposition out;
    out.component_of.assign(n, 0);
    for (Index c = 0; c < raw.size(); ++c)
        for (Index v : raw[c]) out.component_of[v] = c;
    out.components = std::move(raw);

    std::set<std::pair<Index, Index>> dag;
    for (Index u = 0; u < n; ++u)
        for (Index v : graph.successors(u))
            if (out.component_of[u] != out.component_of[v]) dag.emplace(out.component_of[u], out.component_of[v]);
    out.dag_edges.assign(dag.begin(), dag.end());

    out.period.reserve(out.components.size());
    for (Index c = 0; c < out.components.size(); ++c)
        out.period.push_back(component_period(graph, out.components[c], out.component_of, c));
    return out;
}

Chain transitivity_tour(const TransitionGraph& graph) {
    const std::size_t n = graph.vertex_count();
    if (n == 0) throw InvalidParameter("empty graph");
    std::vector<bool> visited(n, false);
    visited[0] = true;
    std::size_t remaining = n - 1;
    std::vector<Index> points{0};
    Index current = 0;
    while (remaining > 0) {
        // Nearest unvisited vertex by BFS (at least one step), ties by discovery order.
        std::vector<std::size_t> parent(n, unset);
        std::deque<Index> queue;
        for (Index s : graph.successors(current))
            if (parent[s] == unset) {
                parent[s] = current;
                queue.push_back(s);
            }
        std::optional<Index> target;
        while (!queue.empty() && !target) {
            const Index v = queue.front();
            queue.pop_front();
            if (!visited[v]) {
                target = v;
                break;
            }
            for (Index s : graph.successors(v))
                if (parent[s] == unset) {
                    parent[s] = v;
                    queue.push_back(s);
                }
        }
        if (!target) {
            for (Index y = 0; y < n; ++y)
                if (!visited[y]) throw NoChain(current, y);
        }
        std::vector<Index> path;
        // Only first-level vertices have `current` as parent.
        for (Index v = *target;; v = static_cast<Index>(parent[v])) {
            path.push_back(v);
            if (parent[v] == current) break;
        }
        std::reverse(path.begin(), path.end());
        for (Index v : path) {
            if (!visited[v]) {
                visited[v] = true;
                --remaining;
            }
            points.push_back(v);
        }
        current = *target;
    }
    const Chain closing = find_chain(graph, current, 0);
    points.insert(points.end(), closing.points().begin() + 1, closing.points().end());
    return validate_chain(graph, std::move(points));
}

bool is_transitive_graph(const TransitionGraph& graph) {
    const auto scc = scc_decompose(graph);
    return scc.count() == 1 && scc.has_cycle(0);
}

ChainPropertyResult chain_transitivity(const TransitionGraph& graph, const std::string& label) {
    ChainPropertyResult r;
    r.property = "transitive";
    r.epsilon = graph.epsilon;
    const auto scc = scc_decompose(graph);
    r.verdict = scc.count() == 1 && scc.has_cycle(0);
    if (r.verdict) {
        r.witnesses.push_back({label, transitivity_tour(graph)});
    } else {
        r.counterexample_graph = label;
        r.no_chain = missing_pair(graph);
    }
    return r;
}

std::vector<std::vector<Index>> internally_chain_transitive_sets(const TransitionGraph& graph) {
    const auto scc = scc_decompose(graph);
    std::vector<std::vector<Index>> out;
    for (Index c = 0; c < scc.count(); ++c)
        if (scc.has_cycle(c)) out.push_back(scc.components[c]);
    return out;
}

ChainPropertyResult chain_mixing(const TransitionGraph& graph, std::size_t cap) {
    const std::size_t n = graph.vertex_count();
    if (cap == 0) cap = wielandt_bound(n);
    ChainPropertyResult r = chain_transitivity(graph);
    r.property = "mixing";
    r.bounds["cap"] = cap;
    if (!r.verdict) return r;

    const auto scc = scc_decompose(graph);
    if (scc.period[0] > 1) {
        r.verdict = false;
        r.witnesses.clear();
        r.period = scc.period[0];
        r.counterexample_graph = "base";
        return r;
    }
    // Primitive: every row of the k-th boolean power fills once k reaches the exponent.
    std::size_t worst = 1;
    for (Index x = 0; x < n; ++x) {
        BitRow reach = graph.successor_bits(x);
        std::size_t k = 1;
        while (!all_set(reach)) {
            if (k >= cap) {
                r.verdict = false;
                r.witnesses.clear();
                r.counterexample_graph = "base";
                r.failing_vertex = x;
                return r;
            }
            reach = graph.step(reach);
            ++k;
        }
        worst = std::max(worst, k);
    }
    r.minimal_n = worst;
    if (auto cycles = coprime_cycles(graph, 0)) {
        r.witnesses.push_back({"base", std::move(cycles->first)});
        r.witnesses.push_back({"base", std::move(cycles->second)});
    }
    return r;
}

ChainPropertyResult chain_weak_mixing(const TransitionGraph& graph, const Budget& budget) {
    ChainPropertyResult r = chain_transitivity(tensor_power(graph, 2, budget), "product:2");
    r.property = "weakly_mixing";
    r.epsilon = graph.epsilon;
    return r;
}

ChainPropertyResult chain_recurrence(const TransitionGraph& graph) {
    ChainPropertyResult r;
    r.property = "recurrent";
    r.epsilon = graph.epsilon;
    const auto scc = scc_decompose(graph);
    const std::size_t n = graph.vertex_count();
    r.recurrent.assign(n, false);
    for (Index x = 0; x < n; ++x) r.recurrent[x] = scc.has_cycle(scc.component_of[x]);
    r.verdict = std::all_of(r.recurrent.begin(), r.recurrent.end(), [](bool b) { return b; });
    if (r.verdict) {
        for (Index x = 0; x < n; ++x) r.witnesses.push_back({"base", find_chain(graph, x, x)});
    } else {
        r.counterexample_graph = "base";
        for (Index x = 0; x < n; ++x)
            if (!r.recurrent[x]) {
                r.no_chain = std::make_pair(x, x);
                break;
            }
    }
    return r;
}

ChainPropertyResult exactness(const TransitionGraph& graph, std::span<const Index> u, std::size_t cap) {
    const std::size_t n = graph.vertex_count();
    if (u.empty()) throw InvalidParameter("exactness needs a non-empty U");
    for (Index x : u)
        if (x >= n) throw InvalidParameter("U contains an index outside the carrier");
    if (cap == 0) cap = std::max<std::size_t>(1, n * n);
    ChainPropertyResult r;
    r.property = "exact";
    r.epsilon = graph.epsilon;
    r.exact_set.assign(u.begin(), u.end());
    std::sort(r.exact_set.begin(), r.exact_set.end());
    r.exact_set.erase(std::unique(r.exact_set.begin(), r.exact_set.end()), r.exact_set.end());
    r.bounds["cap"] = cap;

    std::vector<BitRow> history;
    BitRow reach = graph.step(indices_to_bits(r.exact_set, n));
    for (std::size_t k = 1;; ++k) {
        if (all_set(reach)) {
            r.verdict = true;
            r.n_e = k;
            break;
        }
        const auto seen = std::find(history.begin(), history.end(), reach);
        if (seen != history.end()) {
            const std::size_t first = static_cast<std::size_t>(seen - history.begin()) + 1;
            r.reach_cycle = std::make_pair(first, k - first);
            break;
        }
        if (k >= cap) break;
        history.push_back(reach);
        reach = graph.step(reach);
    }
    if (!r.verdict) {
        r.counterexample_graph = "base";
        return r;
    }
    for (Index x = 0; x < n; ++x)
        for (Index s : r.exact_set)
            if (auto c = find_chain_exact_length(graph, s, x, *r.n_e)) {
                r.witnesses.push_back({"base", std::move(*c)});
                break;
            }
    return r;
}

ChainPropertyResult exactness_everywhere(const TransitionGraph& graph, std::size_t cap) {
    ChainPropertyResult r;
    r.property = "exact";
    r.epsilon = graph.epsilon;
    r.verdict = true;
    std::size_t worst = 0;
    for (Index x = 0; x < graph.vertex_count(); ++x) {
        const Index single[] = {x};
        ChainPropertyResult one = exactness(graph, single, cap);
        r.bounds = one.bounds;
        if (!one.verdict) {
            one.failing_vertex = x;
            return one;
        }
        worst = std::max(worst, *one.n_e);
    }
    r.n_e = worst;
    return r;
}

ChainPropertyResult is_chain_transitive(const MapSystem& system, const Entourage& e) {
    return chain_transitivity(build_transition_graph(system, e));
}

std::vector<std::vector<Index>> internally_chain_transitive_subsets(const MapSystem& system, const Entourage& e) {
    return internally_chain_transitive_sets(build_transition_graph(system, e));
}

ChainPropertyResult is_chain_mixing(const MapSystem& system, const Entourage& e, std::size_t cap) {
    return chain_mixing(build_transition_graph(system, e), cap);
}

ChainPropertyResult is_chain_weakly_mixing(const MapSystem& system, const Entourage& e, const Budget& budget) {
    return chain_weak_mixing(build_transition_graph(system, e), budget);
}

ChainPropertyResult is_totally_chain_transitive(const MapSystem& system, const Entourage& e, int n_max) {
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    ChainPropertyResult r;
    r.property = "totally_transitive";
    r.epsilon = e.epsilon();
    r.bounds["n_max"] = static_cast<std::size_t>(n_max);
    r.verdict = true;
    for (int n = 1; n <= n_max; ++n) {
        const std::string label = "iterate:" + std::to_string(n);
        ChainPropertyResult step = chain_transitivity(build_transition_graph(iterate_system(system, n), e), label);
        if (!step.verdict) {
            r.verdict = false;
            r.witnesses.clear();
            r.failing_n = n;
            r.counterexample_graph = label;
            r.no_chain = step.no_chain;
            return r;
        }
        for (auto& w : step.witnesses) r.witnesses.push_back(std::move(w));
    }
    return r;
}

ChainPropertyResult is_exact_by_chains(const MapSystem& system, const Entourage& e, std::span<const Index> u,
                                       std::size_t cap) {
    return exactness(build_transition_graph(system, e), u, cap);
}

ChainPropertyResult is_chain_recurrent(const MapSystem& system, const Entourage& e) {
    return chain_recurrence(build_transition_graph(system, e));
}

ChainPropertyResult is_hyper_transitive(const MapSystem& system, const Entourage& e, std::size_t n,
                                        const Budget& budget) {
    const HyperSystem hs(system, n, budget);
    ChainPropertyResult r =
        chain_transitivity(build_hyper_transition_graph(hs, e, budget), "hyper:" + std::to_string(n));
    r.property = "hyper_transitive";
    r.epsilon = e.epsilon();
    r.bounds["n"] = n;
    return r;
}

ChainPropertyResult is_product_transitive(const MapSystem& system, const Entourage& e, int n, const Budget& budget) {
    const TransitionGraph base = build_transition_graph(system, e);
    ChainPropertyResult r = chain_transitivity(tensor_power(base, n, budget), "product:" + std::to_string(n));
    r.property = "product_transitive";
    r.epsilon = e.epsilon();
    r.bounds["n"] = static_cast<std::size_t>(n);
    return r;
}

} // namespace chaindyn
