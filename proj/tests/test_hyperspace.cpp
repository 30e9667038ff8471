#include "chaindyn/errors.hpp"
#include "chaindyn/hyperspace.hpp"
#include "chaindyn/lemmas.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace chaindyn;

namespace {

/// Every non-empty subset of size <= n via bitmasks, sorted by size then lexicographically.
std::vector<FiniteSubset> power_set_order(std::size_t size, std::size_t n) {
    std::vector<FiniteSubset> out;
    for (std::uint32_t mask = 1; mask < (1u << size); ++mask) {
        FiniteSubset s;
        for (Index i = 0; i < size; ++i)
            if (mask >> i & 1u) s.push_back(i);
        if (s.size() <= n) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const FiniteSubset& a, const FiniteSubset& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

/// Hausdorff-style relation of f(A) and B measured on ambient images.
bool hyper_edge(const MapSystem& f, const FiniteSubset& a, const FiniteSubset& b, double eps) {
    for (Index p : a)
        if (std::none_of(b.begin(), b.end(), [&](Index q) { return within(f.image_distance(p, q), eps); }))
            return false;
    for (Index q : b)
        if (std::none_of(a.begin(), a.end(), [&](Index p) { return within(f.image_distance(p, q), eps); }))
            return false;
    return true;
}

} // namespace

TEST_CASE("F_n enumeration is graded lexicographic") {
    for (std::size_t size = 1; size <= 7; ++size)
        for (std::size_t n = 1; n <= size; ++n) {
            const auto subsets = enumerate_Fn(size, n);
            CHECK(subsets == power_set_order(size, n));
            CHECK(count_Fn(size, n) == subsets.size());
            const SubsetIndexer indexer(size, n);
            for (std::size_t id = 0; id < subsets.size(); ++id) CHECK(indexer.id_of(subsets[id]) == id);
        }
    CHECK(count_Fn(4, 4) == 15);
    CHECK_THROWS_AS(enumerate_Fn(3, 0), InvalidParameter);
    CHECK_THROWS_AS(enumerate_Fn(3, 4), InvalidParameter);
    Budget tiny;
    tiny.max_vertices = 10;
    CHECK_THROWS_AS(enumerate_Fn(5, 2, tiny), BudgetExceeded);
}

TEST_CASE("hyper entourage needs symmetry") {
    const CarrierPtr c = share(Carrier::discrete({"a", "b", "c"}));
    std::vector<BitRow> rows(3, BitRow(3));
    for (Index i = 0; i < 3; ++i) rows[i].set(i);
    rows[0].set(1);
    const Entourage lopsided = Entourage::from_relation(c, rows);
    CHECK_THROWS_AS(hyper_entourage_related({0}, {1}, lopsided), NonSymmetricEntourage);
    const HyperSystem hs(MapSystem::table(c, {1, 2, 0}), 2);
    CHECK_THROWS_AS(build_hyper_transition_graph(hs, lopsided), NonSymmetricEntourage);

    const Entourage e = metric_entourage(share(Carrier::interval_grid(4)), 1.0 / 3);
    CHECK(hyper_entourage_related({0}, {0, 1}, e));
    CHECK_FALSE(hyper_entourage_related({0}, {0, 2}, e));
    CHECK(hyper_entourage_related({0, 3}, {1, 2}, e));
}

TEST_CASE("hyper graph matches the set-image definition") {
    Rng rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        const TrialInstance inst = random_instance(rng, 6);
        const std::size_t size = inst.system.size();
        const std::size_t n = 1 + rng.below(size);
        const HyperSystem hs(inst.system, n);
        const TransitionGraph g = build_hyper_transition_graph(hs, inst.entourage);
        const double eps = *inst.entourage.epsilon();
        for (Index a = 0; a < hs.size(); ++a)
            for (Index b = 0; b < hs.size(); ++b) {
                const bool expected = inst.system.is_table()
                                          ? hyper_entourage_related(hs.image(a), hs.subset(b), inst.entourage)
                                          : hyper_edge(inst.system, hs.subset(a), hs.subset(b), eps);
                REQUIRE_MESSAGE(g.has_edge(a, b) == expected, inst.family << " n=" << n);
                if (inst.system.is_table()) CHECK(expected == hyper_edge(inst.system, hs.subset(a), hs.subset(b), eps));
            }
        if (n == 1) {
            const TransitionGraph base = build_transition_graph(inst.system, inst.entourage);
            CHECK(oracle::adjacency(g) == oracle::adjacency(base));
        }
    }
}

TEST_CASE("exact relation lifts to the set map") {
    const CarrierPtr c = share(Carrier::interval_grid(4));
    const MapSystem f = MapSystem::table(c, {1, 1, 3, 0});
    const HyperSystem hs(f, 4);
    const TransitionGraph g = build_hyper_transition_graph(hs, Entourage::identity(c));
    CHECK(g.edge_count() == hs.size());
    for (Index a = 0; a < hs.size(); ++a) CHECK(g.has_edge(a, hs.id_of(hs.image(a))));
    CHECK(hs.image(hs.id_of({0, 1})) == FiniteSubset{1});
    CHECK(hs.as_table_system().image_index(hs.id_of({2, 3})) == hs.id_of({0, 3}));
}

TEST_CASE("singleton hyper chains select base chains") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const TrialInstance inst = random_instance(rng, 5, true);
        const HyperSystem hs(inst.system, std::min<std::size_t>(3, inst.system.size()));
        const TransitionGraph hg = build_hyper_transition_graph(hs, inst.entourage);
        const TransitionGraph bg = build_transition_graph(inst.system, inst.entourage);
        for (Index x = 0; x < inst.system.size(); ++x)
            for (Index y = 0; y < inst.system.size(); ++y)
                for (std::size_t len = 1; len <= 4; ++len) {
                    const auto hc = find_chain_exact_length(hg, hs.id_of({x}), hs.id_of({y}), len);
                    if (!hc) continue;
                    const Chain base = select_base_chain_from_hyper_chain(hs, *hc, bg, x, y);
                    CHECK(base.length() == len);
                    CHECK(base.front() == x);
                    CHECK(base.back() == y);
                    CHECK(base.graph_id() == bg.id());
                }
    }
}

TEST_CASE("selection fails when no base path threads the sets") {
    const CarrierPtr c = share(Carrier::discrete({"a", "b"}));
    const MapSystem f = MapSystem::table(c, {0, 1});
    const HyperSystem hs(f, 2);
    const Entourage e = Entourage::identity(c);
    const TransitionGraph hg = build_hyper_transition_graph(hs, e);
    const TransitionGraph bg = build_transition_graph(f, e);
    const Index both = hs.id_of({0, 1});
    const Chain hc = validate_chain(hg, {both, both});
    CHECK_THROWS_AS(select_base_chain_from_hyper_chain(hs, hc, bg, 0, 1), SelectionFailed);
    CHECK(select_base_chain_from_hyper_chain(hs, hc, bg, 1, 1).points() == std::vector<Index>{1, 1});
}

TEST_CASE("tuple to set factor is a semiconjugacy") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const TrialInstance inst = random_instance(rng, 4, true);
        const std::size_t n = std::min<std::size_t>(2, inst.system.size());
        const ProductSystem p = build_product_system(inst.system, static_cast<int>(n));
        const HyperSystem hs(inst.system, n);
        const FactorMap h = tuple_to_set_factor(p, hs);
        CHECK(check_semiconjugacy(h, Entourage::identity(h.target().carrier_ptr())).holds);
    }
}

TEST_CASE("epsilon components") {
    const CarrierPtr c = share(Carrier::euclidean({{0.0}, {0.1}, {0.5}, {0.55}, {1.0}}));
    const auto comps = epsilon_components(metric_entourage(c, 0.1));
    CHECK(comps == std::vector<std::vector<Index>>{{0, 1}, {2, 3}, {4}});
    CHECK(epsilon_components(metric_entourage(c, 0.5)).size() == 1);
}
