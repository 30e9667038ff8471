#include "chaindyn/analysis.hpp"
#include "chaindyn/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace chaindyn;

namespace {

/// gcd of closed-walk lengths k <= bound through v.
std::size_t oracle_period(const oracle::Matrix& a, std::size_t v, std::size_t bound) {
    std::size_t g = 0;
    oracle::Matrix p = a;
    for (std::size_t k = 1; k <= bound; ++k, p = oracle::multiply(p, a))
        if (p[v][v]) g = std::gcd(g, k);
    return g;
}

void check_witnesses(const ChainPropertyResult& r, const TransitionGraph& g) {
    for (const LabeledChain& w : r.witnesses)
        if (w.graph == "base") CHECK_NOTHROW(validate_chain(g, w.chain.points()));
}

struct Tent64 {
    CarrierPtr carrier = share(Carrier::interval_grid(64));
    MapSystem system = MapSystem::builtin(carrier, BuiltinKind::tent);
};

} // namespace

TEST_CASE("tent on 64 points at eps 1/16") {
    const Tent64 t;
    const Entourage e = metric_entourage(t.carrier, 1.0 / 16);
    const TransitionGraph g = build_transition_graph(t.system, e);
    CHECK(g.edge_count() == 436);

    const auto transitive = is_chain_transitive(t.system, e);
    CHECK(transitive.verdict);
    REQUIRE(transitive.witnesses.size() == 1);
    check_witnesses(transitive, g);

    const auto mixing = is_chain_mixing(t.system, e);
    CHECK(mixing.verdict);
    CHECK(mixing.minimal_n == 5);
    CHECK(is_chain_weakly_mixing(t.system, e).verdict);
    const Index u[] = {31, 32, 33};
    const auto exact = is_exact_by_chains(t.system, e, u);
    CHECK(exact.verdict);
    CHECK(exact.n_e == 4);
    check_witnesses(exact, g);
    CHECK(exactness_everywhere(g).n_e == 5);
    CHECK(is_chain_recurrent(t.system, e).verdict);
}

TEST_CASE("tent on 64 points at eps 1/32") {
    const Tent64 t;
    const Entourage e = metric_entourage(t.carrier, 1.0 / 32);
    const TransitionGraph g = build_transition_graph(t.system, e);
    CHECK(g.edge_count() == 190);
    CHECK(is_chain_transitive(t.system, e).verdict);
    CHECK(is_chain_mixing(t.system, e).minimal_n == 6);
    const Index u[] = {31, 32, 33};
    CHECK(is_exact_by_chains(t.system, e, u).n_e == 5);
    CHECK(exactness_everywhere(g).n_e == 6);
}

TEST_CASE("quarter rotation on four points") {
    const CarrierPtr ring = share(Carrier::circle_grid(4));
    const MapSystem rot = MapSystem::builtin(ring, BuiltinKind::rotation, 0.25);
    const Entourage e = metric_entourage(ring, 0.01);
    CHECK(build_transition_graph(rot, e).edge_count() == 4);
    CHECK(is_chain_transitive(rot, e).verdict);
    CHECK(is_chain_recurrent(rot, e).verdict);
    const auto mixing = is_chain_mixing(rot, e);
    CHECK_FALSE(mixing.verdict);
    CHECK(mixing.period == 4);
    CHECK_FALSE(is_chain_weakly_mixing(rot, e).verdict);

    const auto total = is_totally_chain_transitive(rot, e, 6);
    CHECK_FALSE(total.verdict);
    CHECK(total.failing_n == 2);
    const bool expected[] = {true, false, true, false, true, false};
    for (int n = 1; n <= 6; ++n) CHECK(is_chain_transitive(iterate_system(rot, n), e).verdict == expected[n - 1]);
    CHECK_FALSE(is_chain_transitive(iterate_system(rot, 4), e).verdict);

    const Index u[] = {0};
    const auto exact = is_exact_by_chains(rot, e, u);
    CHECK_FALSE(exact.verdict);
    REQUIRE(exact.reach_cycle);
    CHECK(exact.reach_cycle->second == 4);
}

TEST_CASE("third rotation is not weakly mixing") {
    const CarrierPtr ring = share(Carrier::circle_grid(3));
    const MapSystem rot = MapSystem::builtin(ring, BuiltinKind::rotation, 1.0 / 3);
    CHECK_FALSE(is_chain_weakly_mixing(rot, metric_entourage(ring, 0.01)).verdict);
}

TEST_CASE("identity on two separated points") {
    const CarrierPtr c = share(Carrier::euclidean({{0.0}, {1.0}}));
    const MapSystem id = MapSystem::builtin(share(Carrier::interval_grid(2)), BuiltinKind::identity);
    const Entourage e = metric_entourage(id.carrier_ptr(), 0.1);
    const auto t = is_chain_transitive(id, e);
    CHECK_FALSE(t.verdict);
    REQUIRE(t.no_chain);
    CHECK(*t.no_chain == std::pair<Index, Index>{0, 1});
    CHECK(is_chain_recurrent(id, e).verdict);
    CHECK(internally_chain_transitive_subsets(id, e) == std::vector<std::vector<Index>>{{0}, {1}});
    const auto table = MapSystem::table(c, {0, 1});
    CHECK(scc_decompose(build_transition_graph(table, metric_entourage(c, 0.1))).count() == 2);
}

TEST_CASE("constant map is not recurrent off its fixed point") {
    const CarrierPtr c = share(Carrier::interval_grid(5));
    const MapSystem f = MapSystem::table(c, {2, 2, 2, 2, 2});
    const TransitionGraph g = build_transition_graph(f, Entourage::identity(c));
    const auto scc = scc_decompose(g);
    CHECK(scc.count() == 5);
    CHECK(scc.period[scc.component_of[2]] == 1);
    CHECK(scc.period[scc.component_of[0]] == 0);
    CHECK(scc.dag_edges.size() == 4);
    const auto r = chain_recurrence(g);
    CHECK_FALSE(r.verdict);
    CHECK(r.recurrent == std::vector<bool>{false, false, true, false, false});
    CHECK(internally_chain_transitive_sets(g) == std::vector<std::vector<Index>>{{2}});
}

TEST_CASE("decompositions agree with dense closures") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(32);
        const unsigned density = static_cast<unsigned>(2 + rng.below(20));
        const oracle::Matrix a = oracle::random_matrix(rng, n, density);
        const TransitionGraph g = oracle::to_graph(a);
        const oracle::Matrix reach = oracle::closure(a);
        const auto scc = scc_decompose(g);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                const bool together = x == y || (reach[x][y] && reach[y][x]);
                REQUIRE((scc.component_of[x] == scc.component_of[y]) == together);
            }
        for (std::size_t c = 0; c < scc.count(); ++c) {
            const Index v = scc.components[c].front();
            CHECK(scc.has_cycle(static_cast<Index>(c)) == reach[v][v]);
            if (n <= 12) CHECK(scc.period[c] == oracle_period(a, v, 2 * n * n));
        }
        const auto rec = chain_recurrence(g);
        for (Index x = 0; x < n; ++x) CHECK(rec.recurrent[x] == reach[x][x]);
        CHECK(is_transitive_graph(g) == oracle::transitive(a));
        const auto t = chain_transitivity(g);
        CHECK(t.verdict == oracle::transitive(a));
        if (t.verdict) {
            const Chain& tour = t.witnesses.front().chain;
            CHECK(tour.front() == 0);
            CHECK(tour.back() == 0);
            BitRow seen(n);
            for (Index v : tour.points()) seen.set(v);
            CHECK(seen.count() == n);
            check_witnesses(t, g);
        } else {
            REQUIRE(t.no_chain);
            CHECK_FALSE(reach[t.no_chain->first][t.no_chain->second]);
        }
    }
}

TEST_CASE("mixing is primitivity is coprime cycles") {
    Rng rng(8);
    std::size_t mixing_seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng.below(32);
        // Around one to four successors per vertex keeps both verdicts common.
        const auto density = static_cast<unsigned>(std::min<std::size_t>(90, (1 + rng.below(4)) * 100 / n));
        const oracle::Matrix a = oracle::random_matrix(rng, n, density);
        const TransitionGraph g = oracle::to_graph(a);
        const auto r = chain_mixing(g);
        const std::size_t exponent = oracle::primitivity_exponent(a, wielandt_bound(n));
        REQUIRE(r.verdict == (exponent > 0));
        bool coprime_everywhere = is_transitive_graph(g);
        for (Index v = 0; coprime_everywhere && v < n; ++v) coprime_everywhere = coprime_cycles(g, v).has_value();
        CHECK(r.verdict == coprime_everywhere);
        const auto scc = scc_decompose(g);
        CHECK(r.verdict == (scc.count() == 1 && scc.period[0] == 1));
        if (r.verdict) {
            ++mixing_seen;
            CHECK(r.minimal_n == exponent);
            CHECK(exponent <= wielandt_bound(n));
            check_witnesses(r, g);
            if (n >= 2) CHECK_FALSE(oracle::all_true(oracle::power(a, exponent - 1)));
            CHECK(oracle::all_true(oracle::power(a, exponent + 1)));
        }
    }
    CHECK(mixing_seen > 50);
    CHECK(mixing_seen < 350);
}

TEST_CASE("weak mixing is tensor square transitivity") {
    Rng rng(12);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 1 + rng.below(16);
        const oracle::Matrix a = oracle::random_matrix(rng, n, static_cast<unsigned>(3 + rng.below(15)));
        const TransitionGraph g = oracle::to_graph(a);
        const auto wm = chain_weak_mixing(g);
        CHECK(wm.verdict == oracle::transitive(oracle::kron_square(a)));
        CHECK(wm.verdict == chain_mixing(g).verdict);
    }
}

TEST_CASE("exactness matches set iteration") {
    Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(16);
        const oracle::Matrix a = oracle::random_matrix(rng, n, static_cast<unsigned>(3 + rng.below(20)));
        const TransitionGraph g = oracle::to_graph(a);
        const Index u[] = {static_cast<Index>(rng.below(n))};
        const auto r = exactness(g, u);
        std::size_t expected = 0;
        oracle::Matrix p = a;
        for (std::size_t k = 1; k <= n * n && !expected; ++k, p = oracle::multiply(p, a))
            if (std::all_of(p[u[0]].begin(), p[u[0]].end(), [](bool b) { return b; })) expected = k;
        CHECK(r.verdict == (expected > 0));
        if (expected) CHECK(r.n_e == expected);
        CHECK(exactness_everywhere(g).verdict == chain_mixing(g).verdict);
    }
    CHECK_THROWS_AS(exactness(TransitionGraph(std::vector<std::vector<Index>>{{0}}), {}), InvalidParameter);
}

TEST_CASE("verdicts only improve as eps grows") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const TrialInstance inst = random_instance(rng, 10);
        const double eps = *inst.entourage.epsilon();
        const Entourage wider = metric_entourage(inst.system.carrier_ptr(), eps + 0.1);
        if (is_chain_transitive(inst.system, inst.entourage).verdict)
            CHECK(is_chain_transitive(inst.system, wider).verdict);
        if (is_chain_mixing(inst.system, inst.entourage).verdict) CHECK(is_chain_mixing(inst.system, wider).verdict);
        if (is_chain_recurrent(inst.system, inst.entourage).verdict)
            CHECK(is_chain_recurrent(inst.system, wider).verdict);
    }
}

TEST_CASE("hyper and product transitivity") {
    const CarrierPtr ring = share(Carrier::circle_grid(4));
    const MapSystem rot = MapSystem::builtin(ring, BuiltinKind::rotation, 0.25);
    const Entourage e = metric_entourage(ring, 0.01);
    CHECK(is_hyper_transitive(rot, e, 1).verdict);
    CHECK_FALSE(is_hyper_transitive(rot, e, 2).verdict);
    CHECK_FALSE(is_product_transitive(rot, e, 2).verdict);
    CHECK(is_product_transitive(rot, e, 1).verdict);

    const CarrierPtr line = share(Carrier::interval_grid(8));
    const MapSystem tent = MapSystem::builtin(line, BuiltinKind::tent);
    const Entourage wide = metric_entourage(line, 1.0 / 7);
    const auto hyper = is_hyper_transitive(tent, wide, 3);
    CHECK(hyper.verdict == is_product_transitive(tent, wide, 3).verdict);
    REQUIRE_FALSE(hyper.witnesses.empty());
    CHECK(hyper.witnesses.front().graph == "hyper:3");
    Budget tiny;
    tiny.max_vertices = 10;
    CHECK_THROWS_AS(is_hyper_transitive(tent, wide, 3, tiny), BudgetExceeded);
}
