#include "chaindyn/chains.hpp"
#include "chaindyn/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace chaindyn;

namespace {

TransitionGraph cycle_graph(std::size_t n) {
    std::vector<std::vector<Index>> adj(n);
    for (std::size_t i = 0; i < n; ++i) adj[i].push_back(static_cast<Index>((i + 1) % n));
    return TransitionGraph(adj);
}

/// Lexicographically smallest exact-length walk, chosen greedily against matrix powers.
std::vector<Index> greedy_walk(const std::vector<oracle::Matrix>& powers, Index x, Index y, std::size_t n) {
    std::vector<Index> walk{x};
    const std::size_t size = powers[1].size();
    for (std::size_t left = n; left > 0; --left) {
        const Index at = walk.back();
        for (Index v = 0; v < size; ++v)
            if (powers[1][at][v] && powers[left - 1][v][y]) {
                walk.push_back(v);
                break;
            }
    }
    return walk;
}

} // namespace

TEST_CASE("validation pins the first broken step") {
    const TransitionGraph g = cycle_graph(4);
    const Chain c = validate_chain(g, {0, 1, 2, 3, 0});
    CHECK(c.length() == 4);
    CHECK(c.graph_id() == g.id());
    try {
        validate_chain(g, {0, 1, 3, 0});
        FAIL("accepted a broken chain");
    } catch (const NotAChain& err) {
        CHECK(err.step() == 1);
    }
    CHECK_THROWS_AS(validate_chain(g, {0}), InvalidParameter);
    CHECK_THROWS_AS(validate_chain(g, {0, 9}), InvalidParameter);
}

TEST_CASE("concatenation adds lengths and checks the junction") {
    const TransitionGraph g = cycle_graph(5);
    for (std::size_t a = 1; a <= 6; ++a)
        for (std::size_t b = 1; b <= 6; ++b) {
            const Chain first = *find_chain_exact_length(g, 0, static_cast<Index>(a % 5), a);
            const Chain second = *find_chain_exact_length(g, first.back(), static_cast<Index>((a + b) % 5), b);
            const Chain joined = concatenate(first, second);
            CHECK(joined.length() == a + b);
            CHECK(joined.front() == 0);
            CHECK_NOTHROW(validate_chain(g, joined.points()));
        }
    const Chain a = validate_chain(g, {0, 1});
    const Chain b = validate_chain(g, {2, 3});
    CHECK_THROWS_AS(concatenate(a, b), EndpointMismatch);
    const TransitionGraph other = cycle_graph(5);
    CHECK_THROWS_AS(concatenate(a, validate_chain(other, {1, 2})), InvalidParameter);
}

TEST_CASE("searches agree with boolean matrix powers") {
    Rng rng(2024);
    const unsigned densities[] = {5, 12, 30};
    for (std::size_t n = 1; n <= 32; n += (n < 8 ? 1 : 3)) {
        for (unsigned density : densities) {
            const oracle::Matrix a = oracle::random_matrix(rng, n, density);
            const TransitionGraph g = oracle::to_graph(a);
            std::vector<oracle::Matrix> powers{oracle::identity(n)};
            for (std::size_t k = 1; k <= 20; ++k) powers.push_back(oracle::multiply(powers.back(), a));
            const oracle::Matrix reach = oracle::closure(a);
            for (Index x = 0; x < n; ++x) {
                const BitRow r = reachable_from(g, x);
                for (Index y = 0; y < n; ++y) {
                    REQUIRE(r.test(y) == reach[x][y]);
                    if (reach[x][y]) {
                        const Chain c = find_chain(g, x, y);
                        std::size_t shortest = 1;
                        while (!powers[shortest][x][y]) ++shortest;
                        CHECK(c.length() == shortest);
                        CHECK(c.points() == greedy_walk(powers, x, y, shortest));
                    } else {
                        CHECK_THROWS_AS(find_chain(g, x, y), NoChain);
                    }
                    for (std::size_t len = 1; len <= 20; ++len) {
                        const auto c = find_chain_exact_length(g, x, y, len);
                        REQUIRE(c.has_value() == powers[len][x][y]);
                        if (c) {
                            CHECK(c->length() == len);
                            CHECK(c->front() == x);
                            CHECK(c->back() == y);
                            CHECK_NOTHROW(validate_chain(g, c->points()));
                            if (n <= 12) CHECK(c->points() == greedy_walk(powers, x, y, len));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("cycle lengths and coprime pairs") {
    const TransitionGraph four = cycle_graph(4);
    CHECK(cycle_lengths_through(four, 0, 12) == std::vector<std::size_t>{4, 8, 12});
    CHECK_FALSE(coprime_cycles(four, 0));

    // 0 -> 1 -> 2 -> 0 plus the chord 1 -> 0: cycles of length 2 and 3.
    const TransitionGraph g(std::vector<std::vector<Index>>{{1}, {0, 2}, {0}});
    const auto pair = coprime_cycles(g, 0);
    REQUIRE(pair);
    CHECK(pair->first.length() == 2);
    CHECK(pair->second.length() == 3);
    CHECK(pair->first.front() == 0);
    CHECK(pair->second.back() == 0);
    CHECK(std::gcd(pair->first.length(), pair->second.length()) == 1);

    const TransitionGraph loop(std::vector<std::vector<Index>>{{0}});
    const auto loops = coprime_cycles(loop, 0);
    REQUIRE(loops);
    CHECK(loops->first.length() == 1);
    CHECK(default_length_cap(loop) == 2);
}
