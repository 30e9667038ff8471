#include "chaindyn/errors.hpp"
#include "chaindyn/lemmas.hpp"
#include "chaindyn/uniform.hpp"

#include <doctest.h>

#include <cmath>

using namespace chaindyn;

namespace {

Entourage random_reflexive(Rng& rng, const CarrierPtr& c, unsigned percent) {
    std::vector<BitRow> rows(c->size(), BitRow(c->size()));
    for (Index x = 0; x < c->size(); ++x) {
        rows[x].set(x);
        for (Index y = 0; y < c->size(); ++y)
            if (rng.chance(percent)) rows[x].set(y);
    }
    return Entourage::from_relation(c, std::move(rows));
}

/// Brute-force composition straight from the definition.
bool composed(const Entourage& e, const Entourage& f, Index x, Index y) {
    for (Index z = 0; z < e.size(); ++z)
        if (e.contains(x, z) && f.contains(z, y)) return true;
    return false;
}

} // namespace

TEST_CASE("grid carriers place points evenly") {
    const Carrier line = Carrier::interval_grid(5);
    CHECK(line.size() == 5);
    CHECK(line.point(4).coords[0] == doctest::Approx(1.0));
    CHECK(line.distance(0, 2) == doctest::Approx(0.5));

    const Carrier ring = Carrier::circle_grid(4);
    CHECK(ring.distance(0, 3) == doctest::Approx(0.25));
    CHECK(ring.distance(0, 2) == doctest::Approx(0.5));
    CHECK(ring.distance_to(0.95, 0) == doctest::Approx(0.05));
    CHECK(ring.diameter() == doctest::Approx(0.5));

    const Carrier single = Carrier::interval_grid(1);
    CHECK(single.point(0).coords[0] == 0.0);
}

TEST_CASE("explicit distance matrices are validated") {
    CHECK_NOTHROW(Carrier::explicit_distances({{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(Carrier::explicit_distances({{0, 1}, {2, 0}}), InvalidParameter);
    CHECK_THROWS_AS(Carrier::explicit_distances({{1, 1}, {1, 0}}), InvalidParameter);
    CHECK_THROWS_AS(Carrier::explicit_distances({{0, -1}, {-1, 0}}), InvalidParameter);
    CHECK_THROWS_AS(Carrier::explicit_distances({{0, 1}}), InvalidParameter);
    CHECK_THROWS_AS(Carrier::interval_grid(0), InvalidParameter);
}

TEST_CASE("metric entourage is the closed epsilon ball") {
    const CarrierPtr c = share(Carrier::interval_grid(5));
    const Entourage e = metric_entourage(c, 0.25);
    CHECK(e.contains(0, 1));
    CHECK_FALSE(e.contains(0, 2));
    CHECK(cross_section(e, 2) == std::vector<Index>{1, 2, 3});
    const Index a[] = {0, 4};
    CHECK(cross_section_set(e, a) == std::vector<Index>{0, 1, 3, 4});
    CHECK(e.symmetric());
    REQUIRE(e.epsilon());
    CHECK(*e.epsilon() == 0.25);

    CHECK(metric_entourage(c, 0.0) == Entourage::identity(c));
    CHECK(metric_entourage(c, 1.0) == Entourage::full(c));
    CHECK_THROWS_AS(metric_entourage(c, -0.1), InvalidParameter);
    CHECK_THROWS_AS(metric_entourage(c, std::nan("")), InvalidParameter);
}

TEST_CASE("relations must contain the diagonal") {
    const CarrierPtr c = share(Carrier::discrete({"a", "b"}));
    std::vector<BitRow> rows(2, BitRow(2));
    rows[0].set(0);
    CHECK_THROWS_AS(Entourage::from_relation(c, rows), InvalidParameter);
    rows[1].set(1);
    rows[0].set(1);
    const Entourage e = Entourage::from_relation(c, rows);
    CHECK_FALSE(e.symmetric());
    CHECK(transpose(e).contains(1, 0));
    CHECK_FALSE(e.epsilon());
    CHECK_THROWS_AS(power(e, 0), InvalidParameter);
}

TEST_CASE("entourage algebra holds exhaustively on small carriers") {
    Rng rng(7);
    const double eps_values[] = {0.0, 0.1, 0.25, 0.5, 1.0};
    for (std::size_t n = 1; n <= 8; ++n) {
        for (const CarrierPtr& c : {share(Carrier::interval_grid(n)), share(Carrier::circle_grid(n))}) {
            for (std::size_t i = 0; i < 5; ++i) {
                const Entourage e = metric_entourage(c, eps_values[i]);
                for (Index x = 0; x < n; ++x) {
                    CHECK(e.contains(x, x));
                    for (Index y = 0; y < n; ++y) CHECK(e.contains(x, y) == e.contains(y, x));
                }
                for (std::size_t j = i; j < 5; ++j) CHECK(e.subset_of(metric_entourage(c, eps_values[j])));
                // E^k by repeated composition matches the brute-force definition.
                Entourage acc = e;
                for (int k = 2; k <= 3; ++k) {
                    Entourage next = Entourage::identity(c);
                    std::vector<BitRow> rows(n, BitRow(n));
                    for (Index x = 0; x < n; ++x)
                        for (Index y = 0; y < n; ++y)
                            if (composed(acc, e, x, y)) rows[x].set(y);
                    acc = Entourage::from_relation(c, rows);
                    CHECK(power(e, k) == acc);
                }
                CHECK(e.subset_of(power(e, 2)));
            }
            const Entourage a = random_reflexive(rng, c, 30);
            const Entourage b = random_reflexive(rng, c, 30);
            const Entourage d = random_reflexive(rng, c, 30);
            CHECK(compose(compose(a, b), d) == compose(a, compose(b, d)));
            CHECK(transpose(transpose(a)) == a);
            CHECK(transpose(compose(a, b)) == compose(transpose(b), transpose(a)));
            for (Index x = 0; x < n; ++x)
                for (Index y = 0; y < n; ++y) CHECK(compose(a, b).contains(x, y) == composed(a, b, x, y));
        }
    }
}

TEST_CASE("entourages on different carriers do not mix") {
    const CarrierPtr a = share(Carrier::interval_grid(3));
    const CarrierPtr b = share(Carrier::interval_grid(4));
    CHECK_THROWS_AS(compose(metric_entourage(a, 0.1), metric_entourage(b, 0.1)), InvalidParameter);
}
