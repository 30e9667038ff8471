#include "chaindyn/analysis.hpp"
#include "chaindyn/errors.hpp"
#include "chaindyn/lemmas.hpp"

#include <doctest.h>

#include <set>

using namespace chaindyn;

namespace {

bool same(const TrialRecord& a, const TrialRecord& b) {
    return a.trial == b.trial && a.seed == b.seed && a.points == b.points && a.family == b.family && a.map == b.map &&
           a.epsilon == b.epsilon && a.antecedent == b.antecedent && a.consequent == b.consequent &&
           a.outcome == b.outcome && a.detail == b.detail;
}

} // namespace

TEST_CASE("catalog and suite parsing") {
    const auto& catalog = lemma_catalog();
    CHECK(catalog.size() == 15);
    CHECK(catalog.front().id == "P1");
    CHECK(catalog.back().id == "T-final");
    CHECK(lemma_info("L13").probe);
    CHECK_FALSE(lemma_info("L12").probe);
    CHECK(lemma_info("L5").id == "C6");
    CHECK(lemma_info("L6").id == "C6");
    CHECK_THROWS_AS(lemma_info("L2"), InvalidParameter);
    CHECK(parse_suite("all").size() == 15);
    CHECK(parse_suite("L6,L3,C6") == std::vector<std::string>{"L3", "C6"});
    CHECK(parse_suite("T-final, L13") == std::vector<std::string>{"L13", "T-final"});
    CHECK_THROWS_AS(parse_suite("L3,bogus"), InvalidParameter);
}

TEST_CASE("seeds and draws are reproducible") {
    CHECK(trial_seed(1, "L3", 0) == trial_seed(1, "L3", 0));
    std::set<std::uint64_t> seeds;
    for (const auto& info : lemma_catalog())
        for (std::size_t t = 0; t < 20; ++t) seeds.insert(trial_seed(1, info.id, t));
    CHECK(seeds.size() == 15 * 20);

    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t bound = 1 + static_cast<std::size_t>(i % 37);
        const std::size_t x = a.below(bound);
        CHECK(x == b.below(bound));
        CHECK(x < bound);
    }
}

TEST_CASE("random instances respect their limits") {
    Rng rng(1);
    std::set<std::string> families;
    for (int i = 0; i < 500; ++i) {
        const TrialInstance inst = random_instance(rng, 9, i % 2 == 0);
        CHECK(inst.system.size() >= 1);
        CHECK(inst.system.size() <= 9);
        REQUIRE(inst.entourage.epsilon());
        CHECK(*inst.entourage.epsilon() >= 0.0);
        if (i % 2 == 0) CHECK(inst.system.is_table());
        families.insert(inst.family.substr(inst.family.find('/') + 1));
    }
    CHECK(families.count("permutation"));
    CHECK(families.count("random_table"));
    CHECK(families.size() >= 5);
}

TEST_CASE("named systems under the coprime lemmas") {
    const CarrierPtr ring = share(Carrier::circle_grid(4));
    const MapSystem rot = MapSystem::builtin(ring, BuiltinKind::rotation, 0.25);
    const Entourage e = metric_entourage(ring, 0.01);
    CHECK(check_lemma("L7", rot, e).outcome == TrialOutcome::vacuous);
    CHECK(check_lemma("L8", rot, e).outcome == TrialOutcome::vacuous);

    const CarrierPtr line = share(Carrier::interval_grid(64));
    const MapSystem tent = MapSystem::builtin(line, BuiltinKind::tent);
    const Entourage wide = metric_entourage(line, 1.0 / 16);
    CHECK(check_lemma("L8", tent, wide).outcome == TrialOutcome::pass);
    CHECK(check_lemma("L7", tent, wide).outcome == TrialOutcome::pass);
    CHECK(check_lemma("L12", tent, wide).outcome == TrialOutcome::pass);
}

TEST_CASE("fixed-eps product transitivity does not force f^2 transitive") {
    const CarrierPtr c = share(Carrier::euclidean({{0.0}, {1.0}, {0.1}}));
    const MapSystem f = MapSystem::table(c, {1, 0, 2});
    const Entourage e = metric_entourage(c, 0.1);
    const TransitionGraph g = build_transition_graph(f, e);
    CHECK(chain_mixing(g).verdict);
    CHECK(is_chain_weakly_mixing(f, e).verdict);
    const auto total = is_totally_chain_transitive(f, e, 4);
    CHECK_FALSE(total.verdict);
    CHECK(total.failing_n == 2);
    CHECK(check_lemma("L14", f, e).outcome != TrialOutcome::violation);
}

TEST_CASE("five-cycle passes four iterates without weak mixing") {
    const CarrierPtr c = share(Carrier::interval_grid(5));
    const MapSystem f = MapSystem::table(c, {1, 2, 3, 4, 0});
    const Entourage e = metric_entourage(c, 0.0);
    CHECK(is_totally_chain_transitive(f, e, 4).verdict);
    CHECK_FALSE(is_chain_weakly_mixing(f, e).verdict);
    const TrialRecord r = check_lemma("L15", f, e);
    CHECK(r.outcome == TrialOutcome::vacuous);
    CHECK(r.detail == "n_max 5");
}

TEST_CASE("swapping halves yields only covering pairs") {
    const CarrierPtr c = share(Carrier::interval_grid(4));
    const MapSystem f = MapSystem::table(c, {3, 3, 0, 0});
    const TrialRecord r = check_lemma("L16", f, metric_entourage(c, 1.0 / 3));
    CHECK(r.antecedent);
    CHECK(r.outcome == TrialOutcome::pass);
    CHECK(r.detail.find("covering pairs 2") != std::string::npos);
}

TEST_CASE("T-final probe finds split carriers") {
    const CarrierPtr c = share(Carrier::euclidean({{0.0}, {1.0}}));
    const MapSystem f = MapSystem::table(c, {1, 0});
    const TrialRecord r = check_lemma("T-final", f, metric_entourage(c, 1.0));
    CHECK(r.outcome == TrialOutcome::pass);
    const TrialRecord split = check_lemma("T-final", f, metric_entourage(c, 0.5));
    CHECK(split.detail == "2 eps-components");
}

TEST_CASE("ladder resolution") {
    const CarrierPtr c = share(Carrier::interval_grid(9));
    const MapSystem id = MapSystem::table(c, {0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(chain_ladder_resolution(id, 0.5, 4) == doctest::Approx(0.125));
    CHECK(chain_ladder_resolution(id, 0.1, 4) == 0.0);
    CHECK(chain_ladder_resolution(id, 0.5, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(chain_ladder_resolution(id, 0.5, 0), InvalidParameter);
}

TEST_CASE("budget overruns become skips") {
    Budget tiny;
    tiny.max_vertices = 4;
    const CarrierPtr line = share(Carrier::interval_grid(8));
    const MapSystem tent = MapSystem::builtin(line, BuiltinKind::tent);
    const TrialRecord r = check_lemma("L3", tent, metric_entourage(line, 0.2), tiny);
    CHECK(r.outcome == TrialOutcome::skipped);
    CHECK(r.detail.find("budget exceeded") != std::string::npos);
}

TEST_CASE("batches replay independent of threads") {
    for (const std::string id : {"P1", "L9", "L11", "L16", "T-final"}) {
        const LemmaSummary one = verify_lemma(id, 40, 77, 8, {}, 1);
        const LemmaSummary many = verify_lemma(id, 40, 77, 8, {}, 4);
        REQUIRE(one.trials.size() == 40);
        for (std::size_t t = 0; t < 40; ++t) {
            CHECK(same(one.trials[t], many.trials[t]));
            CHECK(one.trials[t].seed == trial_seed(77, id, t));
            TrialRecord replay = run_trial(id, one.trials[t].seed, 8);
            replay.trial = t;
            CHECK(same(replay, one.trials[t]));
        }
        CHECK_FALSE(one.failed());
    }
    CHECK_THROWS_AS(verify_lemma("L3", 0, 1, 8), InvalidParameter);
    CHECK_THROWS_AS(verify_lemma("L3", 1, 1, 0), InvalidParameter);
}
