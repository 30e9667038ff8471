#ifndef CHAINDYN_LEMMAS_HPP
#define CHAINDYN_LEMMAS_HPP

#include "chaindyn/system.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace chaindyn {

/// mt19937_64 with a portable bounded draw (std distributions are
/// implementation-defined, which would break cross-platform replay).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound > 0.
    std::size_t below(std::size_t bound);
    /// True with probability percent / 100.
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trial `trial` of lemma `id` under master seed `master`.
std::uint64_t trial_seed(std::uint64_t master, const std::string& id, std::size_t trial);

struct LemmaInfo {
    std::string id;
    bool probe = false;
    /// Largest carrier the batch generator draws for this lemma.
    std::size_t max_points = 8;
    bool tables_only = false;
};

/// P1, L3, L4, C6, L7, L8, L9, P10, L11, L12, L13, L14, L15, L16, T-final.
const std::vector<LemmaInfo>& lemma_catalog();
/// Accepts L5 and L6 as aliases of C6. Throws InvalidParameter for unknown ids.
const LemmaInfo& lemma_info(const std::string& id);
/// "all" or a comma-separated id list, canonicalized and deduplicated in catalog order.
std::vector<std::string> parse_suite(const std::string& suite);

/// A random system and metric entourage drawn for one trial.
struct TrialInstance {
    MapSystem system;
    Entourage entourage;
    std::string family;
};

/// Interval or circle grid with 1..max_points points; random, permutation,
/// near-identity or sampled-builtin tables (plus true builtins unless
/// tables_only); epsilon a small multiple of the grid spacing.
TrialInstance random_instance(Rng& rng, std::size_t max_points, bool tables_only = false);

enum class TrialOutcome { pass, vacuous, violation, skipped };
const char* to_string(TrialOutcome outcome);

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t points = 0;
    std::string family;
    std::string map;
    std::optional<double> epsilon;
    bool antecedent = false;
    bool consequent = false;
    TrialOutcome outcome = TrialOutcome::skipped;
    std::string detail;
};

/// Checks lemma `id` as an implication on one system.
TrialRecord check_lemma(const std::string& id, const MapSystem& system, const Entourage& e, const Budget& budget = {});

/// Draws the instance for `seed` and checks it; the replay entry point.
TrialRecord run_trial(const std::string& id, std::uint64_t seed, std::size_t max_points, const Budget& budget = {});

struct LemmaSummary {
    LemmaInfo info;
    std::size_t max_points = 0;
    std::vector<TrialRecord> trials;

    std::size_t count(TrialOutcome outcome) const;
    /// A hard lemma fails on any violation; probes never fail.
    bool failed() const { return !info.probe && count(TrialOutcome::violation) > 0; }
};

/// Runs `trials` independent trials on worker threads. Records are ordered by
/// trial index, so the summary does not depend on scheduling.
LemmaSummary verify_lemma(const std::string& id, std::size_t trials, std::uint64_t seed, std::size_t max_points,
                          const Budget& budget = {}, unsigned threads = 0);

/// Largest carrier distance delta whose n-step error ladder
/// B_1 = delta, B_{j+1} = spread(B_j) + delta stays within epsilon.
/// A delta-chain of n steps then tracks f^n within epsilon. Table systems only.
double chain_ladder_resolution(const MapSystem& system, double epsilon, int n);

} // namespace chaindyn

#endif
