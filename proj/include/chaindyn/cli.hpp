#ifndef CHAINDYN_CLI_HPP
#define CHAINDYN_CLI_HPP

#include "chaindyn/analysis.hpp"
#include "chaindyn/lemmas.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chaindyn {

using Json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;
inline constexpr const char* tool_version = "0.1.0";

/// A validated system description. `document` keeps the input verbatim so
/// reports can echo it and check-report can rebuild every graph from it.
struct SystemSpec {
    Json document;
    MapSystem system;
    std::vector<double> epsilons;
    std::vector<std::string> analyses;
    std::optional<std::size_t> hyperspace_n;
    std::optional<int> product_n;
    std::optional<std::vector<Index>> exact_u;
    Budget budget;
    int n_max = 6;
    std::size_t mixing_cap = 0;
    std::vector<std::string> lemmas;
};

/// transitive, internally_transitive, mixing, weakly_mixing, totally_transitive,
/// exact, recurrent, scc, hyper_transitive, product_transitive.
const std::vector<std::string>& analysis_names();

/// Throws SpecError with a JSON pointer (or line/column for syntax errors).
SystemSpec parse_spec(const std::string& text);
SystemSpec spec_from_json(const Json& document);
SystemSpec load_spec(const std::string& path);

/// The budget actually used: spec overrides, then the environment.
Budget effective_budget(const SystemSpec& spec);

struct AnalyzeRun {
    Json report;
    /// Analyses aborted by BudgetExceeded; recorded in the report as errors.
    std::size_t budget_errors = 0;
};

AnalyzeRun run_analyze(const SystemSpec& spec, std::uint64_t seed);

struct VerifyOptions {
    std::string suite = "all";
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t max_points = 8;
    unsigned threads = 0;
    Budget budget;
};

struct VerifyRun {
    Json report;
    std::vector<LemmaSummary> summaries;
    bool hard_violation = false;
};

/// Throws InvalidParameter for trials == 0 or an unknown lemma id.
VerifyRun run_verify(const VerifyOptions& options);

Json to_json(const TrialRecord& record);

/// Two-space indented JSON with a trailing newline.
std::string serialize_report(const Json& report);

struct CheckReportResult {
    std::size_t chains = 0;
    std::size_t counterexamples = 0;
    std::size_t replays = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Re-validates every witness chain against rebuilt graphs, re-confirms every
/// counterexample, and replays logged lemma violations from their seeds.
CheckReportResult check_report(const Json& report);
CheckReportResult check_report_file(const std::string& path);

} // namespace chaindyn

#endif
