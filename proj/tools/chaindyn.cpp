// chaindyn: chain-dynamics analysis of finite discretized systems.
//
// Exit codes: 0 ran, 1 spec error / invalid parameter / budget exceeded,
// 2 a hard lemma was violated or a report failed re-validation.

#include "chaindyn/cli.hpp"
#include "chaindyn/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace chaindyn;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot write " + path);
    out << text;
}

int analyze(const std::string& spec_path, const std::string& out_path, std::uint64_t seed) {
    const SystemSpec spec = load_spec(spec_path);
    const AnalyzeRun run = run_analyze(spec, seed);
    write_output(serialize_report(run.report), out_path);
    for (const Json& entry : run.report["results"])
        for (const Json& a : entry["analyses"]) {
            std::cerr << "eps=" << entry["epsilon"].dump() << " " << a["property"].get<std::string>() << ": ";
            if (a.contains("error"))
                std::cerr << "error " << a["error"]["construction"].get<std::string>() << "\n";
            else if (a.contains("verdict"))
                std::cerr << (a["verdict"].get<bool>() ? "true" : "false") << "\n";
            else
                std::cerr << a["components"].size() << " components\n";
        }
    return run.budget_errors ? 1 : 0;
}

int verify(const VerifyOptions& options, const std::string& out_path, std::optional<std::uint64_t> replay) {
    if (replay) {
        for (const std::string& id : parse_suite(options.suite)) {
            Json rec = to_json(run_trial(id, *replay, options.max_points, options.budget));
            rec["id"] = id;
            std::cout << rec.dump(2) << "\n";
        }
        return 0;
    }
    const VerifyRun run = run_verify(options);
    write_output(serialize_report(run.report), out_path);
    for (const LemmaSummary& s : run.summaries) {
        std::cerr << s.info.id << (s.info.probe ? " [probe]" : "") << ": pass " << s.count(TrialOutcome::pass)
                  << ", vacuous " << s.count(TrialOutcome::vacuous) << ", violation "
                  << s.count(TrialOutcome::violation) << ", skipped " << s.count(TrialOutcome::skipped) << "\n";
        for (const TrialRecord& r : s.trials)
            if (r.outcome == TrialOutcome::violation)
                std::cerr << "  " << (s.info.probe ? "logged" : "VIOLATION") << " trial " << r.trial << " seed "
                          << r.seed << " (replay: verify --suite " << s.info.id << " --replay " << r.seed
                          << " --max-points " << options.max_points << "): " << r.map << " eps "
                          << (r.epsilon ? std::to_string(*r.epsilon) : "-") << " " << r.detail << "\n";
    }
    return run.hard_violation ? 2 : 0;
}

int check(const std::string& path) {
    const CheckReportResult r = check_report_file(path);
    std::cerr << "chains re-validated: " << r.chains << ", claims re-confirmed: " << r.counterexamples
              << ", violations replayed: " << r.replays << "\n";
    for (const auto& f : r.failures) std::cerr << "FAILED " << f << "\n";
    return r.ok() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chain transitivity, mixing and hyperspace analysis of finite systems"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    std::uint64_t seed = 0;
    auto* analyze_cmd = app.add_subcommand("analyze", "Evaluate the analyses of a system spec");
    analyze_cmd->add_option("--spec", spec_path, "System spec (JSON)")->required();
    analyze_cmd->add_option("--out", out_path, "Report path ('-' for stdout)")->required();
    analyze_cmd->add_option("--seed", seed, "Seed echoed into the report");

    VerifyOptions options;
    std::string verify_out;
    std::uint64_t replay_seed = 0;
    auto* verify_cmd = app.add_subcommand("verify", "Randomized lemma verification");
    verify_cmd->add_option("--suite", options.suite, "Lemma ids (comma separated) or 'all'")->required();
    verify_cmd->add_option("--trials", options.trials, "Trials per lemma (>= 1)");
    verify_cmd->add_option("--seed", options.seed, "Master seed");
    verify_cmd->add_option("--max-points", options.max_points, "Largest carrier drawn")->required();
    verify_cmd->add_option("--out", verify_out, "Report path (stdout when omitted)");
    verify_cmd->add_option("--threads", options.threads, "Worker threads (0 = hardware)");
    auto* replay_opt = verify_cmd->add_option("--replay", replay_seed, "Re-run the single trial with this seed");

    std::string report_path;
    auto* check_cmd = app.add_subcommand("check-report", "Re-validate every witness in a report");
    check_cmd->add_option("report", report_path, "Report path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 1;
    }

    try {
        if (*analyze_cmd) return analyze(spec_path, out_path, seed);
        if (*verify_cmd) {
            options.budget = Budget::from_environment();
            return verify(options, verify_out, *replay_opt ? std::optional(replay_seed) : std::nullopt);
        }
        if (*check_cmd) return check(report_path);
    } catch (const SpecError& err) {
        std::cerr << "spec error at " << err.what() << "\n";
        return 1;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
