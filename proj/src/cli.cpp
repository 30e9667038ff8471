#include "chaindyn/cli.hpp"

#include "chaindyn/errors.hpp"
#include "chaindyn/hyperspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace chaindyn {

const std::vector<std::string>& analysis_names() {
    static const std::vector<std::string> names{"transitive", "internally_transitive", "mixing",
                                                "weakly_mixing", "totally_transitive", "exact",
                                                "recurrent", "scc", "hyper_transitive",
                                                "product_transitive"};
    return names;
}

namespace {

// ---- spec parsing ----

[[noreturn]] void fail(const std::string& at, const std::string& message) {
    throw SpecError(at.empty() ? "/" : at, message);
}

std::string at_key(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string at_index(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

void allow_keys(const Json& obj, const std::string& at, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(at, "expected an object");
    for (const auto& item : obj.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }))
            fail(at_key(at, item.key()), "unknown key");
}

const Json& require(const Json& obj, const std::string& key, const std::string& at) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(at_key(at, key), "missing required key");
    return *it;
}

/// An object holding exactly one of `choices`; returns the chosen key.
std::string one_of(const Json& obj, const std::string& at, std::initializer_list<const char*> choices) {
    allow_keys(obj, at, choices);
    if (obj.size() != 1) fail(at, "expected exactly one of its alternatives");
    return obj.begin().key();
}

long long as_integer(const Json& v, const std::string& at, long long min) {
    if (!v.is_number_integer()) fail(at, "expected an integer");
    const long long x = v.get<long long>();
    if (x < min) fail(at, "must be >= " + std::to_string(min));
    return x;
}

/// A JSON number, or a string holding a decimal or a fraction "p/q".
double as_real(const Json& v, const std::string& at) {
    double x = 0.0;
    if (v.is_number()) {
        x = v.get<double>();
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto slash = s.find('/');
        auto parse = [&](std::string_view part) {
            double out = 0.0;
            const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
            if (ec != std::errc{} || ptr != part.data() + part.size()) fail(at, "not a real number: '" + s + "'");
            return out;
        };
        if (slash == std::string::npos) {
            x = parse(s);
        } else {
            const double den = parse(std::string_view(s).substr(slash + 1));
            if (den == 0.0) fail(at, "zero denominator");
            x = parse(std::string_view(s).substr(0, slash)) / den;
        }
    } else {
        fail(at, "expected a real number");
    }
    if (!std::isfinite(x)) fail(at, "must be finite");
    return x;
}

std::vector<double> real_list(const Json& v, const std::string& at) {
    if (!v.is_array()) fail(at, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_real(v[i], at_index(at, i)));
    return out;
}

CarrierPtr parse_carrier(const Json& doc, const std::string& at) {
    const std::string kind = one_of(doc, at, {"interval_grid", "circle_grid", "explicit"});
    const Json& body = doc[kind];
    const std::string here = at_key(at, kind);
    if (kind != "explicit") {
        allow_keys(body, here, {"points"});
        const auto n = static_cast<std::size_t>(as_integer(require(body, "points", here), at_key(here, "points"), 1));
        return share(kind == "interval_grid" ? Carrier::interval_grid(n) : Carrier::circle_grid(n));
    }
    allow_keys(body, here, {"metric", "points", "labels", "distances"});
    try {
        if (body.contains("distances")) {
            const Json& rows = body["distances"];
            const std::string rows_at = at_key(here, "distances");
            if (!rows.is_array() || rows.empty()) fail(rows_at, "expected a non-empty array of rows");
            std::vector<std::vector<double>> matrix;
            for (std::size_t i = 0; i < rows.size(); ++i) matrix.push_back(real_list(rows[i], at_index(rows_at, i)));
            std::vector<std::string> labels;
            if (body.contains("labels")) labels = body["labels"].get<std::vector<std::string>>();
            return share(Carrier::explicit_distances(std::move(matrix), std::move(labels)));
        }
        const std::string metric = require(body, "metric", here).is_string() ? body["metric"].get<std::string>() : "";
        if (metric == "discrete") {
            const Json& labels = require(body, "labels", here);
            if (!labels.is_array()) fail(at_key(here, "labels"), "expected an array of strings");
            return share(Carrier::discrete(labels.get<std::vector<std::string>>()));
        }
        const Json& pts = require(body, "points", here);
        const std::string pts_at = at_key(here, "points");
        if (!pts.is_array() || pts.empty()) fail(pts_at, "expected a non-empty array");
        if (metric == "circle") return share(Carrier::circle(real_list(pts, pts_at)));
        if (metric == "euclidean") {
            std::vector<std::vector<double>> coords;
            for (std::size_t i = 0; i < pts.size(); ++i)
                coords.push_back(pts[i].is_array() ? real_list(pts[i], at_index(pts_at, i))
                                                   : std::vector<double>{as_real(pts[i], at_index(pts_at, i))});
            return share(Carrier::euclidean(std::move(coords)));
        }
        fail(at_key(here, "metric"), "expected \"euclidean\", \"circle\" or \"discrete\"");
    } catch (const InvalidParameter& err) {
        fail(here, err.what());
    } catch (const nlohmann::json::exception& err) {
        fail(here, err.what());
    }
}

MapSystem parse_map(const Json& doc, const std::string& at, const CarrierPtr& carrier) {
    const std::string kind = one_of(doc, at, {"builtin", "table"});
    const std::string here = at_key(at, kind);
    if (kind == "table") {
        const Json& t = doc["table"];
        if (!t.is_array()) fail(here, "expected an array of carrier indices");
        if (t.size() != carrier->size())
            fail(here, "table has " + std::to_string(t.size()) + " entries for " + std::to_string(carrier->size()) +
                           " carrier points");
        std::vector<Index> table;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const long long v = as_integer(t[i], at_index(here, i), 0);
            if (static_cast<std::size_t>(v) >= carrier->size()) fail(at_index(here, i), "index out of range");
            table.push_back(static_cast<Index>(v));
        }
        return MapSystem::table(carrier, std::move(table));
    }
    const Json& b = doc["builtin"];
    allow_keys(b, here, {"name", "params"});
    const Json& name_v = require(b, "name", here);
    const auto kind_opt = name_v.is_string() ? builtin_from_string(name_v.get<std::string>()) : std::nullopt;
    if (!kind_opt) fail(at_key(here, "name"), "unknown builtin");
    std::vector<double> params;
    if (b.contains("params")) params = real_list(b["params"], at_key(here, "params"));
    const bool wants_param = *kind_opt == BuiltinKind::logistic || *kind_opt == BuiltinKind::rotation ||
                             *kind_opt == BuiltinKind::constant;
    if (params.size() != (wants_param ? 1u : 0u))
        fail(at_key(here, "params"), std::string(to_string(*kind_opt)) + " takes " + (wants_param ? "one" : "no") +
                                         " parameter");
    try {
        return MapSystem::builtin(carrier, *kind_opt, wants_param ? params[0] : 0.0);
    } catch (const InvalidParameter& err) {
        fail(at_key(here, "name"), err.what());
    }
}

// ---- report encoding ----

std::vector<Index> decode_tuple(Index id, std::size_t base, std::size_t order) {
    std::vector<Index> out(order);
    for (std::size_t i = order; i > 0; --i) {
        out[i - 1] = static_cast<Index>(id % base);
        id = static_cast<Index>(id / base);
    }
    return out;
}

/// Maps vertex ids of non-base graphs back to tuples or subsets.
class VertexDecoder {
public:
    explicit VertexDecoder(std::size_t carrier_size) : n_(carrier_size) {}

    std::optional<Json> decode(const std::string& label, Index id) {
        const auto colon = label.find(':');
        if (colon == std::string::npos) return std::nullopt;
        const std::string kind = label.substr(0, colon);
        const std::size_t order = std::stoul(label.substr(colon + 1));
        if (kind == "product") return Json(decode_tuple(id, n_, order));
        if (kind == "hyper") {
            auto& subsets = hyper_[order];
            if (subsets.empty()) subsets = enumerate_Fn(n_, order, Budget{SIZE_MAX, SIZE_MAX});
            return Json(subsets.at(id));
        }
        return std::nullopt;
    }

private:
    std::size_t n_;
    std::map<std::size_t, std::vector<FiniteSubset>> hyper_;
};

Json epsilon_json(const std::optional<double>& eps) { return eps ? Json(*eps) : Json(nullptr); }

Json result_json(const ChainPropertyResult& r, VertexDecoder& decoder) {
    Json j;
    j["property"] = r.property;
    j["verdict"] = r.verdict;
    j["epsilon"] = epsilon_json(r.epsilon);
    if (!r.bounds.empty()) {
        Json b = Json::object();
        for (const auto& [k, v] : r.bounds) b[k] = v;
        j["bounds"] = b;
    }
    if (r.minimal_n) j["minimal_n"] = *r.minimal_n;
    if (r.n_e) j["n_e"] = *r.n_e;
    if (!r.exact_set.empty()) j["exact_set"] = r.exact_set;
    if (!r.recurrent.empty()) {
        Json bits = Json::array();
        for (bool b : r.recurrent) bits.push_back(b ? 1 : 0);
        j["recurrent"] = bits;
    }
    if (!r.components.empty()) j["components"] = r.components;
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses) {
        Json wj;
        wj["graph"] = w.graph;
        wj["chain"] = w.chain.points();
        if (decoder.decode(w.graph, w.chain.front())) {
            Json decoded = Json::array();
            for (Index id : w.chain.points()) decoded.push_back(*decoder.decode(w.graph, id));
            wj["vertices"] = decoded;
        }
        witnesses.push_back(wj);
    }
    j["witnesses"] = witnesses;
    if (!r.verdict) {
        Json c = Json::object();
        c["graph"] = r.counterexample_graph;
        if (r.no_chain) {
            c["no_chain"] = {r.no_chain->first, r.no_chain->second};
            if (auto from = decoder.decode(r.counterexample_graph, r.no_chain->first))
                c["no_chain_vertices"] = {*from, *decoder.decode(r.counterexample_graph, r.no_chain->second)};
        }
        if (r.period) c["period"] = *r.period;
        if (r.failing_n) c["failing_n"] = *r.failing_n;
        if (r.failing_vertex) c["failing_vertex"] = *r.failing_vertex;
        if (r.reach_cycle) c["reach_cycle"] = {{"start", r.reach_cycle->first}, {"period", r.reach_cycle->second}};
        j["counterexample"] = c;
    }
    return j;
}

Json scc_json(const TransitionGraph& g) {
    const SccDecomposition scc = scc_decompose(g);
    Json j;
    j["property"] = "scc";
    j["epsilon"] = epsilon_json(g.epsilon);
    j["components"] = scc.components;
    j["periods"] = scc.period;
    Json edges = Json::array();
    for (const auto& [a, b] : scc.dag_edges) edges.push_back({a, b});
    j["dag_edges"] = edges;
    return j;
}

Json budget_json(const Budget& b) { return {{"max_vertices", b.max_vertices}, {"max_edges", b.max_edges}}; }

Json report_header(const std::string& command, std::uint64_t seed) {
    Json j;
    j["schema_version"] = report_schema_version;
    j["tool"] = "chaindyn";
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

} // namespace

SystemSpec spec_from_json(const Json& document) {
    allow_keys(document, "", {"carrier", "map", "epsilons", "analyses", "hyperspace_n", "product_n", "exact_U",
                              "budget", "lemmas"});
    const CarrierPtr carrier = parse_carrier(require(document, "carrier", ""), "/carrier");
    MapSystem system = parse_map(require(document, "map", ""), "/map", carrier);
    SystemSpec spec{document, std::move(system), {}, {}, std::nullopt, std::nullopt, std::nullopt, Budget{}, 6, 0, {}};

    spec.epsilons = real_list(require(document, "epsilons", ""), "/epsilons");
    if (spec.epsilons.empty()) fail("/epsilons", "at least one epsilon is required");
    for (std::size_t i = 0; i < spec.epsilons.size(); ++i)
        if (spec.epsilons[i] < 0) fail(at_index("/epsilons", i), "epsilon must be non-negative");

    const Json& analyses = require(document, "analyses", "");
    if (!analyses.is_array()) fail("/analyses", "expected an array of analysis names");
    for (std::size_t i = 0; i < analyses.size(); ++i) {
        const auto& names = analysis_names();
        if (!analyses[i].is_string() ||
            std::find(names.begin(), names.end(), analyses[i].get<std::string>()) == names.end())
            fail(at_index("/analyses", i), "unknown analysis");
        spec.analyses.push_back(analyses[i].get<std::string>());
    }

    const std::size_t n = spec.system.size();
    if (document.contains("hyperspace_n")) {
        const auto k = static_cast<std::size_t>(as_integer(document["hyperspace_n"], "/hyperspace_n", 1));
        if (k > n) fail("/hyperspace_n", "must not exceed the carrier size " + std::to_string(n));
        spec.hyperspace_n = k;
    }
    if (document.contains("product_n"))
        spec.product_n = static_cast<int>(as_integer(document["product_n"], "/product_n", 1));
    if (document.contains("exact_U")) {
        const Json& u = document["exact_U"];
        if (!u.is_array() || u.empty()) fail("/exact_U", "expected a non-empty array of carrier indices");
        std::vector<Index> ids;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const long long v = as_integer(u[i], at_index("/exact_U", i), 0);
            if (static_cast<std::size_t>(v) >= n) fail(at_index("/exact_U", i), "index out of range");
            ids.push_back(static_cast<Index>(v));
        }
        spec.exact_u = std::move(ids);
    }
    if (document.contains("budget")) {
        const Json& b = document["budget"];
        allow_keys(b, "/budget", {"max_vertices", "max_edges", "n_max", "mixing_cap"});
        if (b.contains("max_vertices"))
            spec.budget.max_vertices = static_cast<std::size_t>(as_integer(b["max_vertices"], "/budget/max_vertices", 1));
        if (b.contains("max_edges"))
            spec.budget.max_edges = static_cast<std::size_t>(as_integer(b["max_edges"], "/budget/max_edges", 1));
        if (b.contains("n_max")) spec.n_max = static_cast<int>(as_integer(b["n_max"], "/budget/n_max", 1));
        if (b.contains("mixing_cap"))
            spec.mixing_cap = static_cast<std::size_t>(as_integer(b["mixing_cap"], "/budget/mixing_cap", 1));
    }
    if (document.contains("lemmas")) {
        const Json& l = document["lemmas"];
        if (!l.is_array()) fail("/lemmas", "expected an array of lemma ids");
        for (std::size_t i = 0; i < l.size(); ++i) {
            try {
                spec.lemmas.push_back(lemma_info(l[i].is_string() ? l[i].get<std::string>() : "").id);
            } catch (const InvalidParameter&) {
                fail(at_index("/lemmas", i), "unknown lemma id");
            }
        }
    }
    for (std::size_t i = 0; i < spec.analyses.size(); ++i) {
        if (spec.analyses[i] == "hyper_transitive" && !spec.hyperspace_n)
            fail(at_index("/analyses", i), "hyper_transitive needs hyperspace_n");
        if (spec.analyses[i] == "product_transitive" && !spec.product_n)
            fail(at_index("/analyses", i), "product_transitive needs product_n");
    }
    return spec;
}

SystemSpec parse_spec(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        // Translate the byte offset into line:column.
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw SpecError(std::to_string(line) + ":" + std::to_string(column), "syntax error");
    }
    return spec_from_json(doc);
}

SystemSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(path, "cannot open spec file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

Budget effective_budget(const SystemSpec& spec) { return Budget::from_environment(spec.budget); }

AnalyzeRun run_analyze(const SystemSpec& spec, std::uint64_t seed) {
    const Budget budget = effective_budget(spec);
    const MapSystem& system = spec.system;
    AnalyzeRun run;
    Json& report = run.report;
    report = report_header("analyze", seed);
    report["spec"] = spec.document;
    Json b = budget_json(budget);
    b["n_max"] = spec.n_max;
    b["mixing_cap"] = spec.mixing_cap == 0 ? wielandt_bound(system.size()) : spec.mixing_cap;
    report["budget"] = b;
    report["carrier"] = {{"size", system.size()},
                         {"metric", to_string(system.carrier().metric())},
                         {"diameter", system.carrier().diameter()}};
    report["map"] = system.describe();

    VertexDecoder decoder(system.size());
    Json results = Json::array();
    for (double eps : spec.epsilons) {
        const Entourage e = metric_entourage(system.carrier_ptr(), eps);
        const TransitionGraph g = build_transition_graph(system, e);
        Json entry;
        entry["epsilon"] = eps;
        entry["graph"] = {{"vertices", g.vertex_count()},
                          {"edges", g.edge_count()},
                          {"covering_radius", g.covering_radius},
                          {"dead_vertices", g.dead_vertices()}};
        Json analyses = Json::array();
        for (const std::string& name : spec.analyses) {
            try {
                if (name == "transitive") {
                    analyses.push_back(result_json(chain_transitivity(g), decoder));
                } else if (name == "internally_transitive") {
                    analyses.push_back({{"property", name},
                                        {"epsilon", eps},
                                        {"components", internally_chain_transitive_sets(g)}});
                } else if (name == "mixing") {
                    analyses.push_back(result_json(chain_mixing(g, spec.mixing_cap), decoder));
                } else if (name == "weakly_mixing") {
                    analyses.push_back(result_json(chain_weak_mixing(g, budget), decoder));
                } else if (name == "totally_transitive") {
                    analyses.push_back(result_json(is_totally_chain_transitive(system, e, spec.n_max), decoder));
                } else if (name == "exact") {
                    analyses.push_back(result_json(
                        spec.exact_u ? exactness(g, *spec.exact_u) : exactness_everywhere(g), decoder));
                } else if (name == "recurrent") {
                    analyses.push_back(result_json(chain_recurrence(g), decoder));
                } else if (name == "scc") {
                    analyses.push_back(scc_json(g));
                } else if (name == "hyper_transitive") {
                    analyses.push_back(result_json(is_hyper_transitive(system, e, *spec.hyperspace_n, budget), decoder));
                } else if (name == "product_transitive") {
                    analyses.push_back(result_json(is_product_transitive(system, e, *spec.product_n, budget), decoder));
                }
            } catch (const BudgetExceeded& err) {
                ++run.budget_errors;
                analyses.push_back({{"property", name},
                                    {"epsilon", eps},
                                    {"error",
                                     {{"type", "BudgetExceeded"},
                                      {"construction", err.construction()},
                                      {"requested", err.requested()},
                                      {"cap", err.cap()}}}});
            }
        }
        entry["analyses"] = analyses;
        if (!spec.lemmas.empty()) {
            Json lemmas = Json::array();
            for (const std::string& id : spec.lemmas) {
                Json rec = to_json(check_lemma(id, system, e, budget));
                rec["id"] = id;
                lemmas.push_back(rec);
            }
            entry["lemmas"] = lemmas;
        }
        results.push_back(entry);
    }
    report["results"] = results;
    return run;
}

Json to_json(const TrialRecord& r) {
    Json j;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["points"] = r.points;
    j["family"] = r.family;
    j["map"] = r.map;
    j["epsilon"] = epsilon_json(r.epsilon);
    j["antecedent"] = r.antecedent;
    j["consequent"] = r.consequent;
    j["outcome"] = to_string(r.outcome);
    j["detail"] = r.detail;
    return j;
}

VerifyRun run_verify(const VerifyOptions& options) {
    if (options.trials < 1) throw InvalidParameter("trials must be >= 1");
    if (options.max_points < 1) throw InvalidParameter("max_points must be >= 1");
    const std::vector<std::string> suite = parse_suite(options.suite);
    VerifyRun run;
    run.report = report_header("verify", options.seed);
    run.report["suite"] = suite;
    run.report["trials"] = options.trials;
    run.report["max_points"] = options.max_points;
    run.report["budget"] = budget_json(options.budget);
    Json lemmas = Json::array();
    for (const std::string& id : suite) {
        LemmaSummary s = verify_lemma(id, options.trials, options.seed, options.max_points, options.budget,
                                      options.threads);
        const std::size_t violations = s.count(TrialOutcome::violation);
        Json j;
        j["id"] = s.info.id;
        j["kind"] = s.info.probe ? "probe" : "hard";
        j["max_points"] = s.max_points;
        j["status"] = s.info.probe ? "probe" : (violations ? "fail" : "pass");
        j["counts"] = {{"pass", s.count(TrialOutcome::pass)},
                       {"vacuous", s.count(TrialOutcome::vacuous)},
                       {"violation", violations},
                       {"skipped", s.count(TrialOutcome::skipped)}};
        Json records = Json::array();
        for (const auto& r : s.trials) records.push_back(to_json(r));
        j["records"] = records;
        lemmas.push_back(j);
        run.hard_violation = run.hard_violation || s.failed();
        run.summaries.push_back(std::move(s));
    }
    run.report["lemmas"] = lemmas;
    return run;
}

std::string serialize_report(const Json& report) { return report.dump(2) + "\n"; }

namespace {

/// Rebuilds the graphs named in a report for one epsilon.
class GraphCache {
public:
    GraphCache(const SystemSpec& spec, double eps)
        : spec_(spec), budget_(effective_budget(spec)), e_(metric_entourage(spec.system.carrier_ptr(), eps)) {}

    const TransitionGraph& get(const std::string& label) {
        auto it = graphs_.find(label);
        if (it != graphs_.end()) return *it->second;
        auto g = std::make_unique<TransitionGraph>(build(label));
        return *graphs_.emplace(label, std::move(g)).first->second;
    }

    const Entourage& entourage() const { return e_; }

private:
    TransitionGraph build(const std::string& label) {
        if (label == "base") return build_transition_graph(spec_.system, e_);
        const auto colon = label.find(':');
        if (colon == std::string::npos) throw Error("unknown graph label '" + label + "'");
        const std::string kind = label.substr(0, colon);
        const int order = std::stoi(label.substr(colon + 1));
        if (kind == "iterate") return build_transition_graph(iterate_system(spec_.system, order), e_);
        if (kind == "product") return tensor_power(get("base"), order, budget_);
        if (kind == "hyper") {
            const HyperSystem hs(spec_.system, static_cast<std::size_t>(order), budget_);
            return build_hyper_transition_graph(hs, e_, budget_);
        }
        throw Error("unknown graph label '" + label + "'");
    }

    const SystemSpec& spec_;
    Budget budget_;
    Entourage e_;
    std::map<std::string, std::unique_ptr<TransitionGraph>> graphs_;
};

bool all_true_power(const TransitionGraph& g, std::size_t k) {
    for (Index x = 0; x < g.vertex_count(); ++x) {
        BitRow reach = g.successor_bits(x);
        for (std::size_t i = 1; i < k; ++i) reach = g.step(reach);
        if (reach.count() != reach.size()) return false;
    }
    return true;
}

void check_analysis(const Json& a, GraphCache& graphs, const SystemSpec& spec, const std::string& where,
                    CheckReportResult& out) {
    auto problem = [&](const std::string& msg) { out.failures.push_back(where + ": " + msg); };
    if (a.contains("witnesses")) {
        for (const Json& w : a["witnesses"]) {
            ++out.chains;
            try {
                validate_chain(graphs.get(w["graph"].get<std::string>()), w["chain"].get<std::vector<Index>>());
            } catch (const Error& err) {
                problem(std::string("witness on ") + w["graph"].get<std::string>() + " rejected: " + err.what());
            }
        }
    }
    const std::string property = a.value("property", "");
    const TransitionGraph& base = graphs.get("base");
    if (a.contains("minimal_n")) {
        const std::size_t m = a["minimal_n"].get<std::size_t>();
        ++out.counterexamples;
        if ((m > 1 && all_true_power(base, m - 1)) || !all_true_power(base, m) || !all_true_power(base, m + 1))
            problem("minimal_n " + std::to_string(m) + " is not the primitivity exponent");
    }
    if (a.contains("n_e") && a.contains("exact_set")) {
        ++out.counterexamples;
        const auto r = exactness(base, a["exact_set"].get<std::vector<Index>>());
        if (!r.n_e || *r.n_e != a["n_e"].get<std::size_t>()) problem("n_e does not reproduce");
    }
    if (a.contains("recurrent")) {
        ++out.counterexamples;
        const auto r = chain_recurrence(base);
        const auto bits = a["recurrent"].get<std::vector<int>>();
        for (std::size_t i = 0; i < bits.size() && i < r.recurrent.size(); ++i)
            if ((bits[i] != 0) != r.recurrent[i]) problem("recurrence bit " + std::to_string(i) + " differs");
    }
    if (!a.contains("counterexample")) return;
    const Json& c = a["counterexample"];
    ++out.counterexamples;
    if (c.contains("no_chain")) {
        const auto pair = c["no_chain"].get<std::vector<Index>>();
        const TransitionGraph& g = graphs.get(c["graph"].get<std::string>());
        if (reachable_from(g, pair[0]).test(pair[1]))
            problem("claimed missing chain " + std::to_string(pair[0]) + " -> " + std::to_string(pair[1]) + " exists");
    }
    if (c.contains("period")) {
        const SccDecomposition scc = scc_decompose(base);
        if (scc.count() != 1 || scc.period[0] != c["period"].get<std::size_t>()) problem("period does not reproduce");
    }
    if (c.contains("failing_n")) {
        const int n = c["failing_n"].get<int>();
        if (is_transitive_graph(graphs.get("iterate:" + std::to_string(n))))
            problem("iterate " + std::to_string(n) + " is transitive after all");
        for (int k = 1; k < n; ++k)
            if (!is_transitive_graph(graphs.get("iterate:" + std::to_string(k))))
                problem("an earlier iterate " + std::to_string(k) + " already fails");
    }
    if (c.contains("reach_cycle") && a.contains("exact_set")) {
        const auto r = exactness(base, a["exact_set"].get<std::vector<Index>>());
        if (!r.reach_cycle || r.reach_cycle->first != c["reach_cycle"]["start"].get<std::size_t>() ||
            r.reach_cycle->second != c["reach_cycle"]["period"].get<std::size_t>())
            problem("reachable-set cycle does not reproduce");
    }
    if (c.contains("failing_vertex") && property == "exact") {
        const Index single[] = {c["failing_vertex"].get<Index>()};
        if (exactness(base, single).verdict) problem("failing vertex is exact after all");
    }
    if (c.contains("failing_vertex") && property == "mixing") {
        if (chain_mixing(base, spec.mixing_cap).verdict) problem("mixing holds after all");
    }
}

} // namespace

CheckReportResult check_report(const Json& report) {
    CheckReportResult out;
    if (!report.is_object() || report.value("schema_version", 0) != report_schema_version) {
        out.failures.push_back("unsupported or missing schema_version");
        return out;
    }
    const std::string command = report.value("command", "");
    if (command == "analyze") {
        const SystemSpec spec = spec_from_json(report.at("spec"));
        const Json& results = report.at("results");
        if (results.size() != spec.epsilons.size()) out.failures.push_back("result count differs from epsilon count");
        for (std::size_t i = 0; i < results.size() && i < spec.epsilons.size(); ++i) {
            GraphCache graphs(spec, spec.epsilons[i]);
            for (std::size_t k = 0; k < results[i].at("analyses").size(); ++k) {
                const Json& a = results[i]["analyses"][k];
                if (a.contains("error")) continue;
                check_analysis(a, graphs, spec, "/results/" + std::to_string(i) + "/analyses/" + std::to_string(k),
                               out);
            }
        }
    } else if (command == "verify") {
        const std::size_t max_points = report.at("max_points").get<std::size_t>();
        const Budget budget{report.at("budget").at("max_vertices").get<std::size_t>(),
                            report.at("budget").at("max_edges").get<std::size_t>()};
        for (const Json& lemma : report.at("lemmas")) {
            const std::string id = lemma.at("id").get<std::string>();
            for (const Json& rec : lemma.at("records")) {
                if (rec.at("outcome").get<std::string>() != "violation") continue;
                ++out.replays;
                const TrialRecord again = run_trial(id, rec.at("seed").get<std::uint64_t>(), max_points, budget);
                if (to_string(again.outcome) != rec.at("outcome").get<std::string>() || again.detail != rec.at("detail"))
                    out.failures.push_back(id + " trial " + std::to_string(rec.at("trial").get<std::size_t>()) +
                                           " does not replay");
            }
        }
    } else {
        out.failures.push_back("unknown report command '" + command + "'");
    }
    return out;
}

CheckReportResult check_report_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open report " + path);
    Json report;
    try {
        report = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw InvalidParameter("report is not valid JSON: " + std::string(err.what()));
    }
    return check_report(report);
}

} // namespace chaindyn
