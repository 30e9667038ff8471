#include "chaindyn/lemmas.hpp"

#include "chaindyn/analysis.hpp"
#include "chaindyn/errors.hpp"
#include "chaindyn/hyperspace.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace chaindyn {

std::size_t Rng::below(std::size_t bound) {
    if (bound == 0) throw InvalidParameter("Rng::below needs a positive bound");
    const std::uint64_t b = bound;
    const std::uint64_t threshold = (0 - b) % b;
    while (true) {
        const std::uint64_t x = next();
        if (x >= threshold) return static_cast<std::size_t>(x % b);
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, const std::string& id, std::size_t trial) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : id) h = (h ^ c) * 0x100000001B3ULL;
    return splitmix64(splitmix64(master ^ h) + trial);
}

const std::vector<LemmaInfo>& lemma_catalog() {
    static const std::vector<LemmaInfo> catalog{
        {"P1", false, 6, false},   {"L3", false, 5, false},  {"L4", false, 5, false},  {"C6", false, 5, false},
        {"L7", false, 8, false},   {"L8", false, 8, false},  {"L9", false, 8, true},   {"P10", false, 4, true},
        {"L11", false, 8, false},  {"L12", false, 10, false}, {"L13", true, 10, false}, {"L14", false, 10, true},
        {"L15", false, 10, true},  {"L16", false, 12, false}, {"T-final", true, 8, false},
    };
    return catalog;
}

const LemmaInfo& lemma_info(const std::string& id) {
    const std::string canonical = (id == "L5" || id == "L6") ? "C6" : id;
    for (const auto& info : lemma_catalog())
        if (info.id == canonical) return info;
    throw InvalidParameter("unknown lemma id '" + id + "'");
}

std::vector<std::string> parse_suite(const std::string& suite) {
    if (suite == "all") {
        std::vector<std::string> out;
        for (const auto& info : lemma_catalog()) out.push_back(info.id);
        return out;
    }
    std::vector<bool> wanted(lemma_catalog().size(), false);
    std::stringstream in(suite);
    std::string item;
    bool any = false;
    while (std::getline(in, item, ',')) {
        std::erase_if(item, [](unsigned char ch) { return std::isspace(ch); });
        if (item.empty()) continue;
        const LemmaInfo& info = lemma_info(item);
        wanted[static_cast<std::size_t>(&info - lemma_catalog().data())] = true;
        any = true;
    }
    if (!any) throw InvalidParameter("empty lemma suite");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < wanted.size(); ++i)
        if (wanted[i]) out.push_back(lemma_catalog()[i].id);
    return out;
}

namespace {

Index nearest_point(const Carrier& c, double y) {
    Index best = 0;
    for (Index i = 1; i < c.size(); ++i)
        if (c.distance_to(y, i) < c.distance_to(y, best)) best = i;
    return best;
}

std::vector<Index> random_permutation(Rng& rng, std::size_t n) {
    std::vector<Index> p(n);
    std::iota(p.begin(), p.end(), Index{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

} // namespace

TrialInstance random_instance(Rng& rng, std::size_t max_points, bool tables_only) {
    if (max_points < 1) throw InvalidParameter("max_points must be >= 1");
    const std::size_t n = 1 + rng.below(max_points);
    // Grids are eps-connected once eps reaches the spacing; sparse subsets of a
    // finer grid also produce several eps-components.
    const std::size_t shape = rng.below(10);
    const bool circle = shape >= 4 && shape < 7;
    CarrierPtr carrier;
    double spacing = 0.0;
    if (shape < 4) {
        carrier = share(Carrier::interval_grid(n));
        spacing = n < 2 ? 0.0 : 1.0 / static_cast<double>(n - 1);
    } else if (circle) {
        carrier = share(Carrier::circle_grid(n));
        spacing = 1.0 / static_cast<double>(n);
    } else {
        const std::size_t fine = 3 * n;
        std::vector<Index> slots(fine);
        std::iota(slots.begin(), slots.end(), Index{0});
        for (std::size_t i = 0; i < n; ++i) std::swap(slots[i], slots[i + rng.below(fine - i)]);
        std::sort(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<std::vector<double>> coords;
        for (std::size_t i = 0; i < n; ++i)
            coords.push_back({static_cast<double>(slots[i]) / static_cast<double>(fine - 1)});
        carrier = share(Carrier::euclidean(std::move(coords)));
        spacing = 1.0 / static_cast<double>(fine - 1);
    }
    const std::string shape_name = shape < 4 ? "interval" : (circle ? "circle" : "sparse");
    const std::size_t r = rng.below(10);
    const double epsilon = static_cast<double>(r < 2 ? 0 : (r < 6 ? 1 : (r < 9 ? 2 : 3))) * spacing;
    const Entourage e = metric_entourage(carrier, epsilon);

    auto sampled = [&](auto&& fn) {
        std::vector<Index> t(n);
        for (Index i = 0; i < n; ++i) t[i] = nearest_point(*carrier, fn(carrier->point(i).coords[0]));
        return t;
    };

    const std::size_t family = rng.below(tables_only ? 5 : 6);
    std::vector<Index> table;
    std::string name;
    switch (family) {
    case 0:
        name = "random_table";
        for (std::size_t i = 0; i < n; ++i) table.push_back(static_cast<Index>(rng.below(n)));
        break;
    case 1:
        name = "permutation";
        table = random_permutation(rng, n);
        break;
    case 2:
        name = "near_identity";
        for (std::size_t i = 0; i < n; ++i) {
            const long long step = static_cast<long long>(rng.below(3)) - 1;
            const long long j = static_cast<long long>(i) + step;
            const long long size = static_cast<long long>(n);
            table.push_back(static_cast<Index>(circle ? ((j % size) + size) % size : std::clamp<long long>(j, 0, size - 1)));
        }
        break;
    case 3:
        if (circle) {
            if (rng.chance(50)) {
                name = "sampled_doubling";
                table = sampled([](double x) { return std::fmod(2.0 * x, 1.0); });
            } else {
                const double s = static_cast<double>(rng.below(1000)) / 1000.0;
                name = "sampled_rotation";
                table = sampled([s](double x) { return std::fmod(x + s, 1.0); });
            }
        } else if (rng.chance(50)) {
            name = "sampled_tent";
            table = sampled([](double x) { return 1.0 - std::abs(1.0 - 2.0 * x); });
        } else {
            const double rate = 3.5 + 0.1 * static_cast<double>(rng.below(6));
            name = "sampled_logistic";
            table = sampled([rate](double x) { return rate * x * (1.0 - x); });
        }
        break;
    case 4: {
        name = "cycle";
        const auto order = random_permutation(rng, n);
        table.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) table[order[i]] = order[(i + 1) % n];
        break;
    }
    default: {
        MapSystem system = circle ? MapSystem::builtin(carrier, BuiltinKind::rotation,
                                                       static_cast<double>(rng.below(1000)) / 1000.0)
                           : rng.chance(50)
                               ? MapSystem::builtin(carrier, BuiltinKind::tent)
                               : MapSystem::builtin(carrier, BuiltinKind::logistic,
                                                    3.5 + 0.1 * static_cast<double>(rng.below(6)));
        return {std::move(system), e, shape_name + "/builtin"};
    }
    }
    return {MapSystem::table(carrier, std::move(table)), e, shape_name + "/" + name};
}

const char* to_string(TrialOutcome outcome) {
    switch (outcome) {
    case TrialOutcome::pass: return "pass";
    case TrialOutcome::vacuous: return "vacuous";
    case TrialOutcome::violation: return "violation";
    case TrialOutcome::skipped: return "skipped";
    }
    return "?";
}

double chain_ladder_resolution(const MapSystem& system, double epsilon, int n) {
    if (n < 1) throw InvalidParameter("ladder length must be >= 1");
    double best = 0.0;
    for (double delta : system.carrier().distance_values()) {
        // Steps may overshoot delta by the comparison tolerance.
        const double step = delta + distance_tolerance;
        double bound = step;
        for (int j = 1; j < n; ++j) bound = image_spread(system, bound) + step;
        if (!within(bound, epsilon)) break;
        best = delta;
    }
    return best;
}

namespace {

struct Verdict {
    bool antecedent = false;
    bool consequent = false;
    std::string detail;
    bool skipped = false;
};

std::string flag(bool b) { return b ? "1" : "0"; }

std::size_t min_order(std::size_t n, std::size_t cap) { return std::min(n, cap); }

bool hyper_transitive(const MapSystem& s, const Entourage& e, std::size_t n, const Budget& budget) {
    const HyperSystem hs(s, n, budget);
    return is_transitive_graph(build_hyper_transition_graph(hs, e, budget));
}

/// Tensor powers k = 1..k_max transitive. Powers past the size guard are
/// decided by primitivity, which is equivalent for every k >= 2.
bool all_products_transitive(const TransitionGraph& g, int k_max, const Budget& budget, std::string& checked) {
    checked = "k=1";
    if (!is_transitive_graph(g)) return false;
    if (k_max < 2) return true;
    const bool primitive = chain_mixing(g).verdict;
    for (int k = 2; k <= k_max; ++k) {
        const double edges = std::pow(static_cast<double>(g.edge_count()), k);
        const double vertices = std::pow(static_cast<double>(g.vertex_count()), k);
        if (edges > 2e6 || vertices > static_cast<double>(budget.max_vertices)) {
            checked += " k>=" + std::to_string(k) + ":primitivity";
            return primitive;
        }
        checked += "," + std::to_string(k);
        const bool t = is_transitive_graph(tensor_power(g, k, budget));
        if (t != primitive) throw Error("tensor power " + std::to_string(k) + " disagrees with primitivity");
        if (!t) return false;
    }
    return true;
}

Verdict check_p1(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const std::size_t n = s.size();
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    v.consequent = is_transitive_graph(g);
    std::vector<std::size_t> orders;
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) orders.push_back(k);
    if (n > 3) orders.push_back(n);
    std::size_t selections = 0;
    std::string transitive_orders;
    for (std::size_t order : orders) {
        const HyperSystem hs(s, order, budget);
        const TransitionGraph hg = build_hyper_transition_graph(hs, e, budget);
        if (is_transitive_graph(hg)) {
            v.antecedent = true;
            transitive_orders += (transitive_orders.empty() ? "" : ",") + std::to_string(order);
        }
        // Every certified singleton-to-singleton hyper chain must thread a base chain.
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                for (std::size_t len = 1; len <= 4; ++len) {
                    const auto hc = find_chain_exact_length(hg, hs.id_of({x}), hs.id_of({y}), len);
                    if (!hc) continue;
                    try {
                        const Chain base = select_base_chain_from_hyper_chain(hs, *hc, g, x, y);
                        if (base.length() != len || base.front() != x || base.back() != y)
                            throw SelectionFailed("selected chain has the wrong shape");
                        ++selections;
                    } catch (const SelectionFailed& err) {
                        v.antecedent = true;
                        v.consequent = false;
                        v.detail = "F_" + std::to_string(order) + " chain {" + std::to_string(x) + "}->{" +
                                   std::to_string(y) + "} len " + std::to_string(len) + ": " + err.what();
                        return v;
                    }
                }
    }
    v.detail = "transitive orders [" + transitive_orders + "], selections " + std::to_string(selections);
    return v;
}

/// hyper[k] = F_k transitive for k = 1..upto.
std::vector<bool> hyper_verdicts(const MapSystem& s, const Entourage& e, std::size_t upto, const Budget& budget) {
    std::vector<bool> out(upto + 1, false);
    for (std::size_t k = 1; k <= upto; ++k) out[k] = hyper_transitive(s, e, k, budget);
    return out;
}

Verdict check_l3(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const auto h = hyper_verdicts(s, e, s.size(), budget);
    Verdict v;
    v.antecedent = std::all_of(h.begin() + 1, h.end(), [](bool b) { return b; });
    v.consequent = h.back();
    return v;
}

Verdict check_l4(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const std::size_t n = s.size();
    Verdict v;
    v.antecedent = hyper_transitive(s, e, n, budget);
    v.consequent = hyper_transitive(s, e, min_order(2, n), budget);
    return v;
}

Verdict check_c6(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const std::size_t n = s.size();
    const std::size_t top = std::min<std::size_t>(n, 4);
    const auto h = hyper_verdicts(s, e, top, budget);
    const bool full = n <= 4 ? h[n] : hyper_transitive(s, e, n, budget);
    bool some = false;
    for (std::size_t k = min_order(2, n); k <= top; ++k) some = some || h[k];
    const bool all = std::all_of(h.begin() + 1, h.end(), [](bool b) { return b; });
    Verdict v;
    v.antecedent = true;
    v.consequent = full == some && some == all;
    v.detail = "F_N=" + flag(full) + " some=" + flag(some) + " all=" + flag(all);
    return v;
}

Verdict check_l7(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    v.antecedent = hyper_transitive(s, e, min_order(2, s.size()), budget);
    v.consequent = is_transitive_graph(g);
    for (Index z = 0; v.consequent && z < s.size(); ++z)
        if (!coprime_cycles(g, z)) {
            v.consequent = false;
            v.detail = "no coprime cycle pair at " + std::to_string(z);
        }
    return v;
}

Verdict check_l8(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    if (is_transitive_graph(g))
        for (Index z = 0; z < s.size(); ++z)
            if (coprime_cycles(g, z)) {
                v.antecedent = true;
                v.detail = "coprime cycles at " + std::to_string(z);
                break;
            }
    v.consequent = hyper_transitive(s, e, min_order(2, s.size()), budget);
    return v;
}

/// Pulls E_target back along h: (a, b) related iff (h(a), h(b)) in E_target.
Entourage pullback(const FactorMap& fm, const Entourage& target_e) {
    const std::size_t n = fm.source().size();
    std::vector<BitRow> rows(n, BitRow(n));
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            if (target_e.contains(fm.h()[a], fm.h()[b])) rows[a].set(b);
    return Entourage::from_relation(fm.source().carrier_ptr(), std::move(rows));
}

Verdict check_factor(const FactorMap& fm, const Entourage& target_e) {
    Verdict v;
    const SemiconjugacyResult sc = check_semiconjugacy(fm, Entourage::identity(fm.target().carrier_ptr()));
    if (!sc.holds) {
        v.antecedent = true;
        v.detail = "h o f != g o h at " + std::to_string(*sc.violating_index);
        return v;
    }
    v.antecedent = is_transitive_graph(build_transition_graph(fm.source(), pullback(fm, target_e)));
    v.consequent = is_transitive_graph(build_transition_graph(fm.target(), target_e));
    return v;
}

Verdict check_l9(const MapSystem& s, const Entourage& e) {
    if (!s.is_table()) return {false, false, "needs a table map", true};
    std::vector<Index> id(s.size());
    std::iota(id.begin(), id.end(), Index{0});
    return check_factor(FactorMap(s, s, std::move(id)), e);
}

Verdict check_p10(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const std::size_t n = s.size();
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    v.antecedent = true;
    v.consequent = true;
    for (int order = 2; order <= 3; ++order) {
        if (order == 3 && n * n * n > 64) break;
        const bool product = is_transitive_graph(tensor_power(g, order, budget));
        const bool hyper = hyper_transitive(s, e, min_order(static_cast<std::size_t>(order), n), budget);
        v.detail += (v.detail.empty() ? "" : " ") + std::string("n=") + std::to_string(order) + ":" + flag(product) +
                    flag(hyper);
        if (product != hyper) {
            v.consequent = false;
            return v;
        }
        if (s.is_table()) {
            const ProductSystem p = build_product_system(s, order, budget);
            const HyperSystem hs(s, min_order(static_cast<std::size_t>(order), n), budget);
            const FactorMap fm = tuple_to_set_factor(p, hs);
            const SemiconjugacyResult sc = check_semiconjugacy(fm, Entourage::identity(fm.target().carrier_ptr()));
            if (!sc.holds) {
                v.consequent = false;
                v.detail += " semiconjugacy fails at tuple " + std::to_string(*sc.violating_index);
                return v;
            }
        }
    }
    return v;
}

/// Some step count n has R_n(z) covering `need`; the search stops once the sets cycle.
bool covers_exactly(const TransitionGraph& g, Index z, const BitRow& need) {
    std::vector<BitRow> seen;
    BitRow reach = g.successor_bits(z);
    while (std::find(seen.begin(), seen.end(), reach) == seen.end()) {
        if (need.is_subset_of(reach)) return true;
        seen.push_back(reach);
        reach = g.step(reach);
    }
    return false;
}

Verdict check_l11(const MapSystem& s, const Entourage& e, const Budget& budget) {
    const std::size_t n = s.size();
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    std::string checked;
    v.antecedent = all_products_transitive(g, 3, budget, checked);
    bool without_z = true;
    bool with_z = true;
    for (Index z = 0; z < n; ++z) {
        BitRow all(n);
        all.set();
        BitRow others = all;
        others.reset(z);
        without_z = without_z && covers_exactly(g, z, others);
        with_z = with_z && covers_exactly(g, z, all);
    }
    v.consequent = without_z && with_z;
    v.detail = "products " + checked + "; X\\{z} reading " + flag(without_z) + ", X reading " + flag(with_z);
    return v;
}

Verdict check_l12(const MapSystem& s, const Entourage& e, const Budget& budget, bool converse) {
    const TransitionGraph g = build_transition_graph(s, e);
    const bool exact = exactness_everywhere(g).verdict;
    const bool weak = is_transitive_graph(tensor_power(g, 2, budget));
    Verdict v;
    v.antecedent = converse ? weak : exact;
    v.consequent = converse ? exact : weak;
    return v;
}

Verdict check_l14(const MapSystem& s, const Entourage& e, const Budget& budget) {
    constexpr int n_max = 4;
    if (!s.is_table() || !e.epsilon()) return {false, false, "needs a table map and a metric entourage", true};
    const double delta = chain_ladder_resolution(s, *e.epsilon(), n_max);
    const TransitionGraph fine = build_transition_graph(s, metric_entourage(s.carrier_ptr(), delta));
    Verdict v;
    std::string checked;
    v.antecedent = all_products_transitive(fine, n_max, budget, checked);
    const ChainPropertyResult total = is_totally_chain_transitive(s, e, n_max);
    v.consequent = total.verdict;
    std::ostringstream os;
    os << "delta " << delta << ", products " << checked;
    if (total.failing_n) os << ", iterate " << *total.failing_n << " fails";
    v.detail = os.str();
    return v;
}

Verdict check_l15(const MapSystem& s, const Entourage& e, const Budget& budget) {
    // Iterates up to N catch every period, since a period never exceeds N.
    const int n_max = std::max(4, static_cast<int>(s.size()));
    if (!s.is_table()) return {false, false, "needs a table map", true};
    Verdict v;
    v.antecedent = is_totally_chain_transitive(s, e, n_max).verdict;
    v.consequent = is_transitive_graph(tensor_power(build_transition_graph(s, e), 2, budget));
    v.detail = "n_max " + std::to_string(n_max);
    return v;
}

Verdict check_l16(const MapSystem& s, const Entourage& e) {
    const std::size_t n = s.size();
    if (n > 12) return {false, false, "carrier larger than 12 points", true};
    const TransitionGraph g = build_transition_graph(s, e);
    Verdict v;
    const bool connected = epsilon_components(e).size() == 1;
    v.antecedent = is_transitive_graph(g) && connected;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::uint32_t> succ(std::size_t{1} << n, 0);
    for (std::uint32_t m = 1; m <= full; ++m) {
        const Index low = static_cast<Index>(std::countr_zero(m));
        std::uint32_t row = 0;
        for (Index t : g.successors(low)) row |= 1u << t;
        succ[m] = succ[m & (m - 1)] | row;
    }
    std::size_t covering = 0;
    v.consequent = true;
    for (std::uint32_t vset = 1; vset < full && v.consequent; ++vset) {
        const std::uint32_t image = succ[vset];
        if (image & vset) continue;
        const std::uint32_t rest = full & ~vset & ~image;
        // W ranges over image | T for T within the rest; W must be non-empty.
        for (std::uint32_t t = rest;; t = (t - 1) & rest) {
            const std::uint32_t w = image | t;
            if (w != 0 && (succ[w] & ~vset) == 0) {
                if ((vset | w) == full) {
                    ++covering;
                } else {
                    v.consequent = false;
                    v.detail = "V mask " + std::to_string(vset) + ", W mask " + std::to_string(w);
                    break;
                }
            }
            if (t == 0) break;
        }
    }
    if (v.consequent) v.detail = "eps-connected " + flag(connected) + ", covering pairs " + std::to_string(covering);
    return v;
}

Verdict check_t_final(const MapSystem& s, const Entourage& e, const Budget& budget) {
    Verdict v;
    v.antecedent = hyper_transitive(s, e, min_order(2, s.size()), budget);
    const std::size_t components = epsilon_components(e).size();
    v.consequent = components == 1;
    v.detail = std::to_string(components) + " eps-components";
    return v;
}

Verdict dispatch(const std::string& id, const MapSystem& s, const Entourage& e, const Budget& budget) {
    if (id == "P1") return check_p1(s, e, budget);
    if (id == "L3") return check_l3(s, e, budget);
    if (id == "L4") return check_l4(s, e, budget);
    if (id == "C6") return check_c6(s, e, budget);
    if (id == "L7") return check_l7(s, e, budget);
    if (id == "L8") return check_l8(s, e, budget);
    if (id == "L9") return check_l9(s, e);
    if (id == "P10") return check_p10(s, e, budget);
    if (id == "L11") return check_l11(s, e, budget);
    if (id == "L12") return check_l12(s, e, budget, false);
    if (id == "L13") return check_l12(s, e, budget, true);
    if (id == "L14") return check_l14(s, e, budget);
    if (id == "L15") return check_l15(s, e, budget);
    if (id == "L16") return check_l16(s, e);
    if (id == "T-final") return check_t_final(s, e, budget);
    throw InvalidParameter("unknown lemma id '" + id + "'");
}

TrialOutcome classify(const Verdict& v) {
    if (v.skipped) return TrialOutcome::skipped;
    if (!v.antecedent) return TrialOutcome::vacuous;
    return v.consequent ? TrialOutcome::pass : TrialOutcome::violation;
}

TrialRecord guarded(const std::string& id, std::size_t points, const std::string& map, std::optional<double> epsilon,
                    auto&& body) {
    TrialRecord rec;
    rec.points = points;
    rec.map = map;
    rec.epsilon = epsilon;
    try {
        const Verdict v = body();
        rec.antecedent = v.antecedent;
        rec.consequent = v.consequent;
        rec.outcome = classify(v);
        rec.detail = v.detail;
    } catch (const BudgetExceeded& err) {
        rec.outcome = TrialOutcome::skipped;
        rec.detail = err.what();
    } catch (const Error& err) {
        // Internal disagreements count against hard lemmas.
        rec.outcome = TrialOutcome::violation;
        rec.antecedent = true;
        rec.detail = std::string(id) + " internal error: " + err.what();
    }
    return rec;
}

/// Random semiconjugate pair: target g on M points, onto h, and f chosen in
/// the fibre h^-1(g(h(x))) so that h o f = g o h holds exactly.
TrialRecord l9_trial(Rng& rng, std::size_t max_points) {
    TrialInstance base = random_instance(rng, max_points, true);
    const MapSystem& g = base.system;
    const std::size_t m = g.size();
    const std::size_t n = m + rng.below(max_points - m + 1);
    std::vector<Index> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<Index>(i < m ? i : rng.below(m));
    for (std::size_t i = n; i > 1; --i) std::swap(h[i - 1], h[rng.below(i)]);
    std::vector<std::vector<Index>> fibre(m);
    for (Index x = 0; x < n; ++x) fibre[h[x]].push_back(x);
    std::vector<Index> f(n);
    for (Index x = 0; x < n; ++x) {
        const auto& options = fibre[g.table_map()[h[x]]];
        f[x] = options[rng.below(options.size())];
    }
    MapSystem source = MapSystem::table(share(Carrier::interval_grid(n)), f);
    std::ostringstream map;
    map << source.describe() << " over " << g.describe();
    return guarded("L9", n, map.str(), base.entourage.epsilon(), [&] {
        return check_factor(FactorMap(source, g, h), base.entourage);
    });
}

} // namespace

TrialRecord check_lemma(const std::string& id, const MapSystem& system, const Entourage& e, const Budget& budget) {
    const std::string canonical = lemma_info(id).id;
    return guarded(canonical, system.size(), system.describe(), e.epsilon(),
                   [&] { return dispatch(canonical, system, e, budget); });
}

TrialRecord run_trial(const std::string& id, std::uint64_t seed, std::size_t max_points, const Budget& budget) {
    const LemmaInfo& info = lemma_info(id);
    const std::size_t cap = std::min(max_points, info.max_points);
    if (cap < 1) throw InvalidParameter("max_points must be >= 1");
    Rng rng(seed);
    TrialRecord rec;
    if (info.id == "L9") {
        rec = l9_trial(rng, cap);
        rec.family = "semiconjugate_tables";
    } else {
        TrialInstance inst = random_instance(rng, cap, info.tables_only);
        rec = check_lemma(info.id, inst.system, inst.entourage, budget);
        rec.family = inst.family;
    }
    rec.seed = seed;
    return rec;
}

std::size_t LemmaSummary::count(TrialOutcome outcome) const {
    return static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(), [outcome](const TrialRecord& r) { return r.outcome == outcome; }));
}

LemmaSummary verify_lemma(const std::string& id, std::size_t trials, std::uint64_t seed, std::size_t max_points,
                          const Budget& budget, unsigned threads) {
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    if (max_points < 1) throw InvalidParameter("max_points must be >= 1");
    LemmaSummary summary;
    summary.info = lemma_info(id);
    summary.max_points = std::min(max_points, summary.info.max_points);
    summary.trials.resize(trials);
    if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            TrialRecord rec = run_trial(summary.info.id, trial_seed(seed, summary.info.id, t), max_points, budget);
            rec.trial = t;
            summary.trials[t] = std::move(rec);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }
    return summary;
}

} // namespace chaindyn
