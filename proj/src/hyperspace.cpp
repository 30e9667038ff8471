#include "chaindyn/hyperspace.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

namespace chaindyn {

namespace {

constexpr std::size_t saturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b) { return a > saturated - b ? saturated : a + b; }

std::size_t sat_binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    // r * num / i is integral and i / gcd(r, i) divides num.
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t g = std::gcd(r, i);
        const std::size_t num = n - k + i;
        const std::size_t factor = num / (i / g);
        if (r / g > saturated / factor) return saturated;
        r = (r / g) * factor;
    }
    return r;
}

std::string subset_label(const FiniteSubset& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
}

void require_symmetric(const Entourage& e) {
    if (!e.symmetric()) throw NonSymmetricEntourage("hyperspace entourage 2^E needs a symmetric E");
}

} // namespace

std::size_t count_Fn(std::size_t carrier_size, std::size_t n) {
    std::size_t total = 0;
    for (std::size_t k = 1; k <= std::min(n, carrier_size); ++k) total = sat_add(total, sat_binom(carrier_size, k));
    return total;
}

std::vector<FiniteSubset> enumerate_Fn(std::size_t carrier_size, std::size_t n, const Budget& budget) {
    if (n < 1 || n > carrier_size) throw InvalidParameter("F_n needs 1 <= n <= N");
    const std::size_t total = count_Fn(carrier_size, n);
    if (total > budget.max_vertices)
        throw BudgetExceeded("hyperspace F_" + std::to_string(n) + "(X)", total, budget.max_vertices);
    std::vector<FiniteSubset> out;
    out.reserve(total);
    for (std::size_t k = 1; k <= n; ++k) {
        FiniteSubset c(k);
        std::iota(c.begin(), c.end(), Index{0});
        while (true) {
            out.push_back(c);
            // Advance to the next k-combination in lexicographic order.
            std::size_t i = k;
            while (i > 0 && c[i - 1] == carrier_size - k + i - 1) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
        }
    }
    return out;
}

SubsetIndexer::SubsetIndexer(std::size_t carrier_size, std::size_t n)
    : n_(carrier_size), k_max_(n), table_(carrier_size + 1, std::vector<std::size_t>(n + 1, 0)), offset_(n + 2, 0) {
    for (std::size_t a = 0; a <= carrier_size; ++a)
        for (std::size_t b = 0; b <= n; ++b) table_[a][b] = sat_binom(a, b);
    for (std::size_t k = 1; k <= n; ++k) offset_[k + 1] = sat_add(offset_[k], table_[carrier_size][k]);
}

std::size_t SubsetIndexer::binom(std::size_t a, std::size_t b) const { return b > k_max_ ? sat_binom(a, b) : table_[a][b]; }

Index SubsetIndexer::id_of(const FiniteSubset& subset) const {
    const std::size_t k = subset.size();
    if (k < 1 || k > k_max_) throw InvalidParameter("subset size outside F_n");
    std::size_t rank = 0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (subset[i] >= n_ || subset[i] < next) throw InvalidParameter("subset is not canonical");
        for (std::size_t j = next; j < subset[i]; ++j) rank += binom(n_ - 1 - j, k - 1 - i);
        next = subset[i] + 1;
    }
    return static_cast<Index>(offset_[k] + rank);
}

bool hyper_entourage_related(const FiniteSubset& a, const FiniteSubset& b, const Entourage& e) {
    require_symmetric(e);
    const BitRow abits = indices_to_bits(a, e.size());
    const BitRow bbits = indices_to_bits(b, e.size());
    return abits.is_subset_of(cross_section_bits(e, bbits)) && bbits.is_subset_of(cross_section_bits(e, abits));
}

HyperSystem::HyperSystem(MapSystem base, std::size_t n, const Budget& budget)
    : base_(std::move(base)), n_(n), subsets_(enumerate_Fn(base_.size(), n, budget)), indexer_(base_.size(), n) {}

FiniteSubset HyperSystem::image(Index id) const {
    if (!base_.is_table()) throw InvalidParameter("set images are only carrier subsets for table systems");
    FiniteSubset out;
    for (Index a : subset(id)) out.push_back(base_.table_map()[a]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MapSystem HyperSystem::as_table_system() const {
    std::vector<std::string> labels;
    std::vector<Index> table;
    labels.reserve(size());
    table.reserve(size());
    for (Index id = 0; id < size(); ++id) {
        labels.push_back(subset_label(subsets_[id]));
        table.push_back(id_of(image(id)));
    }
    return MapSystem::table(share(Carrier::discrete(std::move(labels))), std::move(table));
}

TransitionGraph build_hyper_transition_graph(const HyperSystem& hs, const Entourage& e, const Budget& budget) {
    require_symmetric(e);
    const MapSystem& base = hs.base();
    if (!same_carrier(base.carrier(), e.carrier())) throw InvalidParameter("entourage lives on a different carrier");
    if (!base.is_table() && !e.epsilon()) throw InvalidParameter("builtin systems need a metric entourage");
    const std::size_t N = base.size();
    const std::size_t n = hs.order();

    // Ball around each image point: the carrier points within E of it.
    std::vector<BitRow> image_ball(N, BitRow(N));
    for (Index a = 0; a < N; ++a) {
        if (base.is_table()) {
            image_ball[a] = e.row(base.table_map()[a]);
        } else {
            for (Index y = 0; y < N; ++y)
                if (within(base.image_distance(a, y), *e.epsilon())) image_ball[a].set(y);
        }
    }

    std::vector<std::size_t> offsets{0};
    offsets.reserve(hs.size() + 1);
    std::vector<Index> targets;
    std::vector<Index> row;
    for (Index id = 0; id < hs.size(); ++id) {
        const FiniteSubset& a = hs.subset(id);
        // f(A) ⊂ E[A'] means A' meets every image ball; A' ⊂ E[f(A)] means A' lies in their union.
        BitRow hood(N);
        for (Index p : a) hood |= image_ball[p];
        const std::vector<Index> candidates = bits_to_indices(hood);
        std::vector<std::vector<std::size_t>> member_of(candidates.size());
        for (std::size_t c = 0; c < candidates.size(); ++c)
            for (std::size_t b = 0; b < a.size(); ++b)
                if (image_ball[a[b]].test(candidates[c])) member_of[c].push_back(b);

        std::vector<std::size_t> hits(a.size(), 0);
        std::size_t unmet = a.size();
        FiniteSubset pick;
        row.clear();
        auto extend = [&](auto&& self, std::size_t start) -> void {
            for (std::size_t c = start; c < candidates.size(); ++c) {
                pick.push_back(candidates[c]);
                for (std::size_t b : member_of[c])
                    if (hits[b]++ == 0) --unmet;
                if (unmet == 0) row.push_back(hs.id_of(pick));
                if (pick.size() < n) self(self, c + 1);
                for (std::size_t b : member_of[c])
                    if (--hits[b] == 0) ++unmet;
                pick.pop_back();
            }
        };
        extend(extend, 0);
        std::sort(row.begin(), row.end());
        targets.insert(targets.end(), row.begin(), row.end());
        if (targets.size() > budget.max_edges)
            throw BudgetExceeded("hyperspace F_" + std::to_string(n) + "(X) edges", targets.size(), budget.max_edges);
        offsets.push_back(targets.size());
    }
    TransitionGraph g(std::move(offsets), std::move(targets));
    g.epsilon = e.epsilon();
    return g;
}

Chain select_base_chain_from_hyper_chain(const HyperSystem& hs, const Chain& hyper_chain,
                                         const TransitionGraph& base_graph, Index x, Index y) {
    const auto& ids = hyper_chain.points();
    const std::size_t k = hyper_chain.length();
    std::vector<BitRow> sets;
    sets.reserve(ids.size());
    for (Index id : ids) sets.push_back(indices_to_bits(hs.subset(id), base_graph.vertex_count()));
    if (!sets.front().test(x) || !sets.back().test(y))
        throw InvalidParameter("endpoints must belong to the first and last sets of the hyper chain");

    // Backward pass: live[i] = points of A_i with a selection reaching y.
    std::vector<BitRow> live(sets.size());
    live[k] = BitRow(base_graph.vertex_count());
    live[k].set(y);
    for (std::size_t i = k; i > 0; --i) {
        live[i - 1] = BitRow(base_graph.vertex_count());
        for (auto a = sets[i - 1].find_first(); a != BitRow::npos; a = sets[i - 1].find_next(a))
            for (Index b : base_graph.successors(static_cast<Index>(a)))
                if (live[i].test(b)) {
                    live[i - 1].set(a);
                    break;
                }
    }
    if (!live[0].test(x))
        throw SelectionFailed("no base chain from " + std::to_string(x) + " to " + std::to_string(y) +
                              " threads the hyper chain");

    std::vector<Index> points{x};
    Index current = x;
    for (std::size_t i = 1; i <= k; ++i) {
        bool found = false;
        for (Index b : base_graph.successors(current))
            if (live[i].test(b)) {
                current = b;
                found = true;
                break;
            }
        if (!found) throw SelectionFailed("forward selection stalled at step " + std::to_string(i));
        points.push_back(current);
    }
    return validate_chain(base_graph, std::move(points));
}

FactorMap tuple_to_set_factor(const ProductSystem& product, const HyperSystem& hyper) {
    const MapSystem& base = product.base();
    if (!base.is_table() || !hyper.base().is_table()) throw InvalidParameter("tuple_to_set_factor needs table systems");
    if (!same_carrier(base.carrier(), hyper.base().carrier()) || base.table_map() != hyper.base().table_map())
        throw InvalidParameter("product and hyperspace must share one base system");
    const std::size_t expected = std::min<std::size_t>(static_cast<std::size_t>(product.order()), base.size());
    if (hyper.order() != expected) throw InvalidParameter("hyperspace order must be min(n, N)");
    std::vector<Index> h;
    h.reserve(product.size());
    for (Index t = 0; t < product.size(); ++t) {
        FiniteSubset s = product.decode(t);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        h.push_back(hyper.id_of(s));
    }
    return FactorMap(product.as_table_system(), hyper.as_table_system(), std::move(h));
}

std::vector<std::vector<Index>> epsilon_components(const Entourage& e) {
    const std::size_t n = e.size();
    const Entourage t = transpose(e);
    std::vector<int> comp(n, -1);
    std::vector<std::vector<Index>> out;
    for (Index s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int c = static_cast<int>(out.size());
        out.emplace_back();
        std::deque<Index> queue{s};
        comp[s] = c;
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop_front();
            out.back().push_back(v);
            const BitRow both = e.row(v) | t.row(v);
            for (auto w = both.find_first(); w != BitRow::npos; w = both.find_next(w))
                if (comp[w] < 0) {
                    comp[w] = c;
                    queue.push_back(static_cast<Index>(w));
                }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

} // namespace chaindyn
