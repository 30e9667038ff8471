#include "chaindyn/system.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chaindyn {

const char* to_string(BuiltinKind kind) {
    switch (kind) {
    case BuiltinKind::tent: return "tent";
    case BuiltinKind::logistic: return "logistic";
    case BuiltinKind::rotation: return "rotation";
    case BuiltinKind::identity: return "identity";
    case BuiltinKind::constant: return "constant";
    }
    return "unknown";
}

std::optional<BuiltinKind> builtin_from_string(const std::string& name) {
    for (auto k : {BuiltinKind::tent, BuiltinKind::logistic, BuiltinKind::rotation, BuiltinKind::identity,
                   BuiltinKind::constant})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

double BuiltinMap::apply_once(double x) const {
    switch (kind) {
    case BuiltinKind::tent: return 1.0 - std::fabs(1.0 - 2.0 * x);
    case BuiltinKind::logistic: return param * x * (1.0 - x);
    case BuiltinKind::rotation: {
        double r = std::fmod(x + param, 1.0);
        if (r < 0) r += 1.0;
        return r;
    }
    case BuiltinKind::identity: return x;
    case BuiltinKind::constant: return param;
    }
    return x;
}

double BuiltinMap::operator()(double x) const {
    for (int k = 0; k < iterations; ++k) x = apply_once(x);
    return x;
}

MapSystem::MapSystem(CarrierPtr carrier, std::variant<std::vector<Index>, BuiltinMap> map)
    : carrier_(std::move(carrier)), map_(std::move(map)) {}

MapSystem MapSystem::table(CarrierPtr carrier, std::vector<Index> table) {
    if (!carrier) throw InvalidParameter("null carrier");
    if (table.size() != carrier->size()) throw InvalidParameter("map table length does not match carrier size");
    for (Index v : table)
        if (v >= carrier->size()) throw InvalidParameter("map table entry " + std::to_string(v) + " out of range");
    return MapSystem(std::move(carrier), std::move(table));
}

MapSystem MapSystem::builtin(CarrierPtr carrier, BuiltinKind kind, double param) {
    if (!carrier) throw InvalidParameter("null carrier");
    const bool line = carrier->metric() == MetricKind::euclidean && carrier->is_scalar();
    const bool circle = carrier->metric() == MetricKind::circle;
    switch (kind) {
    case BuiltinKind::tent:
    case BuiltinKind::logistic:
        if (!line) throw InvalidParameter(std::string(to_string(kind)) + " requires a one-dimensional line carrier");
        if (kind == BuiltinKind::logistic && !(param >= 0.0 && param <= 4.0))
            throw InvalidParameter("logistic parameter r must lie in [0, 4]");
        break;
    case BuiltinKind::rotation:
        if (!circle) throw InvalidParameter("rotation requires a circle carrier");
        if (!std::isfinite(param)) throw InvalidParameter("rotation step must be finite");
        break;
    case BuiltinKind::identity:
    case BuiltinKind::constant:
        if (!line && !circle) throw InvalidParameter(std::string(to_string(kind)) + " requires a line or circle carrier");
        if (!std::isfinite(param)) throw InvalidParameter("constant value must be finite");
        break;
    }
    return MapSystem(std::move(carrier), BuiltinMap{kind, param, 1});
}

Index MapSystem::image_index(Index x) const {
    if (!is_table()) throw InvalidParameter("image_index needs a table system");
    return table_map().at(x);
}

double MapSystem::image_value(Index x) const {
    if (is_table()) throw InvalidParameter("image_value needs a builtin system");
    return builtin_map()(carrier_->point(x).coords[0]);
}

double MapSystem::image_distance(Index x, Index y) const {
    if (is_table()) return carrier_->distance(table_map().at(x), y);
    return carrier_->distance_to(image_value(x), y);
}

std::string MapSystem::describe() const {
    std::ostringstream os;
    if (is_table()) {
        os << "table[";
        const auto& t = table_map();
        for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
        os << "]";
    } else {
        const auto& b = builtin_map();
        os << to_string(b.kind);
        if (b.kind == BuiltinKind::logistic || b.kind == BuiltinKind::rotation || b.kind == BuiltinKind::constant)
            os << "(" << b.param << ")";
        if (b.iterations != 1) os << "^" << b.iterations;
    }
    return os.str();
}

TransitionGraph build_transition_graph(const MapSystem& system, const Entourage& e) {
    if (!same_carrier(system.carrier(), e.carrier()))
        throw InvalidParameter("entourage and system live on different carriers");
    const std::size_t n = system.size();
    std::vector<std::size_t> offsets{0};
    offsets.reserve(n + 1);
    std::vector<Index> targets;
    double covering = 0.0;
    if (system.is_table()) {
        for (Index x = 0; x < n; ++x) {
            const BitRow& row = e.row(system.table_map()[x]);
            for (auto y = row.find_first(); y != BitRow::npos; y = row.find_next(y)) targets.push_back(static_cast<Index>(y));
            offsets.push_back(targets.size());
        }
    } else {
        if (!e.epsilon()) throw InvalidParameter("builtin systems need a metric entourage");
        const double eps = *e.epsilon();
        for (Index x = 0; x < n; ++x) {
            const double image = system.image_value(x);
            double nearest = std::numeric_limits<double>::infinity();
            for (Index y = 0; y < n; ++y) {
                const double d = system.carrier().distance_to(image, y);
                nearest = std::min(nearest, d);
                if (within(d, eps)) targets.push_back(y);
            }
            covering = std::max(covering, nearest);
            offsets.push_back(targets.size());
        }
    }
    TransitionGraph g(std::move(offsets), std::move(targets));
    g.covering_radius = covering;
    g.epsilon = e.epsilon();
    return g;
}

MapSystem iterate_system(const MapSystem& system, int n) {
    if (n < 1) throw InvalidParameter("iterate needs n >= 1");
    if (system.is_table()) {
        const auto& t = system.table_map();
        std::vector<Index> out(t.size());
        for (Index x = 0; x < t.size(); ++x) {
            Index y = x;
            for (int k = 0; k < n; ++k) y = t[y];
            out[x] = y;
        }
        return MapSystem::table(system.carrier_ptr(), std::move(out));
    }
    BuiltinMap b = system.builtin_map();
    b.iterations *= n;
    return MapSystem(system.carrier_ptr(), b);
}

std::vector<Index> ProductSystem::decode(Index tuple) const {
    const std::size_t N = base_.size();
    std::vector<Index> coords(static_cast<std::size_t>(n_));
    std::size_t rest = tuple;
    for (int i = n_ - 1; i >= 0; --i) {
        coords[i] = static_cast<Index>(rest % N);
        rest /= N;
    }
    return coords;
}

Index ProductSystem::encode(const std::vector<Index>& coords) const {
    if (coords.size() != static_cast<std::size_t>(n_)) throw InvalidParameter("tuple has the wrong arity");
    std::size_t code = 0;
    for (Index c : coords) {
        if (c >= base_.size()) throw InvalidParameter("tuple coordinate out of range");
        code = code * base_.size() + c;
    }
    return static_cast<Index>(code);
}

bool ProductSystem::related(Index u, Index v, const Entourage& e) const {
    const auto a = decode(u);
    const auto b = decode(v);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!e.contains(a[i], b[i])) return false;
    return true;
}

MapSystem ProductSystem::as_table_system() const {
    if (!base_.is_table()) throw InvalidParameter("only table systems have a tabulated product");
    std::vector<std::string> labels;
    std::vector<Index> table;
    labels.reserve(size_);
    table.reserve(size_);
    for (Index t = 0; t < size_; ++t) {
        auto coords = decode(t);
        std::string label = "(";
        for (std::size_t i = 0; i < coords.size(); ++i) {
            label += (i ? "," : "") + std::to_string(coords[i]);
            coords[i] = base_.table_map()[coords[i]];
        }
        labels.push_back(label + ")");
        table.push_back(encode(coords));
    }
    return MapSystem::table(share(Carrier::discrete(std::move(labels))), std::move(table));
}

ProductSystem build_product_system(const MapSystem& system, int n, const Budget& budget) {
    if (n < 1) throw InvalidParameter("product order must be >= 1");
    const std::string label = "product system X^(" + std::to_string(n) + ")";
    const std::size_t count = checked_power(system.size(), n, budget.max_vertices, label.c_str());
    return ProductSystem(system, n, count);
}

TransitionGraph build_product_graph(const ProductSystem& product, const Entourage& e, const Budget& budget) {
    // The box entourage makes the product graph the tensor power of the base graph.
    return tensor_power(build_transition_graph(product.base(), e), product.order(), budget);
}

FactorMap::FactorMap(MapSystem source, MapSystem target, std::vector<Index> h)
    : source_(std::move(source)), target_(std::move(target)), h_(std::move(h)) {
    if (h_.size() != source_.size()) throw InvalidFactorMap("factor map must assign every source point");
    std::vector<bool> hit(target_.size(), false);
    for (Index v : h_) {
        if (v >= target_.size()) throw InvalidFactorMap("factor map value out of range");
        hit[v] = true;
    }
    const auto missing = std::find(hit.begin(), hit.end(), false);
    if (missing != hit.end())
        throw InvalidFactorMap("factor map is not onto: target point " +
                               std::to_string(std::distance(hit.begin(), missing)) + " has no preimage");
}

SemiconjugacyResult check_semiconjugacy(const FactorMap& fm, const Entourage& e_target) {
    if (!fm.source().is_table()) throw InvalidParameter("semiconjugacy checks need a table source system");
    if (!same_carrier(fm.target().carrier(), e_target.carrier()))
        throw InvalidParameter("target entourage lives on a different carrier");
    const MapSystem& target = fm.target();
    if (!target.is_table() && !e_target.epsilon())
        throw InvalidParameter("builtin target systems need a metric entourage");
    for (Index x = 0; x < fm.source().size(); ++x) {
        const Index hfx = fm.h()[fm.source().table_map()[x]];
        const Index hx = fm.h()[x];
        const bool ok = target.is_table() ? e_target.contains(hfx, target.table_map()[hx])
                                          : within(target.image_distance(hx, hfx), *e_target.epsilon());
        if (!ok) return {false, x};
    }
    return {true, std::nullopt};
}

double image_spread(const MapSystem& system, double eta) {
    if (!system.is_table()) throw InvalidParameter("image_spread needs a table system");
    const auto& c = system.carrier();
    const auto& t = system.table_map();
    double worst = 0.0;
    for (Index a = 0; a < c.size(); ++a)
        for (Index b = a + 1; b < c.size(); ++b)
            if (within(c.distance(a, b), eta)) worst = std::max(worst, c.distance(t[a], t[b]));
    return worst;
}

double continuity_modulus(const MapSystem& system, double epsilon) {
    if (!system.is_table()) throw InvalidParameter("continuity_modulus needs a table system");
    double best = 0.0;
    for (double eta : system.carrier().distance_values())
        if (within(image_spread(system, eta), epsilon)) best = std::max(best, eta);
    return best;
}

} // namespace chaindyn
