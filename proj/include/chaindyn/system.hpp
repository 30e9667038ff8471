#ifndef CHAINDYN_SYSTEM_HPP
#define CHAINDYN_SYSTEM_HPP

#include "chaindyn/graph.hpp"
#include "chaindyn/uniform.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chaindyn {

enum class BuiltinKind { tent, logistic, rotation, identity, constant };

const char* to_string(BuiltinKind kind);
std::optional<BuiltinKind> builtin_from_string(const std::string& name);

/// A closed-form self-map of [0,1] or the circle, applied `iterations` times.
struct BuiltinMap {
    BuiltinKind kind = BuiltinKind::identity;
    double param = 0.0; ///< r for logistic, s for rotation, c for constant
    int iterations = 1;

    double apply_once(double x) const;
    double operator()(double x) const;
};

/// A self-map of a finite carrier: either an index table or a builtin
/// evaluated in the carrier's ambient space.
class MapSystem {
public:
    static MapSystem table(CarrierPtr carrier, std::vector<Index> table);
    /// Throws InvalidParameter when the builtin does not fit the carrier's metric.
    static MapSystem builtin(CarrierPtr carrier, BuiltinKind kind, double param = 0.0);

    const Carrier& carrier() const noexcept { return *carrier_; }
    const CarrierPtr& carrier_ptr() const noexcept { return carrier_; }
    std::size_t size() const noexcept { return carrier_->size(); }

    bool is_table() const noexcept { return std::holds_alternative<std::vector<Index>>(map_); }
    const std::vector<Index>& table_map() const { return std::get<std::vector<Index>>(map_); }
    const BuiltinMap& builtin_map() const { return std::get<BuiltinMap>(map_); }

    /// Index image; table systems only.
    Index image_index(Index x) const;
    /// Ambient image coordinate; builtin systems only.
    double image_value(Index x) const;
    /// d(f(x), y) measured in the ambient space.
    double image_distance(Index x, Index y) const;

    std::string describe() const;

private:
    friend MapSystem iterate_system(const MapSystem& system, int n);

    MapSystem(CarrierPtr carrier, std::variant<std::vector<Index>, BuiltinMap> map);

    CarrierPtr carrier_;
    std::variant<std::vector<Index>, BuiltinMap> map_;
};

/// Edge x -> y iff (f(x), y) in E. Builtin systems need a metric entourage and
/// compare the unsnapped ambient image against carrier points.
TransitionGraph build_transition_graph(const MapSystem& system, const Entourage& e);

/// f composed with itself n times before any discretization.
MapSystem iterate_system(const MapSystem& system, int n);

/// The coordinatewise system f^(n) on n-tuples of carrier points.
class ProductSystem {
public:
    ProductSystem(MapSystem base, int n, std::size_t vertex_count) : base_(std::move(base)), n_(n), size_(vertex_count) {}

    const MapSystem& base() const noexcept { return base_; }
    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return size_; }

    std::vector<Index> decode(Index tuple) const;
    Index encode(const std::vector<Index>& coords) const;

    /// Box entourage: every coordinate related in the base entourage.
    bool related(Index u, Index v, const Entourage& e) const;

    /// Table base only: the product as a table system over a discrete tuple carrier.
    MapSystem as_table_system() const;

private:
    MapSystem base_;
    int n_;
    std::size_t size_;
};

ProductSystem build_product_system(const MapSystem& system, int n, const Budget& budget = {});
TransitionGraph build_product_graph(const ProductSystem& product, const Entourage& e, const Budget& budget = {});

/// Onto assignment h from source indices to target indices.
class FactorMap {
public:
    /// Throws InvalidFactorMap if h has the wrong length, out-of-range values or is not onto.
    FactorMap(MapSystem source, MapSystem target, std::vector<Index> h);

    const MapSystem& source() const noexcept { return source_; }
    const MapSystem& target() const noexcept { return target_; }
    const std::vector<Index>& h() const noexcept { return h_; }

private:
    MapSystem source_;
    MapSystem target_;
    std::vector<Index> h_;
};

struct SemiconjugacyResult {
    bool holds = true;
    std::optional<Index> violating_index;
};

/// Checks (h(f(x)), g(h(x))) in E_target for every x. The source must be a
/// table system; a builtin target needs a metric E_target.
SemiconjugacyResult check_semiconjugacy(const FactorMap& fm, const Entourage& e_target);

/// Largest carrier distance eta with d(a,b) <= eta => d(f(a),f(b)) <= epsilon.
/// Table systems only.
double continuity_modulus(const MapSystem& system, double epsilon);

/// Worst image spread max{d(f(a),f(b)) : d(a,b) <= eta}. Table systems only.
double image_spread(const MapSystem& system, double eta);

} // namespace chaindyn

#endif
