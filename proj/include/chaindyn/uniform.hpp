#ifndef CHAINDYN_UNIFORM_HPP
#define CHAINDYN_UNIFORM_HPP

// Finite-carrier uniform-space primitives: carriers with a metric, entourages
// as reflexive relations, cross-sections, composition and powers.

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chaindyn {

using Index = std::uint32_t;
using BitRow = boost::dynamic_bitset<std::uint64_t>;

/// Absolute slack on every `d <= eps` comparison.
inline constexpr double distance_tolerance = 1e-12;

inline bool within(double distance, double epsilon) { return distance <= epsilon + distance_tolerance; }

enum class MetricKind { euclidean, circle, discrete, explicit_matrix };

const char* to_string(MetricKind kind);

struct Point {
    std::vector<double> coords; ///< empty for symbolic points
    std::string label;
};

/// A finite point set 0..N-1 together with its metric.
class Carrier {
public:
    /// `points` evenly spaced on [0,1], endpoints included.
    static Carrier interval_grid(std::size_t points);
    /// `points` evenly spaced on the circle [0,1) with arc-length metric.
    static Carrier circle_grid(std::size_t points);
    static Carrier euclidean(std::vector<std::vector<double>> coords);
    static Carrier circle(std::vector<double> positions);
    static Carrier discrete(std::vector<std::string> labels);
    /// Distance matrix must be square, symmetric, non-negative with zero diagonal.
    static Carrier explicit_distances(std::vector<std::vector<double>> matrix, std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return points_.size(); }
    MetricKind metric() const noexcept { return metric_; }
    const Point& point(Index i) const { return points_.at(i); }
    const std::vector<Point>& points() const noexcept { return points_; }
    const std::vector<std::vector<double>>& distance_matrix() const noexcept { return matrix_; }

    /// Dimension of the coordinate ambient space, 0 for discrete/explicit carriers.
    std::size_t dimension() const noexcept;
    /// One-dimensional coordinate carrier (line or circle).
    bool is_scalar() const noexcept;

    double distance(Index a, Index b) const;
    /// Distance from an ambient point (coordinate vector) to carrier point `b`.
    double distance_to(std::span<const double> ambient, Index b) const;
    double distance_to(double ambient, Index b) const;

    /// Largest pairwise distance.
    double diameter() const;
    /// Sorted distinct pairwise distances, including 0.
    std::vector<double> distance_values() const;

    bool operator==(const Carrier& other) const;

private:
    Carrier(MetricKind metric, std::vector<Point> points, std::vector<std::vector<double>> matrix);

    MetricKind metric_;
    std::vector<Point> points_;
    std::vector<std::vector<double>> matrix_;
};

using CarrierPtr = std::shared_ptr<const Carrier>;

inline CarrierPtr share(Carrier carrier) { return std::make_shared<const Carrier>(std::move(carrier)); }

/// A reflexive relation over a carrier. Rows hold the cross-sections E[x].
class Entourage {
public:
    /// Throws InvalidParameter unless every diagonal pair is present.
    static Entourage from_relation(CarrierPtr carrier, std::vector<BitRow> rows);
    static Entourage identity(CarrierPtr carrier);
    static Entourage full(CarrierPtr carrier);

    const Carrier& carrier() const noexcept { return *carrier_; }
    const CarrierPtr& carrier_ptr() const noexcept { return carrier_; }
    std::size_t size() const noexcept { return rows_.size(); }

    bool contains(Index x, Index y) const { return rows_[x].test(y); }
    const BitRow& row(Index x) const { return rows_.at(x); }
    const std::vector<BitRow>& rows() const noexcept { return rows_; }

    /// Present when generated by a metric threshold.
    std::optional<double> epsilon() const noexcept { return epsilon_; }
    bool symmetric() const noexcept { return symmetric_; }
    std::size_t pair_count() const;

    bool subset_of(const Entourage& other) const;
    bool operator==(const Entourage& other) const;

private:
    friend Entourage metric_entourage(CarrierPtr carrier, double epsilon);

    Entourage(CarrierPtr carrier, std::vector<BitRow> rows, std::optional<double> epsilon);

    CarrierPtr carrier_;
    std::vector<BitRow> rows_;
    std::optional<double> epsilon_;
    bool symmetric_ = false;
};

/// {(x,y) : d(x,y) <= epsilon}.
Entourage metric_entourage(CarrierPtr carrier, double epsilon);

/// E[x] as ascending indices.
std::vector<Index> cross_section(const Entourage& e, Index x);
/// E[A] as ascending indices.
std::vector<Index> cross_section_set(const Entourage& e, std::span<const Index> a);
BitRow cross_section_bits(const Entourage& e, const BitRow& a);

/// (x,y) in result iff some z has (x,z) in e and (z,y) in f.
Entourage compose(const Entourage& e, const Entourage& f);
/// E^n, n >= 1.
Entourage power(const Entourage& e, int n);
Entourage transpose(const Entourage& e);

bool same_carrier(const Carrier& a, const Carrier& b);

std::vector<Index> bits_to_indices(const BitRow& bits);
BitRow indices_to_bits(std::span<const Index> indices, std::size_t size);

} // namespace chaindyn

#endif
