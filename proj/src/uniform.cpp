#include "chaindyn/uniform.hpp"

#include "chaindyn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chaindyn {

const char* to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::circle: return "circle";
    case MetricKind::discrete: return "discrete";
    case MetricKind::explicit_matrix: return "explicit";
    }
    return "unknown";
}

namespace {

double wrap_unit(double x) {
    double r = std::fmod(x, 1.0);
    if (r < 0) r += 1.0;
    if (r >= 1.0) r = 0.0;
    return r;
}

double arc_distance(double a, double b) {
    double t = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(t, 1.0 - t);
}

std::string default_label(std::size_t i) { return "p" + std::to_string(i); }

} // namespace

Carrier::Carrier(MetricKind metric, std::vector<Point> points, std::vector<std::vector<double>> matrix)
    : metric_(metric), points_(std::move(points)), matrix_(std::move(matrix)) {
    if (points_.empty()) throw InvalidParameter("carrier must contain at least one point");
}

Carrier Carrier::interval_grid(std::size_t points) {
    if (points == 0) throw InvalidParameter("interval_grid needs at least one point");
    std::vector<std::vector<double>> coords;
    coords.reserve(points);
    for (std::size_t k = 0; k < points; ++k)
        coords.push_back({points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1)});
    return euclidean(std::move(coords));
}

Carrier Carrier::circle_grid(std::size_t points) {
    if (points == 0) throw InvalidParameter("circle_grid needs at least one point");
    std::vector<double> pos;
    pos.reserve(points);
    for (std::size_t k = 0; k < points; ++k) pos.push_back(static_cast<double>(k) / static_cast<double>(points));
    return circle(std::move(pos));
}

Carrier Carrier::euclidean(std::vector<std::vector<double>> coords) {
    if (coords.empty()) throw InvalidParameter("carrier must contain at least one point");
    const std::size_t dim = coords.front().size();
    if (dim == 0) throw InvalidParameter("euclidean points need at least one coordinate");
    std::vector<Point> points;
    points.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].size() != dim) throw InvalidParameter("euclidean points must share one dimension");
        for (double c : coords[i])
            if (!std::isfinite(c)) throw InvalidParameter("non-finite coordinate");
        points.push_back({std::move(coords[i]), default_label(i)});
    }
    return Carrier(MetricKind::euclidean, std::move(points), {});
}

Carrier Carrier::circle(std::vector<double> positions) {
    std::vector<Point> points;
    points.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(positions[i])) throw InvalidParameter("non-finite coordinate");
        points.push_back({{wrap_unit(positions[i])}, default_label(i)});
    }
    return Carrier(MetricKind::circle, std::move(points), {});
}

Carrier Carrier::discrete(std::vector<std::string> labels) {
    std::vector<Point> points;
    points.reserve(labels.size());
    for (auto& l : labels) points.push_back({{}, std::move(l)});
    return Carrier(MetricKind::discrete, std::move(points), {});
}

Carrier Carrier::explicit_distances(std::vector<std::vector<double>> matrix, std::vector<std::string> labels) {
    const std::size_t n = matrix.size();
    if (!labels.empty() && labels.size() != n) throw InvalidParameter("label count does not match distance matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) throw InvalidParameter("distance matrix must be square");
        if (matrix[i][i] != 0.0) throw InvalidParameter("distance matrix must have zero diagonal");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(matrix[i][j]) || matrix[i][j] < 0.0)
                throw InvalidParameter("distances must be finite and non-negative");
            if (matrix[i][j] != matrix[j][i]) throw InvalidParameter("distance matrix must be symmetric");
        }
    std::vector<Point> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back({{}, labels.empty() ? default_label(i) : labels[i]});
    return Carrier(MetricKind::explicit_matrix, std::move(points), std::move(matrix));
}

std::size_t Carrier::dimension() const noexcept {
    if (metric_ == MetricKind::euclidean || metric_ == MetricKind::circle) return points_.front().coords.size();
    return 0;
}

bool Carrier::is_scalar() const noexcept { return dimension() == 1; }

double Carrier::distance(Index a, Index b) const {
    if (a >= size() || b >= size()) throw InvalidParameter("point index out of range");
    switch (metric_) {
    case MetricKind::euclidean: return distance_to(points_[a].coords, b);
    case MetricKind::circle: return arc_distance(points_[a].coords[0], points_[b].coords[0]);
    case MetricKind::discrete: return a == b ? 0.0 : 1.0;
    case MetricKind::explicit_matrix: return matrix_[a][b];
    }
    return 0.0;
}

double Carrier::distance_to(std::span<const double> ambient, Index b) const {
    if (b >= size()) throw InvalidParameter("point index out of range");
    if (ambient.size() != dimension() || dimension() == 0)
        throw InvalidParameter("ambient point does not live in this carrier's coordinate space");
    if (metric_ == MetricKind::circle) return arc_distance(ambient[0], points_[b].coords[0]);
    double sum = 0.0;
    for (std::size_t k = 0; k < ambient.size(); ++k) {
        const double d = ambient[k] - points_[b].coords[k];
        sum += d * d;
    }
    return ambient.size() == 1 ? std::fabs(ambient[0] - points_[b].coords[0]) : std::sqrt(sum);
}

double Carrier::distance_to(double ambient, Index b) const {
    return distance_to(std::span<const double>(&ambient, 1), b);
}

double Carrier::diameter() const {
    double best = 0.0;
    for (Index i = 0; i < size(); ++i)
        for (Index j = i + 1; j < size(); ++j) best = std::max(best, distance(i, j));
    return best;
}

std::vector<double> Carrier::distance_values() const {
    std::vector<double> values{0.0};
    for (Index i = 0; i < size(); ++i)
        for (Index j = i + 1; j < size(); ++j) values.push_back(distance(i, j));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

bool Carrier::operator==(const Carrier& other) const {
    if (metric_ != other.metric_ || points_.size() != other.points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i].coords != other.points_[i].coords || points_[i].label != other.points_[i].label) return false;
    return matrix_ == other.matrix_;
}

bool same_carrier(const Carrier& a, const Carrier& b) { return &a == &b || a == b; }

// ---------------------------------------------------------------------------

Entourage::Entourage(CarrierPtr carrier, std::vector<BitRow> rows, std::optional<double> epsilon)
    : carrier_(std::move(carrier)), rows_(std::move(rows)), epsilon_(epsilon) {
    const std::size_t n = carrier_->size();
    if (rows_.size() != n) throw InvalidParameter("relation row count does not match carrier");
    for (Index x = 0; x < n; ++x) {
        if (rows_[x].size() != n) throw InvalidParameter("relation row width does not match carrier");
        if (!rows_[x].test(x)) throw InvalidParameter("entourage must contain the diagonal");
    }
    symmetric_ = true;
    for (Index x = 0; x < n && symmetric_; ++x)
        for (auto y = rows_[x].find_first(); y != BitRow::npos; y = rows_[x].find_next(y))
            if (!rows_[y].test(x)) {
                symmetric_ = false;
                break;
            }
}

Entourage Entourage::from_relation(CarrierPtr carrier, std::vector<BitRow> rows) {
    if (!carrier) throw InvalidParameter("null carrier");
    return Entourage(std::move(carrier), std::move(rows), std::nullopt);
}

Entourage Entourage::identity(CarrierPtr carrier) {
    if (!carrier) throw InvalidParameter("null carrier");
    const std::size_t n = carrier->size();
    std::vector<BitRow> rows(n, BitRow(n));
    for (Index x = 0; x < n; ++x) rows[x].set(x);
    return Entourage(std::move(carrier), std::move(rows), std::nullopt);
}

Entourage Entourage::full(CarrierPtr carrier) {
    if (!carrier) throw InvalidParameter("null carrier");
    const std::size_t n = carrier->size();
    std::vector<BitRow> rows(n, BitRow(n));
    for (auto& r : rows) r.set();
    return Entourage(std::move(carrier), std::move(rows), std::nullopt);
}

std::size_t Entourage::pair_count() const {
    std::size_t total = 0;
    for (const auto& r : rows_) total += r.count();
    return total;
}

bool Entourage::subset_of(const Entourage& other) const {
    if (!same_carrier(*carrier_, *other.carrier_)) throw InvalidParameter("entourages live on different carriers");
    for (std::size_t x = 0; x < rows_.size(); ++x)
        if (!rows_[x].is_subset_of(other.rows_[x])) return false;
    return true;
}

bool Entourage::operator==(const Entourage& other) const {
    return same_carrier(*carrier_, *other.carrier_) && rows_ == other.rows_;
}

Entourage metric_entourage(CarrierPtr carrier, double epsilon) {
    if (!carrier) throw InvalidParameter("null carrier");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidParameter("epsilon must be a finite value >= 0");
    const std::size_t n = carrier->size();
    std::vector<BitRow> rows(n, BitRow(n));
    for (Index x = 0; x < n; ++x) {
        rows[x].set(x);
        for (Index y = x + 1; y < n; ++y)
            if (within(carrier->distance(x, y), epsilon)) {
                rows[x].set(y);
                rows[y].set(x);
            }
    }
    return Entourage(std::move(carrier), std::move(rows), epsilon);
}

std::vector<Index> bits_to_indices(const BitRow& bits) {
    std::vector<Index> out;
    out.reserve(bits.count());
    for (auto i = bits.find_first(); i != BitRow::npos; i = bits.find_next(i)) out.push_back(static_cast<Index>(i));
    return out;
}

BitRow indices_to_bits(std::span<const Index> indices, std::size_t size) {
    BitRow bits(size);
    for (Index i : indices) {
        if (i >= size) throw InvalidParameter("point index out of range");
        bits.set(i);
    }
    return bits;
}

std::vector<Index> cross_section(const Entourage& e, Index x) {
    if (x >= e.size()) throw InvalidParameter("point index out of range");
    return bits_to_indices(e.row(x));
}

BitRow cross_section_bits(const Entourage& e, const BitRow& a) {
    BitRow out(e.size());
    for (auto i = a.find_first(); i != BitRow::npos; i = a.find_next(i)) out |= e.row(static_cast<Index>(i));
    return out;
}

std::vector<Index> cross_section_set(const Entourage& e, std::span<const Index> a) {
    return bits_to_indices(cross_section_bits(e, indices_to_bits(a, e.size())));
}

Entourage compose(const Entourage& e, const Entourage& f) {
    if (!same_carrier(e.carrier(), f.carrier())) throw InvalidParameter("cannot compose entourages on different carriers");
    std::vector<BitRow> rows;
    rows.reserve(e.size());
    for (Index x = 0; x < e.size(); ++x) rows.push_back(cross_section_bits(f, e.row(x)));
    return Entourage::from_relation(e.carrier_ptr(), std::move(rows));
}

Entourage power(const Entourage& e, int n) {
    if (n < 1) throw InvalidParameter("entourage power needs n >= 1");
    Entourage result = e;
    for (int k = 1; k < n; ++k) result = compose(result, e);
    return result;
}

Entourage transpose(const Entourage& e) {
    const std::size_t n = e.size();
    std::vector<BitRow> rows(n, BitRow(n));
    for (Index x = 0; x < n; ++x)
        for (auto y = e.row(x).find_first(); y != BitRow::npos; y = e.row(x).find_next(y)) rows[y].set(x);
    return Entourage::from_relation(e.carrier_ptr(), std::move(rows));
}

} // namespace chaindyn
