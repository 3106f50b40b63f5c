#include "altfix/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace altfix {

std::size_t Point::index() const {
    if (const auto* i = std::get_if<std::size_t>(&value_)) return *i;
    throw DomainError("point is not a finite-space index");
}

const Vector& Point::coords() const {
    if (const auto* v = std::get_if<Vector>(&value_)) return *v;
    throw DomainError("point is not a coordinate vector");
}

std::string_view to_string(Axiom axiom) {
    switch (axiom) {
        case Axiom::identity: return "identity";
        case Axiom::symmetry: return "symmetry";
        case Axiom::triangle: return "triangle";
    }
    return "unknown";
}

std::string AxiomViolation::describe() const {
    std::ostringstream out;
    out << to_string(axiom) << " violated at ";
    switch (axiom) {
        case Axiom::identity:
            if (i == j)
                out << "(" << i << "," << i << "): nonzero self-distance";
            else
                out << "(" << i << "," << j << "): zero distance between distinct points";
            break;
        case Axiom::symmetry:
            out << "(" << i << "," << j << ")";
            break;
        case Axiom::triangle:
            out << "(" << i << "," << j << "," << k << "): d(" << i << "," << k << ") > d(" << i << ","
                << j << ") + d(" << j << "," << k << ")";
            break;
    }
    return out.str();
}

std::vector<AxiomViolation> validate_space(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) {
            std::ostringstream msg;
            msg << "distance matrix is not square: row " << i << " has " << dist[i].size()
                << " entries, expected " << n;
            throw FormatError(msg.str());
        }
    }

    std::vector<AxiomViolation> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist[i][j];
            if (i == j) {
                if (d != 0.0) out.push_back({Axiom::identity, i, i, 0});
            } else if (!(d > 0.0) || !std::isfinite(d)) {
                // NaN and negative values land here as well.
                if (i < j) out.push_back({Axiom::identity, i, j, 0});
            }
            if (i < j && dist[i][j] != dist[j][i]) out.push_back({Axiom::symmetry, i, j, 0});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const double via = dist[i][j] + dist[j][k];
                if (dist[i][k] > via + 1e-12 * std::max(1.0, via))
                    out.push_back({Axiom::triangle, i, j, k});
            }
    return out;
}

namespace {

std::string summarize(const std::vector<AxiomViolation>& violations) {
    std::ostringstream msg;
    msg << "distance matrix violates metric axioms: ";
    const std::size_t shown = std::min<std::size_t>(violations.size(), 3);
    for (std::size_t v = 0; v < shown; ++v) {
        if (v) msg << "; ";
        msg << violations[v].describe();
    }
    if (violations.size() > shown) msg << " (+" << violations.size() - shown << " more)";
    return msg.str();
}

}  // namespace

MetricAxiomError::MetricAxiomError(std::vector<AxiomViolation> violations)
    : DomainError(summarize(violations)), violations_(std::move(violations)) {}

FiniteMetricSpace::FiniteMetricSpace(DistanceMatrix dist, std::vector<std::string> names)
    : dist_(std::move(dist)), names_(std::move(names)) {
    if (dist_.empty()) throw FormatError("finite metric space needs at least one point");
    if (names_.empty()) {
        names_.reserve(dist_.size());
        for (std::size_t i = 0; i < dist_.size(); ++i) names_.push_back("p" + std::to_string(i));
    }
    if (names_.size() != dist_.size())
        throw FormatError("point name count does not match the distance matrix");
    auto violations = validate_space(dist_);
    if (!violations.empty()) throw MetricAxiomError(std::move(violations));
}

double FiniteMetricSpace::distance(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw DomainError("unknown point index");
    return dist_[i][j];
}

std::optional<std::size_t> FiniteMetricSpace::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

RealBoxSpace::RealBoxSpace(Vector lower, Vector upper, double point_tolerance)
    : lower_(std::move(lower)), upper_(std::move(upper)), point_tolerance_(point_tolerance) {
    if (lower_.empty()) throw FormatError("box dimension must be positive");
    if (lower_.size() != upper_.size()) throw FormatError("box bounds differ in dimension");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || lower_[i] > upper_[i])
            throw DomainError("box bounds must be finite with lower <= upper");
    }
    if (!(point_tolerance_ >= 0.0)) throw DomainError("point tolerance must be nonnegative");
}

bool RealBoxSpace::contains(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] - point_tolerance_ && x[i] <= upper_[i] + point_tolerance_))
            return false;
    }
    return true;
}

double RealBoxSpace::distance(std::span<const double> x, std::span<const double> y) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        sum += diff * diff;
    }
    // Exact absolute difference in one dimension.
    return x.size() == 1 ? std::abs(x[0] - y[0]) : std::sqrt(sum);
}

MetricSpace::MetricSpace(FiniteMetricSpace space)
    : impl_(std::make_shared<const std::variant<FiniteMetricSpace, RealBoxSpace>>(std::move(space))) {}

MetricSpace::MetricSpace(RealBoxSpace space)
    : impl_(std::make_shared<const std::variant<FiniteMetricSpace, RealBoxSpace>>(std::move(space))) {}

bool MetricSpace::is_finite() const noexcept {
    return std::holds_alternative<FiniteMetricSpace>(*impl_);
}

const FiniteMetricSpace& MetricSpace::finite() const {
    if (!is_finite()) throw DomainError("space is not finite");
    return std::get<FiniteMetricSpace>(*impl_);
}

const RealBoxSpace& MetricSpace::box() const {
    if (is_finite()) throw DomainError("space is not a real box");
    return std::get<RealBoxSpace>(*impl_);
}

bool MetricSpace::contains(const Point& x) const noexcept {
    if (is_finite()) return x.is_index() && x.index() < finite().size();
    return !x.is_index() && box().contains(x.coords());
}

double MetricSpace::distance(const Point& x, const Point& y) const {
    if (!contains(x) || !contains(y)) throw DomainError("point does not belong to the space");
    if (is_finite()) return finite().distance(x.index(), y.index());
    return box().distance(x.coords(), y.coords());
}

bool MetricSpace::same_point(const Point& x, const Point& y) const {
    if (is_finite()) return distance(x, y) == 0.0;
    return distance(x, y) <= box().point_tolerance();
}

double MetricSpace::point_tolerance() const noexcept {
    return is_finite() ? 0.0 : std::get<RealBoxSpace>(*impl_).point_tolerance();
}

std::vector<Point> MetricSpace::points() const {
    const auto& f = finite();
    std::vector<Point> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(Point::at(i));
    return out;
}

std::string MetricSpace::format(const Point& x) const {
    if (x.is_index()) {
        if (is_finite() && x.index() < finite().size()) return finite().names()[x.index()];
        return "#" + std::to_string(x.index());
    }
    std::ostringstream out;
    out.precision(17);
    out << "(";
    for (std::size_t i = 0; i < x.coords().size(); ++i) out << (i ? ", " : "") << x.coords()[i];
    out << ")";
    return out.str();
}

std::string_view to_string(MapFamily family) {
    switch (family) {
        case MapFamily::table: return "table";
        case MapFamily::affine: return "affine";
        case MapFamily::rational: return "rational";
        case MapFamily::constant: return "constant";
    }
    return "unknown";
}

SelfMap SelfMap::table(MetricSpace space, std::vector<std::size_t> image) {
    const auto& f = space.finite();
    if (image.size() != f.size())
        throw DomainError("map table must have one entry per point");
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (image[i] >= f.size())
            throw DomainError("map table sends point " + std::to_string(i) + " outside the space");
    }
    SelfMap map(std::move(space), MapFamily::table);
    map.image_ = std::move(image);
    return map;
}

namespace {

// Sampled check that the family image stays inside the box.
void verify_samples(const SelfMap& map, const RealBoxSpace& box) {
    for (const auto& x : halton_points(box, 64)) {
        if (!box.contains(map.apply(x).coords()))
            throw DomainError(std::string(to_string(map.family())) + " map sends a sample point outside the box");
    }
}

}  // namespace

SelfMap SelfMap::affine(MetricSpace space, Matrix linear, Vector offset) {
    const auto& box = space.box();
    const std::size_t dim = box.dimension();
    if (linear.size() != dim || offset.size() != dim)
        throw DomainError("affine map parameters do not match the box dimension");
    for (const auto& row : linear) {
        if (row.size() != dim) throw DomainError("affine map matrix must be square");
        for (double v : row)
            if (!std::isfinite(v)) throw DomainError("affine map matrix must be finite");
    }
    for (double v : offset)
        if (!std::isfinite(v)) throw DomainError("affine map offset must be finite");
    if (dim > 20) throw DomainError("affine maps are limited to 20 dimensions");

    SelfMap map(std::move(space), MapFamily::affine);
    map.linear_ = std::move(linear);
    map.offset_ = std::move(offset);

    // The image of a box under an affine map is the hull of its corner images.
    Vector corner(dim);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
        for (std::size_t i = 0; i < dim; ++i)
            corner[i] = (mask >> i) & 1 ? box.upper()[i] : box.lower()[i];
        if (!box.contains(map.apply_once(corner)))
            throw DomainError("affine map sends a box corner outside the box");
    }
    verify_samples(map, box);
    return map;
}

SelfMap SelfMap::rational(MetricSpace space) {
    const auto& box = space.box();
    for (std::size_t i = 0; i < box.dimension(); ++i) {
        const double lo = box.lower()[i];
        const double hi = box.upper()[i];
        // x/(1+x) is increasing on (-1, inf), so the image of [lo, hi] is
        // [lo/(1+lo), hi/(1+hi)].
        if (!(lo > -1.0)) throw DomainError("rational map needs lower bounds > -1");
        const double tol = box.point_tolerance();
        if (lo / (1.0 + lo) < lo - tol || hi / (1.0 + hi) > hi + tol)
            throw DomainError("rational map sends the box outside itself");
    }
    SelfMap map(std::move(space), MapFamily::rational);
    verify_samples(map, box);
    return map;
}

SelfMap SelfMap::constant(MetricSpace space, Point value) {
    if (!space.contains(value)) throw DomainError("constant map value is outside the space");
    const bool finite = space.is_finite();
    SelfMap map(std::move(space), finite ? MapFamily::table : MapFamily::constant);
    if (finite) {
        map.image_.assign(map.space_.finite().size(), value.index());
    } else {
        map.constant_ = std::move(value);
    }
    return map;
}

Vector SelfMap::apply_once(const Vector& x) const {
    switch (family_) {
        case MapFamily::affine: {
            Vector y(offset_);
            for (std::size_t r = 0; r < y.size(); ++r)
                for (std::size_t c = 0; c < x.size(); ++c) y[r] += linear_[r][c] * x[c];
            return y;
        }
        case MapFamily::rational: {
            Vector y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / (1.0 + x[i]);
            return y;
        }
        case MapFamily::constant:
            return constant_.coords();
        case MapFamily::table:
            break;
    }
    throw DomainError("table maps have no coordinate formula");
}

Point SelfMap::apply(const Point& x) const {
    if (!space_.contains(x)) throw DomainError("point does not belong to the map's space");
    if (family_ == MapFamily::table) return Point::at(image_[x.index()]);
    Vector y = x.coords();
    for (std::size_t k = 0; k < power_; ++k) y = apply_once(y);
    return Point::coords(std::move(y));
}

SelfMap compose(const SelfMap& map, std::size_t n) {
    if (n == 0) throw DomainError("compose needs n >= 1");
    SelfMap out = map;
    if (map.family_ == MapFamily::table) {
        for (std::size_t i = 0; i < out.image_.size(); ++i) {
            std::size_t j = i;
            for (std::size_t k = 0; k < n; ++k) j = map.image_[j];
            out.image_[i] = j;
        }
    } else {
        out.power_ = map.power_ * n;
    }
    return out;
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double result = 0.0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return result;
}

constexpr std::array<std::uint64_t, 20> kPrimes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

std::vector<Point> halton_points(const RealBoxSpace& box, std::size_t count) {
    const std::size_t dim = box.dimension();
    if (dim > kPrimes.size()) throw DomainError("Halton sampling supports at most 20 dimensions");
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        Vector x(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double u = radical_inverse(n, kPrimes[i]);
            x[i] = box.lower()[i] + u * (box.upper()[i] - box.lower()[i]);
        }
        out.push_back(Point::coords(std::move(x)));
    }
    return out;
}

std::vector<Point> uniform_points(const RealBoxSpace& box, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        Vector x(box.dimension());
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = box.lower()[i] + unit(rng) * (box.upper()[i] - box.lower()[i]);
        out.push_back(Point::coords(std::move(x)));
    }
    return out;
}

std::vector<Point> grid_points(const RealBoxSpace& box, std::size_t per_axis) {
    if (per_axis == 0) throw DomainError("grid needs at least one point per axis");
    const std::size_t dim = box.dimension();
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (total > 10'000'000 / per_axis) throw DomainError("grid is too large");
        total *= per_axis;
    }
    std::vector<Point> out;
    out.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t n = 0; n < total; ++n) {
        Vector x(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double lo = box.lower()[i];
            const double hi = box.upper()[i];
            x[i] = per_axis == 1 ? lo
                                 : lo + (hi - lo) * static_cast<double>(idx[i]) /
                                            static_cast<double>(per_axis - 1);
        }
        out.push_back(Point::coords(std::move(x)));
        for (std::size_t i = 0; i < dim; ++i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
    }
    return out;
}

}  // namespace altfix
