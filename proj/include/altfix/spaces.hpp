#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "altfix/errors.hpp"

namespace altfix {

/// Default Euclidean tolerance for point equality on continuous spaces.
inline constexpr double kDefaultPointTolerance = 1e-9;

using Vector = std::vector<double>;
using Matrix = std::vector<Vector>;
using DistanceMatrix = std::vector<Vector>;

/// A point of either a finite space (an index) or a real box (coordinates).
class Point {
public:
    Point() = default;

    static Point at(std::size_t index) { return Point(Storage{index}); }
    static Point coords(Vector values) { return Point(Storage{std::move(values)}); }

    bool is_index() const noexcept { return std::holds_alternative<std::size_t>(value_); }
    std::size_t index() const;
    const Vector& coords() const;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;

private:
    using Storage = std::variant<std::size_t, Vector>;
    explicit Point(Storage value) : value_(std::move(value)) {}

    Storage value_{std::size_t{0}};
};

enum class Axiom { identity, symmetry, triangle };

std::string_view to_string(Axiom axiom);

/// One failed metric axiom with the indices that witness it. `k` is only
/// meaningful for triangle violations (d(i,k) > d(i,j) + d(j,k)); for identity
/// violations `i == j` means a nonzero diagonal and `i != j` a zero off-diagonal.
struct AxiomViolation {
    Axiom axiom;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;

    std::string describe() const;
    friend bool operator==(const AxiomViolation&, const AxiomViolation&) = default;
};

/// Checks identity of indiscernibles, symmetry and the triangle inequality.
/// The triangle check allows a relative slack of 1e-12 for rounding in
/// matrices produced from floating-point coordinates.
///
/// Throws FormatError if the matrix is not square.
std::vector<AxiomViolation> validate_space(const DistanceMatrix& dist);

/// A FiniteMetricSpace matrix failed validate_space.
class MetricAxiomError : public DomainError {
public:
    explicit MetricAxiomError(std::vector<AxiomViolation> violations);
    const std::vector<AxiomViolation>& violations() const noexcept { return violations_; }

private:
    std::vector<AxiomViolation> violations_;
};

class FiniteMetricSpace {
public:
    /// Throws FormatError (non-square, empty, name count mismatch) or
    /// MetricAxiomError.
    explicit FiniteMetricSpace(DistanceMatrix dist, std::vector<std::string> names = {});

    std::size_t size() const noexcept { return dist_.size(); }
    double distance(std::size_t i, std::size_t j) const;
    const DistanceMatrix& matrix() const noexcept { return dist_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<std::size_t> find(std::string_view name) const;

private:
    DistanceMatrix dist_;
    std::vector<std::string> names_;
};

/// Closed box in R^n with the Euclidean metric.
class RealBoxSpace {
public:
    RealBoxSpace(Vector lower, Vector upper, double point_tolerance = kDefaultPointTolerance);

    std::size_t dimension() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double point_tolerance() const noexcept { return point_tolerance_; }

    /// Membership with `point_tolerance` slack on every face.
    bool contains(std::span<const double> x) const;
    double distance(std::span<const double> x, std::span<const double> y) const;

private:
    Vector lower_;
    Vector upper_;
    double point_tolerance_;
};

/// Value handle over an immutable finite space or real box. Copies share state.
class MetricSpace {
public:
    MetricSpace(FiniteMetricSpace space);
    MetricSpace(RealBoxSpace space);

    bool is_finite() const noexcept;
    const FiniteMetricSpace& finite() const;
    const RealBoxSpace& box() const;

    bool contains(const Point& x) const noexcept;
    /// Throws DomainError unless both points belong to the space.
    double distance(const Point& x, const Point& y) const;
    /// Exact on finite spaces, within the box point tolerance otherwise.
    bool same_point(const Point& x, const Point& y) const;
    double point_tolerance() const noexcept;

    /// Every point of a finite space, in index order. Throws on boxes.
    std::vector<Point> points() const;
    std::string format(const Point& x) const;

private:
    std::shared_ptr<const std::variant<FiniteMetricSpace, RealBoxSpace>> impl_;
};

inline double distance(const MetricSpace& space, const Point& x, const Point& y) {
    return space.distance(x, y);
}

enum class MapFamily { table, affine, rational, constant };

std::string_view to_string(MapFamily family);

/// A self-map of a metric space. Table maps act on finite spaces; the affine,
/// rational (x -> x/(1+x) componentwise) and constant families act on boxes
/// and are checked to map the box into itself at construction time.
///
/// Family maps carry a repetition count so that compose() is exact: the
/// composed map applies the base formula `power()` times.
class SelfMap {
public:
    static SelfMap table(MetricSpace space, std::vector<std::size_t> image);
    static SelfMap affine(MetricSpace space, Matrix linear, Vector offset);
    static SelfMap rational(MetricSpace space);
    static SelfMap constant(MetricSpace space, Point value);

    MapFamily family() const noexcept { return family_; }
    std::size_t power() const noexcept { return power_; }
    const MetricSpace& space() const noexcept { return space_; }
    const std::vector<std::size_t>& image() const noexcept { return image_; }
    const Matrix& linear() const noexcept { return linear_; }
    const Vector& offset() const noexcept { return offset_; }
    const Point& constant_value() const noexcept { return constant_; }

    /// Throws DomainError if `x` is not a point of the space.
    Point apply(const Point& x) const;

private:
    SelfMap(MetricSpace space, MapFamily family) : space_(std::move(space)), family_(family) {}

    Vector apply_once(const Vector& x) const;

    friend SelfMap compose(const SelfMap& map, std::size_t n);

    MetricSpace space_;
    MapFamily family_;
    std::size_t power_ = 1;
    std::vector<std::size_t> image_;
    Matrix linear_;
    Vector offset_;
    Point constant_;
};

inline Point apply(const SelfMap& map, const Point& x) { return map.apply(x); }

/// S^n. Throws DomainError for n == 0.
SelfMap compose(const SelfMap& map, std::size_t n);

/// Deterministic points of a box: the first `count` Halton points (bases
/// 2, 3, 5, ...) scaled into the box.
std::vector<Point> halton_points(const RealBoxSpace& box, std::size_t count);

/// `count` points drawn uniformly from the box with a seeded mt19937_64.
std::vector<Point> uniform_points(const RealBoxSpace& box, std::size_t count, std::uint64_t seed);

/// Tensor grid with `per_axis` equally spaced points per axis (endpoints included).
std::vector<Point> grid_points(const RealBoxSpace& box, std::size_t per_axis);

}  // namespace altfix
