#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "altfix/altering.hpp"
#include "altfix/spaces.hpp"

namespace altfix {

/// Slack tolerance for inequality verdicts.
inline constexpr double kDefaultNumericTolerance = 1e-12;
inline constexpr double kDefaultMargin = 1e-6;

/// Which contractive inequality is being checked.
///
///  - banach_khan:  psi(d(Sx,Sy)) <= a psi(d(x,y))                      (b = 0)
///  - das_gupta:    d(Sx,Sy) <= a d(x,y) + b m(x,y)                     (psi = id)
///  - generalized:  psi(d(Sx,Sy)) <= a psi(d(x,y)) + b psi(m(x,y))
///  - integral:     the generalized form with psi = integral of a density
enum class ConditionKind { banach_khan, das_gupta, generalized, integral };

std::string_view to_string(ConditionKind kind);
std::optional<ConditionKind> parse_condition_kind(std::string_view name);

/// Throws DomainError when `psi` does not fit `kind` (das_gupta needs the
/// identity, integral needs an integral-type psi).
void require_compatible(ConditionKind kind, const AlteringFunction& psi);

/// A contractive condition with concrete constants.
class ContractionCondition {
public:
    /// Throws DomainError unless a > 0, b >= 0, a + b < 1, banach_khan has
    /// b == 0, and psi fits the kind.
    ContractionCondition(ConditionKind kind, AlteringFunction psi, double a, double b);

    ConditionKind kind() const noexcept { return kind_; }
    const AlteringFunction& psi() const noexcept { return psi_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

private:
    ConditionKind kind_;
    AlteringFunction psi_;
    double a_;
    double b_;
};

/// m(x,y) = d(y,Sy) (1 + d(x,Sx)) / (1 + d(x,y)).
double evaluate_m(const SelfMap& map, const Point& x, const Point& y);

struct InequalityCheck {
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  ///< rhs - lhs
};

InequalityCheck check_inequality(const ContractionCondition& cond, const SelfMap& map, const Point& x,
                                 const Point& y, double tau_num = kDefaultNumericTolerance);

using PointPair = std::pair<Point, Point>;

/// Exhaustive: every ordered pair of a finite space. Anything else is sampled
/// evidence and says nothing about pairs outside the sample.
enum class Evidence { exhaustive, sampled };

std::string_view to_string(Evidence evidence);

struct PairSample {
    std::vector<PointPair> pairs;
    Evidence evidence = Evidence::sampled;
    std::string description;
    std::optional<std::uint64_t> seed;
};

/// All n^2 ordered pairs of a finite space (diagonal included).
PairSample all_pairs(const MetricSpace& finite_space);

/// All ordered pairs of distinct listed points, labeled as sampled evidence.
PairSample pairs_of(const std::vector<Point>& points, std::string description);

/// Pairs on a box: half from a 2*dim Halton sequence, the rest uniform from
/// `seed`.
PairSample sample_pairs(const RealBoxSpace& box, std::size_t count, std::uint64_t seed);

struct CertifyOptions {
    /// Enforces a >= margin and a + b <= 1 - margin. Must lie in (0, 0.5).
    double margin = kDefaultMargin;
    double tau_num = kDefaultNumericTolerance;
};

/// The half-plane one pair contributes: coef_a * a + coef_b * b >= lhs.
struct PairSlack {
    PointPair pair;
    double coef_a = 0.0;  ///< psi(d(x,y))
    double coef_b = 0.0;  ///< psi(m(x,y)); 0 for banach_khan
    double lhs = 0.0;     ///< psi(d(Sx,Sy))
    double slack = 0.0;   ///< at the chosen (or reference) constants
};

using Vertex = std::array<double, 2>;  ///< (a, b)

struct ContractionCertificate {
    ConditionKind kind = ConditionKind::generalized;
    std::string psi_description;
    double margin = kDefaultMargin;
    bool feasible = false;
    /// Chosen constants; NaN when infeasible.
    double a = 0.0;
    double b = 0.0;
    /// One entry per sampled pair, in sample order, evaluated at (a, b).
    std::vector<PairSlack> slacks;
    /// Pairs blocking feasibility, with slacks at the reference point named
    /// in `reference`. Empty when feasible.
    std::vector<PairSlack> violating;
    Vertex reference{0.0, 0.0};
    /// Feasible polygon, counterclockwise from the lowest-leftmost vertex.
    std::vector<Vertex> vertices;
    Evidence evidence = Evidence::sampled;
    std::size_t pair_count = 0;
    std::string sample_description;
    std::optional<std::uint64_t> seed;

    /// "psi_contraction" when b == 0 (only the psi(d(x,y)) term is used),
    /// "rational_type" when b > 0, "none" when infeasible.
    std::string_view regime() const noexcept;
};

/// Intersects the per-pair half-planes with {a >= margin, b >= 0,
/// a + b <= 1 - margin} (and b <= 0 for banach_khan) and picks the vertex
/// minimizing a + b, ties to smaller a. The result does not depend on pair
/// order. Throws DomainError for an empty sample or a margin outside (0, 0.5).
ContractionCertificate certify(const SelfMap& map, const AlteringFunction& psi, ConditionKind kind,
                               const PairSample& sample, const CertifyOptions& options = {});

/// The polygon certify() works on; empty iff infeasible.
std::vector<Vertex> feasible_region_vertices(const SelfMap& map, const AlteringFunction& psi,
                                             ConditionKind kind, const PairSample& sample,
                                             const CertifyOptions& options = {});

/// Half-plane intersection in the (a, b) plane. Exposed for testing.
namespace halfplane {

/// coef_a * a + coef_b * b >= rhs
struct Constraint {
    double coef_a = 0.0;
    double coef_b = 0.0;
    double rhs = 0.0;
    friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

/// Clips the closed polygon bounded by `boundary` (in counterclockwise order,
/// a convex polygon) by every constraint. Constraints are processed in
/// sorted order so the result does not depend on input order.
std::vector<Vertex> intersect(std::vector<Constraint> boundary, std::vector<Constraint> constraints);

}  // namespace halfplane

}  // namespace altfix
