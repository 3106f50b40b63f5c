#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "altfix/contraction.hpp"
#include "altfix/picard.hpp"
#include "altfix/spaces.hpp"

namespace altfix {

/// Settings for the multi-start search used on boxes. Finite spaces are
/// scanned exactly and ignore them.
struct FixedPointOptions {
    double tau_fix = kDefaultFixTolerance;
    std::size_t max_iters = 100'000;
    std::size_t starts = 64;  ///< half Halton, half uniform from `seed`
    std::uint64_t seed = 0;
};

struct FixedPointSet {
    std::vector<Point> points;  ///< sorted
    Evidence evidence = Evidence::exhaustive;
};

/// F(S). On finite spaces exactly {x : Sx = x}; on boxes the deduplicated
/// limits of converged multi-start orbits (sampled evidence).
FixedPointSet fixed_points(const SelfMap& map, const FixedPointOptions& options = {});

struct PeriodicWitness {
    Point point;
    std::size_t period;  ///< smallest n in 2..n_max with S^n z = z
};

struct PowerRow {
    std::size_t n;
    std::vector<Point> fixed;  ///< F(S^n)
    bool equal;                ///< F(S^n) == F(S)
};

enum class PropertyStatus { holds, fails, undefined };

std::string_view to_string(PropertyStatus status);

struct PropertyPReport {
    std::size_t n_max = 2;
    std::vector<Point> fixed_s;
    std::vector<PowerRow> rows;  ///< n = 2 ... n_max
    /// Points of F(S^n) \ F(S), each listed once at its smallest n.
    std::vector<PeriodicWitness> witnesses;
    Evidence evidence = Evidence::exhaustive;
    /// undefined when F(S) is empty: the property presupposes fixed points.
    PropertyStatus status = PropertyStatus::undefined;

    bool holds() const noexcept { return status == PropertyStatus::holds; }
};

/// Throws DomainError for n_max < 2.
PropertyPReport check_property_p(const SelfMap& map, std::size_t n_max, const FixedPointOptions& options = {});

/// Numerical form of the chain psi(d(z,Sz)) <= (a/(1-b))^n psi(d(z,Sz)) for
/// a point with S^n z = z.
struct ChainReport {
    std::size_t n = 0;
    double ratio = 0.0;               ///< a / (1 - b)
    std::vector<double> psi_steps;    ///< psi(d(S^k z, S^{k+1} z)), k = 0..n
    std::vector<bool> step_holds;     ///< psi_steps[k+1] <= ratio * psi_steps[k] + tau_num
    double lhs = 0.0;                 ///< psi(d(z, Sz))
    double rhs = 0.0;                 ///< ratio^n * psi(d(z, Sz))
    bool holds = false;               ///< lhs <= rhs + tau_num
    /// When the chain holds, psi(d(z,Sz)) <= tau_num / (1 - ratio^n).
    double implied_bound = 0.0;
};

/// Throws DomainError unless S^n z = z (within the point tolerance) and n >= 1.
ChainReport refute_periodic_chain(const SelfMap& map, const Point& z, std::size_t n, const RateConstants& constants,
                                  double tau_num = kDefaultNumericTolerance);

}  // namespace altfix
