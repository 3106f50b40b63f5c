#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "altfix/altering.hpp"
#include "altfix/spaces.hpp"

namespace altfix {

inline constexpr double kDefaultFixTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxIters = 1'000'000;

/// Contraction constants (a, b, psi) with a > 0, b >= 0, a + b < 1.
struct RateConstants {
    double a;
    double b;
    AlteringFunction psi;

    /// a / (1 - b). Throws DomainError if the constants are out of range.
    double ratio() const;
};

/// (a/(1-b))^n * psi(d01), formed by n successive multiplications so that
/// bound(n + 1) == ratio * bound(n) holds bit for bit.
double a_priori_bound(std::size_t n, const RateConstants& constants, double d01);

/// Smallest n with a_priori_bound(n) <= psi(tau). Returns 0 when d01 == 0
/// or psi(d01) <= psi(tau).
std::size_t iters_to_tolerance(const RateConstants& constants, double d01, double tau);

enum class Verdict { converged, max_iters, cycle_detected };

std::string_view to_string(Verdict verdict);

struct PicardOptions {
    double tau_fix = kDefaultFixTolerance;
    std::size_t max_iters = kDefaultMaxIters;
};

struct IterationTrace {
    std::vector<Point> points;   ///< x_0 ... x_N
    std::vector<double> step_d;  ///< d(x_n, x_{n+1})
    std::vector<double> bounds;  ///< a priori bounds, only with constants
    Verdict verdict = Verdict::max_iters;
    Point fixed_point;        ///< z_0 when converged
    double residual = 0.0;    ///< d(z_0, S z_0) when converged
    std::size_t period = 0;   ///< when a cycle was detected
    /// iters_to_tolerance(constants, step_d[0], tau_fix), only with constants.
    std::optional<std::size_t> predicted_iterations;

    std::size_t iterations() const noexcept { return step_d.size(); }
};

/// Picard iteration x_{n+1} = S x_n from x0.
///
/// Stops at the first n where d(x_n, x_{n+1}) <= tau_fix and the candidate
/// z_0 = x_{n+1} also has d(z_0, S z_0) <= tau_fix; on finite spaces when a
/// point repeats (cycle); or after max_iters steps.
///
/// Throws DomainError for max_iters == 0, tau_fix <= 0, or x0 outside the space.
IterationTrace iterate(const SelfMap& map, const Point& x0, const PicardOptions& options = {},
                       const std::optional<RateConstants>& constants = std::nullopt);

/// Indices and limit estimates exhibiting that a sequence is not Cauchy.
struct CauchyWitness {
    double eps0 = 0.0;
    /// n(k) = k + 1 and m(k) = least index > n(k) with d(x_m, x_n) >= eps0,
    /// for k = 1 ... horizon (entry k-1).
    std::vector<std::size_t> n_index;
    std::vector<std::size_t> m_index;
    /// Values at the largest k.
    double limit_i = 0.0;    ///< d(x_{m-1}, x_{n+1})
    double limit_ii = 0.0;   ///< d(x_m, x_n)
    double limit_iii = 0.0;  ///< d(x_{m-1}, x_n)
    std::optional<double> shifted;  ///< d(x_{m+1}, x_{n+1}), if x_{m+1} exists

    std::size_t horizon() const noexcept { return n_index.size(); }
};

using IndexDistance = std::function<double(std::size_t, std::size_t)>;

/// Throws DomainError for eps0 <= 0 and when length <= horizon + 1.
std::optional<CauchyWitness> find_cauchy_witness(const IndexDistance& dist, std::size_t length, double eps0,
                                                 std::size_t horizon);

std::optional<CauchyWitness> find_cauchy_witness(const MetricSpace& space, std::span<const Point> sequence,
                                                 double eps0, std::size_t horizon);

/// Re-evaluates m(k) > n(k) > k, d(x_m, x_n) >= eps0 and d(x_{m-1}, x_n) < eps0
/// for every k.
bool verify_witness(const CauchyWitness& witness, const IndexDistance& dist);

}  // namespace altfix
