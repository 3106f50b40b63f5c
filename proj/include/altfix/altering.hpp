#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "altfix/errors.hpp"

namespace altfix {

/// Nonnegative density on [0, inf) used to build integral-type altering
/// functions: constant k, linear k*t, or power k*t^p. All parameters must be
/// positive, which keeps the integral over [0, eps] positive for every eps > 0.
class Density {
public:
    enum class Family { constant, linear, power };

    static Density constant(double k);
    static Density linear(double k);
    static Density power(double k, double p);

    Family family() const noexcept { return family_; }
    double scale() const noexcept { return k_; }
    double exponent() const noexcept { return p_; }

    double operator()(double t) const;

private:
    Density(Family family, double k, double p) : family_(family), k_(k), p_(p) {}

    Family family_;
    double k_;
    double p_;
};

std::string_view to_string(Density::Family family);

struct QuadratureSettings {
    /// Target absolute error of each integral evaluation.
    double abs_tolerance = 1e-9;
    /// Panel doubling stops here even if the tolerance is not reached.
    std::size_t max_panels = std::size_t{1} << 20;
};

/// Composite Simpson rule on [lo, hi] with panel doubling until the
/// Richardson estimate |S_2n - S_n| / 15 drops to the tolerance.
template <typename F>
double simpson(F&& f, double lo, double hi, const QuadratureSettings& settings);

/// An altering distance function psi: [0, inf) -> [0, inf).
class AlteringFunction {
public:
    enum class Kind { identity, power, integral, table };

    static AlteringFunction identity();
    /// t^p for p >= 1.
    static AlteringFunction power(double p);
    static AlteringFunction integral(Density density, QuadratureSettings settings = {});
    /// Linear interpolation through (t_i, v_i); clamped to the end samples
    /// outside [t_0, t_last]. Sample times must be strictly increasing and
    /// nonnegative, values nonnegative. Monotonicity is not enforced here,
    /// check_psi_properties reports it.
    static AlteringFunction table(std::vector<double> times, std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    double exponent() const noexcept { return p_; }
    const std::optional<Density>& density() const noexcept { return density_; }
    const QuadratureSettings& quadrature() const noexcept { return quadrature_; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Throws DomainError for t < 0 or NaN.
    double operator()(double t) const;

    std::string describe() const;

private:
    explicit AlteringFunction(Kind kind) : kind_(kind) {}

    Kind kind_;
    double p_ = 1.0;
    std::optional<Density> density_;
    QuadratureSettings quadrature_;
    std::vector<double> times_;
    std::vector<double> values_;
};

std::string_view to_string(AlteringFunction::Kind kind);

inline double evaluate_psi(const AlteringFunction& psi, double t) { return psi(t); }

/// psi_0(t) = integral of the density over [0, t].
inline AlteringFunction make_integral_psi(Density density, QuadratureSettings settings = {}) {
    return AlteringFunction::integral(density, settings);
}

/// Outcome of sampling one altering-function axiom on a grid. Passing only
/// means no violation was found on the grid.
struct PsiCheck {
    bool passed = true;
    std::string message;
    /// First witness: for the zero axiom the offending t; for monotonicity and
    /// jumps the adjacent pair (t_lo, t_hi).
    std::vector<double> witness;
};

struct PsiPropertyReport {
    PsiCheck zero_at_origin;  ///< psi(0) = 0 and psi(t) > 0 on grid points t > 0
    PsiCheck monotone;        ///< non-decreasing along the grid
    PsiCheck continuity;      ///< adjacent jumps within the modulus bound

    bool all_passed() const noexcept {
        return zero_at_origin.passed && monotone.passed && continuity.passed;
    }
};

/// Samples the three altering-function axioms on `grid`. The grid must start
/// at 0 and be strictly increasing (DomainError otherwise).
PsiPropertyReport check_psi_properties(const AlteringFunction& psi, std::span<const double> grid,
                                       double modulus_bound);

/// 0, step, 2*step, ... up to and including `upper` (within rounding).
std::vector<double> uniform_grid(double upper, double step);

// ---------------------------------------------------------------------------

template <typename F>
double simpson(F&& f, double lo, double hi, const QuadratureSettings& settings) {
    if (hi == lo) return 0.0;
    auto rule = [&](std::size_t panels) {
        const double h = (hi - lo) / static_cast<double>(panels);
        double odd = 0.0;
        double even = 0.0;
        for (std::size_t i = 1; i < panels; ++i) {
            const double x = lo + h * static_cast<double>(i);
            (i % 2 ? odd : even) += f(x);
        }
        return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
    };
    std::size_t panels = 2;
    double coarse = rule(panels);
    while (panels < settings.max_panels) {
        panels *= 2;
        const double fine = rule(panels);
        if (std::abs(fine - coarse) / 15.0 <= settings.abs_tolerance) return fine;
        coarse = fine;
    }
    return coarse;
}

}  // namespace altfix
