#include "altfix/altering.hpp"

#include <algorithm>
#include <sstream>

namespace altfix {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string("density ") + what + " must be positive and finite");
}

}  // namespace

Density Density::constant(double k) {
    require_positive(k, "scale");
    return Density(Family::constant, k, 0.0);
}

Density Density::linear(double k) {
    require_positive(k, "scale");
    return Density(Family::linear, k, 1.0);
}

Density Density::power(double k, double p) {
    require_positive(k, "scale");
    require_positive(p, "exponent");
    return Density(Family::power, k, p);
}

double Density::operator()(double t) const {
    switch (family_) {
        case Family::constant: return k_;
        case Family::linear: return k_ * t;
        case Family::power: return k_ * std::pow(t, p_);
    }
    return 0.0;
}

std::string_view to_string(Density::Family family) {
    switch (family) {
        case Density::Family::constant: return "constant";
        case Density::Family::linear: return "linear";
        case Density::Family::power: return "power";
    }
    return "unknown";
}

std::string_view to_string(AlteringFunction::Kind kind) {
    switch (kind) {
        case AlteringFunction::Kind::identity: return "identity";
        case AlteringFunction::Kind::power: return "power";
        case AlteringFunction::Kind::integral: return "integral";
        case AlteringFunction::Kind::table: return "table";
    }
    return "unknown";
}

AlteringFunction AlteringFunction::identity() { return AlteringFunction(Kind::identity); }

AlteringFunction AlteringFunction::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("power altering function needs p >= 1");
    AlteringFunction psi(Kind::power);
    psi.p_ = p;
    return psi;
}

AlteringFunction AlteringFunction::integral(Density density, QuadratureSettings settings) {
    if (!(settings.abs_tolerance > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (settings.max_panels < 4) throw DomainError("quadrature needs at least 4 panels");
    AlteringFunction psi(Kind::integral);
    psi.density_ = density;
    psi.quadrature_ = settings;
    return psi;
}

AlteringFunction AlteringFunction::table(std::vector<double> times, std::vector<double> values) {
    if (times.empty() || times.size() != values.size())
        throw FormatError("table altering function needs matching, nonempty sample lists");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
            throw DomainError("table sample times must be finite and nonnegative");
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw DomainError("table sample values must be finite and nonnegative");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw FormatError("table sample times must be strictly increasing");
    }
    AlteringFunction psi(Kind::table);
    psi.times_ = std::move(times);
    psi.values_ = std::move(values);
    return psi;
}

double AlteringFunction::operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("altering functions are defined on [0, inf)");
    switch (kind_) {
        case Kind::identity:
            return t;
        case Kind::power:
            return std::pow(t, p_);
        case Kind::integral:
            if (t == 0.0) return 0.0;
            return simpson(*density_, 0.0, t, quadrature_);
        case Kind::table: {
            if (t <= times_.front()) return values_.front();
            if (t >= times_.back()) return values_.back();
            const auto hi = static_cast<std::size_t>(
                std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
            return values_[lo] + w * (values_[hi] - values_[lo]);
        }
    }
    return t;
}

std::string AlteringFunction::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
        case Kind::identity: out << "identity"; break;
        case Kind::power: out << "power(p=" << p_ << ")"; break;
        case Kind::integral:
            out << "integral(" << to_string(density_->family()) << ", k=" << density_->scale();
            if (density_->family() == Density::Family::power) out << ", p=" << density_->exponent();
            out << ")";
            break;
        case Kind::table: out << "table(" << times_.size() << " samples)"; break;
    }
    return out.str();
}

PsiPropertyReport check_psi_properties(const AlteringFunction& psi, std::span<const double> grid,
                                       double modulus_bound) {
    if (grid.empty()) throw DomainError("property grid is empty");
    if (grid.front() != 0.0) throw DomainError("property grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("property grid must be strictly increasing");
    if (!(modulus_bound >= 0.0)) throw DomainError("modulus bound must be nonnegative");

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = psi(grid[i]);

    PsiPropertyReport report;
    std::ostringstream msg;
    msg.precision(17);

    if (values[0] != 0.0) {
        report.zero_at_origin = {false, "psi(0) != 0", {0.0}};
    } else {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(values[i] > 0.0)) {
                msg << "psi vanishes at t = " << grid[i] << " > 0";
                report.zero_at_origin = {false, msg.str(), {grid[i]}};
                break;
            }
        }
    }
    if (report.zero_at_origin.passed) report.zero_at_origin.message = "no violation found on grid";

    // Non-decreasing on every pair of the grid is equivalent to non-decreasing
    // on adjacent pairs, so the first adjacent decrease is the witness.
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (values[i] < values[i - 1]) {
            msg.str("");
            msg << "psi decreases between t = " << grid[i - 1] << " and t = " << grid[i];
            report.monotone = {false, msg.str(), {grid[i - 1], grid[i]}};
            break;
        }
    }
    if (report.monotone.passed) report.monotone.message = "no violation found on grid";

    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(values[i] - values[i - 1]) > modulus_bound) {
            msg.str("");
            msg << "jump " << std::abs(values[i] - values[i - 1]) << " exceeds modulus bound between t = "
                << grid[i - 1] << " and t = " << grid[i];
            report.continuity = {false, msg.str(), {grid[i - 1], grid[i]}};
            break;
        }
    }
    if (report.continuity.passed) report.continuity.message = "no violation found on grid";
    return report;
}

std::vector<double> uniform_grid(double upper, double step) {
    if (!(step > 0.0) || !(upper >= 0.0)) throw DomainError("uniform grid needs step > 0 and upper >= 0");
    const auto count = static_cast<std::size_t>(std::floor(upper / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = step * static_cast<double>(i);
    return grid;
}

}  // namespace altfix
