#include "altfix/picard.hpp"

#include <unordered_map>

namespace altfix {

double RateConstants::ratio() const {
    if (!(a > 0.0)) throw DomainError("rate constant a must be positive");
    if (!(b >= 0.0)) throw DomainError("rate constant b must be nonnegative");
    if (!(a + b < 1.0)) throw DomainError("rate constants need a + b < 1");
    return a / (1.0 - b);
}

double a_priori_bound(std::size_t n, const RateConstants& constants, double d01) {
    const double r = constants.ratio();
    double bound = constants.psi(d01);
    for (std::size_t k = 0; k < n; ++k) bound *= r;
    return bound;
}

std::size_t iters_to_tolerance(const RateConstants& constants, double d01, double tau) {
    const double r = constants.ratio();
    if (!(tau > 0.0)) throw DomainError("tolerance must be positive");
    if (!(d01 >= 0.0)) throw DomainError("initial step must be nonnegative");
    const double target = constants.psi(tau);
    double bound = constants.psi(d01);
    std::size_t n = 0;
    while (bound > target) {
        bound *= r;
        ++n;
        if (bound == 0.0) break;
    }
    return n;
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::converged: return "converged";
        case Verdict::max_iters: return "max_iters";
        case Verdict::cycle_detected: return "cycle_detected";
    }
    return "unknown";
}

IterationTrace iterate(const SelfMap& map, const Point& x0, const PicardOptions& options,
                       const std::optional<RateConstants>& constants) {
    if (options.max_iters == 0) throw DomainError("max_iters must be positive");
    if (!(options.tau_fix > 0.0)) throw DomainError("tau_fix must be positive");
    const auto& space = map.space();
    if (!space.contains(x0)) throw DomainError("starting point does not belong to the space");

    double ratio = 0.0;
    if (constants) ratio = constants->ratio();

    IterationTrace trace;
    trace.points.push_back(x0);
    std::unordered_map<std::size_t, std::size_t> visited;
    if (space.is_finite()) visited.emplace(x0.index(), 0);

    for (std::size_t n = 0; n < options.max_iters; ++n) {
        Point next = map.apply(trace.points[n]);
        const double step = space.distance(trace.points[n], next);
        trace.points.push_back(next);
        trace.step_d.push_back(step);
        if (constants) {
            if (n == 0) {
                trace.bounds.push_back(constants->psi(step));
                trace.predicted_iterations = iters_to_tolerance(*constants, step, options.tau_fix);
            } else {
                trace.bounds.push_back(trace.bounds.back() * ratio);
            }
        }

        if (step <= options.tau_fix) {
            const double residual = space.distance(next, map.apply(next));
            if (residual <= options.tau_fix) {
                trace.verdict = Verdict::converged;
                trace.fixed_point = std::move(next);
                trace.residual = residual;
                return trace;
            }
        }
        if (space.is_finite()) {
            auto [it, inserted] = visited.emplace(next.index(), n + 1);
            if (!inserted) {
                trace.verdict = Verdict::cycle_detected;
                trace.period = n + 1 - it->second;
                return trace;
            }
        }
    }
    trace.verdict = Verdict::max_iters;
    return trace;
}

std::optional<CauchyWitness> find_cauchy_witness(const IndexDistance& dist, std::size_t length, double eps0,
                                                 std::size_t horizon) {
    if (!(eps0 > 0.0)) throw DomainError("eps0 must be positive");
    if (horizon == 0) throw DomainError("horizon must be positive");
    if (length <= horizon + 1) throw DomainError("sequence must be longer than horizon + 1");

    CauchyWitness w;
    w.eps0 = eps0;
    for (std::size_t k = 1; k <= horizon; ++k) {
        const std::size_t n = k + 1;
        std::optional<std::size_t> m;
        for (std::size_t j = n + 1; j < length; ++j) {
            if (dist(j, n) >= eps0) {
                m = j;
                break;
            }
        }
        if (!m) return std::nullopt;
        w.n_index.push_back(n);
        w.m_index.push_back(*m);
    }
    const std::size_t n = w.n_index.back();
    const std::size_t m = w.m_index.back();
    w.limit_i = dist(m - 1, n + 1);
    w.limit_ii = dist(m, n);
    w.limit_iii = dist(m - 1, n);
    if (m + 1 < length) w.shifted = dist(m + 1, n + 1);
    return w;
}

std::optional<CauchyWitness> find_cauchy_witness(const MetricSpace& space, std::span<const Point> sequence,
                                                 double eps0, std::size_t horizon) {
    return find_cauchy_witness([&](std::size_t i, std::size_t j) { return space.distance(sequence[i], sequence[j]); },
                               sequence.size(), eps0, horizon);
}

bool verify_witness(const CauchyWitness& witness, const IndexDistance& dist) {
    if (witness.n_index.size() != witness.m_index.size()) return false;
    for (std::size_t i = 0; i < witness.n_index.size(); ++i) {
        const std::size_t k = i + 1;
        const std::size_t n = witness.n_index[i];
        const std::size_t m = witness.m_index[i];
        if (!(m > n && n > k)) return false;
        if (!(dist(m, n) >= witness.eps0)) return false;
        if (!(dist(m - 1, n) < witness.eps0)) return false;
    }
    return true;
}

}  // namespace altfix
