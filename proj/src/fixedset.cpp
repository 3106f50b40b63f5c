#include "altfix/fixedset.hpp"

#include <algorithm>
#include <cmath>

namespace altfix {

std::string_view to_string(PropertyStatus status) {
    switch (status) {
        case PropertyStatus::holds: return "holds";
        case PropertyStatus::fails: return "fails";
        case PropertyStatus::undefined: return "undefined";
    }
    return "unknown";
}

FixedPointSet fixed_points(const SelfMap& map, const FixedPointOptions& options) {
    const auto& space = map.space();
    FixedPointSet out;
    if (space.is_finite()) {
        const auto& image = map.image();
        for (std::size_t i = 0; i < image.size(); ++i)
            if (image[i] == i) out.points.push_back(Point::at(i));
        out.evidence = Evidence::exhaustive;
        return out;
    }

    const auto& box = space.box();
    auto starts = halton_points(box, options.starts / 2);
    auto random = uniform_points(box, options.starts - options.starts / 2, options.seed);
    starts.insert(starts.end(), random.begin(), random.end());

    const PicardOptions picard{options.tau_fix, options.max_iters};
    for (const auto& x0 : starts) {
        const auto trace = iterate(map, x0, picard);
        if (trace.verdict != Verdict::converged) continue;
        const auto& z = trace.fixed_point;
        if (space.distance(z, map.apply(z)) > options.tau_fix) continue;
        const bool known = std::any_of(out.points.begin(), out.points.end(),
                                       [&](const Point& p) { return space.same_point(p, z); });
        if (!known) out.points.push_back(z);
    }
    std::sort(out.points.begin(), out.points.end());
    out.evidence = Evidence::sampled;
    return out;
}

namespace {

bool member(const MetricSpace& space, const std::vector<Point>& set, const Point& x) {
    return std::any_of(set.begin(), set.end(), [&](const Point& p) { return space.same_point(p, x); });
}

bool same_set(const MetricSpace& space, const std::vector<Point>& l, const std::vector<Point>& r) {
    return std::all_of(l.begin(), l.end(), [&](const Point& x) { return member(space, r, x); }) &&
           std::all_of(r.begin(), r.end(), [&](const Point& x) { return member(space, l, x); });
}

}  // namespace

PropertyPReport check_property_p(const SelfMap& map, std::size_t n_max, const FixedPointOptions& options) {
    if (n_max < 2) throw DomainError("property P check needs n_max >= 2");
    const auto& space = map.space();

    PropertyPReport report;
    report.n_max = n_max;
    const auto base = fixed_points(map, options);
    report.fixed_s = base.points;
    report.evidence = base.evidence;

    bool all_equal = true;
    for (std::size_t n = 2; n <= n_max; ++n) {
        auto powered = fixed_points(compose(map, n), options);
        const bool equal = same_set(space, report.fixed_s, powered.points);
        all_equal = all_equal && equal;
        for (const auto& z : powered.points) {
            if (member(space, report.fixed_s, z)) continue;
            const bool listed = std::any_of(report.witnesses.begin(), report.witnesses.end(),
                                            [&](const PeriodicWitness& w) { return space.same_point(w.point, z); });
            if (!listed) report.witnesses.push_back({z, n});
        }
        report.rows.push_back({n, std::move(powered.points), equal});
    }

    if (report.fixed_s.empty())
        report.status = PropertyStatus::undefined;
    else
        report.status = all_equal ? PropertyStatus::holds : PropertyStatus::fails;
    return report;
}

ChainReport refute_periodic_chain(const SelfMap& map, const Point& z, std::size_t n, const RateConstants& constants,
                                  double tau_num) {
    if (n == 0) throw DomainError("period must be at least 1");
    const auto& space = map.space();
    if (!space.same_point(compose(map, n).apply(z), z)) throw DomainError("point is not fixed by S^n");

    ChainReport report;
    report.n = n;
    report.ratio = constants.ratio();

    Point current = z;
    for (std::size_t k = 0; k <= n; ++k) {
        Point next = map.apply(current);
        report.psi_steps.push_back(constants.psi(space.distance(current, next)));
        current = std::move(next);
    }
    for (std::size_t k = 0; k < n; ++k)
        report.step_holds.push_back(report.psi_steps[k + 1] <= report.ratio * report.psi_steps[k] + tau_num);

    double factor = 1.0;
    for (std::size_t k = 0; k < n; ++k) factor *= report.ratio;
    report.lhs = report.psi_steps.front();
    report.rhs = factor * report.lhs;
    report.holds = report.lhs <= report.rhs + tau_num;
    report.implied_bound = tau_num / (1.0 - factor);
    return report;
}

}  // namespace altfix
