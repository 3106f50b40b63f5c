#include "altfix/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace altfix {

std::string_view to_string(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::banach_khan: return "banach_khan";
        case ConditionKind::das_gupta: return "das_gupta";
        case ConditionKind::generalized: return "generalized";
        case ConditionKind::integral: return "integral";
    }
    return "unknown";
}

std::optional<ConditionKind> parse_condition_kind(std::string_view name) {
    for (auto kind : {ConditionKind::banach_khan, ConditionKind::das_gupta, ConditionKind::generalized,
                      ConditionKind::integral}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

void require_compatible(ConditionKind kind, const AlteringFunction& psi) {
    if (kind == ConditionKind::das_gupta && psi.kind() != AlteringFunction::Kind::identity)
        throw DomainError("das_gupta condition uses the identity altering function");
    if (kind == ConditionKind::integral && psi.kind() != AlteringFunction::Kind::integral)
        throw DomainError("integral condition needs an integral-type altering function");
}

ContractionCondition::ContractionCondition(ConditionKind kind, AlteringFunction psi, double a, double b)
    : kind_(kind), psi_(std::move(psi)), a_(a), b_(b) {
    if (!(a_ > 0.0)) throw DomainError("contraction constant a must be positive");
    if (!(b_ >= 0.0)) throw DomainError("contraction constant b must be nonnegative");
    if (!(a_ + b_ < 1.0)) throw DomainError("contraction constants need a + b < 1");
    if (kind_ == ConditionKind::banach_khan && b_ != 0.0)
        throw DomainError("banach_khan condition has b = 0");
    require_compatible(kind_, psi_);
}

double evaluate_m(const SelfMap& map, const Point& x, const Point& y) {
    const auto& space = map.space();
    const double dy = space.distance(y, map.apply(y));
    if (dy == 0.0) return 0.0;
    const double dx = space.distance(x, map.apply(x));
    return dy * (1.0 + dx) / (1.0 + space.distance(x, y));
}

InequalityCheck check_inequality(const ContractionCondition& cond, const SelfMap& map, const Point& x,
                                 const Point& y, double tau_num) {
    const auto& space = map.space();
    const auto& psi = cond.psi();
    InequalityCheck out;
    out.lhs = psi(space.distance(map.apply(x), map.apply(y)));
    out.rhs = cond.a() * psi(space.distance(x, y));
    if (cond.kind() != ConditionKind::banach_khan) out.rhs += cond.b() * psi(evaluate_m(map, x, y));
    out.slack = out.rhs - out.lhs;
    out.satisfied = out.slack >= -tau_num;
    return out;
}

std::string_view to_string(Evidence evidence) {
    return evidence == Evidence::exhaustive ? "exhaustive" : "sampled";
}

PairSample all_pairs(const MetricSpace& finite_space) {
    const std::size_t n = finite_space.finite().size();
    PairSample sample;
    sample.pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sample.pairs.emplace_back(Point::at(i), Point::at(j));
    sample.evidence = Evidence::exhaustive;
    sample.description = "all ordered pairs";
    return sample;
}

PairSample pairs_of(const std::vector<Point>& points, std::string description) {
    PairSample sample;
    sample.pairs.reserve(points.size() * (points.size() - (points.empty() ? 0 : 1)));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            if (i != j) sample.pairs.emplace_back(points[i], points[j]);
    sample.evidence = Evidence::sampled;
    sample.description = std::move(description);
    return sample;
}

PairSample sample_pairs(const RealBoxSpace& box, std::size_t count, std::uint64_t seed) {
    const std::size_t dim = box.dimension();
    Vector lower2(box.lower());
    lower2.insert(lower2.end(), box.lower().begin(), box.lower().end());
    Vector upper2(box.upper());
    upper2.insert(upper2.end(), box.upper().begin(), box.upper().end());
    const RealBoxSpace product(lower2, upper2, box.point_tolerance());

    const std::size_t halton = count / 2;
    PairSample sample;
    sample.pairs.reserve(count);
    auto split = [&](const Point& p) {
        const auto& c = p.coords();
        sample.pairs.emplace_back(Point::coords(Vector(c.begin(), c.begin() + static_cast<long>(dim))),
                                  Point::coords(Vector(c.begin() + static_cast<long>(dim), c.end())));
    };
    // Skip index 0 of the Halton sequence, which is the lower corner twice.
    auto low = halton_points(product, halton + 1);
    for (std::size_t i = 1; i < low.size(); ++i) split(low[i]);
    for (const auto& p : uniform_points(product, count - halton, seed)) split(p);

    sample.evidence = Evidence::sampled;
    sample.description = "Halton pairs plus seeded uniform pairs";
    sample.seed = seed;
    return sample;
}

std::string_view ContractionCertificate::regime() const noexcept {
    if (!feasible) return "none";
    return b == 0.0 ? "psi_contraction" : "rational_type";
}

namespace halfplane {

namespace {

double value(const Constraint& c, const Vertex& v) { return c.coef_a * v[0] + c.coef_b * v[1] - c.rhs; }

double tolerance(const Constraint& c) {
    return 1e-14 * std::max({std::abs(c.coef_a) + std::abs(c.coef_b), std::abs(c.rhs),
                             std::numeric_limits<double>::min()});
}

// Point where `cut` crosses the edge from p to q that lies on `edge`.
Vertex crossing(const Constraint& edge, const Vertex& p, const Vertex& q, const Constraint& cut) {
    const double det = edge.coef_a * cut.coef_b - cut.coef_a * edge.coef_b;
    if (std::abs(det) > 1e-300) {
        const double a = (edge.rhs * cut.coef_b - cut.rhs * edge.coef_b) / det;
        const double b = (edge.coef_a * cut.rhs - cut.coef_a * edge.rhs) / det;
        if (std::isfinite(a) && std::isfinite(b)) return {a + 0.0, b + 0.0};
    }
    const double fp = value(cut, p);
    const double fq = value(cut, q);
    const double t = fp == fq ? 0.0 : fp / (fp - fq);
    return {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
}

Vertex corner(const Constraint& c1, const Constraint& c2) {
    const double det = c1.coef_a * c2.coef_b - c2.coef_a * c1.coef_b;
    return {(c1.rhs * c2.coef_b - c2.rhs * c1.coef_b) / det + 0.0,
            (c1.coef_a * c2.rhs - c2.coef_a * c1.rhs) / det + 0.0};
}

struct Polygon {
    std::vector<Vertex> vertices;
    std::vector<Constraint> edges;  // edges[i] runs from vertices[i] to vertices[i+1]

    void clip(const Constraint& cut) {
        const std::size_t k = vertices.size();
        if (k == 0) return;
        const double eps = tolerance(cut);
        std::vector<char> inside(k);
        std::size_t count = 0;
        for (std::size_t i = 0; i < k; ++i) {
            inside[i] = value(cut, vertices[i]) >= -eps;
            count += inside[i];
        }
        if (count == k) return;
        if (count == 0) {
            vertices.clear();
            edges.clear();
            return;
        }
        std::size_t s = 0;
        while (!(inside[s] && !inside[(s + k - 1) % k])) ++s;
        std::size_t t = s;
        while (inside[(t + 1) % k] && (t + 1) % k != s) t = (t + 1) % k;

        Polygon out;
        for (std::size_t i = s;; i = (i + 1) % k) {
            out.vertices.push_back(vertices[i]);
            out.edges.push_back(edges[i]);
            if (i == t) break;
        }
        const std::size_t before = (s + k - 1) % k;
        const std::size_t after = (t + 1) % k;
        out.vertices.push_back(crossing(edges[t], vertices[t], vertices[after], cut));
        out.edges.push_back(cut);
        out.vertices.push_back(crossing(edges[before], vertices[before], vertices[s], cut));
        out.edges.push_back(edges[before]);
        *this = std::move(out);
    }
};

}  // namespace

std::vector<Vertex> intersect(std::vector<Constraint> boundary, std::vector<Constraint> constraints) {
    Polygon poly;
    const std::size_t k = boundary.size();
    for (std::size_t i = 0; i < k; ++i) {
        poly.vertices.push_back(corner(boundary[(i + k - 1) % k], boundary[i]));
        poly.edges.push_back(boundary[i]);
    }
    std::sort(constraints.begin(), constraints.end());
    constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
    for (const auto& c : constraints) {
        poly.clip(c);
        if (poly.vertices.empty()) return {};
    }

    std::vector<Vertex> unique;
    for (const auto& v : poly.vertices) {
        const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Vertex& u) {
            return std::abs(u[0] - v[0]) <= 1e-13 && std::abs(u[1] - v[1]) <= 1e-13;
        });
        if (!seen) unique.push_back(v);
    }
    if (unique.size() < 3) {
        std::sort(unique.begin(), unique.end(),
                  [](const Vertex& l, const Vertex& r) { return std::tie(l[1], l[0]) < std::tie(r[1], r[0]); });
        return unique;
    }
    Vertex centroid{0.0, 0.0};
    for (const auto& v : unique) {
        centroid[0] += v[0] / static_cast<double>(unique.size());
        centroid[1] += v[1] / static_cast<double>(unique.size());
    }
    const auto start = *std::min_element(unique.begin(), unique.end(), [](const Vertex& l, const Vertex& r) {
        return std::tie(l[1], l[0]) < std::tie(r[1], r[0]);
    });
    const double start_angle = std::atan2(start[1] - centroid[1], start[0] - centroid[0]);
    auto angle = [&](const Vertex& v) {
        double t = std::atan2(v[1] - centroid[1], v[0] - centroid[0]) - start_angle;
        if (t < 0.0) t += 2.0 * M_PI;
        return v == start ? 0.0 : t;
    };
    std::sort(unique.begin(), unique.end(), [&](const Vertex& l, const Vertex& r) { return angle(l) < angle(r); });
    return unique;
}

}  // namespace halfplane

namespace {

struct Setup {
    std::vector<PairSlack> rows;
    std::vector<halfplane::Constraint> boundary;
    std::vector<halfplane::Constraint> constraints;
    std::vector<Vertex> box_corners;
};

Setup build(const SelfMap& map, const AlteringFunction& psi, ConditionKind kind, const PairSample& sample,
            const CertifyOptions& options) {
    if (sample.pairs.empty()) throw DomainError("certification needs a nonempty pair sample");
    if (!(options.margin > 0.0 && options.margin < 0.5)) throw DomainError("margin must lie in (0, 0.5)");
    require_compatible(kind, psi);

    const auto& space = map.space();
    const double m = options.margin;
    Setup setup;
    setup.boundary = {{0.0, 1.0, 0.0}, {-1.0, -1.0, -(1.0 - m)}, {1.0, 0.0, m}};
    setup.box_corners = {{m, 0.0}, {1.0 - m, 0.0}};
    if (kind == ConditionKind::banach_khan) {
        setup.constraints.push_back({0.0, -1.0, 0.0});
    } else {
        setup.box_corners.push_back({m, 1.0 - 2.0 * m});
    }

    setup.rows.reserve(sample.pairs.size());
    for (const auto& [x, y] : sample.pairs) {
        PairSlack row;
        row.pair = {x, y};
        row.coef_a = psi(space.distance(x, y));
        row.coef_b = kind == ConditionKind::banach_khan ? 0.0 : psi(evaluate_m(map, x, y));
        row.lhs = psi(space.distance(map.apply(x), map.apply(y)));
        // lhs == 0 is implied by a, b >= 0.
        if (row.lhs > 0.0) setup.constraints.push_back({row.coef_a, row.coef_b, row.lhs});
        setup.rows.push_back(std::move(row));
    }
    return setup;
}

}  // namespace

std::vector<Vertex> feasible_region_vertices(const SelfMap& map, const AlteringFunction& psi, ConditionKind kind,
                                             const PairSample& sample, const CertifyOptions& options) {
    auto setup = build(map, psi, kind, sample, options);
    return halfplane::intersect(std::move(setup.boundary), std::move(setup.constraints));
}

ContractionCertificate certify(const SelfMap& map, const AlteringFunction& psi, ConditionKind kind,
                               const PairSample& sample, const CertifyOptions& options) {
    auto setup = build(map, psi, kind, sample, options);

    ContractionCertificate cert;
    cert.kind = kind;
    cert.psi_description = psi.describe();
    cert.margin = options.margin;
    cert.evidence = sample.evidence;
    cert.pair_count = sample.pairs.size();
    cert.sample_description = sample.description;
    cert.seed = sample.seed;
    cert.vertices = halfplane::intersect(setup.boundary, setup.constraints);

    auto slack_at = [](PairSlack row, const Vertex& v) {
        row.slack = v[0] * row.coef_a + v[1] * row.coef_b - row.lhs;
        return row;
    };

    if (!cert.vertices.empty()) {
        Vertex best = cert.vertices.front();
        for (const auto& v : cert.vertices) {
            const double sum = v[0] + v[1];
            const double best_sum = best[0] + best[1];
            if (sum < best_sum - 1e-14 || (std::abs(sum - best_sum) <= 1e-14 && v < best)) best = v;
        }
        cert.a = best[0];
        cert.b = best[1];
        cert.slacks.reserve(setup.rows.size());
        bool ok = true;
        for (const auto& row : setup.rows) {
            cert.slacks.push_back(slack_at(row, best));
            ok = ok && cert.slacks.back().slack >= -options.tau_num;
        }
        cert.feasible = ok;
        if (ok) return cert;
        cert.slacks.clear();
        cert.vertices.clear();
    }

    // Infeasible: report the pairs violated at the box corner with the
    // fewest violations.
    cert.feasible = false;
    cert.a = std::numeric_limits<double>::quiet_NaN();
    cert.b = std::numeric_limits<double>::quiet_NaN();
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (const auto& c : setup.box_corners) {
        std::vector<PairSlack> violated;
        for (const auto& row : setup.rows) {
            auto r = slack_at(row, c);
            if (r.slack < -options.tau_num) violated.push_back(std::move(r));
        }
        if (violated.size() < fewest) {
            fewest = violated.size();
            cert.violating = std::move(violated);
            cert.reference = c;
        }
    }
    return cert;
}

}  // namespace altfix
