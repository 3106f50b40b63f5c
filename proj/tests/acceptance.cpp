// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "altfix/config.hpp"
#include "altfix/contraction.hpp"
#include "altfix/fixedset.hpp"
#include "altfix/picard.hpp"
#include "altfix/run.hpp"
#include "support.hpp"

using namespace altfix;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

// ---------------------------------------------------------------------------
// Shared certified population for criteria 3 and 4.

struct CertifiedMap {
    std::vector<std::size_t> table;
    MetricSpace space;
    SelfMap map;
    AlteringFunction psi;
    ContractionCertificate cert;
};

std::vector<AlteringFunction> shipped_psis() {
    return {AlteringFunction::identity(), AlteringFunction::power(2.0),
            make_integral_psi(Density::linear(2.0)),
            AlteringFunction::table({0.0, 0.5, 1.0, 2.0}, {0.0, 0.25, 1.0, 3.0})};
}

/// One certified map per seed 0..99. Each seed draws candidates from a
/// contraction-biased generator until one has an exhaustive certificate for
/// the generalized condition; psi kinds rotate with the seed.
std::vector<CertifiedMap> certified_population() {
    const auto psis = shipped_psis();
    std::vector<CertifiedMap> out;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const auto& psi = psis[seed % psis.size()];
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const std::size_t n = 2 + rng() % 11;
            const auto d = oracle::random_euclidean_matrix(rng, n);
            const MetricSpace space{FiniteMetricSpace(d)};
            auto table = oracle::contractive_table(rng, d);
            const auto map = SelfMap::table(space, table);
            auto cert = certify(map, psi, ConditionKind::generalized, all_pairs(space));
            if (cert.feasible) {
                out.push_back({std::move(table), space, map, psi, std::move(cert)});
                break;
            }
        }
    }
    return out;
}

RunConfig finite_config(DistanceMatrix dist, std::vector<std::size_t> table) {
    RunConfig config;
    config.space.type = SpaceConfig::Type::finite;
    config.space.dist = std::move(dist);
    config.space.table = std::move(table);
    return config;
}

// ---------------------------------------------------------------------------

Outcome geometric_rate() {
    Outcome o;
    const auto start = Clock::now();
    const MetricSpace space(RealBoxSpace({0.0}, {4.0}));
    const auto map = SelfMap::affine(space, {{0.5}}, {1.0});
    const auto grid = grid_points(space.box(), 201);
    const auto cert = certify(map, AlteringFunction::identity(), ConditionKind::generalized,
                              pairs_of(grid, "201-point grid"));
    o.require(cert.feasible && cert.a == 0.5 && cert.b == 0.0, "grid certificate is (0.5, 0)");
    const auto trace = iterate(map, Point::coords({0.0}), {1e-8, 1000},
                               RateConstants{cert.a, cert.b, AlteringFunction::identity()});
    for (std::size_t n = 0; n < trace.step_d.size(); ++n)
        o.require(trace.step_d[n] <= 2.0 * std::pow(0.5, static_cast<double>(n)) + 1e-12,
                  "step_d[" + std::to_string(n) + "] within geometric envelope");
    o.require(trace.verdict == Verdict::converged, "converged");
    o.require(trace.iterations() <= 35, "at most 35 iterations");
    o.require(std::abs(trace.fixed_point.coords()[0] - 2.0) <= 1e-8, "|z0 - 2| <= 1e-8");
    const double elapsed = seconds_since(start);
    o.require(elapsed < 1.0, "runtime < 1 s");
    o.detail << "iterations " << trace.iterations() << ", z0 " << format_number(trace.fixed_point.coords()[0])
             << ", " << format_number(elapsed) << " s";
    return o;
}

/// For each of 100 seeds, draws random spaces and maps until the brute-force
/// ratio sup admits a constant below 1 (selection uses the oracle only).
/// Rejected draws must come out infeasible; accepted ones must match.
Outcome oracle_equivalence() {
    Outcome o;
    std::size_t compared = 0;
    std::size_t infeasible = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const std::size_t n = 2 + rng() % 11;
            const auto d = oracle::random_euclidean_matrix(rng, n);
            const auto table = attempt % 2 ? oracle::contractive_table(rng, d) : oracle::random_table(rng, n);
            const MetricSpace space{FiniteMetricSpace(d)};
            const auto cert = certify(SelfMap::table(space, table), AlteringFunction::identity(),
                                      ConditionKind::banach_khan, all_pairs(space));
            const double expected = std::max(oracle::ratio_sup(d, table), kDefaultMargin);
            if (expected > 1.0 - kDefaultMargin) {
                o.require(!cert.feasible, "seed " + std::to_string(seed) + " infeasible when ratio sup >= 1");
                ++infeasible;
                continue;
            }
            ++compared;
            o.require(cert.feasible && cert.b == 0.0, "seed " + std::to_string(seed) + " feasible with b = 0");
            const double diff = std::abs(cert.a - expected);
            worst = std::max(worst, diff);
            o.require(diff <= 1e-12, "seed " + std::to_string(seed) + " matches ratio sup");
            break;
        }
    }
    o.require(compared == 100, "100 spaces compared");
    o.detail << compared << " spaces compared, " << infeasible << " rejected draws infeasible, max |a - oracle| "
             << format_number(worst);
    return o;
}

Outcome unique_fixed_point(const std::vector<CertifiedMap>& population, double build_seconds) {
    Outcome o;
    const auto start = Clock::now();
    o.require(population.size() == 100, "100 certified maps generated");
    std::size_t orbits = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto& c = population[i];
        const auto fixed = fixed_points(c.map);
        o.require(fixed.points.size() == 1, "map " + std::to_string(i) + " has exactly one fixed point");
        if (fixed.points.size() != 1) continue;
        const RateConstants constants{c.cert.a, c.cert.b, c.psi};
        for (const auto& x0 : c.space.points()) {
            const auto trace = iterate(c.map, x0, {}, constants);
            ++orbits;
            o.require(trace.verdict == Verdict::converged && trace.fixed_point == fixed.points[0],
                      "map " + std::to_string(i) + " orbit reaches the fixed point");
        }
    }
    const double elapsed = build_seconds + seconds_since(start);
    o.require(elapsed < 10.0, "runtime < 10 s");
    o.detail << population.size() << " maps, " << orbits << " orbits, " << format_number(elapsed) << " s";
    return o;
}

Outcome property_p(const std::vector<CertifiedMap>& population) {
    Outcome o;
    std::size_t witnesses = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto report = check_property_p(population[i].map, 8);
        witnesses += report.witnesses.size();
        o.require(report.holds(), "map " + std::to_string(i) + " has property P");
        for (const auto& row : report.rows)
            o.require(row.equal && row.fixed == report.fixed_s, "map " + std::to_string(i) + " F(S^n) = F(S)");
    }
    o.require(witnesses == 0, "no periodic witnesses in the certified population");

    auto cycle = finite_config({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {1, 2, 0});
    cycle.property.n_max = 3;
    const auto report = check_property_p(cycle.make_map(), 3);
    std::size_t period_three = 0;
    for (const auto& w : report.witnesses) period_three += w.period == 3;
    o.require(report.witnesses.size() == 3 && period_three == 3, "3-cycle has exactly 3 period-3 witnesses");
    const auto cli = run(cycle, Subcommand::property_p);
    o.require(cli.exit_code == exit_status::property_p_failure, "3-cycle reports property-P failure");
    o.detail << population.size() << " maps hold, " << witnesses << " witnesses; 3-cycle witnesses "
             << report.witnesses.size() << ", exit status " << cli.exit_code;
    return o;
}

Outcome integral_altering() {
    Outcome o;
    const auto psi_one = make_integral_psi(Density::constant(1.0));
    double worst_identity = 0.0;
    for (std::size_t i = 0; i <= 10000; ++i) {
        const double t = 0.01 * static_cast<double>(i);
        worst_identity = std::max(worst_identity, std::abs(psi_one(t) - t));
    }
    o.require(worst_identity <= 1e-9, "constant(1) matches identity on [0,100]");

    const auto psi_square = make_integral_psi(Density::linear(2.0));
    double worst_square = 0.0;
    for (std::size_t i = 1; i <= 1000; ++i) {
        const double t = 0.01 * static_cast<double>(i);
        worst_square = std::max(worst_square, std::abs(psi_square(t) - t * t) / (t * t));
    }
    o.require(worst_square <= 1e-6, "linear(2) matches t^2 on [0,10]");

    // das_gupta verdicts with psi = identity versus the generalized checker
    // with psi_0 = integral of 1, on random pairs of random maps.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_slack = 0.0;
    std::size_t agree = 0;
    const MetricSpace box(RealBoxSpace({0.0}, {4.0}));
    const std::vector<SelfMap> maps = {SelfMap::affine(box, {{0.5}}, {1.0}), SelfMap::affine(box, {{-0.9}}, {3.8}),
                                       SelfMap::rational(box), SelfMap::constant(box, Point::coords({1.5}))};
    for (std::size_t i = 0; i < 1000; ++i) {
        const auto& map = maps[i % maps.size()];
        const Point x = Point::coords({4.0 * unit(rng)});
        const Point y = Point::coords({4.0 * unit(rng)});
        const double a = 0.01 + 0.98 * unit(rng);
        const double b = (0.99 - a) * unit(rng);
        const ContractionCondition dg(ConditionKind::das_gupta, AlteringFunction::identity(), a, b);
        const ContractionCondition gen(ConditionKind::generalized, psi_one, a, b);
        const auto lhs = check_inequality(dg, map, x, y);
        const auto rhs = check_inequality(gen, map, x, y);
        agree += lhs.satisfied == rhs.satisfied;
        worst_slack = std::max(worst_slack, std::abs(lhs.slack - rhs.slack));
    }
    o.require(agree == 1000, "verdicts agree on all 1000 pairs");
    o.require(worst_slack <= 1e-9, "slack difference <= 1e-9");
    o.detail << "identity error " << format_number(worst_identity) << ", t^2 relative error "
             << format_number(worst_square) << ", verdicts agree " << agree << "/1000, max slack difference "
             << format_number(worst_slack);
    return o;
}

Outcome cauchy_witness() {
    Outcome o;
    const auto h = oracle::harmonic_sums(1000);
    const IndexDistance dist = [&h](std::size_t i, std::size_t j) { return std::abs(h[i] - h[j]); };
    const auto w = find_cauchy_witness(dist, h.size(), 0.5, 200);
    o.require(w.has_value(), "witness exists");
    if (!w) return o;
    o.require(verify_witness(*w, dist), "defining inequalities hold on re-evaluation");
    for (std::size_t k = 1; k <= w->horizon(); ++k) {
        const std::size_t n = w->n_index[k - 1];
        const std::size_t m = w->m_index[k - 1];
        o.require(m > n && n > k && dist(m, n) >= 0.5 && dist(m - 1, n) < 0.5,
                  "k = " + std::to_string(k) + " satisfies the defining inequalities");
    }
    const double shifted = w->shifted.value_or(std::nan(""));
    for (double v : {w->limit_i, w->limit_ii, w->limit_iii, shifted})
        o.require(std::abs(v - 0.5) <= 0.05, "limit estimate within 0.05 of 0.5");
    o.detail << "k = " << w->horizon() << ": " << format_number(w->limit_i) << ", " << format_number(w->limit_ii)
             << ", " << format_number(w->limit_iii) << ", shifted " << format_number(shifted);
    return o;
}

Outcome negative_control() {
    Outcome o;
    const auto finite = finite_config({{0, 1}, {1, 0}}, {0, 1});
    const auto finite_report = run(finite, Subcommand::certify);
    o.require(finite_report.exit_code == exit_status::infeasible, "2-point identity exits 3");

    std::mt19937_64 rng(5);
    const auto larger = finite_config(oracle::random_euclidean_matrix(rng, 7), {0, 1, 2, 3, 4, 5, 6});
    const auto larger_report = run(larger, Subcommand::certify);
    o.require(larger_report.exit_code == exit_status::infeasible, "7-point identity exits 3");

    RunConfig box;
    box.space.type = SpaceConfig::Type::box;
    box.space.lower = {0.0, 0.0};
    box.space.upper = {1.0, 1.0};
    box.space.family = MapFamily::affine;
    box.space.linear = {{1.0, 0.0}, {0.0, 1.0}};
    box.space.offset = {0.0, 0.0};
    const auto box_report = run(box, Subcommand::certify);
    o.require(box_report.exit_code == exit_status::infeasible, "box identity exits 3");
    o.detail << "exit statuses " << finite_report.exit_code << ", " << larger_report.exit_code << ", "
             << box_report.exit_code;
    return o;
}

}  // namespace

int main() {
    const auto build_start = Clock::now();
    const auto population = certified_population();
    const double build_seconds = seconds_since(build_start);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"geometric rate of Picard iteration", geometric_rate},
        {"certifier matches brute-force ratio oracle", oracle_equivalence},
        {"certified maps have a unique, globally attracting fixed point",
         [&] { return unique_fixed_point(population, build_seconds); }},
        {"property P for certified maps; 3-cycle control fails", [&] { return property_p(population); }},
        {"integral altering function reproduces identity and t^2", integral_altering},
        {"non-Cauchy witness on harmonic partial sums", cauchy_witness},
        {"identity map is never certified", negative_control},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << "exception: " << e.what();
        }
        failures += !outcome.pass;
        std::printf("%s %zu %s (%s)\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    outcome.detail.str().c_str());
    }
    return failures == 0 ? 0 : 1;
}
