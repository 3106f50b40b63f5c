#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// certifier or the iteration code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "altfix/spaces.hpp"

namespace altfix::oracle {

/// n random points in the unit square with their Euclidean distance matrix.
inline DistanceMatrix random_euclidean_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {unit(rng), unit(rng)};
    DistanceMatrix d(n, Vector(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            d[i][j] = d[j][i] = v;
        }
    return d;
}

/// Uniformly random self-map table.
inline std::vector<std::size_t> random_table(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> t(n);
    for (auto& v : t) v = pick(rng);
    return t;
}

/// Table biased toward contractions: a random target z, most points map to z
/// and the rest to z's nearest neighbour.
inline std::vector<std::size_t> contractive_table(std::mt19937_64& rng, const DistanceMatrix& d) {
    const std::size_t n = d.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::bernoulli_distribution to_target(0.7);
    const std::size_t z = pick(rng);
    std::size_t near = z == 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j)
        if (j != z && d[z][j] < d[z][near]) near = j;
    std::vector<std::size_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = (i == z || i == near || to_target(rng)) ? z : near;
    return t;
}

/// max over x != y of d(Sx,Sy) / d(x,y).
inline double ratio_sup(const DistanceMatrix& d, const std::vector<std::size_t>& table) {
    double best = 0.0;
    for (std::size_t x = 0; x < d.size(); ++x)
        for (std::size_t y = 0; y < d.size(); ++y)
            if (x != y) best = std::max(best, d[table[x]][table[y]] / d[x][y]);
    return best;
}

/// Points z with S^n z = z by direct n-fold application.
inline std::vector<std::size_t> brute_fixed(const std::vector<std::size_t>& table, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < table.size(); ++z) {
        std::size_t x = z;
        for (std::size_t k = 0; k < n; ++k) x = table[x];
        if (x == z) out.push_back(z);
    }
    return out;
}

/// Row of a two-variable LP: ca * a + cb * b >= rhs.
struct LpRow {
    double ca;
    double cb;
    double rhs;
};

/// Naive vertex enumeration: every pairwise line intersection that satisfies
/// all rows (relative tolerance), then min a + b, ties to smaller a.
/// Returns {NaN, NaN} when no vertex is feasible.
inline std::array<double, 2> lp_min_sum(std::vector<LpRow> rows) {
    std::array<double, 2> best{std::nan(""), std::nan("")};
    auto ok = [&](double a, double b) {
        for (const auto& r : rows) {
            const double tol = 1e-12 * std::max({std::abs(r.ca) + std::abs(r.cb), std::abs(r.rhs), 1e-300});
            if (r.ca * a + r.cb * b - r.rhs < -tol) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const auto& p = rows[i];
            const auto& q = rows[j];
            const double det = p.ca * q.cb - q.ca * p.cb;
            if (det == 0.0) continue;
            const double a = (p.rhs * q.cb - q.rhs * p.cb) / det;
            const double b = (p.ca * q.rhs - q.ca * p.rhs) / det;
            if (!ok(a, b)) continue;
            if (std::isnan(best[0]) || a + b < best[0] + best[1] - 1e-14 ||
                (std::abs(a + b - best[0] - best[1]) <= 1e-14 && a < best[0]))
                best = {a, b};
        }
    return best;
}

/// The LP of the generalized condition with psi = identity over all ordered
/// pairs of a finite space, boxed by a >= margin, b >= 0, a + b <= 1 - margin.
inline std::vector<LpRow> das_gupta_rows(const DistanceMatrix& d, const std::vector<std::size_t>& s,
                                         double margin) {
    std::vector<LpRow> rows = {{1.0, 0.0, margin}, {0.0, 1.0, 0.0}, {-1.0, -1.0, -(1.0 - margin)}};
    for (std::size_t x = 0; x < d.size(); ++x)
        for (std::size_t y = 0; y < d.size(); ++y) {
            const double m = d[y][s[y]] * (1.0 + d[x][s[x]]) / (1.0 + d[x][y]);
            rows.push_back({d[x][y], m, d[s[x]][s[y]]});
        }
    return rows;
}

/// H_0 = 0, H_n = 1 + 1/2 + ... + 1/n.
inline std::vector<double> harmonic_sums(std::size_t count) {
    std::vector<double> h(count, 0.0);
    for (std::size_t n = 1; n < count; ++n) h[n] = h[n - 1] + 1.0 / static_cast<double>(n);
    return h;
}

}  // namespace altfix::oracle
