#include "altfix/run.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "altfix/fixedset.hpp"
#include "altfix/picard.hpp"

namespace altfix {

using json = nlohmann::ordered_json;

std::string_view to_string(Subcommand sub) {
    switch (sub) {
        case Subcommand::certify: return "certify";
        case Subcommand::solve: return "solve";
        case Subcommand::property_p: return "property-p";
        case Subcommand::witness: return "witness";
    }
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (auto sub : {Subcommand::certify, Subcommand::solve, Subcommand::property_p, Subcommand::witness})
        if (to_string(sub) == name) return sub;
    return std::nullopt;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write(std::ostringstream& out, const json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out << ",\n";
                first = false;
                out << pad << json(key).dump() << ": ";
                write(out, value, depth + 1);
            }
            out << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Short numeric arrays (points, vertices) stay on one line.
            const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (flat) {
                out << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out << ", ";
                    write(out, j[i], depth + 1);
                }
                out << "]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ",\n";
                out << pad;
                write(out, j[i], depth + 1);
            }
            out << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            out << (std::isfinite(v) ? format_number(v) : std::string("null"));
            return;
        }
        default:
            out << j.dump();
            return;
    }
}

json point_json(const Point& p) {
    if (p.is_index()) return p.index();
    return p.coords();
}

json points_json(const std::vector<Point>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back(point_json(p));
    return out;
}

std::string fmt(double v) { return format_number(v); }

std::string points_text(const MetricSpace& space, const std::vector<Point>& pts) {
    std::string out = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? ", " : "") + space.format(pts[i]);
    return out + "}";
}

PairSample make_sample(const RunConfig& config, const MetricSpace& space) {
    if (space.is_finite()) return all_pairs(space);
    if (config.condition.grid > 0) {
        const auto pts = grid_points(space.box(), config.condition.grid);
        return pairs_of(pts, "all ordered pairs of grid points");
    }
    return sample_pairs(space.box(), config.condition.sample_size, config.condition.seed);
}

json slack_json(const PairSlack& row) {
    return json{{"x", point_json(row.pair.first)}, {"y", point_json(row.pair.second)}, {"coef_a", row.coef_a},
                {"coef_b", row.coef_b},          {"lhs", row.lhs},                    {"slack", row.slack}};
}

void run_certify(const RunConfig& config, Report& report, std::ostringstream& human) {
    const auto map = config.make_map();
    const auto& space = map.space();
    const auto psi = config.make_psi();
    const auto sample = make_sample(config, space);
    CertifyOptions options;
    options.margin = config.condition.margin;
    const auto cert = certify(map, psi, config.condition.kind, sample, options);

    json c;
    c["kind"] = to_string(cert.kind);
    c["psi"] = cert.psi_description;
    c["margin"] = cert.margin;
    c["evidence"] = to_string(cert.evidence);
    c["sample"] = {{"pairs", cert.pair_count},
                   {"description", cert.sample_description},
                   {"seed", cert.seed ? json(*cert.seed) : json(nullptr)},
                   {"grid_per_axis", space.is_finite() || config.condition.grid == 0 ? json(nullptr)
                                                                                       : json(config.condition.grid)}};
    c["feasible"] = cert.feasible;
    c["a"] = cert.a;
    c["b"] = cert.b;
    c["regime"] = cert.regime();
    json vertices = json::array();
    for (const auto& v : cert.vertices) vertices.push_back({v[0], v[1]});
    c["vertices"] = std::move(vertices);

    double min_slack = std::numeric_limits<double>::infinity();
    json pairs = json::array();
    for (const auto& row : cert.slacks) {
        min_slack = std::min(min_slack, row.slack);
        pairs.push_back(slack_json(row));
    }
    c["min_slack"] = cert.feasible ? json(min_slack) : json(nullptr);
    c["pairs"] = std::move(pairs);
    json violating = json::array();
    for (const auto& row : cert.violating) violating.push_back(slack_json(row));
    c["reference"] = cert.feasible ? json(nullptr) : json{cert.reference[0], cert.reference[1]};
    c["violating_count"] = cert.violating.size();
    c["violating"] = std::move(violating);
    report.machine["certificate"] = std::move(c);

    human << "condition: " << to_string(cert.kind) << ", psi " << cert.psi_description << ", margin = " << fmt(cert.margin)
          << "\n";
    human << "evidence: " << to_string(cert.evidence) << ", " << cert.pair_count << " pairs [" << cert.sample_description
          << "]";
    if (cert.seed) human << ", seed = " << *cert.seed;
    if (!space.is_finite() && config.condition.grid > 0) human << ", grid per axis = " << config.condition.grid;
    human << "\n";
    if (cert.feasible) {
        human << "feasible: yes\n";
        human << "  a = " << fmt(cert.a) << "\n  b = " << fmt(cert.b) << "\n  regime: " << cert.regime() << "\n";
        human << "  min slack = " << fmt(min_slack) << "\n";
        human << "feasible region vertices (a, b), counterclockwise:\n";
        for (const auto& v : cert.vertices) human << "  (" << fmt(v[0]) << ", " << fmt(v[1]) << ")\n";
    } else {
        human << "feasible: no\n";
        human << "pairs violated at reference point (" << fmt(cert.reference[0]) << ", " << fmt(cert.reference[1])
              << "): " << cert.violating.size() << "\n";
        const std::size_t shown = std::min<std::size_t>(cert.violating.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& row = cert.violating[i];
            human << "  x " << space.format(row.pair.first) << " y " << space.format(row.pair.second)
                  << ": lhs = " << fmt(row.lhs) << " coef_a = " << fmt(row.coef_a) << " coef_b = " << fmt(row.coef_b)
                  << " slack = " << fmt(row.slack) << "\n";
        }
        report.exit_code = exit_status::infeasible;
    }
}

void run_solve(const RunConfig& config, Report& report, std::ostringstream& human) {
    const auto map = config.make_map();
    const auto& space = map.space();
    const auto psi = config.make_psi();

    std::optional<RateConstants> constants;
    std::string source = "none";
    if (config.condition.constants) {
        constants = RateConstants{config.condition.constants->a, config.condition.constants->b, psi};
        source = "config";
    } else {
        CertifyOptions options;
        options.margin = config.condition.margin;
        const auto cert = certify(map, psi, config.condition.kind, make_sample(config, space), options);
        if (cert.feasible) {
            constants = RateConstants{cert.a, cert.b, psi};
            source = std::string("certificate (") + std::string(to_string(cert.evidence)) + ")";
        }
    }

    const Point x0 = config.iteration.x0 ? *config.iteration.x0
                     : space.is_finite()  ? Point::at(0)
                                          : Point::coords(space.box().lower());
    const auto trace = iterate(map, x0, {config.iteration.tau_fix, config.iteration.max_iters}, constants);

    json s;
    s["constants"] = constants ? json{{"a", constants->a}, {"b", constants->b}, {"psi", psi.describe()}, {"source", source}}
                               : json(nullptr);
    s["x0"] = point_json(x0);
    s["tau_fix"] = config.iteration.tau_fix;
    s["max_iters"] = config.iteration.max_iters;
    s["verdict"] = to_string(trace.verdict);
    s["iterations"] = trace.iterations();
    s["fixed_point"] = trace.verdict == Verdict::converged ? point_json(trace.fixed_point) : json(nullptr);
    s["residual"] = trace.verdict == Verdict::converged ? json(trace.residual) : json(nullptr);
    s["period"] = trace.verdict == Verdict::cycle_detected ? json(trace.period) : json(nullptr);
    s["predicted_iterations"] = trace.predicted_iterations ? json(*trace.predicted_iterations) : json(nullptr);
    json rows = json::array();
    for (std::size_t n = 0; n < trace.step_d.size(); ++n) {
        json row{{"n", n}, {"x", point_json(trace.points[n])}, {"step_d", trace.step_d[n]}};
        row["bound"] = trace.bounds.empty() ? json(nullptr) : json(trace.bounds[n]);
        rows.push_back(std::move(row));
    }
    s["rows"] = std::move(rows);
    report.machine["trace"] = std::move(s);

    human << "start x0 = " << space.format(x0) << ", tau_fix = " << fmt(config.iteration.tau_fix) << "\n";
    if (constants)
        human << "constants: a = " << fmt(constants->a) << ", b = " << fmt(constants->b) << " from " << source << "\n";
    else
        human << "constants: none (bound column empty)\n";
    human << "verdict: " << to_string(trace.verdict) << " after " << trace.iterations() << " steps\n";
    if (trace.verdict == Verdict::converged)
        human << "  fixed point " << space.format(trace.fixed_point) << ", residual = " << fmt(trace.residual) << "\n";
    if (trace.verdict == Verdict::cycle_detected) human << "  period " << trace.period << "\n";
    if (trace.predicted_iterations) human << "  a priori step count = " << *trace.predicted_iterations << "\n";
    human << "  n  x_n  step_d  bound\n";
    const std::size_t total = trace.step_d.size();
    for (std::size_t n = 0; n < total; ++n) {
        if (total > 60 && n == 40) human << "  ...\n";
        if (total > 60 && n >= 40 && n < total - 10) continue;
        human << "  " << n << " " << space.format(trace.points[n]) << " " << fmt(trace.step_d[n]);
        if (!trace.bounds.empty()) human << " " << fmt(trace.bounds[n]);
        human << "\n";
    }
    if (trace.verdict != Verdict::converged) report.exit_code = exit_status::not_converged;
}

void run_property(const RunConfig& config, Report& report, std::ostringstream& human) {
    const auto map = config.make_map();
    const auto& space = map.space();
    FixedPointOptions options;
    options.tau_fix = config.iteration.tau_fix;
    options.starts = config.property.starts;
    options.seed = config.condition.seed;
    const auto result = check_property_p(map, config.property.n_max, options);

    json p;
    p["n_max"] = result.n_max;
    p["evidence"] = to_string(result.evidence);
    p["status"] = to_string(result.status);
    p["holds"] = result.holds();
    if (result.status == PropertyStatus::undefined)
        p["note"] = "F(S) is empty; property P presupposes a nonempty fixed point set";
    p["fixed_s"] = points_json(result.fixed_s);
    json rows = json::array();
    for (const auto& row : result.rows) rows.push_back({{"n", row.n}, {"fixed", points_json(row.fixed)}, {"equal", row.equal}});
    p["rows"] = std::move(rows);
    json witnesses = json::array();
    for (const auto& w : result.witnesses) witnesses.push_back({{"point", point_json(w.point)}, {"period", w.period}});
    p["witnesses"] = std::move(witnesses);
    report.machine["property_p"] = std::move(p);

    human << "evidence: " << to_string(result.evidence) << "\n";
    human << "F(S) = " << points_text(space, result.fixed_s) << "\n";
    for (const auto& row : result.rows)
        human << "  n " << row.n << ": F(S^n) = " << points_text(space, row.fixed) << (row.equal ? " equal" : " differs")
              << "\n";
    human << "property P: " << to_string(result.status);
    if (result.status == PropertyStatus::undefined) human << " (F(S) is empty)";
    human << "\n";
    if (!result.witnesses.empty()) {
        human << "periodic witnesses (point, period):\n";
        for (const auto& w : result.witnesses) human << "  " << space.format(w.point) << " " << w.period << "\n";
    }
    if (!result.holds()) report.exit_code = exit_status::property_p_failure;
}

void run_witness(const RunConfig& config, Report& report, std::ostringstream& human) {
    const auto map = config.make_map();
    const auto& space = map.space();
    const auto& wc = config.witness;

    std::vector<Point> sequence;
    std::string source;
    if (wc.sequence) {
        sequence = *wc.sequence;
        source = "config";
    } else {
        Point x = config.iteration.x0 ? *config.iteration.x0
                  : space.is_finite() ? Point::at(0)
                                      : Point::coords(space.box().lower());
        sequence.reserve(wc.length);
        for (std::size_t i = 0; i < wc.length; ++i) {
            sequence.push_back(x);
            x = map.apply(x);
        }
        source = "orbit";
    }
    const auto witness = find_cauchy_witness(space, sequence, wc.eps0, wc.horizon);

    json w;
    w["eps0"] = wc.eps0;
    w["horizon"] = wc.horizon;
    w["sequence_length"] = sequence.size();
    w["source"] = source;
    w["found"] = witness.has_value();
    if (witness) {
        const IndexDistance dist = [&](std::size_t i, std::size_t j) { return space.distance(sequence[i], sequence[j]); };
        w["verified"] = verify_witness(*witness, dist);
        w["limits"] = {{"i", witness->limit_i},
                       {"ii", witness->limit_ii},
                       {"iii", witness->limit_iii},
                       {"shifted", witness->shifted ? json(*witness->shifted) : json(nullptr)}};
        json idx = json::array();
        for (std::size_t k = 0; k < witness->horizon(); ++k)
            idx.push_back({{"k", k + 1}, {"n", witness->n_index[k]}, {"m", witness->m_index[k]}});
        w["indices"] = std::move(idx);
    }
    report.machine["witness"] = w;

    human << "sequence: " << source << ", length " << sequence.size() << ", eps0 = " << fmt(wc.eps0) << ", horizon "
          << wc.horizon << "\n";
    if (!witness) {
        human << "no witness: some k has no index m(k) with d(x_m, x_n(k)) >= eps0\n";
        return;
    }
    const std::size_t k = witness->horizon();
    human << "witness found (verified: " << (w["verified"].get<bool>() ? "yes" : "no") << ")\n";
    human << "  at k = " << k << ": n = " << witness->n_index.back() << ", m = " << witness->m_index.back() << "\n";
    human << "  d(x_m-1, x_n+1) = " << fmt(witness->limit_i) << "\n";
    human << "  d(x_m, x_n) = " << fmt(witness->limit_ii) << "\n";
    human << "  d(x_m-1, x_n) = " << fmt(witness->limit_iii) << "\n";
    if (witness->shifted) human << "  d(x_m+1, x_n+1) = " << fmt(*witness->shifted) << "\n";
}

}  // namespace

std::string dump_report(const json& doc) {
    std::ostringstream out;
    write(out, doc, 0);
    out << "\n";
    return out.str();
}

std::string Report::machine_text() const { return dump_report(machine); }

Report run(const RunConfig& config, Subcommand sub) {
    Report report;
    report.machine["schema"] = kReportSchema;
    report.machine["tool_version"] = kToolVersion;
    report.machine["config_digest"] = config_digest(config);
    report.machine["subcommand"] = to_string(sub);

    std::ostringstream human;
    human << "altfix " << to_string(sub) << " (report " << kReportSchema << ", config fnv1a:" << config_digest(config)
          << ")\n";
    switch (sub) {
        case Subcommand::certify: run_certify(config, report, human); break;
        case Subcommand::solve: run_solve(config, report, human); break;
        case Subcommand::property_p: run_property(config, report, human); break;
        case Subcommand::witness: run_witness(config, report, human); break;
    }
    report.machine["exit_status"] = report.exit_code;
    human << "exit status " << report.exit_code << "\n";
    report.human = human.str();
    return report;
}

}  // namespace altfix
