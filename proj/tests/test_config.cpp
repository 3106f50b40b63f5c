#include <gtest/gtest.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "altfix/config.hpp"
#include "altfix/run.hpp"

using namespace altfix;

namespace {

std::string read_config(const std::string& name) {
    std::ifstream in(std::string(ALTFIX_CONFIG_DIR) + "/" + name);
    EXPECT_TRUE(in.good()) << name;
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::vector<std::string> kShippedConfigs = {
    "half_grid.json",           "half_plus_one.json",  "three_cycle.json",      "identity_two_points.json",
    "minimal_das_gupta.json",   "integral_square.json", "harmonic_witness.json",
};

std::string config_error_path(std::string_view doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

std::string config_error_message(std::string_view doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "<no error>";
}

/// Every decimal number token in `text`, as parsed doubles. A sign directly
/// after an identifier character (as in "x_m-1") is an operator, not a sign.
std::multiset<double> numbers_in(const std::string& text) {
    static const std::regex number(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
    std::multiset<double> out;
    for (std::sregex_iterator it(text.begin(), text.end(), number), end; it != end; ++it) {
        std::string token = it->str();
        const auto pos = static_cast<std::size_t>(it->position());
        if ((token[0] == '-' || token[0] == '+') && pos > 0 &&
            (std::isalnum(static_cast<unsigned char>(text[pos - 1])) || text[pos - 1] == '_'))
            token.erase(0, 1);
        out.insert(std::strtod(token.c_str(), nullptr));
    }
    return out;
}

constexpr std::string_view kMinimal = R"({
  "space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [1, 1]},
  "psi": {"kind": "identity"},
  "condition": {"kind": "das_gupta"}
})";

}  // namespace

TEST(ParseConfig, MinimalDocument) {
    const auto config = parse_config(kMinimal);
    EXPECT_EQ(config.space.type, SpaceConfig::Type::finite);
    EXPECT_EQ(config.space.table, (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(config.psi.kind, AlteringFunction::Kind::identity);
    EXPECT_EQ(config.condition.kind, ConditionKind::das_gupta);
    EXPECT_EQ(config.condition.margin, kDefaultMargin);
    EXPECT_EQ(config.property.n_max, 8u);
}

TEST(ParseConfig, AsymmetricMatrixNamesAxiomAndIndices) {
    const std::string doc = R"({"space": {"type": "finite", "dist": [[0, 1], [2, 0]], "map": [0, 0]}})";
    EXPECT_EQ(config_error_path(doc), "/space/dist");
    const auto message = config_error_message(doc);
    EXPECT_NE(message.find("symmetry"), std::string::npos) << message;
    EXPECT_NE(message.find("(0,1)"), std::string::npos) << message;
}

TEST(ParseConfig, ConstantsOutOfRange) {
    const std::string doc = R"({
      "space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [1, 1]},
      "condition": {"constants": {"a": 0.7, "b": 0.3}}
    })";
    EXPECT_EQ(config_error_path(doc), "/condition/constants");
    EXPECT_NE(config_error_message(doc).find("a + b"), std::string::npos);
}

TEST(ParseConfig, FieldAddressedErrors) {
    EXPECT_EQ(config_error_path(R"({"space": {"type": "finite", "dist": [[0]], "map": [0]}, "extra": 1})"), "/extra");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "box", "lower": [0], "upper": [1],
                                              "map": {"family": "spiral"}}})"),
              "/space/map/family");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [0, 2]}})"),
              "/space/map/1");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [0, 0]},
                                   "psi": {"kind": "power", "p": 0.5}})"),
              "/psi");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [0, 0]},
                                   "condition": {"kind": "das_gupta"}, "psi": {"kind": "power", "p": 2}})"),
              "/condition/kind");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "box", "lower": [0], "upper": [1],
                                              "map": {"family": "affine", "linear": 0.5, "offset": [0.8]}}})"),
              "/space/map");
    EXPECT_EQ(config_error_path(R"({"space": {"type": "finite", "dist": [[0, 1], [1, 0]], "map": [0, 0]},
                                   "iteration": {"max_iters": 0}})"),
              "/iteration/max_iters");
    EXPECT_EQ(config_error_path(R"({"schema": "other/2", "space": {"type": "finite", "dist": [[0]], "map": [0]}})"),
              "/schema");
}

TEST(ParseConfig, SyntaxErrorCarriesLineAndColumn) {
    const auto message = config_error_message("{\n  \"space\": [1,\n}");
    EXPECT_NE(message.find("line 3"), std::string::npos) << message;
    EXPECT_NE(message.find("column"), std::string::npos) << message;
}

TEST(ParseConfig, NamedPoints) {
    const auto config = parse_config(read_config("three_cycle.json"));
    EXPECT_EQ(config.space.table, (std::vector<std::size_t>{1, 2, 0}));
    EXPECT_EQ(config.iteration.x0, Point::at(0));
}

TEST(ParseConfig, RoundTripsShippedConfigs) {
    for (const auto& name : kShippedConfigs) {
        const auto config = parse_config(read_config(name));
        const auto canonical = to_json(config);
        EXPECT_EQ(config_from_json(canonical), config) << name;
        const auto again = parse_config(canonical.dump());
        EXPECT_EQ(again, config) << name;
        EXPECT_EQ(to_json(again).dump(), canonical.dump()) << name;
        EXPECT_EQ(config_digest(again), config_digest(config)) << name;
    }
}

TEST(ParseConfig, DigestTracksContent) {
    auto config = parse_config(kMinimal);
    const auto digest = config_digest(config);
    EXPECT_EQ(digest.size(), 16u);
    config.condition.seed = 1;
    EXPECT_NE(config_digest(config), digest);
}

TEST(Run, SubcommandNames) {
    for (auto sub : {Subcommand::certify, Subcommand::solve, Subcommand::property_p, Subcommand::witness})
        EXPECT_EQ(parse_subcommand(to_string(sub)), sub);
    EXPECT_EQ(to_string(Subcommand::property_p), "property-p");
}

TEST(Run, CertifyHalfGrid) {
    const auto report = run(parse_config(read_config("half_grid.json")), Subcommand::certify);
    EXPECT_EQ(report.exit_code, exit_status::ok);
    const auto& cert = report.machine["certificate"];
    EXPECT_TRUE(cert["feasible"].get<bool>());
    EXPECT_EQ(cert["a"].get<double>(), 0.5);
    EXPECT_EQ(cert["b"].get<double>(), 0.0);
    EXPECT_EQ(cert["regime"], "psi_contraction");
    EXPECT_EQ(cert["evidence"], "sampled");
    EXPECT_EQ(report.machine["schema"], kReportSchema);
    EXPECT_EQ(report.machine["tool_version"], kToolVersion);
}

TEST(Run, SolveHalfPlusOne) {
    const auto report = run(parse_config(read_config("half_plus_one.json")), Subcommand::solve);
    EXPECT_EQ(report.exit_code, exit_status::ok);
    const auto& trace = report.machine["trace"];
    EXPECT_EQ(trace["verdict"], "converged");
    EXPECT_NEAR(trace["fixed_point"][0].get<double>(), 2.0, 1e-8);
    const auto& rows = trace["rows"];
    ASSERT_GT(rows.size(), 2u);
    for (const auto& row : rows) {
        ASSERT_TRUE(row.contains("bound"));
        EXPECT_LE(row["step_d"].get<double>(), row["bound"].get<double>() + 1e-12);
    }
}

TEST(Run, PropertyPThreeCycle) {
    const auto report = run(parse_config(read_config("three_cycle.json")), Subcommand::property_p);
    EXPECT_EQ(report.exit_code, exit_status::property_p_failure);
    const auto& pp = report.machine["property_p"];
    EXPECT_EQ(pp["status"], "undefined");
    EXPECT_EQ(pp["witnesses"].size(), 3u);
    EXPECT_NE(report.human.find("periodic witnesses"), std::string::npos);
}

TEST(Run, IdentityIsInfeasible) {
    const auto report = run(parse_config(read_config("identity_two_points.json")), Subcommand::certify);
    EXPECT_EQ(report.exit_code, exit_status::infeasible);
    EXPECT_EQ(report.machine["exit_status"], exit_status::infeasible);
    const auto written = nlohmann::json::parse(report.machine_text());
    EXPECT_TRUE(written["certificate"]["a"].is_null());
    EXPECT_TRUE(written["certificate"]["b"].is_null());
}

TEST(Run, ReportsAreByteIdentical) {
    for (const auto& name : kShippedConfigs) {
        const auto doc = read_config(name);
        for (auto sub : {Subcommand::certify, Subcommand::solve, Subcommand::property_p, Subcommand::witness}) {
            const auto first = run(parse_config(doc), sub);
            const auto second = run(parse_config(doc), sub);
            EXPECT_EQ(first.machine_text(), second.machine_text()) << name << " " << to_string(sub);
            EXPECT_EQ(first.human, second.human) << name << " " << to_string(sub);
        }
    }
}

TEST(Run, HumanNumbersAppearInMachineReport) {
    for (const auto& name : kShippedConfigs) {
        const auto config = parse_config(read_config(name));
        for (auto sub : {Subcommand::certify, Subcommand::solve, Subcommand::property_p, Subcommand::witness}) {
            const auto report = run(config, sub);
            const auto machine = numbers_in(report.machine_text());
            for (double v : numbers_in(report.human))
                EXPECT_TRUE(machine.count(v) > 0) << name << " " << to_string(sub) << ": " << v;
        }
    }
}

TEST(Report, SeventeenSignificantDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(0.5), "0.5");
    nlohmann::ordered_json doc;
    doc["x"] = 0.1;
    doc["nan"] = std::nan("");
    doc["n"] = 3;
    const auto text = dump_report(doc);
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(text.find("null"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(text)["x"].get<double>(), 0.1);
}
