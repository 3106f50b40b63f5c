#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "altfix/config.hpp"

namespace altfix {

inline constexpr std::string_view kReportSchema = "altfix-report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Subcommand { certify, solve, property_p, witness };

std::string_view to_string(Subcommand sub);
std::optional<Subcommand> parse_subcommand(std::string_view name);

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int config_error = 2;
inline constexpr int infeasible = 3;
inline constexpr int not_converged = 4;
inline constexpr int property_p_failure = 5;
}  // namespace exit_status

struct Report {
    nlohmann::ordered_json machine;
    std::string human;
    int exit_code = exit_status::ok;

    /// The machine rendering as written to disk.
    std::string machine_text() const;
};

/// Runs one analysis. Deterministic: all randomness derives from
/// config.condition.seed.
Report run(const RunConfig& config, Subcommand sub);

/// "%.17g", with NaN and infinities spelled out.
std::string format_number(double value);

/// Serializes a report with two-space indentation and every floating-point
/// value printed with 17 significant digits. NaN becomes null.
std::string dump_report(const nlohmann::ordered_json& doc);

}  // namespace altfix
