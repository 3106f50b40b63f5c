#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "altfix/altering.hpp"
#include "altfix/contraction.hpp"
#include "altfix/picard.hpp"
#include "altfix/spaces.hpp"

namespace altfix {

inline constexpr std::string_view kConfigSchema = "altfix-config/1";

/// Malformed or out-of-range configuration. `path` is a JSON pointer to the
/// offending field ("" for document-level problems such as syntax errors,
/// whose message carries the line and column).
class ConfigError : public FormatError {
public:
    ConfigError(std::string path, const std::string& message)
        : FormatError(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct SpaceConfig {
    enum class Type { finite, box };
    Type type = Type::finite;

    // finite
    DistanceMatrix dist;
    std::vector<std::string> names;
    std::vector<std::size_t> table;

    // box
    Vector lower;
    Vector upper;
    double point_tolerance = kDefaultPointTolerance;
    MapFamily family = MapFamily::affine;
    Matrix linear;
    Vector offset;
    Vector constant;

    friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;
};

struct PsiConfig {
    AlteringFunction::Kind kind = AlteringFunction::Kind::identity;
    double p = 1.0;
    Density::Family density = Density::Family::constant;
    double k = 1.0;
    double density_p = 1.0;
    double tolerance = 1e-9;
    std::vector<double> times;
    std::vector<double> values;

    friend bool operator==(const PsiConfig&, const PsiConfig&) = default;
};

struct ConstantsConfig {
    double a = 0.0;
    double b = 0.0;
    friend bool operator==(const ConstantsConfig&, const ConstantsConfig&) = default;
};

struct ConditionConfig {
    ConditionKind kind = ConditionKind::generalized;
    double margin = kDefaultMargin;
    std::size_t sample_size = 2000;
    std::uint64_t seed = 0;
    /// Points per axis of a grid whose pairs replace the random sample on boxes; 0 = off.
    std::size_t grid = 0;
    std::optional<ConstantsConfig> constants;

    friend bool operator==(const ConditionConfig&, const ConditionConfig&) = default;
};

struct IterationConfig {
    std::optional<Point> x0;
    double tau_fix = kDefaultFixTolerance;
    std::size_t max_iters = kDefaultMaxIters;
    friend bool operator==(const IterationConfig&, const IterationConfig&) = default;
};

struct PropertyConfig {
    std::size_t n_max = 8;
    std::size_t starts = 64;
    friend bool operator==(const PropertyConfig&, const PropertyConfig&) = default;
};

struct WitnessConfig {
    double eps0 = 0.5;
    std::size_t horizon = 200;
    /// Orbit length when no explicit sequence is given.
    std::size_t length = 1000;
    std::optional<std::vector<Point>> sequence;
    friend bool operator==(const WitnessConfig&, const WitnessConfig&) = default;
};

struct RunConfig {
    SpaceConfig space;
    PsiConfig psi;
    ConditionConfig condition;
    IterationConfig iteration;
    PropertyConfig property;
    WitnessConfig witness;

    MetricSpace make_space() const;
    SelfMap make_map() const;
    AlteringFunction make_psi() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(std::string_view document);
RunConfig config_from_json(const nlohmann::ordered_json& document);

/// Canonical document for `config`; config_from_json(to_json(c)) == c.
nlohmann::ordered_json to_json(const RunConfig& config);

/// 64-bit FNV-1a of the canonical document, as 16 hex digits.
std::string config_digest(const RunConfig& config);

}  // namespace altfix
