#include "altfix/config.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>

namespace altfix {

using json = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(join(path, key), "unknown key");
    }
}

const json* find(const json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, std::string_view key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(join(path, key), "missing required field");
    return *v;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError(path, "expected a nonnegative integer");
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    Vector out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], join(path, i)));
    return out;
}

Matrix as_matrix(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
    Matrix out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_vector(j[i], join(path, i)));
    return out;
}

double opt_double(const json& obj, const std::string& path, std::string_view key, double fallback) {
    const json* v = find(obj, key);
    return v ? as_double(*v, join(path, key)) : fallback;
}

std::uint64_t opt_u64(const json& obj, const std::string& path, std::string_view key, std::uint64_t fallback) {
    const json* v = find(obj, key);
    return v ? as_u64(*v, join(path, key)) : fallback;
}

std::size_t finite_index(const json& j, const std::string& path, const SpaceConfig& space) {
    const std::size_t n = space.dist.size();
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        std::vector<std::string> names = space.names;
        if (names.empty())
            for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw ConfigError(path, "unknown point '" + name + "'");
        return static_cast<std::size_t>(it - names.begin());
    }
    const auto index = as_u64(j, path);
    if (index >= n) throw ConfigError(path, "point index out of range");
    return static_cast<std::size_t>(index);
}

Point parse_point(const json& j, const std::string& path, const SpaceConfig& space) {
    if (space.type == SpaceConfig::Type::finite) return Point::at(finite_index(j, path, space));
    auto coords = as_vector(j, path);
    const RealBoxSpace box(space.lower, space.upper, space.point_tolerance);
    if (!box.contains(coords)) throw ConfigError(path, "point lies outside the box");
    return Point::coords(std::move(coords));
}

template <typename F>
auto guarded(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

SpaceConfig parse_space(const json& j, const std::string& path) {
    require_object(j, path);
    SpaceConfig space;
    const auto type = as_string(require(j, path, "type"), join(path, "type"));
    if (type == "finite") {
        allow_keys(j, path, {"type", "dist", "names", "map"});
        space.type = SpaceConfig::Type::finite;
        space.dist = as_matrix(require(j, path, "dist"), join(path, "dist"));
        if (const json* names = find(j, "names")) {
            if (!names->is_array()) throw ConfigError(join(path, "names"), "expected an array of strings");
            for (std::size_t i = 0; i < names->size(); ++i)
                space.names.push_back(as_string((*names)[i], join(join(path, "names"), i)));
        }
        guarded(join(path, "dist"), [&] { return FiniteMetricSpace(space.dist, space.names); });
        const auto& map = require(j, path, "map");
        const auto map_path = join(path, "map");
        if (!map.is_array()) throw ConfigError(map_path, "expected a table with one image per point");
        if (map.size() != space.dist.size())
            throw ConfigError(map_path, "table has " + std::to_string(map.size()) + " entries for " +
                                            std::to_string(space.dist.size()) + " points");
        for (std::size_t i = 0; i < map.size(); ++i) space.table.push_back(finite_index(map[i], join(map_path, i), space));
        return space;
    }
    if (type != "box") throw ConfigError(join(path, "type"), "unknown space type '" + type + "'");

    allow_keys(j, path, {"type", "lower", "upper", "point_tolerance", "map"});
    space.type = SpaceConfig::Type::box;
    space.lower = as_vector(require(j, path, "lower"), join(path, "lower"));
    space.upper = as_vector(require(j, path, "upper"), join(path, "upper"));
    space.point_tolerance = opt_double(j, path, "point_tolerance", kDefaultPointTolerance);
    guarded(path, [&] { return RealBoxSpace(space.lower, space.upper, space.point_tolerance); });
    const std::size_t dim = space.lower.size();

    const auto map_path = join(path, "map");
    const auto& map = require_object(require(j, path, "map"), map_path);
    const auto family = as_string(require(map, map_path, "family"), join(map_path, "family"));
    if (family == "affine") {
        allow_keys(map, map_path, {"family", "linear", "offset"});
        space.family = MapFamily::affine;
        const auto& linear = require(map, map_path, "linear");
        if (linear.is_number()) {
            // Scalar shorthand for a multiple of the identity.
            const double s = linear.get<double>();
            space.linear.assign(dim, Vector(dim, 0.0));
            for (std::size_t i = 0; i < dim; ++i) space.linear[i][i] = s;
        } else {
            space.linear = as_matrix(linear, join(map_path, "linear"));
        }
        space.offset = as_vector(require(map, map_path, "offset"), join(map_path, "offset"));
    } else if (family == "rational") {
        allow_keys(map, map_path, {"family"});
        space.family = MapFamily::rational;
    } else if (family == "constant") {
        allow_keys(map, map_path, {"family", "value"});
        space.family = MapFamily::constant;
        space.constant = as_vector(require(map, map_path, "value"), join(map_path, "value"));
    } else {
        throw ConfigError(join(map_path, "family"), "unknown map family '" + family + "'");
    }
    return space;
}

PsiConfig parse_psi(const json& j, const std::string& path) {
    require_object(j, path);
    PsiConfig psi;
    const auto kind = as_string(require(j, path, "kind"), join(path, "kind"));
    if (kind == "identity") {
        allow_keys(j, path, {"kind"});
        psi.kind = AlteringFunction::Kind::identity;
    } else if (kind == "power") {
        allow_keys(j, path, {"kind", "p"});
        psi.kind = AlteringFunction::Kind::power;
        psi.p = as_double(require(j, path, "p"), join(path, "p"));
    } else if (kind == "integral") {
        allow_keys(j, path, {"kind", "density", "tolerance"});
        psi.kind = AlteringFunction::Kind::integral;
        psi.tolerance = opt_double(j, path, "tolerance", psi.tolerance);
        const auto dpath = join(path, "density");
        const auto& density = require_object(require(j, path, "density"), dpath);
        const auto family = as_string(require(density, dpath, "family"), join(dpath, "family"));
        if (family == "constant") {
            allow_keys(density, dpath, {"family", "k"});
            psi.density = Density::Family::constant;
        } else if (family == "linear") {
            allow_keys(density, dpath, {"family", "k"});
            psi.density = Density::Family::linear;
        } else if (family == "power") {
            allow_keys(density, dpath, {"family", "k", "p"});
            psi.density = Density::Family::power;
            psi.density_p = as_double(require(density, dpath, "p"), join(dpath, "p"));
        } else {
            throw ConfigError(join(dpath, "family"), "unknown density family '" + family + "'");
        }
        psi.k = as_double(require(density, dpath, "k"), join(dpath, "k"));
    } else if (kind == "table") {
        allow_keys(j, path, {"kind", "times", "values"});
        psi.kind = AlteringFunction::Kind::table;
        psi.times = as_vector(require(j, path, "times"), join(path, "times"));
        psi.values = as_vector(require(j, path, "values"), join(path, "values"));
    } else {
        throw ConfigError(join(path, "kind"), "unknown altering function kind '" + kind + "'");
    }
    return psi;
}

ConditionConfig parse_condition(const json& j, const std::string& path) {
    require_object(j, path);
    allow_keys(j, path, {"kind", "margin", "sample_size", "seed", "grid", "constants"});
    ConditionConfig cond;
    if (const json* kind = find(j, "kind")) {
        const auto name = as_string(*kind, join(path, "kind"));
        const auto parsed = parse_condition_kind(name);
        if (!parsed) throw ConfigError(join(path, "kind"), "unknown condition kind '" + name + "'");
        cond.kind = *parsed;
    }
    cond.margin = opt_double(j, path, "margin", cond.margin);
    if (!(cond.margin > 0.0 && cond.margin < 0.5)) throw ConfigError(join(path, "margin"), "must lie in (0, 0.5)");
    cond.sample_size = opt_u64(j, path, "sample_size", cond.sample_size);
    if (cond.sample_size == 0) throw ConfigError(join(path, "sample_size"), "must be positive");
    cond.seed = opt_u64(j, path, "seed", cond.seed);
    cond.grid = opt_u64(j, path, "grid", cond.grid);
    if (const json* c = find(j, "constants")) {
        const auto cpath = join(path, "constants");
        require_object(*c, cpath);
        allow_keys(*c, cpath, {"a", "b"});
        ConstantsConfig k;
        k.a = as_double(require(*c, cpath, "a"), join(cpath, "a"));
        k.b = opt_double(*c, cpath, "b", 0.0);
        if (!(k.a > 0.0)) throw ConfigError(join(cpath, "a"), "must be positive");
        if (!(k.b >= 0.0)) throw ConfigError(join(cpath, "b"), "must be nonnegative");
        if (!(k.a + k.b < 1.0)) throw ConfigError(cpath, "a + b must be < 1");
        if (cond.kind == ConditionKind::banach_khan && k.b != 0.0)
            throw ConfigError(join(cpath, "b"), "banach_khan condition has b = 0");
        cond.constants = k;
    }
    return cond;
}

}  // namespace

MetricSpace RunConfig::make_space() const {
    if (space.type == SpaceConfig::Type::finite) return MetricSpace(FiniteMetricSpace(space.dist, space.names));
    return MetricSpace(RealBoxSpace(space.lower, space.upper, space.point_tolerance));
}

SelfMap RunConfig::make_map() const {
    auto ms = make_space();
    if (space.type == SpaceConfig::Type::finite) return SelfMap::table(std::move(ms), space.table);
    switch (space.family) {
        case MapFamily::affine: return SelfMap::affine(std::move(ms), space.linear, space.offset);
        case MapFamily::rational: return SelfMap::rational(std::move(ms));
        case MapFamily::constant: return SelfMap::constant(std::move(ms), Point::coords(space.constant));
        case MapFamily::table: break;
    }
    throw DomainError("table maps need a finite space");
}

AlteringFunction RunConfig::make_psi() const {
    switch (psi.kind) {
        case AlteringFunction::Kind::identity: return AlteringFunction::identity();
        case AlteringFunction::Kind::power: return AlteringFunction::power(psi.p);
        case AlteringFunction::Kind::integral: {
            const auto density = psi.density == Density::Family::constant ? Density::constant(psi.k)
                                 : psi.density == Density::Family::linear ? Density::linear(psi.k)
                                                                          : Density::power(psi.k, psi.density_p);
            QuadratureSettings settings;
            settings.abs_tolerance = psi.tolerance;
            return AlteringFunction::integral(density, settings);
        }
        case AlteringFunction::Kind::table: return AlteringFunction::table(psi.times, psi.values);
    }
    return AlteringFunction::identity();
}

RunConfig parse_config(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError("", e.what());
    }
    return config_from_json(j);
}

RunConfig config_from_json(const json& j) {
    const std::string root;
    require_object(j, root);
    allow_keys(j, root, {"schema", "space", "psi", "condition", "iteration", "property_p", "witness"});
    if (const json* schema = find(j, "schema")) {
        if (as_string(*schema, "/schema") != kConfigSchema)
            throw ConfigError("/schema", "unsupported schema, expected '" + std::string(kConfigSchema) + "'");
    }

    RunConfig config;
    config.space = parse_space(require(j, root, "space"), "/space");
    guarded("/space/map", [&] { return config.make_map(); });

    if (const json* psi = find(j, "psi")) config.psi = parse_psi(*psi, "/psi");
    guarded("/psi", [&] { return config.make_psi(); });

    if (const json* cond = find(j, "condition")) config.condition = parse_condition(*cond, "/condition");
    guarded("/condition/kind", [&] {
        require_compatible(config.condition.kind, config.make_psi());
        return 0;
    });

    if (const json* it = find(j, "iteration")) {
        const std::string path = "/iteration";
        require_object(*it, path);
        allow_keys(*it, path, {"x0", "tau_fix", "max_iters"});
        if (const json* x0 = find(*it, "x0")) config.iteration.x0 = parse_point(*x0, join(path, "x0"), config.space);
        config.iteration.tau_fix = opt_double(*it, path, "tau_fix", config.iteration.tau_fix);
        if (!(config.iteration.tau_fix > 0.0)) throw ConfigError(join(path, "tau_fix"), "must be positive");
        config.iteration.max_iters = opt_u64(*it, path, "max_iters", config.iteration.max_iters);
        if (config.iteration.max_iters == 0) throw ConfigError(join(path, "max_iters"), "must be positive");
    }

    if (const json* pp = find(j, "property_p")) {
        const std::string path = "/property_p";
        require_object(*pp, path);
        allow_keys(*pp, path, {"n_max", "starts"});
        config.property.n_max = opt_u64(*pp, path, "n_max", config.property.n_max);
        if (config.property.n_max < 2) throw ConfigError(join(path, "n_max"), "must be at least 2");
        config.property.starts = opt_u64(*pp, path, "starts", config.property.starts);
        if (config.property.starts == 0) throw ConfigError(join(path, "starts"), "must be positive");
    }

    if (const json* w = find(j, "witness")) {
        const std::string path = "/witness";
        require_object(*w, path);
        allow_keys(*w, path, {"eps0", "horizon", "length", "sequence"});
        auto& wc = config.witness;
        wc.eps0 = opt_double(*w, path, "eps0", wc.eps0);
        if (!(wc.eps0 > 0.0)) throw ConfigError(join(path, "eps0"), "must be positive");
        wc.horizon = opt_u64(*w, path, "horizon", wc.horizon);
        if (wc.horizon == 0) throw ConfigError(join(path, "horizon"), "must be positive");
        wc.length = opt_u64(*w, path, "length", wc.length);
        if (const json* seq = find(*w, "sequence")) {
            const auto spath = join(path, "sequence");
            if (!seq->is_array()) throw ConfigError(spath, "expected an array of points");
            std::vector<Point> points;
            for (std::size_t i = 0; i < seq->size(); ++i) points.push_back(parse_point((*seq)[i], join(spath, i), config.space));
            wc.sequence = std::move(points);
        }
        const std::size_t length = wc.sequence ? wc.sequence->size() : wc.length;
        if (length <= wc.horizon + 1) throw ConfigError(path, "sequence length must exceed horizon + 1");
    }
    return config;
}

namespace {

json point_json(const Point& p) {
    if (p.is_index()) return p.index();
    return p.coords();
}

}  // namespace

json to_json(const RunConfig& config) {
    json doc;
    doc["schema"] = kConfigSchema;

    json space;
    const auto& s = config.space;
    if (s.type == SpaceConfig::Type::finite) {
        space["type"] = "finite";
        space["dist"] = s.dist;
        if (!s.names.empty()) space["names"] = s.names;
        space["map"] = s.table;
    } else {
        space["type"] = "box";
        space["lower"] = s.lower;
        space["upper"] = s.upper;
        space["point_tolerance"] = s.point_tolerance;
        json map;
        map["family"] = to_string(s.family);
        if (s.family == MapFamily::affine) {
            map["linear"] = s.linear;
            map["offset"] = s.offset;
        } else if (s.family == MapFamily::constant) {
            map["value"] = s.constant;
        }
        space["map"] = std::move(map);
    }
    doc["space"] = std::move(space);

    json psi;
    const auto& p = config.psi;
    psi["kind"] = to_string(p.kind);
    switch (p.kind) {
        case AlteringFunction::Kind::identity: break;
        case AlteringFunction::Kind::power: psi["p"] = p.p; break;
        case AlteringFunction::Kind::integral: {
            json density;
            density["family"] = to_string(p.density);
            density["k"] = p.k;
            if (p.density == Density::Family::power) density["p"] = p.density_p;
            psi["density"] = std::move(density);
            psi["tolerance"] = p.tolerance;
            break;
        }
        case AlteringFunction::Kind::table:
            psi["times"] = p.times;
            psi["values"] = p.values;
            break;
    }
    doc["psi"] = std::move(psi);

    const auto& c = config.condition;
    json cond;
    cond["kind"] = to_string(c.kind);
    cond["margin"] = c.margin;
    cond["sample_size"] = c.sample_size;
    cond["seed"] = c.seed;
    cond["grid"] = c.grid;
    if (c.constants) cond["constants"] = {{"a", c.constants->a}, {"b", c.constants->b}};
    doc["condition"] = std::move(cond);

    json it;
    if (config.iteration.x0) it["x0"] = point_json(*config.iteration.x0);
    it["tau_fix"] = config.iteration.tau_fix;
    it["max_iters"] = config.iteration.max_iters;
    doc["iteration"] = std::move(it);

    doc["property_p"] = {{"n_max", config.property.n_max}, {"starts", config.property.starts}};

    json w;
    w["eps0"] = config.witness.eps0;
    w["horizon"] = config.witness.horizon;
    w["length"] = config.witness.length;
    if (config.witness.sequence) {
        json seq = json::array();
        for (const auto& pt : *config.witness.sequence) seq.push_back(point_json(pt));
        w["sequence"] = std::move(seq);
    }
    doc["witness"] = std::move(w);
    return doc;
}

std::string config_digest(const RunConfig& config) {
    const auto text = to_json(config).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace altfix
