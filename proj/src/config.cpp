#include "rulebench/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rulebench/errors.hpp"

namespace rulebench {

using nlohmann::json;

std::string_view to_string(Category c) {
    switch (c) {
    case Category::Chain: return "CHAIN";
    case Category::RDG: return "RDG";
    case Category::DRDG: return "DRDG";
    case Category::Mixed: return "MIXED";
    }
    return "?";
}

Category parse_category(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (upper == "CHAIN") return Category::Chain;
    if (upper == "RDG") return Category::RDG;
    if (upper == "DRDG") return Category::DRDG;
    if (upper == "MIXED") return Category::Mixed;
    throw ConfigError("category", "unknown category '" + std::string(name) + "' (expected chain, rdg, drdg or mixed)");
}

std::optional<SizeBounds> size_class_bounds(std::string_view name) {
    if (name == "XS") return SizeBounds{50, 100};
    if (name == "S") return SizeBounds{101, 1000};
    if (name == "M") return SizeBounds{1001, 10000};
    if (name == "L") return SizeBounds{10001, 100000};
    if (name == "XL") return SizeBounds{100001, 500000};
    return std::nullopt;
}

SizeBounds GeneratorConfig::size_bounds() const {
    SizeBounds b{};
    if (auto named = size_class_bounds(size_class)) b = *named;
    if (facts_min) b.min = *facts_min;
    if (facts_max) b.max = *facts_max;
    return b;
}

namespace {

void require(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

void require_positive(std::size_t v, const char* key) { require(v > 0, key, "must be a positive integer"); }

void require_probability(double v, const char* key) {
    require(v >= 0.0 && v <= 1.0, key, "must be in [0,1], got " + std::to_string(v));
}

} // namespace

void GeneratorConfig::validate() const {
    require_positive(num_predicates, "num_predicates");
    require_positive(num_constants, "num_constants");
    require_positive(arity_min, "arity_min");
    require_positive(arity_max, "arity_max");
    require(arity_min <= arity_max, "arity_min", "must not exceed arity_max");
    require_positive(num_rules, "num_rules");
    require_positive(max_rule_length, "max_rule_length");
    require_positive(components_min, "components_min");
    require_positive(components_max, "components_max");
    require(components_min <= components_max, "components_min", "must not exceed components_max");
    require_positive(max_depth, "max_depth");
    require_probability(prob_head, "prob_head");
    require_probability(prob_existing, "prob_existing");
    require_probability(prob_constant, "prob_constant");
    require_probability(prob_recursive, "prob_recursive");
    require_positive(max_retries, "max_retries");
    require_probability(n_ow, "n_ow");
    require_probability(n_noise_minus, "n_noise_minus");
    require(n_noise_plus >= 0.0 && n_noise_plus < 1.0, "n_noise_plus",
            "must be in [0,1), got " + std::to_string(n_noise_plus));
    require_positive(n_dg, "n_dg");
    require_positive(n_skip, "n_skip");
    require_positive(max_passes, "max_passes");
    if (!facts_min || !facts_max)
        require(size_class_bounds(size_class).has_value(), "size_class",
                "unknown size class '" + size_class + "'; use XS, S, M, L, XL or set facts_min/facts_max");
    SizeBounds b = size_bounds();
    require(b.min > 0, "facts_min", "must be a positive integer");
    require(b.min <= b.max, "facts_min", "must not exceed facts_max");
}

namespace {

template <class T>
T get_as(const json& value, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
            if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0))
                throw ConfigError(key, "must be a non-negative integer");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!value.is_number()) throw ConfigError(key, "must be a number");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!value.is_boolean()) throw ConfigError(key, "must be true or false");
        } else {
            if (!value.is_string()) throw ConfigError(key, "must be a string");
        }
        return value.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

} // namespace

GeneratorConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
    GeneratorConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "num_predicates") c.num_predicates = get_as<std::size_t>(value, key);
        else if (key == "num_constants") c.num_constants = get_as<std::size_t>(value, key);
        else if (key == "arity_min") c.arity_min = get_as<std::size_t>(value, key);
        else if (key == "arity_max") c.arity_max = get_as<std::size_t>(value, key);
        else if (key == "num_rules") c.num_rules = get_as<std::size_t>(value, key);
        else if (key == "max_rule_length") c.max_rule_length = get_as<std::size_t>(value, key);
        else if (key == "category") c.category = parse_category(get_as<std::string>(value, key));
        else if (key == "components_min") c.components_min = get_as<std::size_t>(value, key);
        else if (key == "components_max") c.components_max = get_as<std::size_t>(value, key);
        else if (key == "max_depth") c.max_depth = get_as<std::size_t>(value, key);
        else if (key == "same_target") c.same_target = get_as<bool>(value, key);
        else if (key == "prob_head") c.prob_head = get_as<double>(value, key);
        else if (key == "prob_existing") c.prob_existing = get_as<double>(value, key);
        else if (key == "prob_constant") c.prob_constant = get_as<double>(value, key);
        else if (key == "prob_recursive") c.prob_recursive = get_as<double>(value, key);
        else if (key == "max_retries") c.max_retries = get_as<std::size_t>(value, key);
        else if (key == "size_class") c.size_class = get_as<std::string>(value, key);
        else if (key == "facts_min") c.facts_min = value.is_null() ? std::nullopt : std::optional(get_as<std::size_t>(value, key));
        else if (key == "facts_max") c.facts_max = value.is_null() ? std::nullopt : std::optional(get_as<std::size_t>(value, key));
        else if (key == "n_ow") c.n_ow = get_as<double>(value, key);
        else if (key == "n_noise_plus") c.n_noise_plus = get_as<double>(value, key);
        else if (key == "n_noise_minus") c.n_noise_minus = get_as<double>(value, key);
        else if (key == "split_target") c.split_target = get_as<bool>(value, key);
        else if (key == "n_dg") c.n_dg = get_as<std::size_t>(value, key);
        else if (key == "n_skip") c.n_skip = get_as<std::size_t>(value, key);
        else if (key == "max_passes") c.max_passes = get_as<std::size_t>(value, key);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(value, key);
        else throw ConfigError(key, "unknown configuration key");
    }
    c.validate();
    return c;
}

GeneratorConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open configuration file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const GeneratorConfig& c) {
    json j;
    j["num_predicates"] = c.num_predicates;
    j["num_constants"] = c.num_constants;
    j["arity_min"] = c.arity_min;
    j["arity_max"] = c.arity_max;
    j["num_rules"] = c.num_rules;
    j["max_rule_length"] = c.max_rule_length;
    j["category"] = std::string(to_string(c.category));
    j["components_min"] = c.components_min;
    j["components_max"] = c.components_max;
    j["max_depth"] = c.max_depth;
    j["same_target"] = c.same_target;
    j["prob_head"] = c.prob_head;
    j["prob_existing"] = c.prob_existing;
    j["prob_constant"] = c.prob_constant;
    j["prob_recursive"] = c.prob_recursive;
    j["max_retries"] = c.max_retries;
    j["size_class"] = c.size_class;
    j["facts_min"] = c.facts_min ? json(*c.facts_min) : json(nullptr);
    j["facts_max"] = c.facts_max ? json(*c.facts_max) : json(nullptr);
    j["n_ow"] = c.n_ow;
    j["n_noise_plus"] = c.n_noise_plus;
    j["n_noise_minus"] = c.n_noise_minus;
    j["split_target"] = c.split_target;
    j["n_dg"] = c.n_dg;
    j["n_skip"] = c.n_skip;
    j["max_passes"] = c.max_passes;
    j["seed"] = c.seed;
    return j;
}

void apply_override(GeneratorConfig& config, std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("", "override must look like key=value, got '" + std::string(assignment) + "'");
    std::string key(assignment.substr(0, eq));
    std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json merged = config_to_json(config);
    if (!merged.contains(key)) throw ConfigError(key, "unknown configuration key");
    merged[key] = value;
    config = config_from_json(merged);
}

} // namespace rulebench
