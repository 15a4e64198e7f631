#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace rulebench {

enum class Category { Chain, RDG, DRDG, Mixed };

std::string_view to_string(Category c);
/// Case-insensitive; throws ConfigError on unknown names.
Category parse_category(std::string_view name);

/// Inclusive bounds on the number of training facts.
struct SizeBounds {
    std::size_t min = 0;
    std::size_t max = 0;
};

/// XS, S, M, L, XL. Larger classes have no fixed bounds and need explicit
/// facts_min/facts_max.
std::optional<SizeBounds> size_class_bounds(std::string_view name);

struct GeneratorConfig {
    // symbols
    std::size_t num_predicates = 10;
    std::size_t num_constants = 100;
    std::size_t arity_min = 2;
    std::size_t arity_max = 2;

    // rules
    std::size_t num_rules = 20; // upper bound over all graphs
    std::size_t max_rule_length = 2;
    Category category = Category::Chain;
    std::size_t components_min = 1;
    std::size_t components_max = 1;
    std::size_t max_depth = 2;
    bool same_target = false;
    double prob_head = 0.2;
    double prob_existing = 0.75;
    double prob_constant = 0.1;
    double prob_recursive = 0.1;
    std::size_t max_retries = 100;

    // facts
    std::string size_class = "XS";
    std::optional<std::size_t> facts_min; // override size_class bounds
    std::optional<std::size_t> facts_max;
    double n_ow = 0.3;
    double n_noise_plus = 0.1;
    double n_noise_minus = 0.2;
    bool split_target = true;
    std::size_t n_dg = 3;
    std::size_t n_skip = 2;
    std::size_t max_passes = 10000;

    std::uint64_t seed = 0;

    /// Resolved training-size bounds (explicit bounds win over size_class).
    SizeBounds size_bounds() const;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
};

/// Strict: unknown keys and wrong types are ConfigErrors. Missing keys keep defaults.
GeneratorConfig config_from_json(const nlohmann::json& j);
GeneratorConfig load_config(const std::string& path);
nlohmann::json config_to_json(const GeneratorConfig& config);

/// Applies one "key=value" override; value is parsed as JSON, falling back to a string.
void apply_override(GeneratorConfig& config, std::string_view assignment);

} // namespace rulebench
