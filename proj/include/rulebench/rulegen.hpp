#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rulebench/config.hpp"
#include "rulebench/core.hpp"
#include "rulebench/random.hpp"

namespace rulebench {

/// Rule dependency graph. An edge parent -> child means the child's head
/// predicate occurs in the parent's body; self-loops of recursive rules are
/// not edges. Structure is derived from the rules by build_rule_graph.
struct RuleGraph {
    Category category = Category::Chain;
    std::vector<Rule> rules; // nodes
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::vector<std::size_t>> parents;
    // Sibling groups with a common parent and a common head predicate, size >= 2.
    std::vector<std::vector<std::size_t>> or_nodes;
    std::vector<bool> recursive;
    std::size_t root = 0;
    // Largest shortest-path distance (counted in rule nodes) from the root to a leaf.
    std::size_t depth = 0;
    std::vector<std::size_t> level; // 1 for the root, 0 when unreachable
    // Rule variables interned by name across the whole graph.
    std::vector<std::vector<std::uint32_t>> variables; // node -> local variable -> graph variable
    std::size_t variable_count = 0;
};

/// Derives edges, root, levels, depth and OR groups from the rules.
RuleGraph build_rule_graph(std::vector<Rule> rules, Category category);

/// Structural violations of the category's invariants; empty when the graph conforms.
std::vector<std::string> validate_category(const RuleGraph& graph, Category category);

Program program_of(std::span<const RuleGraph> graphs);

struct ComponentPlan {
    Category category = Category::Chain;
    std::size_t depth = 1;
    PredicateId target{};
};

struct ResolvedPlan {
    Signature signature; // p0..pN-1 and c0..cK-1
    std::vector<ComponentPlan> components;

    std::vector<PredicateId> targets() const;
};

/// Fixes the signature, component count, categories, depths (max_depth at
/// least once) and target predicates. Throws InfeasibleError when the
/// predicate or rule budget cannot hold the requested depths.
ResolvedPlan preprocess(const GeneratorConfig& config, Rng& rng);

/// Builds one graph per planned component, top down and breadth first.
/// Throws InfeasibleError when max_retries random draws all fail.
std::vector<RuleGraph> generate_rule_graphs(const GeneratorConfig& config, const ResolvedPlan& plan, Rng& rng);

enum class TermSource { HeadVariable, ExistingVariable, Constant, FreshVariable };

struct TermProbabilities {
    double head = 0.2;
    double existing = 0.75;
    double constant = 0.1;
};

struct TermDraw {
    TermSource source;
    Term term;
};

/// Draws the term for one body position: a head variable with probability
/// `head`, otherwise an already introduced variable with probability
/// `existing`, otherwise a constant with probability `constant`, otherwise
/// `fresh`. A branch whose pool is empty is passed over without a draw.
TermDraw fill_terms(std::span<const VariableId> head_vars, std::span<const VariableId> introduced,
                    std::span<const ConstantId> constants, VariableId fresh, const TermProbabilities& probs, Rng& rng);

} // namespace rulebench
