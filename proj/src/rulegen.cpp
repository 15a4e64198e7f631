#include "rulebench/rulegen.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "rulebench/errors.hpp"

namespace rulebench {

// ---------------------------------------------------------------------------
// graph structure

RuleGraph build_rule_graph(std::vector<Rule> rules, Category category) {
    RuleGraph g;
    g.category = category;
    g.rules = std::move(rules);
    const std::size_t n = g.rules.size();
    g.children.assign(n, {});
    g.parents.assign(n, {});
    g.recursive.assign(n, false);
    g.level.assign(n, 0);

    for (std::size_t p = 0; p < n; ++p) {
        const Rule& parent = g.rules[p];
        for (const auto& atom : parent.body())
            if (atom.predicate == head_predicate(parent)) g.recursive[p] = true;
        for (std::size_t c = 0; c < n; ++c) {
            if (c == p) continue;
            PredicateId hp = head_predicate(g.rules[c]);
            bool uses = std::any_of(parent.body().begin(), parent.body().end(),
                                    [&](const Atom& a) { return a.predicate == hp; });
            if (uses) {
                g.children[p].push_back(c);
                g.parents[c].push_back(p);
            }
        }
    }

    for (std::size_t p = 0; p < n; ++p) {
        std::map<PredicateId, std::vector<std::size_t>> by_head;
        for (auto c : g.children[p]) by_head[head_predicate(g.rules[c])].push_back(c);
        for (auto& [pred, group] : by_head)
            if (group.size() >= 2) g.or_nodes.push_back(group);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (g.parents[i].empty()) {
            g.root = i;
            break;
        }
    }
    if (n > 0) {
        std::deque<std::size_t> queue{g.root};
        g.level[g.root] = 1;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto c : g.children[u]) {
                if (g.level[c] == 0) {
                    g.level[c] = g.level[u] + 1;
                    queue.push_back(c);
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (g.children[i].empty() && g.level[i] > 0) g.depth = std::max(g.depth, g.level[i]);
    }

    std::map<std::string, std::uint32_t> names;
    g.variables.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Rule& r = g.rules[i];
        for (std::size_t v = 0; v < r.variable_count(); ++v) {
            auto [it, inserted] = names.try_emplace(r.variable_names()[v], static_cast<std::uint32_t>(names.size()));
            g.variables[i].push_back(it->second);
        }
    }
    g.variable_count = names.size();
    return g;
}

namespace {

bool has_cycle(const RuleGraph& g) {
    const std::size_t n = g.rules.size();
    std::vector<int> state(n, 0); // 0 new, 1 on stack, 2 done
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (state[s] != 0) continue;
        stack.push_back({s, 0});
        state[s] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < g.children[u].size()) {
                auto c = g.children[u][next++];
                if (state[c] == 1) return true;
                if (state[c] == 0) {
                    state[c] = 1;
                    stack.push_back({c, 0});
                }
            } else {
                state[u] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

std::string node_name(std::size_t i) { return "node " + std::to_string(i); }

} // namespace

std::vector<std::string> validate_category(const RuleGraph& graph, Category category) {
    std::vector<std::string> out;
    if (category == Category::Mixed) {
        out.emplace_back("MIXED describes a set of components, not a single rule graph");
        return out;
    }
    if (graph.rules.empty()) {
        out.emplace_back("graph has no rules");
        return out;
    }
    RuleGraph g = build_rule_graph(graph.rules, category);
    const std::size_t n = g.rules.size();

    std::size_t roots = static_cast<std::size_t>(
        std::count_if(g.parents.begin(), g.parents.end(), [](const auto& p) { return p.empty(); }));
    if (roots != 1) out.push_back("expected exactly one root, found " + std::to_string(roots));
    if (has_cycle(g)) out.emplace_back("dependency graph has a cycle through distinct rules");
    for (std::size_t i = 0; i < n; ++i)
        if (g.level[i] == 0) out.push_back(node_name(i) + " is not reachable from the root");
    if (graph.depth != g.depth)
        out.push_back("recorded depth " + std::to_string(graph.depth) + " differs from actual depth " +
                      std::to_string(g.depth));

    auto max_children = std::size_t{0};
    for (const auto& c : g.children) max_children = std::max(max_children, c.size());

    switch (category) {
    case Category::Chain:
        for (std::size_t i = 0; i < n; ++i) {
            if (g.children[i].size() > 1)
                out.push_back(node_name(i) + " has " + std::to_string(g.children[i].size()) + " children");
            if (g.parents[i].size() > 1)
                out.push_back(node_name(i) + " has " + std::to_string(g.parents[i].size()) + " parents");
        }
        break;
    case Category::RDG:
        for (const auto& group : g.or_nodes)
            out.push_back("alternative rules for predicate of " + node_name(group.front()) + " (" +
                          std::to_string(group.size()) + " rules)");
        if (max_children < 2) out.emplace_back("no node has two or more children");
        break;
    case Category::DRDG:
        if (g.or_nodes.empty()) out.emplace_back("no OR node with alternative rules");
        break;
    case Category::Mixed:
        break;
    }
    return out;
}

Program program_of(std::span<const RuleGraph> graphs) {
    Program p;
    for (const auto& g : graphs)
        for (const auto& r : g.rules) p.insert(r);
    return p;
}

std::vector<PredicateId> ResolvedPlan::targets() const {
    std::vector<PredicateId> out;
    for (const auto& c : components)
        if (std::find(out.begin(), out.end(), c.target) == out.end()) out.push_back(c.target);
    return out;
}

// ---------------------------------------------------------------------------
// planning

namespace {

std::size_t min_depth(Category c) { return c == Category::Chain ? 1 : 2; }

// Fewest distinct head predicates and rules a graph of this category and depth needs.
std::size_t min_heads(Category c, std::size_t depth) { return c == Category::RDG ? depth + 1 : depth; }
std::size_t min_rules(Category c, std::size_t depth) { return c == Category::Chain ? depth : depth + 1; }

} // namespace

ResolvedPlan preprocess(const GeneratorConfig& config, Rng& rng) {
    config.validate();
    ResolvedPlan plan;
    for (std::size_t i = 0; i < config.num_predicates; ++i) {
        auto arity = static_cast<std::size_t>(
            rng.between(static_cast<std::int64_t>(config.arity_min), static_cast<std::int64_t>(config.arity_max)));
        plan.signature.add_predicate("p" + std::to_string(i), arity);
    }
    for (std::size_t i = 0; i < config.num_constants; ++i) plan.signature.add_constant("c" + std::to_string(i));

    auto count = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(config.components_min),
                                                      static_cast<std::int64_t>(config.components_max)));
    std::size_t deepest = rng.index(count);
    plan.components.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto& comp = plan.components[i];
        comp.category = config.category;
        if (comp.category == Category::Mixed) {
            static constexpr Category kChoices[] = {Category::Chain, Category::RDG, Category::DRDG};
            comp.category = kChoices[rng.index(3)];
        }
        std::size_t lo = min_depth(comp.category);
        if (lo > config.max_depth)
            throw InfeasibleError(std::string(to_string(comp.category)) + " graphs need max_depth >= " +
                                  std::to_string(lo));
        comp.depth = i == deepest ? config.max_depth
                                  : static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo),
                                                                         static_cast<std::int64_t>(config.max_depth)));
        if (comp.category == Category::RDG && config.max_rule_length < 2)
            throw InfeasibleError("RDG graphs need max_rule_length >= 2 to give a rule two children");
    }

    std::size_t heads = 0;
    std::size_t rules = 0;
    for (const auto& c : plan.components) {
        heads += min_heads(c.category, c.depth);
        rules += min_rules(c.category, c.depth);
    }
    if (config.same_target) heads -= count - 1;
    // one more predicate is needed for body atoms that no rule defines
    if (heads + 1 > config.num_predicates)
        throw InfeasibleError("num_predicates=" + std::to_string(config.num_predicates) + " is too small: the planned " +
                              "graphs need " + std::to_string(heads) + " head predicates plus one body-only predicate");
    if (rules > config.num_rules)
        throw InfeasibleError("num_rules=" + std::to_string(config.num_rules) + " is too small: the planned graphs need " +
                              std::to_string(rules) + " rules");

    std::vector<PredicateId> preds = plan.signature.predicates();
    rng.shuffle(preds);
    for (std::size_t i = 0; i < count; ++i) plan.components[i].target = config.same_target ? preds[0] : preds[i];
    return plan;
}

// ---------------------------------------------------------------------------
// term filling

TermDraw fill_terms(std::span<const VariableId> head_vars, std::span<const VariableId> introduced,
                    std::span<const ConstantId> constants, VariableId fresh, const TermProbabilities& probs, Rng& rng) {
    if (!head_vars.empty() && rng.bernoulli(probs.head))
        return {TermSource::HeadVariable, Term::variable(head_vars[rng.index(head_vars.size())])};
    if (!introduced.empty() && rng.bernoulli(probs.existing))
        return {TermSource::ExistingVariable, Term::variable(introduced[rng.index(introduced.size())])};
    if (!constants.empty() && rng.bernoulli(probs.constant))
        return {TermSource::Constant, Term::constant(constants[rng.index(constants.size())])};
    return {TermSource::FreshVariable, Term::variable(fresh)};
}

// ---------------------------------------------------------------------------
// graph generation

namespace {

enum class SlotKind { Base, Child, Or, Recursive };

struct ShapeNode {
    std::size_t level = 1;
    bool spine = false;
    bool alternative = false;
    std::vector<SlotKind> slots;
    std::vector<std::vector<std::size_t>> slot_nodes; // nodes whose head is this slot's atom
    std::optional<std::size_t> parent;
    std::size_t parent_slot = 0;
};

struct Shape {
    std::vector<ShapeNode> nodes; // breadth-first order, root first
};

Shape draw_shape(const GeneratorConfig& config, const ComponentPlan& comp, Rng& rng) {
    const Category cat = comp.category;
    const std::size_t depth = comp.depth;
    // level at which the spine is forced to branch (RDG) or to meet an OR node (DRDG)
    std::size_t special_level = depth > 1 ? static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(depth - 1))) : 0;

    Shape shape;
    shape.nodes.push_back(ShapeNode{1, true, false, {}, {}, std::nullopt, 0});
    for (std::size_t idx = 0; idx < shape.nodes.size(); ++idx) {
        ShapeNode node = shape.nodes[idx];
        bool forced_branch = cat == Category::RDG && node.spine && node.level == special_level;
        bool forced_or = cat == Category::DRDG && node.spine && node.level == special_level;

        auto len_lo = static_cast<std::int64_t>(forced_branch ? 2 : 1);
        auto len = static_cast<std::size_t>(rng.between(len_lo, static_cast<std::int64_t>(config.max_rule_length)));
        node.slots.assign(len, SlotKind::Base);
        node.slot_nodes.assign(len, {});

        bool has_children =
            node.level < depth && (node.spine || (cat != Category::Chain && rng.bernoulli(0.5)));
        std::vector<std::size_t> child_slots;
        std::size_t spine_slot = len;
        if (has_children) {
            std::size_t fan = 1;
            if (cat != Category::Chain) {
                std::size_t hi = std::min<std::size_t>(len, 3);
                fan = static_cast<std::size_t>(
                    rng.between(forced_branch ? 2 : 1, static_cast<std::int64_t>(hi)));
            }
            std::vector<std::size_t> positions(len);
            for (std::size_t i = 0; i < len; ++i) positions[i] = i;
            rng.shuffle(positions);
            child_slots.assign(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(fan));
            spine_slot = child_slots.front();
            for (auto s : child_slots) {
                node.slots[s] = SlotKind::Child;
                if (cat == Category::DRDG && ((forced_or && s == spine_slot) || rng.bernoulli(0.5)))
                    node.slots[s] = SlotKind::Or;
            }
        }

        bool may_recurse = !node.alternative && !(idx == 0 && config.same_target);
        if (may_recurse && len >= 2 && rng.bernoulli(config.prob_recursive)) {
            std::vector<std::size_t> base;
            for (std::size_t s = 0; s < len; ++s)
                if (node.slots[s] == SlotKind::Base) base.push_back(s);
            if (!base.empty()) node.slots[rng.pick(base)] = SlotKind::Recursive;
        }

        std::sort(child_slots.begin(), child_slots.end());
        for (auto s : child_slots) {
            std::size_t count = node.slots[s] == SlotKind::Or ? static_cast<std::size_t>(rng.between(2, 3)) : 1;
            for (std::size_t k = 0; k < count; ++k) {
                ShapeNode child;
                child.level = node.level + 1;
                child.spine = node.spine && s == spine_slot && k == 0;
                child.alternative = count > 1;
                child.parent = idx;
                child.parent_slot = s;
                node.slot_nodes[s].push_back(shape.nodes.size());
                shape.nodes.push_back(std::move(child));
            }
        }
        shape.nodes[idx] = std::move(node);
    }
    return shape;
}

struct Budget {
    std::set<PredicateId> heads; // used as heads by earlier components
    std::set<PredicateId> bases; // used in bodies (not as heads) by earlier components
};

// Graph-variable form of an atom while a graph is being built.
struct DraftAtom {
    PredicateId predicate{};
    std::vector<Term> args; // variables carry graph variable ids
};

std::optional<RuleGraph> try_generate(const GeneratorConfig& config, const ResolvedPlan& plan, std::size_t comp_index,
                                      std::size_t rule_budget, Budget& budget, Rng& rng) {
    const ComponentPlan& comp = plan.components[comp_index];
    const Signature& sig = plan.signature;
    Shape shape = draw_shape(config, comp, rng);
    if (shape.nodes.size() > rule_budget) return std::nullopt;

    // predicates: every Child/Or slot introduces a new head predicate
    std::vector<PredicateId> all_targets = plan.targets();
    auto is_target = [&](PredicateId p) { return std::find(all_targets.begin(), all_targets.end(), p) != all_targets.end(); };
    std::vector<PredicateId> head_pool;
    for (auto p : sig.predicates())
        if (!is_target(p) && !budget.heads.contains(p) && !budget.bases.contains(p)) head_pool.push_back(p);
    rng.shuffle(head_pool);

    std::vector<PredicateId> node_head(shape.nodes.size());
    node_head[0] = comp.target;
    std::set<PredicateId> graph_heads{comp.target};
    std::size_t next_head = 0;
    std::vector<std::vector<PredicateId>> slot_pred(shape.nodes.size());
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& node = shape.nodes[i];
        slot_pred[i].assign(node.slots.size(), PredicateId{});
        for (std::size_t s = 0; s < node.slots.size(); ++s) {
            if (node.slots[s] != SlotKind::Child && node.slots[s] != SlotKind::Or) continue;
            if (next_head >= head_pool.size()) return std::nullopt;
            PredicateId p = head_pool[next_head++];
            slot_pred[i][s] = p;
            graph_heads.insert(p);
            for (auto c : node.slot_nodes[s]) node_head[c] = p;
        }
    }
    std::vector<PredicateId> base_pool;
    for (auto p : sig.predicates())
        if (!is_target(p) && !budget.heads.contains(p) && !graph_heads.contains(p)) base_pool.push_back(p);
    if (base_pool.empty()) return std::nullopt;
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& node = shape.nodes[i];
        for (std::size_t s = 0; s < node.slots.size(); ++s) {
            if (node.slots[s] == SlotKind::Base) slot_pred[i][s] = rng.pick(base_pool);
            if (node.slots[s] == SlotKind::Recursive) slot_pred[i][s] = node_head[i];
        }
    }

    // terms, top down: a child's head is the parent's body atom at its slot
    std::vector<ConstantId> constants = sig.constants();
    TermProbabilities probs{config.prob_head, config.prob_existing, config.prob_constant};
    std::uint32_t next_var = 0;
    std::vector<DraftAtom> heads(shape.nodes.size());
    std::vector<std::vector<DraftAtom>> bodies(shape.nodes.size());
    heads[0].predicate = comp.target;
    for (std::size_t k = 0; k < sig.arity(comp.target); ++k) heads[0].args.push_back(Term::variable(VariableId{next_var++}));

    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& node = shape.nodes[i];
        const DraftAtom& head = heads[i];
        std::vector<VariableId> head_vars;
        for (const auto& t : head.args)
            if (std::find(head_vars.begin(), head_vars.end(), t.variable_id()) == head_vars.end())
                head_vars.push_back(t.variable_id());

        auto& body = bodies[i];
        std::vector<std::pair<std::size_t, std::size_t>> positions;
        for (std::size_t s = 0; s < node.slots.size(); ++s) {
            DraftAtom atom{slot_pred[i][s], {}};
            std::size_t arity = sig.arity(atom.predicate);
            atom.args.assign(arity, Term::variable(VariableId{0}));
            for (std::size_t k = 0; k < arity; ++k) positions.emplace_back(s, k);
            body.push_back(std::move(atom));
        }
        if (positions.size() < head_vars.size()) return std::nullopt;

        rng.shuffle(positions);
        std::vector<bool> filled_flags(positions.size(), false);
        std::set<std::pair<std::size_t, std::size_t>> placed;
        for (std::size_t h = 0; h < head_vars.size(); ++h) {
            auto [s, k] = positions[h];
            body[s].args[k] = Term::variable(head_vars[h]);
            placed.insert(positions[h]);
        }

        std::vector<VariableId> introduced;
        for (std::size_t s = 0; s < node.slots.size(); ++s) {
            bool defines_child = node.slots[s] == SlotKind::Child || node.slots[s] == SlotKind::Or;
            std::span<const ConstantId> pool = defines_child ? std::span<const ConstantId>{} : constants;
            for (std::size_t k = 0; k < body[s].args.size(); ++k) {
                if (placed.contains({s, k})) continue;
                TermDraw draw = fill_terms(head_vars, introduced, pool, VariableId{next_var}, probs, rng);
                if (draw.source == TermSource::FreshVariable) {
                    introduced.push_back(VariableId{next_var});
                    ++next_var;
                }
                body[s].args[k] = draw.term;
            }
            for (auto c : node.slot_nodes[s]) heads[c] = body[s];
        }
    }

    // convert to rules with per-rule variable numbering and graph-wide names
    std::vector<Rule> rules;
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        std::map<std::uint32_t, VariableId> local;
        std::vector<std::string> names;
        auto convert = [&](const DraftAtom& d) {
            Atom a{d.predicate, {}};
            for (const auto& t : d.args) {
                if (t.is_constant()) {
                    a.args.push_back(t);
                    continue;
                }
                auto g = index_of(t.variable_id());
                auto [it, inserted] = local.try_emplace(g, VariableId{static_cast<std::uint32_t>(names.size())});
                if (inserted) names.push_back("X" + std::to_string(g));
                a.args.push_back(Term::variable(it->second));
            }
            return a;
        };
        Atom h = convert(heads[i]);
        std::vector<Atom> b;
        for (const auto& d : bodies[i]) b.push_back(convert(d));
        rules.emplace_back(std::move(h), std::move(b), std::move(names));
    }

    if (Program(rules).size() != rules.size()) return std::nullopt; // alternatives collapsed
    RuleGraph graph = build_rule_graph(std::move(rules), comp.category);
    if (graph.depth != comp.depth || graph.root != 0) return std::nullopt;
    if (!validate_category(graph, comp.category).empty()) return std::nullopt;

    for (auto p : graph_heads) budget.heads.insert(p);
    for (const auto& r : graph.rules)
        for (const auto& a : r.body())
            if (!graph_heads.contains(a.predicate)) budget.bases.insert(a.predicate);
    return graph;
}

} // namespace

std::vector<RuleGraph> generate_rule_graphs(const GeneratorConfig& config, const ResolvedPlan& plan, Rng& rng) {
    std::vector<RuleGraph> graphs;
    Budget budget;
    std::size_t used = 0;
    for (std::size_t i = 0; i < plan.components.size(); ++i) {
        std::size_t reserved = 0;
        for (std::size_t j = i + 1; j < plan.components.size(); ++j)
            reserved += min_rules(plan.components[j].category, plan.components[j].depth);
        std::size_t available = config.num_rules - used - reserved;

        std::optional<RuleGraph> graph;
        for (std::size_t attempt = 0; attempt < config.max_retries && !graph; ++attempt)
            graph = try_generate(config, plan, i, available, budget, rng);
        if (!graph)
            throw InfeasibleError("could not generate a " + std::string(to_string(plan.components[i].category)) +
                                  " graph of depth " + std::to_string(plan.components[i].depth) + " within " +
                                  std::to_string(config.max_retries) + " attempts; increase num_predicates, "
                                  "num_rules or max_rule_length");
        used += graph->rules.size();
        graphs.push_back(std::move(*graph));
    }
    return graphs;
}

} // namespace rulebench
