#include <gtest/gtest.h>

#include <array>

#include "rulebench/errors.hpp"
#include "rulebench/prolog_io.hpp"
#include "rulebench/rulegen.hpp"

using namespace rulebench;

namespace {

RuleGraph graph_of(const std::string& text, Category category, Signature& sig) {
    Program p = parse_rules(text, sig);
    return build_rule_graph(std::vector<Rule>(p.begin(), p.end()), category);
}

const char* kChainSample =
    "p8(X0,X1) :- p6(X0,X2), p4(X1,X0).\n"
    "p6(X0,X2) :- p0(X3,X0), p9(X4,X2).\n";
const char* kRdgSample =
    "p6(X0,X1) :- p0(X0,X2), p8(X1,X1).\n"
    "p0(X0,X2) :- p4(X0,X3), p2(X2,X0).\n"
    "p8(X1,X1) :- p2(X1,X1).\n";
const char* kDrdgSample =
    "p5(X0,X1) :- p7(X0,X2), p2(X0,X1).\n"
    "p7(X0,X2) :- p1(X2,X3), p0(X3,X0).\n"
    "p7(X0,X2) :- p6(X2,X0).\n"
    "p2(X0,X1) :- p6(X0,X4), p9(X1,X4).\n";

GeneratorConfig config_for(Category category, std::size_t depth, std::uint64_t seed = 1) {
    GeneratorConfig c;
    c.category = category;
    c.max_depth = depth;
    c.num_rules = 20;
    c.num_predicates = 14;
    c.seed = seed;
    return c;
}

std::vector<RuleGraph> generate(const GeneratorConfig& c, std::uint64_t seed) {
    Rng rng(seed);
    ResolvedPlan plan = preprocess(c, rng);
    return generate_rule_graphs(c, plan, rng);
}

} // namespace

TEST(BuildRuleGraph, SampleStructure) {
    Signature sig;
    RuleGraph chain = graph_of(kChainSample, Category::Chain, sig);
    EXPECT_EQ(chain.depth, 2U);
    EXPECT_EQ(sig.name(head_predicate(chain.rules[chain.root])), "p8");

    RuleGraph rdg = graph_of(kRdgSample, Category::RDG, sig);
    EXPECT_EQ(rdg.children[rdg.root].size(), 2U);
    EXPECT_TRUE(rdg.or_nodes.empty());

    RuleGraph drdg = graph_of(kDrdgSample, Category::DRDG, sig);
    ASSERT_EQ(drdg.or_nodes.size(), 1U);
    EXPECT_EQ(drdg.or_nodes[0].size(), 2U);
    EXPECT_EQ(drdg.depth, 2U);
}

TEST(ValidateCategory, SampleGraphs) {
    Signature sig;
    EXPECT_TRUE(validate_category(graph_of(kChainSample, Category::Chain, sig), Category::Chain).empty());
    EXPECT_TRUE(validate_category(graph_of(kRdgSample, Category::RDG, sig), Category::RDG).empty());
    EXPECT_TRUE(validate_category(graph_of(kDrdgSample, Category::DRDG, sig), Category::DRDG).empty());

    auto rdg_as_chain = validate_category(graph_of(kRdgSample, Category::RDG, sig), Category::Chain);
    ASSERT_FALSE(rdg_as_chain.empty());
    EXPECT_NE(rdg_as_chain[0].find("2 children"), std::string::npos);
    EXPECT_FALSE(validate_category(graph_of(kDrdgSample, Category::DRDG, sig), Category::RDG).empty());
}

TEST(ValidateCategory, ExistentialClauses) {
    Signature sig;
    RuleGraph single = graph_of("p(X,Y) :- q(X,Y).", Category::RDG, sig);
    EXPECT_FALSE(validate_category(single, Category::RDG).empty());
    EXPECT_FALSE(validate_category(single, Category::DRDG).empty());
    EXPECT_TRUE(validate_category(single, Category::Chain).empty());
}

TEST(ValidateCategory, RecursionIsASelfLoopNotACycle) {
    Signature sig;
    RuleGraph g = graph_of("p(X,Y) :- q(X,Z), p(Z,Y).\nq(X,Y) :- r(X,Y).", Category::Chain, sig);
    EXPECT_TRUE(validate_category(g, Category::Chain).empty());
    EXPECT_EQ(std::count(g.recursive.begin(), g.recursive.end(), true), 1);

    Signature other;
    RuleGraph cyclic = graph_of("p(X) :- q(X).\nq(X) :- p(X).\nr(X) :- p(X).", Category::Chain, other);
    EXPECT_FALSE(validate_category(cyclic, Category::Chain).empty());
}

TEST(FillTerms, CascadeMarginals) {
    Rng rng(5);
    std::vector<VariableId> head{VariableId{0}, VariableId{1}};
    std::vector<VariableId> seen{VariableId{2}};
    std::vector<ConstantId> consts{ConstantId{0}, ConstantId{1}};
    std::array<std::size_t, 4> counts{};
    const std::size_t n = 1'000'000;
    for (std::size_t i = 0; i < n; ++i)
        ++counts[static_cast<std::size_t>(fill_terms(head, seen, consts, VariableId{3}, {}, rng).source)];
    const double expected[] = {0.2, 0.6, 0.02, 0.18};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(static_cast<double>(counts[k]) / n, expected[k], 0.005);
}

TEST(FillTerms, EmptyPoolsAreSkipped) {
    Rng rng(6);
    std::vector<VariableId> seen{VariableId{2}};
    std::array<std::size_t, 4> counts{};
    const std::size_t n = 200'000;
    for (std::size_t i = 0; i < n; ++i) {
        TermDraw d = fill_terms({}, seen, {}, VariableId{3}, {}, rng);
        ++counts[static_cast<std::size_t>(d.source)];
        if (d.source == TermSource::FreshVariable) {
            EXPECT_EQ(d.term, Term::variable(VariableId{3}));
        }
    }
    EXPECT_EQ(counts[static_cast<std::size_t>(TermSource::HeadVariable)], 0U);
    EXPECT_EQ(counts[static_cast<std::size_t>(TermSource::Constant)], 0U);
    EXPECT_NEAR(static_cast<double>(counts[static_cast<std::size_t>(TermSource::FreshVariable)]) / n, 0.25, 0.005);
}

TEST(Preprocess, SingleComponentHasMaxDepth) {
    GeneratorConfig c = config_for(Category::Chain, 2);
    Rng rng(1);
    ResolvedPlan plan = preprocess(c, rng);
    ASSERT_EQ(plan.components.size(), 1U);
    EXPECT_EQ(plan.components[0].depth, 2U);
    EXPECT_EQ(plan.signature.predicate_count(), 14U);
    EXPECT_EQ(plan.signature.constant_count(), 100U);
}

TEST(Preprocess, TooFewPredicatesIsInfeasible) {
    GeneratorConfig c = config_for(Category::Chain, 5);
    c.num_predicates = 2;
    Rng rng(1);
    EXPECT_THROW(preprocess(c, rng), InfeasibleError);
}

TEST(Preprocess, MixedIsDeterministicPerSeed) {
    GeneratorConfig c = config_for(Category::Mixed, 3);
    c.components_min = c.components_max = 3;
    c.num_predicates = 40;
    c.num_rules = 60;
    Rng a(9), b(9);
    ResolvedPlan pa = preprocess(c, a);
    ResolvedPlan pb = preprocess(c, b);
    ASSERT_EQ(pa.components.size(), 3U);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(pa.components[i].category, pb.components[i].category);
        EXPECT_NE(pa.components[i].category, Category::Mixed);
        deepest = std::max(deepest, pa.components[i].depth);
    }
    EXPECT_EQ(deepest, 3U);
}

TEST(GenerateRuleGraphs, ChainDepthTwo) {
    GeneratorConfig c = config_for(Category::Chain, 2);
    c.num_rules = 2;
    auto graphs = generate(c, 3);
    ASSERT_EQ(graphs.size(), 1U);
    EXPECT_EQ(graphs[0].rules.size(), 2U);
    EXPECT_TRUE(validate_category(graphs[0], Category::Chain).empty());
}

TEST(GenerateRuleGraphs, DepthOneIsASingleRule) {
    for (auto cat : {Category::Chain}) {
        auto graphs = generate(config_for(cat, 1), 4);
        ASSERT_EQ(graphs.size(), 1U);
        EXPECT_EQ(graphs[0].rules.size(), 1U);
    }
    GeneratorConfig rdg = config_for(Category::RDG, 1);
    Rng rng(1);
    EXPECT_THROW(preprocess(rdg, rng), InfeasibleError);
}

TEST(GenerateRuleGraphs, DrdgHasAnOrNode) {
    auto graphs = generate(config_for(Category::DRDG, 2), 5);
    ASSERT_EQ(graphs.size(), 1U);
    EXPECT_FALSE(graphs[0].or_nodes.empty());
    EXPECT_TRUE(validate_category(graphs[0], Category::DRDG).empty());
}

TEST(GenerateRuleGraphs, InvariantsOverManySeeds) {
    for (auto cat : {Category::Chain, Category::RDG, Category::DRDG, Category::Mixed}) {
        for (std::size_t depth : {2U, 3U}) {
            for (std::uint64_t seed = 0; seed < 40; ++seed) {
                GeneratorConfig c = config_for(cat, depth, seed);
                c.components_max = 2;
                c.num_predicates = 30;
                c.num_rules = 30;
                c.max_rule_length = 1 + seed % 3 + (cat == Category::Chain ? 0 : 1);
                auto graphs = generate(c, seed);
                std::size_t rules = 0;
                std::size_t deepest = 0;
                for (const auto& g : graphs) {
                    EXPECT_TRUE(validate_category(g, g.category).empty()) << to_string(g.category) << " seed " << seed;
                    EXPECT_LE(g.depth, depth);
                    deepest = std::max(deepest, g.depth);
                    rules += g.rules.size();
                    for (const auto& r : g.rules) {
                        EXPECT_LE(r.body().size(), c.max_rule_length);
                        for (const auto& t : r.head().args) EXPECT_TRUE(t.is_variable());
                    }
                }
                EXPECT_EQ(deepest, depth);
                EXPECT_LE(rules, c.num_rules);

                Rng sig_rng(seed);
                Signature sig = preprocess(c, sig_rng).signature;
                std::string text = serialize_rules(program_of(graphs), sig);
                Signature sig2;
                EXPECT_EQ(serialize_rules(parse_rules(text, sig2), sig2), text);
            }
        }
    }
}

TEST(GenerateRuleGraphs, Deterministic) {
    GeneratorConfig c = config_for(Category::DRDG, 3);
    Rng a(17), b(17);
    ResolvedPlan pa = preprocess(c, a), pb = preprocess(c, b);
    auto ga = generate_rule_graphs(c, pa, a);
    auto gb = generate_rule_graphs(c, pb, b);
    EXPECT_EQ(serialize_rules(program_of(ga), pa.signature), serialize_rules(program_of(gb), pb.signature));
}

TEST(GenerateRuleGraphs, SameTargetSharesTheRoot) {
    GeneratorConfig c = config_for(Category::Chain, 2);
    c.components_min = c.components_max = 3;
    c.same_target = true;
    c.num_predicates = 20;
    auto graphs = generate(c, 8);
    ASSERT_EQ(graphs.size(), 3U);
    for (const auto& g : graphs)
        EXPECT_EQ(head_predicate(g.rules[g.root]), head_predicate(graphs[0].rules[graphs[0].root]));
}

TEST(GenerateRuleGraphs, TightRuleBudgetEventuallyFails) {
    GeneratorConfig c = config_for(Category::RDG, 3);
    c.num_rules = 4;
    c.max_rule_length = 1;
    Rng rng(1);
    EXPECT_THROW(preprocess(c, rng), InfeasibleError);
}
