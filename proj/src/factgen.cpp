#include "rulebench/factgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rulebench/errors.hpp"
#include "rulebench/inference.hpp"

namespace rulebench {

namespace {

enum Stream : std::uint64_t { kRules = 1, kFacts, kEval, kOpenWorld, kNoise, kNoiseFull };

constexpr std::uint64_t kEnumerationLimit = 5'000'000;

bool contains_pred(std::span<const PredicateId> preds, PredicateId p) {
    return std::find(preds.begin(), preds.end(), p) != preds.end();
}

// Uniform sample of k elements of v, in the order drawn.
template <class T>
std::vector<T> sample(std::vector<T> v, std::size_t k, Rng& rng) {
    k = std::min(k, v.size());
    for (std::size_t i = 0; i < k; ++i) std::swap(v[i], v[i + rng.index(v.size() - i)]);
    v.resize(k);
    return v;
}

} // namespace

std::size_t round_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5 + 1e-9));
}

std::size_t ceil_count(double x) { return x <= 0 ? 0 : static_cast<std::size_t>(std::ceil(x - 1e-9)); }

std::size_t projected_train_size(std::size_t support, std::size_t consequences, std::size_t targets,
                                 const GeneratorConfig& config) {
    std::size_t removed_ow = config.split_target
                                 ? round_count(config.n_ow, consequences - targets) + round_count(config.n_ow, targets)
                                 : round_count(config.n_ow, consequences);
    std::size_t clean = support - round_count(config.n_noise_minus, support) + consequences - removed_ow;
    double ratio = config.n_noise_plus / (1.0 - config.n_noise_plus);
    return clean + ceil_count(ratio * static_cast<double>(clean));
}

ClosedWorldSets generate_closed_world(std::span<const RuleGraph> graphs, const Signature& sig,
                                      std::span<const PredicateId> targets, const GeneratorConfig& config,
                                      const PassOptions& options, Rng& rng) {
    Program program = program_of(graphs);
    ClosureBuilder closure(program);
    FactSet support;
    std::size_t support_on_targets = 0;
    std::vector<ConstantId> constants = sig.constants();
    if (constants.empty()) throw InfeasibleError("no constants to instantiate rules with");

    auto estimate = [&] {
        std::size_t consequences = closure.size() - support.size();
        std::size_t target_facts = 0;
        for (auto t : targets) target_facts += closure.count(t);
        target_facts -= support_on_targets;
        if (!options.project_train) return support.size() + consequences;
        return projected_train_size(support.size(), consequences, target_facts, config);
    };

    // bottom up: deepest level first
    std::vector<std::vector<std::size_t>> orders;
    for (const auto& g : graphs) {
        std::vector<std::size_t> order(g.rules.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.level[a] > g.level[b]; });
        orders.push_back(std::move(order));
    }

    auto finish = [&] {
        ClosedWorldSets cw;
        cw.consequences = set_difference(closure.facts(), support);
        cw.targets = cw.consequences.restricted_to(targets);
        cw.support = std::move(support);
        return cw;
    };
    if (estimate() >= options.target_size) return finish();

    std::vector<ConstantId> sigma;
    std::vector<Fact> batch;
    for (std::size_t pass = 0; pass < config.max_passes; ++pass) {
        bool full = pass % config.n_dg == 0;
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const RuleGraph& g = graphs[gi];
            sigma.resize(g.variable_count);
            for (auto& c : sigma) c = constants[rng.index(constants.size())];

            std::vector<bool> active(g.rules.size(), true);
            if (!full) {
                for (const auto& group : g.or_nodes) {
                    std::size_t keep = group[rng.index(group.size())];
                    for (auto n : group) {
                        if (n == keep) continue;
                        std::vector<std::size_t> stack{n};
                        while (!stack.empty()) {
                            auto u = stack.back();
                            stack.pop_back();
                            if (!active[u]) continue;
                            active[u] = false;
                            for (auto c : g.children[u]) stack.push_back(c);
                        }
                    }
                }
            }

            for (auto node : orders[gi]) {
                if (!active[node]) continue;
                if (!full && rng.bernoulli(1.0 / static_cast<double>(config.n_skip))) continue;
                const Rule& rule = g.rules[node];
                batch.clear();
                for (const auto& atom : rule.body()) {
                    Fact f{atom.predicate, {}};
                    for (const auto& t : atom.args)
                        f.args.push_back(t.is_constant() ? t.constant_id()
                                                         : sigma[g.variables[node][index_of(t.variable_id())]]);
                    // body instances already derived are consequences, not support
                    if (closure.contains(f) || support.contains(f)) continue;
                    batch.push_back(std::move(f));
                }
                for (const auto& f : batch) {
                    if (support.insert(f) && contains_pred(targets, f.predicate)) ++support_on_targets;
                }
                closure.add(batch);
                if (estimate() >= options.target_size) return finish();
            }
        }
    }
    throw InfeasibleError("could not reach " + std::to_string(options.target_size) + " facts within " +
                          std::to_string(config.max_passes) + " passes; increase num_constants or lower the size");
}

FactSet apply_open_world(const ClosedWorldSets& cw, double n_ow, bool split_target, Rng& rng) {
    FactSet out = set_union(cw.support, cw.consequences);
    auto remove_from = [&](const FactSet& part) {
        std::vector<Fact> v(part.begin(), part.end());
        for (const auto& f : sample(std::move(v), round_count(n_ow, part.size()), rng)) out.erase(f);
    };
    if (split_target) {
        remove_from(set_difference(cw.consequences, cw.targets));
        remove_from(cw.targets);
    } else {
        remove_from(cw.consequences);
    }
    return out;
}

namespace {

// Uniform sampler over the ground atoms of a predicate list.
class GroundAtomSampler {
public:
    GroundAtomSampler(const Signature& sig, std::vector<PredicateId> preds)
        : preds_(std::move(preds)), constants_(sig.constant_count()) {
        unsigned __int128 total = 0;
        for (auto p : preds_) {
            unsigned __int128 w = 1;
            for (std::size_t k = 0; k < sig.arity(p); ++k) {
                w *= constants_;
                if (w > std::numeric_limits<std::uint64_t>::max() / 2) throw InfeasibleError("Herbrand base too large to sample noise from");
            }
            arities_.push_back(sig.arity(p));
            weights_.push_back(static_cast<std::uint64_t>(w));
            total += w;
            if (total > std::numeric_limits<std::uint64_t>::max() / 2) throw InfeasibleError("Herbrand base too large to sample noise from");
        }
        total_ = static_cast<std::uint64_t>(total);
    }

    std::uint64_t size() const { return total_; }

    Fact at(std::uint64_t index) const {
        std::size_t i = 0;
        while (index >= weights_[i]) index -= weights_[i++];
        Fact f{preds_[i], std::vector<ConstantId>(arities_[i])};
        for (std::size_t k = arities_[i]; k-- > 0;) {
            f.args[k] = ConstantId{static_cast<std::uint32_t>(index % constants_)};
            index /= constants_;
        }
        return f;
    }

private:
    std::vector<PredicateId> preds_;
    std::vector<std::size_t> arities_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t constants_;
    std::uint64_t total_ = 0;
};

// k fresh ground atoms over preds outside `forbidden`.
std::vector<Fact> draw_noise(const Signature& sig, std::vector<PredicateId> preds, std::size_t k,
                             const FactSet& forbidden, Rng& rng) {
    if (k == 0) return {};
    GroundAtomSampler sampler(sig, std::move(preds));
    if (sampler.size() == 0) throw InfeasibleError("no ground atoms available for " + std::to_string(k) + " noise facts");
    FactSet chosen;
    std::vector<Fact> out;
    std::size_t attempts = 50 * k + 1000;
    for (std::size_t a = 0; a < attempts && out.size() < k; ++a) {
        Fact f = sampler.at(rng.below(sampler.size()));
        if (forbidden.contains(f) || chosen.contains(f)) continue;
        chosen.insert(f);
        out.push_back(std::move(f));
    }
    if (out.size() == k) return out;
    if (sampler.size() > kEnumerationLimit)
        throw InfeasibleError("could not draw " + std::to_string(k) + " fresh noise facts by rejection sampling");
    std::vector<Fact> candidates;
    for (std::uint64_t i = 0; i < sampler.size(); ++i) {
        Fact f = sampler.at(i);
        if (!forbidden.contains(f) && !chosen.contains(f)) candidates.push_back(std::move(f));
    }
    std::size_t missing = k - out.size();
    if (candidates.size() < missing)
        throw InfeasibleError("Herbrand base exhausted: need " + std::to_string(missing) + " more noise facts, " +
                              std::to_string(candidates.size()) + " candidates left");
    for (auto& f : sample(std::move(candidates), missing, rng)) out.push_back(std::move(f));
    return out;
}

} // namespace

FactSet inject_noise(const FactSet& facts, const ClosedWorldSets& cw, double n_minus, double n_plus,
                     const Signature& sig, std::span<const PredicateId> targets, Rng& rng) {
    FactSet current = facts;
    std::vector<Fact> support(cw.support.begin(), cw.support.end());
    for (const auto& f : sample(std::move(support), round_count(n_minus, cw.support.size()), rng)) current.erase(f);

    FactSet forbidden = set_union(set_union(cw.support, cw.consequences), current);
    FactSet target_slice = current.restricted_to(targets);
    std::size_t m = current.size() - target_slice.size();
    std::size_t m_t = target_slice.size();
    double ratio = n_plus / (1.0 - n_plus);

    std::vector<PredicateId> others;
    std::vector<PredicateId> target_preds;
    for (auto p : sig.predicates()) (contains_pred(targets, p) ? target_preds : others).push_back(p);

    FactSet out = current;
    for (auto& f : draw_noise(sig, others, ceil_count(ratio * static_cast<double>(m)), forbidden, rng))
        out.insert(std::move(f));
    for (auto& f : draw_noise(sig, target_preds, ceil_count(ratio * static_cast<double>(m_t)), forbidden, rng))
        out.insert(std::move(f));
    return out;
}

std::uint64_t dataset_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, index); }

namespace {

nlohmann::json graph_summary(const RuleGraph& g, const Signature& sig) {
    nlohmann::json j;
    j["category"] = std::string(to_string(g.category));
    j["depth"] = g.depth;
    j["rules"] = g.rules.size();
    j["or_nodes"] = g.or_nodes.size();
    j["recursive_rules"] = std::count(g.recursive.begin(), g.recursive.end(), true);
    j["target"] = sig.name(head_predicate(g.rules[g.root]));
    return j;
}

} // namespace

GeneratedDataset generate_dataset(const GeneratorConfig& config, std::size_t index) {
    config.validate();
    const std::uint64_t seed = dataset_seed(config.seed, index);

    Rng rule_rng(derive_seed(seed, kRules));
    ResolvedPlan plan = preprocess(config, rule_rng);
    std::vector<RuleGraph> graphs = generate_rule_graphs(config, plan, rule_rng);
    std::vector<PredicateId> targets = plan.targets();
    const Signature& sig = plan.signature;

    Rng fact_rng(derive_seed(seed, kFacts));
    SizeBounds bounds = config.size_bounds();
    auto size_target = static_cast<std::size_t>(
        fact_rng.between(static_cast<std::int64_t>(bounds.min), static_cast<std::int64_t>(bounds.max)));
    ClosedWorldSets cw = generate_closed_world(graphs, sig, targets, config, {size_target, true}, fact_rng);

    Rng eval_rng(derive_seed(seed, kEval));
    ClosedWorldSets eval = generate_closed_world(graphs, sig, targets, config, {size_target, false}, eval_rng);

    Rng ow_rng(derive_seed(seed, kOpenWorld));
    FactSet open = apply_open_world(cw, config.n_ow, config.split_target, ow_rng);
    Rng noise_rng(derive_seed(seed, kNoise));
    FactSet train = inject_noise(open, cw, config.n_noise_minus, config.n_noise_plus, sig, targets, noise_rng);
    FactSet full = set_union(cw.support, cw.consequences);
    Rng noise_full_rng(derive_seed(seed, kNoiseFull));
    FactSet full_noise = inject_noise(full, cw, config.n_noise_minus, config.n_noise_plus, sig, targets, noise_full_rng);

    GeneratedDataset out;
    DatasetBundle& b = out.bundle;
    b.signature = sig;
    b.rules = program_of(graphs);
    b.train = std::move(train);
    b.eval_support = std::move(eval.support);
    b.eval_consequences = std::move(eval.consequences);
    b.support = std::move(cw.support);
    b.consequences = std::move(cw.consequences);
    b.full = std::move(full);
    b.full_noise = std::move(full_noise);
    b.open = std::move(open);
    b.target_predicates = targets;

    nlohmann::json meta;
    meta["config"] = config_to_json(config);
    meta["dataset_index"] = index;
    meta["seed"] = seed;
    meta["size_target"] = size_target;
    nlohmann::json target_names = nlohmann::json::array();
    for (auto t : targets) target_names.push_back(sig.name(t));
    meta["target_predicates"] = target_names;
    nlohmann::json graph_list = nlohmann::json::array();
    for (const auto& g : graphs) graph_list.push_back(graph_summary(g, sig));
    meta["graphs"] = graph_list;
    meta["eval_train_overlap"] = intersection_size(set_union(b.eval_support, b.eval_consequences), b.train);
    b.meta = std::move(meta);
    b.meta["counts"] = bundle_counts(b);

    out.graphs = std::move(graphs);
    return out;
}

} // namespace rulebench
