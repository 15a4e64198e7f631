#include "rulebench/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "rulebench/errors.hpp"

namespace rulebench {

namespace {

Rational ratio(std::uint64_t num, std::uint64_t den) {
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

MetricValue defined(Rational v) { return {v, false}; }
MetricValue undefined(Rational fallback) { return {fallback, true}; }

} // namespace

std::uint64_t herbrand_distance(const FactSet& expected, const FactSet& learned) {
    std::size_t common = intersection_size(expected, learned);
    return expected.size() + learned.size() - 2 * common;
}

MetricValue h_accuracy(const FactSet& expected, const FactSet& learned, std::uint64_t u) {
    if (u == 0) return undefined(0);
    return defined(Rational(1) - ratio(herbrand_distance(expected, learned), u));
}

MetricValue h_score(const FactSet& expected, const FactSet& learned) {
    std::size_t common = intersection_size(expected, learned);
    std::size_t all = expected.size() + learned.size() - common;
    if (all == 0) return defined(1);
    return defined(ratio(common, all));
}

MetricValue std_confidence(const FactSet& expected, const FactSet& learned) {
    if (learned.empty()) return undefined(0);
    return defined(ratio(intersection_size(expected, learned), learned.size()));
}

ConfusionCounts confusion(const FactSet& expected, const FactSet& learned, std::uint64_t u) {
    ConfusionCounts c;
    c.u = u;
    c.tp = intersection_size(expected, learned);
    c.fp = learned.size() - c.tp;
    c.fn = expected.size() - c.tp;
    std::uint64_t all = c.tp + c.fp + c.fn;
    if (all > u) {
        c.overflow = true;
        c.tn = 0;
    } else {
        c.tn = u - all;
    }
    return c;
}

IrMetrics ir_metrics(const ConfusionCounts& c) {
    IrMetrics m;
    m.accuracy = c.u == 0 ? undefined(0) : defined(ratio(c.tp + c.tn, c.u));
    m.precision = c.tp + c.fp == 0 ? undefined(0) : defined(ratio(c.tp, c.tp + c.fp));
    m.recall = c.tp + c.fn == 0 ? undefined(0) : defined(ratio(c.tp, c.tp + c.fn));
    std::uint64_t f1_den = 2 * c.tp + c.fp + c.fn;
    m.f1 = f1_den == 0 ? undefined(1) : defined(ratio(2 * c.tp, f1_den));
    return m;
}

// ---------------------------------------------------------------------------

namespace {

bool same_term(const Term& t1, const Term& t2, const Renaming& w) {
    if (t1.is_constant()) return t2.is_constant() && t1.constant_id() == t2.constant_id();
    const auto& image = w.at(index_of(t1.variable_id()));
    return image && t2.is_variable() && *image == t2.variable_id();
}

// Mismatching argument positions of two atoms with the same predicate.
std::int64_t mismatches(const Atom& a1, const Atom& a2, const Renaming& w) {
    std::int64_t k = 0;
    for (std::size_t i = 0; i < a1.args.size(); ++i)
        if (!same_term(a1.args[i], a2.args[i], w)) ++k;
    return k;
}

bool comparable(const Atom& a1, const Atom& a2) {
    return a1.predicate == a2.predicate && a1.args.size() == a2.args.size();
}

} // namespace

Rational atom_distance(const Atom& a1, const Atom& a2, const Renaming& renaming) {
    if (!comparable(a1, a2)) return 1;
    if (a1.args.empty()) return 0;
    return Rational(mismatches(a1, a2, renaming), 2 * static_cast<std::int64_t>(a1.args.size()));
}

Rational atom_distance(const Atom&, Placeholder) { return 1; }
Rational atom_distance(Placeholder, const Atom&) { return 1; }

namespace {

// Injective maps of `count` source variables into `targets` targets. At most
// `max_sinks` sources go to a sink.
template <class Visit>
void for_each_renaming(std::size_t count, std::size_t targets, std::size_t max_sinks, Visit&& visit) {
    Renaming w(count);
    std::vector<bool> used(targets, false);
    auto rec = [&](auto&& self, std::size_t i, std::size_t sinks) -> void {
        if (i == count) {
            visit(w);
            return;
        }
        for (std::size_t t = 0; t < targets; ++t) {
            if (used[t]) continue;
            used[t] = true;
            w[i] = VariableId{static_cast<std::uint32_t>(t)};
            self(self, i + 1, sinks);
            used[t] = false;
        }
        if (sinks < max_sinks) {
            w[i] = std::nullopt;
            self(self, i + 1, sinks + 1);
        }
    };
    rec(rec, 0, 0);
}

} // namespace

std::vector<Renaming> enumerate_renamings(const Rule& r1, const Rule& r2) {
    std::vector<Renaming> out;
    for_each_renaming(r1.variable_count(), r2.variable_count(), r1.variable_count(),
                      [&](const Renaming& w) { out.push_back(w); });
    return out;
}

std::vector<Pairing> enumerate_pairings(const Rule& r1, const Rule& r2) {
    auto b1 = r1.body();
    auto b2 = r2.body();
    const bool first_longer = b1.size() >= b2.size();

    // predicate groups in order of first occurrence in r1 then r2
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    std::map<PredicateId, std::size_t> group_of;
    auto group = [&](PredicateId p) {
        auto [it, inserted] = group_of.try_emplace(p, groups.size());
        if (inserted) groups.emplace_back();
        return it->second;
    };
    for (std::size_t i = 0; i < b1.size(); ++i) groups[group(b1[i].predicate)].first.push_back(i);
    for (std::size_t j = 0; j < b2.size(); ++j) groups[group(b2[j].predicate)].second.push_back(j);

    std::vector<Pairing> out;
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    auto emit = [&] {
        Pairing p;
        std::vector<bool> used1(b1.size(), false), used2(b2.size(), false);
        for (auto [i, j] : matched) {
            p.pairs.emplace_back(i, j);
            used1[i] = true;
            used2[j] = true;
        }
        if (first_longer) {
            for (std::size_t i = 0; i < b1.size(); ++i)
                if (!used1[i]) p.pairs.emplace_back(i, std::nullopt);
        } else {
            for (std::size_t j = 0; j < b2.size(); ++j)
                if (!used2[j]) p.pairs.emplace_back(std::nullopt, j);
        }
        std::sort(p.pairs.begin(), p.pairs.end());
        out.push_back(std::move(p));
    };

    // per group, every injective map of the smaller side into the larger
    auto rec = [&](auto&& self, std::size_t g, std::size_t k, std::vector<bool>& taken) -> void {
        if (g == groups.size()) {
            emit();
            return;
        }
        const auto& [left, right] = groups[g];
        bool left_small = left.size() <= right.size();
        const auto& small = left_small ? left : right;
        const auto& large = left_small ? right : left;
        if (k == small.size()) {
            std::vector<bool> next(groups.size() > g + 1 ? std::max(groups[g + 1].first.size(), groups[g + 1].second.size()) : 0, false);
            self(self, g + 1, 0, next);
            return;
        }
        for (std::size_t t = 0; t < large.size(); ++t) {
            if (taken[t]) continue;
            taken[t] = true;
            matched.emplace_back(left_small ? small[k] : large[t], left_small ? large[t] : small[k]);
            self(self, g, k + 1, taken);
            matched.pop_back();
            taken[t] = false;
        }
    };
    std::vector<bool> taken(groups.empty() ? 0 : std::max(groups[0].first.size(), groups[0].second.size()), false);
    rec(rec, 0, 0, taken);
    return out;
}

Rational match_cost(const Rule& r1, const Rule& r2, const Renaming& renaming, const Pairing& pairing) {
    Rational total = atom_distance(r1.head(), r2.head(), renaming);
    for (const auto& [i, j] : pairing.pairs) {
        if (i && j)
            total += atom_distance(r1.body()[*i], r2.body()[*j], renaming);
        else
            total += 1;
    }
    return total;
}

namespace {

// Minimum-cost perfect assignment on a square matrix (Hungarian method).
std::int64_t min_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return 0;
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<std::int64_t> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            std::size_t i0 = p[j0], j1 = 0;
            std::int64_t delta = kInf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t total = 0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
    return total;
}

struct BodyGroup {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    std::int64_t arity = 0;
};

} // namespace

Rational rule_distance(const Rule& r1, const Rule& r2) {
    auto b1 = r1.body();
    auto b2 = r2.body();
    const std::size_t longer = std::max(b1.size(), b2.size());

    std::map<std::pair<PredicateId, std::size_t>, BodyGroup> by_pred;
    for (std::size_t i = 0; i < b1.size(); ++i) by_pred[{b1[i].predicate, b1[i].args.size()}].left.push_back(i);
    for (std::size_t j = 0; j < b2.size(); ++j) by_pred[{b2[j].predicate, b2[j].args.size()}].right.push_back(j);
    std::vector<BodyGroup> groups;
    std::size_t matched = 0;
    for (auto& [key, g] : by_pred) {
        if (g.left.empty() || g.right.empty()) continue;
        g.arity = static_cast<std::int64_t>(key.second);
        matched += std::min(g.left.size(), g.right.size());
        groups.push_back(std::move(g));
    }
    const Rational leftovers(static_cast<std::int64_t>(longer - matched));

    // A sink never matches, so a map that leaves an r2 variable unused is
    // never better than one that uses it: only maps with as many non-sink
    // images as possible need to be tried.
    const std::size_t v1 = r1.variable_count();
    const std::size_t v2 = r2.variable_count();
    const std::size_t sinks = v1 > v2 ? v1 - v2 : 0;

    std::optional<Rational> best;
    std::vector<std::vector<std::int64_t>> cost;
    for_each_renaming(v1, v2, sinks, [&](const Renaming& w) {
        if (best && *best == 0) return;
        Rational total = atom_distance(r1.head(), r2.head(), w) + leftovers;
        for (const auto& g : groups) {
            std::size_t n = std::max(g.left.size(), g.right.size());
            cost.assign(n, std::vector<std::int64_t>(n, 0));
            for (std::size_t a = 0; a < g.left.size(); ++a)
                for (std::size_t b = 0; b < g.right.size(); ++b) cost[a][b] = mismatches(b1[g.left[a]], b2[g.right[b]], w);
            std::int64_t k = min_assignment(cost);
            if (k != 0 && g.arity != 0) total += Rational(k, 2 * g.arity);
        }
        if (!best || total < *best) best = total;
    });
    return *best / Rational(static_cast<std::int64_t>(longer + 1));
}

MetricValue r_score(const Program& original, const Program& learned) {
    if (original.empty()) return undefined(0);
    Rational sum;
    for (const auto& r1 : original) {
        std::optional<Rational> best;
        for (const auto& r2 : learned) {
            if (head_predicate(r2) != head_predicate(r1)) continue;
            Rational d = rule_distance(r1, r2);
            if (!best || d < *best) best = d;
        }
        sum += best.value_or(Rational(1));
    }
    return defined(Rational(1) - sum / Rational(static_cast<std::int64_t>(original.size())));
}

// ---------------------------------------------------------------------------

MetricsReport evaluate_against(const Program& original, const Program& learned, const FactSet& support,
                               const FactSet& expected, const Signature& sig, const EvaluationOptions& options) {
    FactSet predicted = inferred(learned, support, options.limits);
    if (!options.ignore_predicates.empty()) predicted = predicted.without_predicates(options.ignore_predicates);
    std::uint64_t u = herbrand_base_size(signature_of(original, support, sig));

    MetricsReport r;
    r.expected_facts = expected.size();
    r.learned_facts = predicted.size();
    r.h_distance = herbrand_distance(expected, predicted);
    r.h_accuracy = h_accuracy(expected, predicted, u);
    r.h_score = h_score(expected, predicted);
    r.std_confidence = std_confidence(expected, predicted);
    r.counts = confusion(expected, predicted, u);
    IrMetrics ir = ir_metrics(r.counts);
    r.accuracy = ir.accuracy;
    r.precision = ir.precision;
    r.recall = ir.recall;
    r.f1 = ir.f1;
    r.r_score = r_score(original, learned);
    return r;
}

MetricsReport evaluate(const Program& original, const Program& learned, const FactSet& support, const Signature& sig,
                       const EvaluationOptions& options) {
    return evaluate_against(original, learned, support, inferred(original, support, options.limits), sig, options);
}

} // namespace rulebench
