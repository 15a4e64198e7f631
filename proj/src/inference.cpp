#include "rulebench/inference.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "rulebench/errors.hpp"

namespace rulebench {

namespace {

using Tuple = std::vector<ConstantId>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (auto c : t) {
            h ^= index_of(c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct Relation {
    std::vector<Tuple> rows;
    std::unordered_set<Tuple, TupleHash> seen; // rows plus facts pending insertion
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_first;

    void append(Tuple t) {
        auto row = static_cast<std::uint32_t>(rows.size());
        by_first[index_of(t.front())].push_back(row);
        rows.push_back(std::move(t));
    }
};

struct RowRange {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

constexpr std::int64_t kUnbound = -1;

// Body evaluation order starting at `first`, then repeatedly the atom with
// the most bound argument positions (leftmost on ties).
std::vector<std::size_t> join_order(const Rule& rule, std::size_t first) {
    auto body = rule.body();
    std::vector<bool> bound(rule.variable_count(), false);
    std::vector<bool> used(body.size(), false);
    std::vector<std::size_t> order;
    auto take = [&](std::size_t i) {
        used[i] = true;
        order.push_back(i);
        for (const auto& t : body[i].args)
            if (t.is_variable()) bound[index_of(t.variable_id())] = true;
    };
    take(first);
    while (order.size() < body.size()) {
        std::size_t best = body.size();
        std::size_t best_score = 0;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (used[i]) continue;
            std::size_t score = 0;
            for (const auto& t : body[i].args)
                if (t.is_constant() || bound[index_of(t.variable_id())]) ++score;
            if (best == body.size() || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        take(best);
    }
    return order;
}

class Engine {
public:
    std::vector<Rule> rules;
    InferenceLimits limits;
    std::vector<Relation> relations; // indexed by predicate id
    std::size_t total = 0;
    // plans[r][i]: evaluation order when body atom i ranges over the delta
    std::vector<std::vector<std::vector<std::size_t>>> plans;

    Engine(const Program& program, InferenceLimits lim) : rules(program.begin(), program.end()), limits(lim) {
        plans.reserve(rules.size());
        // emit() must never grow `relations` while a join holds pointers into it
        for (const auto& r : rules) {
            relation(r.head().predicate);
            for (const auto& a : r.body()) relation(a.predicate);
        }
        for (const auto& r : rules) {
            std::vector<std::vector<std::size_t>> per_rule;
            for (std::size_t i = 0; i < r.body().size(); ++i) per_rule.push_back(join_order(r, i));
            plans.push_back(std::move(per_rule));
        }
    }

    Relation& relation(PredicateId p) {
        if (index_of(p) >= relations.size()) relations.resize(index_of(p) + 1);
        return relations[index_of(p)];
    }

    const Relation* find(PredicateId p) const {
        return index_of(p) < relations.size() ? &relations[index_of(p)] : nullptr;
    }

    std::uint32_t size_of(PredicateId p) const {
        const Relation* rel = find(p);
        return rel ? static_cast<std::uint32_t>(rel->rows.size()) : 0;
    }

    void check_deadline() const {
        if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
            throw TimeoutError("inference exceeded its time limit");
    }

    template <class Emit>
    void join(const Rule& rule, const std::vector<std::size_t>& order, std::size_t step,
              const std::vector<RowRange>& ranges, std::vector<std::int64_t>& binding, Emit& emit) const {
        if (step == order.size()) {
            emit(rule, binding);
            return;
        }
        std::size_t ai = order[step];
        const Atom& atom = rule.body()[ai];
        const Relation* rel = find(atom.predicate);
        RowRange range = ranges[ai];
        if (!rel || range.lo >= range.hi) return;

        std::vector<std::uint32_t> newly_bound;
        auto try_row = [&](const Tuple& row) {
            newly_bound.clear();
            bool ok = true;
            for (std::size_t k = 0; k < atom.args.size(); ++k) {
                const Term& t = atom.args[k];
                if (t.is_constant()) {
                    if (t.constant_id() != row[k]) {
                        ok = false;
                        break;
                    }
                    continue;
                }
                auto v = index_of(t.variable_id());
                if (binding[v] == kUnbound) {
                    binding[v] = index_of(row[k]);
                    newly_bound.push_back(v);
                } else if (binding[v] != index_of(row[k])) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                // the nested call reuses newly_bound, so keep a copy for undo
                std::vector<std::uint32_t> undo = newly_bound;
                join(rule, order, step + 1, ranges, binding, emit);
                for (auto v : undo) binding[v] = kUnbound;
            } else {
                for (auto v : newly_bound) binding[v] = kUnbound;
            }
        };

        std::int64_t key = kUnbound;
        const Term& first = atom.args.front();
        if (first.is_constant())
            key = index_of(first.constant_id());
        else if (binding[index_of(first.variable_id())] != kUnbound)
            key = binding[index_of(first.variable_id())];

        if (key != kUnbound) {
            auto it = rel->by_first.find(static_cast<std::uint32_t>(key));
            if (it == rel->by_first.end()) return;
            const auto& ids = it->second;
            auto begin = std::lower_bound(ids.begin(), ids.end(), range.lo);
            for (auto p = begin; p != ids.end() && *p < range.hi; ++p) try_row(rel->rows[*p]);
        } else {
            for (std::uint32_t r = range.lo; r < range.hi; ++r) try_row(rel->rows[r]);
        }
    }

    static Tuple instantiate_head(const Rule& rule, const std::vector<std::int64_t>& binding) {
        Tuple t;
        t.reserve(rule.head().args.size());
        for (const auto& term : rule.head().args) {
            t.push_back(term.is_constant() ? term.constant_id()
                                           : ConstantId{static_cast<std::uint32_t>(binding[index_of(term.variable_id())])});
        }
        return t;
    }

    // Inserts new facts, then evaluates until no rule derives anything new.
    std::size_t add(std::span<const Fact> facts) {
        std::vector<std::uint32_t> delta_lo(relations.size());
        for (std::size_t p = 0; p < relations.size(); ++p) delta_lo[p] = static_cast<std::uint32_t>(relations[p].rows.size());
        std::size_t before = total;
        for (const auto& f : facts) {
            Relation& rel = relation(f.predicate);
            if (rel.seen.insert(f.args).second) {
                rel.append(f.args);
                ++total;
            }
        }
        delta_lo.resize(relations.size(), 0);
        saturate(std::move(delta_lo));
        return total - before;
    }

    void saturate(std::vector<std::uint32_t> delta_lo) {
        std::vector<std::int64_t> binding;
        std::vector<std::pair<PredicateId, Tuple>> pending;
        auto emit = [&](const Rule& rule, const std::vector<std::int64_t>& b) {
            Tuple t = instantiate_head(rule, b);
            Relation& rel = relation(rule.head().predicate);
            if (rel.seen.insert(t).second) pending.emplace_back(rule.head().predicate, std::move(t));
        };
        for (;;) {
            check_deadline();
            std::vector<std::uint32_t> hi(relations.size());
            for (std::size_t p = 0; p < relations.size(); ++p) hi[p] = static_cast<std::uint32_t>(relations[p].rows.size());
            delta_lo.resize(relations.size(), 0);
            auto lo_of = [&](PredicateId p) { return index_of(p) < delta_lo.size() ? delta_lo[index_of(p)] : 0U; };
            auto hi_of = [&](PredicateId p) { return index_of(p) < hi.size() ? hi[index_of(p)] : 0U; };

            pending.clear();
            for (std::size_t r = 0; r < rules.size(); ++r) {
                const Rule& rule = rules[r];
                auto body = rule.body();
                for (std::size_t i = 0; i < body.size(); ++i) {
                    if (lo_of(body[i].predicate) >= hi_of(body[i].predicate)) continue;
                    std::vector<RowRange> ranges(body.size());
                    for (std::size_t j = 0; j < body.size(); ++j) {
                        PredicateId p = body[j].predicate;
                        if (j == i)
                            ranges[j] = {lo_of(p), hi_of(p)};
                        else if (j < i)
                            ranges[j] = {0, lo_of(p)};
                        else
                            ranges[j] = {0, hi_of(p)};
                    }
                    binding.assign(rule.variable_count(), kUnbound);
                    join(rule, plans[r][i], 0, ranges, binding, emit);
                }
            }
            if (pending.empty()) return;
            delta_lo = std::move(hi);
            for (auto& [p, t] : pending) {
                relation(p).append(std::move(t));
                ++total;
            }
        }
    }

    FactSet apply_once(const Rule& rule) {
        FactSet out;
        std::vector<RowRange> ranges;
        for (const auto& a : rule.body()) ranges.push_back({0, size_of(a.predicate)});
        std::vector<std::int64_t> binding(rule.variable_count(), kUnbound);
        auto emit = [&](const Rule& r, const std::vector<std::int64_t>& b) {
            Tuple t = instantiate_head(r, b);
            const Relation* rel = find(r.head().predicate);
            if (rel && rel->seen.contains(t)) return;
            out.insert(Fact{r.head().predicate, std::move(t)});
        };
        join(rule, join_order(rule, 0), 0, ranges, binding, emit);
        return out;
    }

    FactSet snapshot() const {
        std::vector<Fact> all;
        all.reserve(total);
        for (std::uint32_t p = 0; p < relations.size(); ++p)
            for (const auto& row : relations[p].rows) all.push_back(Fact{PredicateId{p}, row});
        std::sort(all.begin(), all.end());
        return FactSet(all.begin(), all.end());
    }
};

} // namespace

struct ClosureBuilder::Impl {
    Engine engine;
};

ClosureBuilder::ClosureBuilder(const Program& program, InferenceLimits limits)
    : impl_(std::make_unique<Impl>(Impl{Engine(program, limits)})) {}
ClosureBuilder::~ClosureBuilder() = default;
ClosureBuilder::ClosureBuilder(ClosureBuilder&&) noexcept = default;
ClosureBuilder& ClosureBuilder::operator=(ClosureBuilder&&) noexcept = default;

std::size_t ClosureBuilder::add(std::span<const Fact> facts) { return impl_->engine.add(facts); }

std::size_t ClosureBuilder::add(const FactSet& facts) {
    std::vector<Fact> v(facts.begin(), facts.end());
    return impl_->engine.add(v);
}

bool ClosureBuilder::contains(const Fact& fact) const {
    const Relation* rel = impl_->engine.find(fact.predicate);
    return rel && rel->seen.contains(fact.args);
}

std::size_t ClosureBuilder::size() const { return impl_->engine.total; }

std::size_t ClosureBuilder::count(PredicateId predicate) const { return impl_->engine.size_of(predicate); }

FactSet ClosureBuilder::facts() const { return impl_->engine.snapshot(); }

FactSet closure(const Program& program, const FactSet& facts, const InferenceLimits& limits) {
    ClosureBuilder builder(program, limits);
    builder.add(facts);
    return builder.facts();
}

FactSet inferred(const Program& program, const FactSet& facts, const InferenceLimits& limits) {
    return set_difference(closure(program, facts, limits), facts);
}

FactSet apply_rule_once(const Rule& rule, const FactSet& facts) {
    Engine engine(Program{}, {});
    std::vector<Fact> v(facts.begin(), facts.end());
    engine.add(v);
    return engine.apply_once(rule);
}

} // namespace rulebench
