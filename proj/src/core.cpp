#include "rulebench/core.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rulebench/errors.hpp"

namespace rulebench {

PredicateId Signature::add_predicate(std::string_view name, std::size_t arity) {
    if (arity == 0) throw SignatureError("predicate '" + std::string(name) + "' must have arity >= 1");
    if (auto it = predicate_index_.find(name); it != predicate_index_.end()) {
        const auto& entry = predicates_[index_of(it->second)];
        if (entry.arity != arity) {
            throw SignatureError("predicate '" + std::string(name) + "' used with arity " + std::to_string(arity) +
                                 " but declared with arity " + std::to_string(entry.arity));
        }
        return it->second;
    }
    auto id = PredicateId{static_cast<std::uint32_t>(predicates_.size())};
    predicates_.push_back({std::string(name), arity});
    predicate_index_.emplace(std::string(name), id);
    return id;
}

ConstantId Signature::add_constant(std::string_view name) {
    if (auto it = constant_index_.find(name); it != constant_index_.end()) return it->second;
    auto id = ConstantId{static_cast<std::uint32_t>(constants_.size())};
    constants_.emplace_back(name);
    constant_index_.emplace(std::string(name), id);
    return id;
}

std::optional<PredicateId> Signature::find_predicate(std::string_view name) const {
    if (auto it = predicate_index_.find(name); it != predicate_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<ConstantId> Signature::find_constant(std::string_view name) const {
    if (auto it = constant_index_.find(name); it != constant_index_.end()) return it->second;
    return std::nullopt;
}

const std::string& Signature::name(PredicateId id) const {
    if (index_of(id) >= predicates_.size()) throw SignatureError("unknown predicate id");
    return predicates_[index_of(id)].name;
}

const std::string& Signature::name(ConstantId id) const {
    if (index_of(id) >= constants_.size()) throw SignatureError("unknown constant id");
    return constants_[index_of(id)];
}

std::size_t Signature::arity(PredicateId id) const {
    if (index_of(id) >= predicates_.size()) throw SignatureError("unknown predicate id");
    return predicates_[index_of(id)].arity;
}

std::vector<PredicateId> Signature::predicates() const {
    std::vector<PredicateId> out;
    out.reserve(predicates_.size());
    for (std::uint32_t i = 0; i < predicates_.size(); ++i) out.push_back(PredicateId{i});
    return out;
}

std::vector<ConstantId> Signature::constants() const {
    std::vector<ConstantId> out;
    out.reserve(constants_.size());
    for (std::uint32_t i = 0; i < constants_.size(); ++i) out.push_back(ConstantId{i});
    return out;
}

Atom Fact::to_atom() const {
    Atom atom{predicate, {}};
    atom.args.reserve(args.size());
    for (auto c : args) atom.args.push_back(Term::constant(c));
    return atom;
}

std::optional<Fact> as_fact(const Atom& atom) {
    Fact fact{atom.predicate, {}};
    fact.args.reserve(atom.args.size());
    for (const auto& t : atom.args) {
        if (t.is_variable()) return std::nullopt;
        fact.args.push_back(t.constant_id());
    }
    return fact;
}

void check_arity(const Signature& sig, const Atom& atom) {
    std::size_t expected = sig.arity(atom.predicate);
    if (atom.args.size() != expected) {
        throw SignatureError("predicate '" + sig.name(atom.predicate) + "' has arity " + std::to_string(expected) +
                             ", got " + std::to_string(atom.args.size()) + " arguments");
    }
}

namespace {

void collect_variable_bound(const Atom& atom, std::uint32_t& bound) {
    for (const auto& t : atom.args)
        if (t.is_variable()) bound = std::max(bound, index_of(t.variable_id()) + 1);
}

Atom renumber(const Atom& atom, std::vector<std::int64_t>& mapping, std::uint32_t& next) {
    Atom out{atom.predicate, {}};
    out.args.reserve(atom.args.size());
    for (const auto& t : atom.args) {
        if (t.is_constant()) {
            out.args.push_back(t);
            continue;
        }
        auto& slot = mapping[index_of(t.variable_id())];
        if (slot < 0) slot = next++;
        out.args.push_back(Term::variable(VariableId{static_cast<std::uint32_t>(slot)}));
    }
    return out;
}

} // namespace

Rule::Rule(Atom head, std::vector<Atom> body, std::vector<std::string> variable_names)
    : head_(std::move(head)), body_(std::move(body)), names_(std::move(variable_names)) {
    if (body_.empty()) throw RuleError("rule body must contain at least one atom");

    std::uint32_t bound = 0;
    collect_variable_bound(head_, bound);
    for (const auto& a : body_) collect_variable_bound(a, bound);
    if (names_.size() < bound) {
        for (std::uint32_t v = static_cast<std::uint32_t>(names_.size()); v < bound; ++v)
            names_.push_back("X" + std::to_string(v));
    }

    std::vector<bool> in_body(names_.size(), false);
    for (const auto& a : body_)
        for (const auto& t : a.args)
            if (t.is_variable()) in_body[index_of(t.variable_id())] = true;
    for (const auto& t : head_.args) {
        if (t.is_variable() && !in_body[index_of(t.variable_id())]) {
            throw RuleError("head variable " + names_[index_of(t.variable_id())] + " does not occur in the body");
        }
    }

    std::vector<std::int64_t> mapping(names_.size(), -1);
    std::uint32_t next = 0;
    canonical_.reserve(body_.size() + 1);
    canonical_.push_back(renumber(head_, mapping, next));
    for (const auto& a : body_) canonical_.push_back(renumber(a, mapping, next));
}

std::vector<VariableId> Rule::head_variables() const {
    std::vector<VariableId> out;
    for (const auto& t : head_.args)
        if (t.is_variable() && std::find(out.begin(), out.end(), t.variable_id()) == out.end())
            out.push_back(t.variable_id());
    return out;
}

Program::Program(std::vector<Rule> rules) {
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    rules_ = std::move(rules);
}

bool Program::insert(Rule rule) {
    auto it = std::lower_bound(rules_.begin(), rules_.end(), rule);
    if (it != rules_.end() && *it == rule) return false;
    rules_.insert(it, std::move(rule));
    return true;
}

FactSet FactSet::restricted_to(std::span<const PredicateId> preds) const {
    FactSet out;
    for (const auto& f : facts_)
        if (std::find(preds.begin(), preds.end(), f.predicate) != preds.end()) out.facts_.insert(out.facts_.end(), f);
    return out;
}

FactSet FactSet::without_predicates(std::span<const PredicateId> preds) const {
    FactSet out;
    for (const auto& f : facts_)
        if (std::find(preds.begin(), preds.end(), f.predicate) == preds.end()) out.facts_.insert(out.facts_.end(), f);
    return out;
}

FactSet set_union(const FactSet& a, const FactSet& b) {
    FactSet out = a;
    for (const auto& f : b) out.insert(f);
    return out;
}

FactSet set_intersection(const FactSet& a, const FactSet& b) {
    FactSet out;
    const FactSet& small = a.size() <= b.size() ? a : b;
    const FactSet& large = a.size() <= b.size() ? b : a;
    for (const auto& f : small)
        if (large.contains(f)) out.insert(f);
    return out;
}

FactSet set_difference(const FactSet& a, const FactSet& b) {
    FactSet out;
    for (const auto& f : a)
        if (!b.contains(f)) out.insert(f);
    return out;
}

bool is_subset(const FactSet& a, const FactSet& b) {
    if (a.size() > b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const Fact& f) { return b.contains(f); });
}

std::size_t intersection_size(const FactSet& a, const FactSet& b) {
    const FactSet& small = a.size() <= b.size() ? a : b;
    const FactSet& large = a.size() <= b.size() ? b : a;
    return static_cast<std::size_t>(
        std::count_if(small.begin(), small.end(), [&](const Fact& f) { return large.contains(f); }));
}

PredicateId head_predicate(const Rule& rule) { return rule.head().predicate; }

Program rules_with_head(const Program& program, PredicateId pred) {
    Program out;
    for (const auto& r : program)
        if (head_predicate(r) == pred) out.insert(r);
    return out;
}

bool is_chain_rule(const Rule& rule) {
    auto binary_vars = [](const Atom& a) {
        return a.args.size() == 2 && a.args[0].is_variable() && a.args[1].is_variable();
    };
    if (!binary_vars(rule.head())) return false;
    auto body = rule.body();
    if (!std::all_of(body.begin(), body.end(), binary_vars)) return false;
    std::vector<VariableId> chain{body.front().args[0].variable_id()};
    for (const auto& a : body) {
        if (a.args[0].variable_id() != chain.back()) return false;
        chain.push_back(a.args[1].variable_id());
    }
    std::vector<VariableId> sorted = chain;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    return rule.head().args[0].variable_id() == chain.front() && rule.head().args[1].variable_id() == chain.back();
}

Signature signature_of(const Program& program, const FactSet& facts, const Signature& sig) {
    Signature out;
    auto add_atom = [&](const Atom& a) {
        out.add_predicate(sig.name(a.predicate), a.args.size());
        for (const auto& t : a.args)
            if (t.is_constant()) out.add_constant(sig.name(t.constant_id()));
    };
    for (const auto& r : program) {
        add_atom(r.head());
        for (const auto& a : r.body()) add_atom(a);
    }
    for (const auto& f : facts) {
        out.add_predicate(sig.name(f.predicate), f.args.size());
        for (auto c : f.args) out.add_constant(sig.name(c));
    }
    return out;
}

std::uint64_t herbrand_base_size(const Signature& sig) {
    const std::uint64_t n = sig.constant_count();
    std::uint64_t total = 0;
    for (auto p : sig.predicates()) {
        std::uint64_t atoms = 1;
        for (std::size_t i = 0; i < sig.arity(p); ++i) {
            if (n != 0 && atoms > std::numeric_limits<std::uint64_t>::max() / n)
                throw std::overflow_error("Herbrand base size exceeds 64 bits");
            atoms *= n;
        }
        if (total > std::numeric_limits<std::uint64_t>::max() - atoms)
            throw std::overflow_error("Herbrand base size exceeds 64 bits");
        total += atoms;
    }
    return total;
}

namespace {

void append_args(std::string& out, const Atom& atom, const Signature& sig, const Rule* rule) {
    out += sig.name(atom.predicate);
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        if (i > 0) out += ',';
        const auto& t = atom.args[i];
        if (t.is_constant())
            out += sig.name(t.constant_id());
        else
            out += rule ? rule->variable_name(t.variable_id()) : "X" + std::to_string(index_of(t.variable_id()));
    }
    out += ')';
}

} // namespace

std::string to_string(const Fact& fact, const Signature& sig) {
    std::string out;
    append_args(out, fact.to_atom(), sig, nullptr);
    return out;
}

std::string to_string(const Rule& rule, const Signature& sig) {
    std::string out;
    append_args(out, rule.head(), sig, &rule);
    out += " :- ";
    bool first = true;
    for (const auto& a : rule.body()) {
        if (!first) out += ", ";
        first = false;
        append_args(out, a, sig, &rule);
    }
    return out;
}

} // namespace rulebench
