#pragma once

// Datalog syntax objects: signature, terms, atoms, facts, rules, programs
// and fact sets. Everything except Signature is an immutable value; the
// signature grows while files are parsed and is read-only afterwards.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rulebench {

enum class PredicateId : std::uint32_t {};
enum class ConstantId : std::uint32_t {};
enum class VariableId : std::uint32_t {};

constexpr std::uint32_t index_of(PredicateId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(ConstantId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(VariableId id) noexcept { return static_cast<std::uint32_t>(id); }

/// Interned predicate and constant names. Predicate identity is the name; a
/// second declaration with another arity is rejected.
class Signature {
public:
    PredicateId add_predicate(std::string_view name, std::size_t arity);
    ConstantId add_constant(std::string_view name);

    std::optional<PredicateId> find_predicate(std::string_view name) const;
    std::optional<ConstantId> find_constant(std::string_view name) const;

    const std::string& name(PredicateId id) const;
    const std::string& name(ConstantId id) const;
    std::size_t arity(PredicateId id) const;

    std::size_t predicate_count() const noexcept { return predicates_.size(); }
    std::size_t constant_count() const noexcept { return constants_.size(); }

    std::vector<PredicateId> predicates() const;
    std::vector<ConstantId> constants() const;

private:
    struct PredicateEntry {
        std::string name;
        std::size_t arity;
    };
    std::vector<PredicateEntry> predicates_;
    std::vector<std::string> constants_;
    std::map<std::string, PredicateId, std::less<>> predicate_index_;
    std::map<std::string, ConstantId, std::less<>> constant_index_;
};

class Term {
public:
    static constexpr Term variable(VariableId v) noexcept { return Term(Kind::Variable, index_of(v)); }
    static constexpr Term constant(ConstantId c) noexcept { return Term(Kind::Constant, index_of(c)); }

    constexpr bool is_variable() const noexcept { return kind_ == Kind::Variable; }
    constexpr bool is_constant() const noexcept { return kind_ == Kind::Constant; }
    constexpr VariableId variable_id() const noexcept { return VariableId{id_}; }
    constexpr ConstantId constant_id() const noexcept { return ConstantId{id_}; }

    friend constexpr auto operator<=>(const Term&, const Term&) = default;

private:
    enum class Kind : std::uint8_t { Variable, Constant };
    constexpr Term(Kind kind, std::uint32_t id) noexcept : kind_(kind), id_(id) {}

    Kind kind_;
    std::uint32_t id_;
};

struct Atom {
    PredicateId predicate{};
    std::vector<Term> args;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Ground atom.
struct Fact {
    PredicateId predicate{};
    std::vector<ConstantId> args;

    Atom to_atom() const;

    friend auto operator<=>(const Fact&, const Fact&) = default;
};

/// The atom as a fact when it has no variables.
std::optional<Fact> as_fact(const Atom& atom);

/// Throws SignatureError when the argument count differs from the declared arity.
void check_arity(const Signature& sig, const Atom& atom);

/// head :- body. Variables are rule-local and numbered densely from 0; the
/// optional names are used only for printing. Equality and ordering are up to
/// consistent variable renaming (alpha-equivalence).
class Rule {
public:
    Rule(Atom head, std::vector<Atom> body, std::vector<std::string> variable_names = {});

    const Atom& head() const noexcept { return head_; }
    std::span<const Atom> body() const noexcept { return body_; }
    std::size_t variable_count() const noexcept { return names_.size(); }
    const std::string& variable_name(VariableId v) const { return names_.at(index_of(v)); }
    const std::vector<std::string>& variable_names() const noexcept { return names_; }

    /// Distinct variables in order of first occurrence in the head.
    std::vector<VariableId> head_variables() const;

    friend bool operator==(const Rule& a, const Rule& b) { return a.canonical_ == b.canonical_; }
    friend auto operator<=>(const Rule& a, const Rule& b) { return a.canonical_ <=> b.canonical_; }

private:
    Atom head_;
    std::vector<Atom> body_;
    std::vector<std::string> names_;
    // head followed by body with variables renumbered by first occurrence
    std::vector<Atom> canonical_;
};

/// Set of rules; duplicates up to variable renaming are dropped.
class Program {
public:
    Program() = default;
    explicit Program(std::vector<Rule> rules);

    /// False when an alpha-equivalent rule is already present.
    bool insert(Rule rule);

    std::size_t size() const noexcept { return rules_.size(); }
    bool empty() const noexcept { return rules_.empty(); }
    auto begin() const noexcept { return rules_.begin(); }
    auto end() const noexcept { return rules_.end(); }
    std::span<const Rule> rules() const noexcept { return rules_; }

    friend bool operator==(const Program&, const Program&) = default;

private:
    std::vector<Rule> rules_; // sorted, unique
};

/// Set of ground facts with deterministic iteration order.
class FactSet {
public:
    using const_iterator = std::set<Fact>::const_iterator;

    FactSet() = default;
    FactSet(std::initializer_list<Fact> facts) : facts_(facts) {}
    template <class It>
    FactSet(It first, It last) : facts_(first, last) {}

    bool insert(Fact fact) { return facts_.insert(std::move(fact)).second; }
    bool erase(const Fact& fact) { return facts_.erase(fact) > 0; }
    bool contains(const Fact& fact) const { return facts_.contains(fact); }

    std::size_t size() const noexcept { return facts_.size(); }
    bool empty() const noexcept { return facts_.empty(); }
    const_iterator begin() const noexcept { return facts_.begin(); }
    const_iterator end() const noexcept { return facts_.end(); }

    /// Facts whose predicate is in preds.
    FactSet restricted_to(std::span<const PredicateId> preds) const;
    FactSet without_predicates(std::span<const PredicateId> preds) const;

    friend bool operator==(const FactSet&, const FactSet&) = default;

private:
    std::set<Fact> facts_;
};

FactSet set_union(const FactSet& a, const FactSet& b);
FactSet set_intersection(const FactSet& a, const FactSet& b);
FactSet set_difference(const FactSet& a, const FactSet& b);
bool is_subset(const FactSet& a, const FactSet& b);
std::size_t intersection_size(const FactSet& a, const FactSet& b);

PredicateId head_predicate(const Rule& rule);
Program rules_with_head(const Program& program, PredicateId pred);

/// Binary chain rule p0(X1,Xm+1) :- p1(X1,X2), ..., pm(Xm,Xm+1) with distinct variables.
bool is_chain_rule(const Rule& rule);

/// A fresh signature holding exactly the predicates and constants that occur
/// in the program and the facts (names copied from sig).
Signature signature_of(const Program& program, const FactSet& facts, const Signature& sig);

/// Number of ground atoms over the signature: sum of |constants|^arity.
/// Throws std::overflow_error beyond 64 bits.
std::uint64_t herbrand_base_size(const Signature& sig);

std::string to_string(const Fact& fact, const Signature& sig);
std::string to_string(const Rule& rule, const Signature& sig);

} // namespace rulebench
