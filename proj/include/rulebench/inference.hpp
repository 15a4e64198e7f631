#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rulebench/core.hpp"

namespace rulebench {

struct InferenceLimits {
    // Evaluation throws TimeoutError once this point is passed.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Least fixpoint of the program over the facts, input facts included.
FactSet closure(const Program& program, const FactSet& facts, const InferenceLimits& limits = {});

/// closure(program, facts) minus facts.
FactSet inferred(const Program& program, const FactSet& facts, const InferenceLimits& limits = {});

/// Head instances derivable by one application of the rule that are not
/// already in facts.
FactSet apply_rule_once(const Rule& rule, const FactSet& facts);

/// Forward-chaining store that stays closed under the program while facts are
/// added. Each add() runs semi-naive evaluation seeded with the new facts only.
class ClosureBuilder {
public:
    explicit ClosureBuilder(const Program& program, InferenceLimits limits = {});
    ~ClosureBuilder();
    ClosureBuilder(ClosureBuilder&&) noexcept;
    ClosureBuilder& operator=(ClosureBuilder&&) noexcept;

    /// Adds the facts and saturates. Returns the number of facts that were not
    /// present before, added or derived.
    std::size_t add(std::span<const Fact> facts);
    std::size_t add(const FactSet& facts);

    bool contains(const Fact& fact) const;
    std::size_t size() const;
    /// Facts on one predicate.
    std::size_t count(PredicateId predicate) const;
    FactSet facts() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace rulebench
