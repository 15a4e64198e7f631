#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rulebench/core.hpp"
#include "rulebench/inference.hpp"
#include "rulebench/rational.hpp"

namespace rulebench {

// ---------------------------------------------------------------------------
// fact-set metrics

/// A ratio that may be undefined (zero denominator). Undefined values carry
/// the documented fallback in `value`.
struct MetricValue {
    Rational value;
    bool undefined = false;

    friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0; // learned but not expected
    std::uint64_t fn = 0; // expected but not learned
    std::uint64_t tn = 0;
    std::uint64_t u = 0;  // Herbrand base size
    bool overflow = false; // |I ∪ I'| exceeded u, tn clamped at 0

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct IrMetrics {
    MetricValue accuracy;
    MetricValue precision;
    MetricValue recall;
    MetricValue f1;
};

/// |I ∪ I'| - |I ∩ I'|.
std::uint64_t herbrand_distance(const FactSet& expected, const FactSet& learned);
/// 1 - h_d/u; undefined (value 0) when u = 0.
MetricValue h_accuracy(const FactSet& expected, const FactSet& learned, std::uint64_t u);
/// |I ∩ I'| / |I ∪ I'|; 1 when both are empty.
MetricValue h_score(const FactSet& expected, const FactSet& learned);
/// |I ∩ I'| / |I'|; undefined (value 0) when I' is empty.
MetricValue std_confidence(const FactSet& expected, const FactSet& learned);
ConfusionCounts confusion(const FactSet& expected, const FactSet& learned, std::uint64_t u);
/// Standard formulas. Precision and recall fall back to 0 and f1 to 1 (the
/// value consistent with an empty-vs-empty h_score) when undefined.
IrMetrics ir_metrics(const ConfusionCounts& counts);

// ---------------------------------------------------------------------------
// rule distances

/// Variable map from the first rule's variables (by index) to the second
/// rule's variables; nullopt maps to a sink that equals nothing.
using Renaming = std::vector<std::optional<VariableId>>;

/// Empty body slot.
struct Placeholder {};

/// Body-atom alignment by body index; nullopt is the placeholder.
struct Pairing {
    std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> pairs;

    friend bool operator==(const Pairing&, const Pairing&) = default;
};

/// 1 for different predicates or arities; otherwise the number of argument
/// positions where the renamed first term differs from the second, over 2n.
Rational atom_distance(const Atom& a1, const Atom& a2, const Renaming& renaming);
Rational atom_distance(const Atom& a, Placeholder);
Rational atom_distance(Placeholder, const Atom& a);

/// All injective maps from vars(r1) into vars(r2) plus sinks.
std::vector<Renaming> enumerate_renamings(const Rule& r1, const Rule& r2);

/// All maximum same-predicate matchings between the bodies. Unmatched atoms
/// of the longer body (of r1 when equal) pair with the placeholder; unmatched
/// atoms of the shorter body are left out.
std::vector<Pairing> enumerate_pairings(const Rule& r1, const Rule& r2);

/// Head distance plus the summed atom distances of the pairing, under the renaming.
Rational match_cost(const Rule& r1, const Rule& r2, const Renaming& renaming, const Pairing& pairing);

/// Best match cost over all renamings and pairings, divided by the longer
/// body length plus one. Exhausts the renamings and solves each pairing
/// choice as an assignment problem per predicate.
Rational rule_distance(const Rule& r1, const Rule& r2);

/// 1 - mean over r1 in R of the distance to the closest rule of R' with the
/// same head predicate (distance 1 when there is none). Undefined for empty R.
MetricValue r_score(const Program& original, const Program& learned);

// ---------------------------------------------------------------------------
// evaluation

struct EvaluationOptions {
    std::vector<PredicateId> ignore_predicates; // dropped from the learned inferences
    InferenceLimits limits;
};

struct MetricsReport {
    std::uint64_t h_distance = 0;
    MetricValue h_accuracy;
    MetricValue h_score;
    MetricValue std_confidence;
    MetricValue accuracy;
    MetricValue precision;
    MetricValue recall;
    MetricValue f1;
    MetricValue r_score;
    ConfusionCounts counts;
    std::size_t expected_facts = 0;
    std::size_t learned_facts = 0;
};

/// Compares the inferences of the learned rules with those of the original
/// rules over the support facts. u covers the symbols of the original rules
/// and the support facts.
MetricsReport evaluate(const Program& original, const Program& learned, const FactSet& support, const Signature& sig,
                       const EvaluationOptions& options = {});

/// Same, with the expected inferences supplied.
MetricsReport evaluate_against(const Program& original, const Program& learned, const FactSet& support,
                               const FactSet& expected, const Signature& sig, const EvaluationOptions& options = {});

} // namespace rulebench
