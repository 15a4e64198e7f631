#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulebench/bundle.hpp"
#include "rulebench/config.hpp"
#include "rulebench/core.hpp"
#include "rulebench/random.hpp"
#include "rulebench/rulegen.hpp"

namespace rulebench {

/// round(fraction * n) with halves rounded up.
std::size_t round_count(double fraction, std::size_t n);
/// Smallest integer >= x, tolerant of floating error just above an integer.
std::size_t ceil_count(double x);

struct ClosedWorldSets {
    FactSet support;
    FactSet consequences;
    FactSet targets; // consequences on target predicates
};

/// Lower bound on the final training size of a closed world with the given
/// support, consequence and target-fact counts, after open-world deletion and
/// noise.
std::size_t projected_train_size(std::size_t support, std::size_t consequences, std::size_t targets,
                                 const GeneratorConfig& config);

struct PassOptions {
    std::size_t target_size = 0;    // stop once the size estimate reaches this
    bool project_train = true;      // estimate via projected_train_size, else |S| + |C|
};

/// Instantiates the graphs bottom up, one fresh assignment of constants to
/// graph variables per graph and pass, until the size estimate reaches
/// options.target_size. Every n_dg-th pass instantiates every node; other
/// passes skip nodes with probability 1/n_skip and keep one alternative per
/// OR group. Throws InfeasibleError after max_passes passes.
ClosedWorldSets generate_closed_world(std::span<const RuleGraph> graphs, const Signature& sig,
                                      std::span<const PredicateId> targets, const GeneratorConfig& config,
                                      const PassOptions& options, Rng& rng);

/// Removes round(n_ow*|C\T|) facts from C\T and round(n_ow*|T|) from T, or
/// round(n_ow*|C|) from C when split_target is false; returns S plus the rest.
FactSet apply_open_world(const ClosedWorldSets& cw, double n_ow, bool split_target, Rng& rng);

/// Removes round(n_minus*|S|) support facts, then adds fresh ground atoms so
/// that the non-target part and the target slice each hold a fraction n_plus
/// of noise. Noise never lies in S or C or the input set. Throws
/// InfeasibleError when the Herbrand base runs out of candidates.
FactSet inject_noise(const FactSet& facts, const ClosedWorldSets& cw, double n_minus, double n_plus,
                     const Signature& sig, std::span<const PredicateId> targets, Rng& rng);

struct GeneratedDataset {
    DatasetBundle bundle;
    std::vector<RuleGraph> graphs;
};

/// Seed of the dataset with the given index in a run.
std::uint64_t dataset_seed(std::uint64_t seed, std::size_t index);

/// Full pipeline for one dataset seeded with dataset_seed(config.seed, index).
GeneratedDataset generate_dataset(const GeneratorConfig& config, std::size_t index = 0);

} // namespace rulebench
