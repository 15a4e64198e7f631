#pragma once
// Dataset directory layout:
//
//   rules.pl                 ground-truth rules
//   train.pl                 training facts (open world, with noise)
//   eval/support.pl          evaluation support facts
//   eval/consequences.pl     their consequences under rules.pl
//   aux/support.pl           closed-world support facts
//   aux/consequences.pl      closed-world consequences
//   aux/full.pl              support plus consequences
//   aux/full_noise.pl        full set with noise, all consequences kept
//   aux/open.pl              full set after open-world deletion
//   meta.json                configuration echo, seed, targets and counts

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rulebench/core.hpp"

namespace rulebench {

struct DatasetBundle {
    Signature signature;
    Program rules;
    FactSet train;
    FactSet eval_support;
    FactSet eval_consequences;
    FactSet support;
    FactSet consequences;
    FactSet full;
    FactSet full_noise;
    FactSet open;
    std::vector<PredicateId> target_predicates;
    nlohmann::json meta = nlohmann::json::object();

    /// Consequences on target predicates.
    FactSet targets() const;
};

/// Bundle file name -> serialized contents, in layout order.
std::vector<std::pair<std::string, std::string>> bundle_files(const DatasetBundle& bundle);

/// Per-set fact counts as stored under meta["counts"].
nlohmann::json bundle_counts(const DatasetBundle& bundle);

/// Invariant violations, each naming the sets involved; empty when consistent.
std::vector<std::string> check_bundle(const DatasetBundle& bundle);

/// Writes into "<dir>.partial" and renames it into place. An existing
/// directory is replaced only if it holds a meta.json.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Reads and validates. Missing or malformed files raise IoError or
/// ParseError; invariant violations raise BundleError.
DatasetBundle read_bundle(const std::filesystem::path& dir);

/// Reads without invariant checks.
DatasetBundle load_bundle(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace rulebench
