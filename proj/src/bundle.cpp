#include "rulebench/bundle.hpp"

#include <fstream>
#include <sstream>

#include "rulebench/errors.hpp"
#include "rulebench/inference.hpp"
#include "rulebench/prolog_io.hpp"

namespace rulebench {

namespace fs = std::filesystem;
using nlohmann::json;

FactSet DatasetBundle::targets() const { return consequences.restricted_to(target_predicates); }

std::vector<std::pair<std::string, std::string>> bundle_files(const DatasetBundle& b) {
    const Signature& sig = b.signature;
    return {
        {"rules.pl", serialize_rules(b.rules, sig)},
        {"train.pl", serialize_facts(b.train, sig)},
        {"eval/support.pl", serialize_facts(b.eval_support, sig)},
        {"eval/consequences.pl", serialize_facts(b.eval_consequences, sig)},
        {"aux/support.pl", serialize_facts(b.support, sig)},
        {"aux/consequences.pl", serialize_facts(b.consequences, sig)},
        {"aux/full.pl", serialize_facts(b.full, sig)},
        {"aux/full_noise.pl", serialize_facts(b.full_noise, sig)},
        {"aux/open.pl", serialize_facts(b.open, sig)},
        {"meta.json", b.meta.dump(2) + "\n"},
    };
}

json bundle_counts(const DatasetBundle& b) {
    json c;
    c["rules"] = b.rules.size();
    c["train"] = b.train.size();
    c["eval_support"] = b.eval_support.size();
    c["eval_consequences"] = b.eval_consequences.size();
    c["support"] = b.support.size();
    c["consequences"] = b.consequences.size();
    c["targets"] = b.targets().size();
    c["full"] = b.full.size();
    c["full_noise"] = b.full_noise.size();
    c["open"] = b.open.size();
    return c;
}

std::vector<std::string> check_bundle(const DatasetBundle& b) {
    std::vector<std::string> out;
    auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

    if (inferred(b.rules, b.support) != b.consequences)
        fail("aux/consequences.pl differs from the consequences of rules.pl over aux/support.pl");
    if (inferred(b.rules, b.eval_support) != b.eval_consequences)
        fail("eval/consequences.pl differs from the consequences of rules.pl over eval/support.pl");
    if (set_union(b.support, b.consequences) != b.full)
        fail("aux/full.pl is not the union of aux/support.pl and aux/consequences.pl");
    if (!is_subset(b.support, b.open)) fail("aux/support.pl is not contained in aux/open.pl");
    if (!is_subset(b.open, b.full)) fail("aux/open.pl is not contained in aux/full.pl");
    if (!is_subset(b.consequences, b.full_noise)) fail("aux/full_noise.pl does not contain all of aux/consequences.pl");
    if (intersection_size(set_difference(b.full_noise, b.full), b.full) != 0)
        fail("aux/full_noise.pl noise overlaps aux/full.pl");
    if (!is_subset(set_difference(b.full, b.full_noise), b.support))
        fail("aux/full_noise.pl drops facts outside aux/support.pl");
    FactSet noise = set_difference(b.train, b.open);
    if (intersection_size(noise, b.full) != 0) fail("train.pl noise overlaps aux/full.pl");
    if (!is_subset(set_difference(b.open, b.train), b.support))
        fail("train.pl drops facts of aux/open.pl outside aux/support.pl");

    if (b.meta.contains("counts")) {
        json actual = bundle_counts(b);
        for (const auto& [key, value] : actual.items()) {
            if (!b.meta["counts"].contains(key) || b.meta["counts"][key] != value)
                fail("meta.json count '" + key + "' does not match the files");
        }
    }
    return out;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

void write_bundle(const DatasetBundle& bundle, const fs::path& dir) {
    std::error_code ec;
    fs::path partial = dir;
    partial += ".partial";
    fs::remove_all(partial, ec);
    fs::create_directories(partial / "eval", ec);
    fs::create_directories(partial / "aux", ec);
    if (ec) throw IoError("cannot create " + partial.string() + ": " + ec.message());
    for (const auto& [name, text] : bundle_files(bundle)) write_text_file(partial / name, text);

    if (fs::exists(dir)) {
        if (!fs::exists(dir / "meta.json"))
            throw IoError(dir.string() + " exists and is not a dataset directory; refusing to replace it");
        fs::remove_all(dir, ec);
        if (ec) throw IoError("cannot replace " + dir.string() + ": " + ec.message());
    }
    fs::rename(partial, dir, ec);
    if (ec) throw IoError("cannot move " + partial.string() + " to " + dir.string() + ": " + ec.message());
}

namespace {

FactSet read_facts(const fs::path& dir, const std::string& name, Signature& sig) {
    fs::path path = dir / name;
    if (!fs::exists(path)) throw IoError("dataset " + dir.string() + " is missing " + name);
    try {
        return parse_facts(read_text_file(path), sig);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), name);
    }
}

} // namespace

DatasetBundle load_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("dataset directory " + dir.string() + " does not exist");
    DatasetBundle b;
    fs::path rules_path = dir / "rules.pl";
    if (!fs::exists(rules_path)) throw IoError("dataset " + dir.string() + " is missing rules.pl");
    try {
        b.rules = parse_rules(read_text_file(rules_path), b.signature);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), "rules.pl");
    }
    b.train = read_facts(dir, "train.pl", b.signature);
    b.eval_support = read_facts(dir, "eval/support.pl", b.signature);
    b.eval_consequences = read_facts(dir, "eval/consequences.pl", b.signature);
    b.support = read_facts(dir, "aux/support.pl", b.signature);
    b.consequences = read_facts(dir, "aux/consequences.pl", b.signature);
    b.full = read_facts(dir, "aux/full.pl", b.signature);
    b.full_noise = read_facts(dir, "aux/full_noise.pl", b.signature);
    b.open = read_facts(dir, "aux/open.pl", b.signature);

    fs::path meta_path = dir / "meta.json";
    if (!fs::exists(meta_path)) throw IoError("dataset " + dir.string() + " is missing meta.json");
    try {
        b.meta = json::parse(read_text_file(meta_path));
    } catch (const json::parse_error& e) {
        throw IoError("meta.json is malformed: " + std::string(e.what()));
    }
    if (!b.meta.is_object()) throw IoError("meta.json is malformed: expected an object");
    if (!b.meta.contains("target_predicates") || !b.meta["target_predicates"].is_array())
        throw IoError("meta.json is malformed: missing target_predicates");
    for (const auto& name : b.meta["target_predicates"]) {
        if (!name.is_string()) throw IoError("meta.json is malformed: target_predicates must hold names");
        auto id = b.signature.find_predicate(name.get<std::string>());
        if (!id) throw BundleError("target predicate " + name.get<std::string>() + " does not occur in the dataset");
        b.target_predicates.push_back(*id);
    }
    return b;
}

DatasetBundle read_bundle(const fs::path& dir) {
    DatasetBundle b = load_bundle(dir);
    auto problems = check_bundle(b);
    if (!problems.empty()) {
        std::string msg = "dataset " + dir.string() + " is inconsistent:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw BundleError(msg);
    }
    return b;
}

} // namespace rulebench
