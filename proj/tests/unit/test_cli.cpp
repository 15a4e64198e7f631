#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rulebench/bundle.hpp"
#include "rulebench/cli.hpp"

using namespace rulebench;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("rulebench_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir) {
    fs::path p = dir / "config.json";
    write_text_file(p, R"({"category": "chain", "max_depth": 2, "num_rules": 2, "num_predicates": 11,
                         "num_constants": 100, "size_class": "XS", "seed": 1})");
    return p;
}

// Ancestor-style dataset written by hand.
fs::path family_dataset(const fs::path& root) {
    fs::path d = root / "family";
    fs::create_directories(d / "eval");
    fs::create_directories(d / "aux");
    write_text_file(d / "rules.pl", "gp(X,Z) :- parent(X,Y), parent(Y,Z).\n");
    std::string support = "parent(a,b).\nparent(b,c).\nparent(c,d).\n";
    std::string cons = "gp(a,c).\ngp(b,d).\n";
    write_text_file(d / "train.pl", support + cons);
    write_text_file(d / "eval" / "support.pl", support);
    write_text_file(d / "eval" / "consequences.pl", cons);
    write_text_file(d / "aux" / "support.pl", support);
    write_text_file(d / "aux" / "consequences.pl", cons);
    write_text_file(d / "aux" / "full.pl", support + cons);
    write_text_file(d / "aux" / "full_noise.pl", support + cons);
    write_text_file(d / "aux" / "open.pl", support + cons);
    write_text_file(d / "meta.json", R"({"target_predicates": ["gp"]})");
    return d;
}

} // namespace

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run({}).code, kExitUsage); }

TEST(Cli, UnknownOptionIsUsageError) { EXPECT_EQ(run({"infer", "--bogus"}).code, kExitUsage); }

TEST(Cli, HelpSucceeds) {
    CliResult r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("generate"), std::string::npos);
}

TEST(Cli, GenerateIsDeterministic) {
    fs::path root = scratch("generate");
    fs::path config = write_config(root);
    CliResult a = run({"generate", config.string(), "--out", (root / "a").string(), "--count", "2"});
    CliResult b = run({"generate", config.string(), "--out", (root / "b").string(), "--count", "2"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    for (const char* ds : {"dataset_000", "dataset_001"}) {
        DatasetBundle x = read_bundle(root / "a" / ds);
        for (const auto& [name, text] : bundle_files(x))
            EXPECT_EQ(read_text_file(root / "b" / ds / name), text) << ds << "/" << name;
    }
    EXPECT_NE(read_text_file(root / "a" / "dataset_000" / "train.pl"),
              read_text_file(root / "a" / "dataset_001" / "train.pl"));
    fs::remove_all(root);
}

TEST(Cli, GenerateSeedOverrideChangesOutput) {
    fs::path root = scratch("seed");
    fs::path config = write_config(root);
    ASSERT_EQ(run({"generate", config.string(), "-o", (root / "a").string()}).code, kExitOk);
    ASSERT_EQ(run({"generate", config.string(), "-o", (root / "b").string(), "--seed", "99"}).code, kExitOk);
    EXPECT_NE(read_text_file(root / "a" / "dataset_000" / "train.pl"),
              read_text_file(root / "b" / "dataset_000" / "train.pl"));
    auto meta = nlohmann::json::parse(read_text_file(root / "b" / "dataset_000" / "meta.json"));
    EXPECT_EQ(meta["config"]["seed"], 99);
    fs::remove_all(root);
}

TEST(Cli, GenerateRejectsBadConfig) {
    fs::path root = scratch("badconfig");
    fs::path config = write_config(root);
    CliResult r = run({"generate", config.string(), "-o", (root / "out").string(), "--set", "n_ow=1.5"});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_NE(r.err.find("n_ow"), std::string::npos);
    EXPECT_EQ(run({"generate", (root / "absent.json").string(), "-o", (root / "out").string()}).code, kExitInput);
    fs::remove_all(root);
}

TEST(Cli, GenerateReportsInfeasible) {
    fs::path root = scratch("infeasible");
    fs::path config = write_config(root);
    CliResult r = run({"generate", config.string(), "-o", (root / "out").string(), "--set", "num_constants=1", "--set",
                 "size_class=S", "--set", "max_passes=50"});
    EXPECT_EQ(r.code, kExitInfeasible) << r.err;
    fs::remove_all(root);
}

TEST(Cli, InferPrintsClosure) {
    fs::path root = scratch("infer");
    fs::path d = family_dataset(root);
    CliResult all = run({"infer", "--rules", (d / "rules.pl").string(), "--facts", (d / "eval" / "support.pl").string()});
    ASSERT_EQ(all.code, kExitOk) << all.err;
    EXPECT_EQ(all.out, "gp(a,c).\ngp(b,d).\nparent(a,b).\nparent(b,c).\nparent(c,d).\n");
    CliResult only = run({"infer", "--rules", (d / "rules.pl").string(), "--facts", (d / "eval" / "support.pl").string(),
                    "--exclude-input"});
    EXPECT_EQ(only.out, "gp(a,c).\ngp(b,d).\n");
    fs::remove_all(root);
}

TEST(Cli, InferParseErrorNamesFile) {
    fs::path root = scratch("inferbad");
    write_text_file(root / "bad.pl", "p(X) :- q(X)\n");
    write_text_file(root / "facts.pl", "q(a).\n");
    CliResult r = run({"infer", "--rules", (root / "bad.pl").string(), "--facts", (root / "facts.pl").string()});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_NE(r.err.find("bad.pl"), std::string::npos) << r.err;
    fs::remove_all(root);
}

TEST(Cli, EvalOriginalRulesScoreOne) {
    fs::path root = scratch("evalsame");
    fs::path d = family_dataset(root);
    CliResult r = run({"eval", "--dataset", d.string(), "--learned", (d / "rules.pl").string(), "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    for (const char* k : {"h_score", "precision", "recall", "f1", "r_score", "h_accuracy"})
        EXPECT_EQ(j[k]["value"], 1.0) << k;
    EXPECT_EQ(j["h_distance"], 0);
    fs::remove_all(root);
}

TEST(Cli, EvalEmptyLearnedFile) {
    fs::path root = scratch("evalempty");
    fs::path d = family_dataset(root);
    write_text_file(root / "empty.pl", "");
    CliResult r = run({"eval", "--dataset", d.string(), "--learned", (root / "empty.pl").string(), "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["h_score"]["value"], 0.0);
    EXPECT_TRUE(j["std_confidence"]["undefined"].get<bool>());
    EXPECT_EQ(j["r_score"]["value"], 0.0);
    fs::remove_all(root);
}

TEST(Cli, EvalPartialRuleReportsRScore) {
    fs::path root = scratch("evalpartial");
    fs::path d = family_dataset(root);
    write_text_file(root / "learned.pl", "gp(X,Y) :- parent(X,Y).\n");
    CliResult r = run({"eval", "--dataset", d.string(), "--learned", (root / "learned.pl").string(), "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("r_score"), std::string::npos);
    CliResult j = run({"eval", "--dataset", d.string(), "--learned", (root / "learned.pl").string(), "--format", "json"});
    auto parsed = nlohmann::json::parse(j.out);
    // head cost 0, one matched atom at 1/4, one placeholder: (5/4) / 3
    EXPECT_EQ(parsed["r_score"]["numerator"], 7);
    EXPECT_EQ(parsed["r_score"]["denominator"], 12);
    fs::remove_all(root);
}

TEST(Cli, EvalWarnsOnUnknownIgnoredPredicate) {
    fs::path root = scratch("evalwarn");
    fs::path d = family_dataset(root);
    CliResult r = run({"eval", "--dataset", d.string(), "--learned", (d / "rules.pl").string(), "--ignore-predicates",
                 "nosuch"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.err.find("nosuch"), std::string::npos);
    fs::remove_all(root);
}

TEST(Cli, EvalRejectsBrokenDataset) {
    fs::path root = scratch("evalbroken");
    fs::path d = family_dataset(root);
    write_text_file(d / "eval" / "consequences.pl", "gp(a,c).\n");
    CliResult r = run({"eval", "--dataset", d.string(), "--learned", (d / "rules.pl").string()});
    EXPECT_EQ(r.code, kExitBundle) << r.err;
    EXPECT_EQ(run({"eval", "--dataset", (root / "nowhere").string(), "--learned", (d / "rules.pl").string()}).code,
              kExitInput);
    EXPECT_EQ(run({"eval", "--dataset", d.string(), "--learned", (d / "rules.pl").string(), "--format", "xml"}).code,
              kExitInput);
    fs::remove_all(root);
}

TEST(Cli, StatsSummarisesDatasets) {
    fs::path root = scratch("stats");
    fs::path config = write_config(root);
    ASSERT_EQ(run({"generate", config.string(), "-o", (root / "out").string(), "-n", "3"}).code, kExitOk);
    CliResult r = run({"stats", (root / "out" / "dataset_000").string(), (root / "out" / "dataset_001").string(),
                 (root / "out" / "dataset_002").string(), "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 1U);
    EXPECT_EQ(j[0]["datasets"], 3);
    EXPECT_EQ(j[0]["rules"]["min"], 2);
    fs::remove_all(root);
}
