#include "rulebench/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "rulebench/bundle.hpp"
#include "rulebench/config.hpp"
#include "rulebench/errors.hpp"
#include "rulebench/factgen.hpp"
#include "rulebench/inference.hpp"
#include "rulebench/prolog_io.hpp"

namespace rulebench {

namespace fs = std::filesystem;

ReportFormat parse_format(std::string_view name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw ConfigError("format", "unknown format '" + std::string(name) + "' (expected text, csv or json)");
}

namespace {

struct NamedMetric {
    const char* name;
    const MetricValue* value;
};

std::vector<NamedMetric> named_metrics(const MetricsReport& r) {
    return {{"h_accuracy", &r.h_accuracy}, {"h_score", &r.h_score},     {"std_confidence", &r.std_confidence},
            {"accuracy", &r.accuracy},     {"precision", &r.precision}, {"recall", &r.recall},
            {"f1", &r.f1},                 {"r_score", &r.r_score}};
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

} // namespace

std::string format_report(const MetricsReport& r, ReportFormat format) {
    std::ostringstream os;
    const auto metrics = named_metrics(r);
    const auto& c = r.counts;
    switch (format) {
    case ReportFormat::Text: {
        auto line = [&](std::string_view name, const std::string& value) {
            os << name << std::string(16 - std::min<std::size_t>(15, name.size()), ' ') << value << '\n';
        };
        line("h_distance", std::to_string(r.h_distance));
        for (const auto& m : metrics)
            line(m.name, m.value->value.to_decimal() + (m.value->undefined ? " (undefined)" : ""));
        line("tp", std::to_string(c.tp));
        line("fp", std::to_string(c.fp));
        line("fn", std::to_string(c.fn));
        line("tn", std::to_string(c.tn) + (c.overflow ? " (clamped: inferences exceed the Herbrand base)" : ""));
        line("u", std::to_string(c.u));
        line("expected_facts", std::to_string(r.expected_facts));
        line("learned_facts", std::to_string(r.learned_facts));
        break;
    }
    case ReportFormat::Csv: {
        os << "h_distance";
        for (const auto& m : metrics) os << ',' << m.name;
        os << ",tp,fp,fn,tn,u,expected_facts,learned_facts,universe_overflow,undefined\n";
        os << r.h_distance;
        for (const auto& m : metrics) os << ',' << m.value->value.to_decimal();
        os << ',' << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << ',' << c.u << ',' << r.expected_facts << ','
           << r.learned_facts << ',' << (c.overflow ? "true" : "false") << ',';
        bool first = true;
        for (const auto& m : metrics) {
            if (!m.value->undefined) continue;
            os << (first ? "" : ";") << m.name;
            first = false;
        }
        os << '\n';
        break;
    }
    case ReportFormat::Json: {
        os << "{\n  \"h_distance\": " << r.h_distance << ",\n";
        for (const auto& m : metrics) {
            const MetricValue& v = *m.value;
            os << "  " << json_string(m.name) << ": {\"value\": " << v.value.to_decimal()
               << ", \"numerator\": " << v.value.numerator() << ", \"denominator\": " << v.value.denominator()
               << ", \"undefined\": " << (v.undefined ? "true" : "false") << "},\n";
        }
        os << "  \"counts\": {\"tp\": " << c.tp << ", \"fp\": " << c.fp << ", \"fn\": " << c.fn << ", \"tn\": " << c.tn
           << ", \"u\": " << c.u << "},\n";
        os << "  \"universe_overflow\": " << (c.overflow ? "true" : "false") << ",\n";
        os << "  \"expected_facts\": " << r.expected_facts << ",\n";
        os << "  \"learned_facts\": " << r.learned_facts << "\n}\n";
        break;
    }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

ColumnStats column(const std::vector<std::size_t>& values) {
    ColumnStats s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    std::int64_t sum = 0;
    for (auto v : values) sum += static_cast<std::int64_t>(v);
    s.mean = Rational(sum, static_cast<std::int64_t>(values.size()));
    return s;
}

std::string size_label(const nlohmann::json& config) {
    bool custom = (config.contains("facts_min") && !config["facts_min"].is_null()) ||
                  (config.contains("facts_max") && !config["facts_max"].is_null());
    if (custom) {
        GeneratorConfig c = config_from_json(config);
        SizeBounds b = c.size_bounds();
        return std::to_string(b.min) + "-" + std::to_string(b.max);
    }
    return config.value("size_class", std::string("?"));
}

} // namespace

std::vector<GroupStats> dataset_stats(const std::vector<fs::path>& dirs) {
    struct Rows {
        std::vector<std::size_t> rules, facts, predicates, constants;
    };
    std::map<std::tuple<std::string, std::string, std::size_t>, Rows> groups;
    for (const auto& dir : dirs) {
        DatasetBundle b = read_bundle(dir);
        if (!b.meta.contains("config") || !b.meta["config"].is_object())
            throw IoError("meta.json in " + dir.string() + " is malformed: missing config");
        const auto& cfg = b.meta["config"];
        std::string category = cfg.value("category", std::string("?"));
        std::size_t depth = cfg.value("max_depth", std::size_t{0});
        Signature used = signature_of(b.rules, b.train, b.signature);
        Rows& rows = groups[{category, size_label(cfg), depth}];
        rows.rules.push_back(b.rules.size());
        rows.facts.push_back(b.train.size());
        rows.predicates.push_back(used.predicate_count());
        rows.constants.push_back(used.constant_count());
    }
    std::vector<GroupStats> out;
    for (const auto& [key, rows] : groups) {
        GroupStats g;
        std::tie(g.category, g.size, g.depth) = key;
        g.datasets = rows.rules.size();
        g.rules = column(rows.rules);
        g.facts = column(rows.facts);
        g.predicates = column(rows.predicates);
        g.constants = column(rows.constants);
        out.push_back(std::move(g));
    }
    return out;
}

std::string format_stats(const std::vector<GroupStats>& stats, ReportFormat format) {
    std::ostringstream os;
    auto cols = [](const GroupStats& g) {
        return std::vector<std::pair<const char*, const ColumnStats*>>{
            {"rules", &g.rules}, {"facts", &g.facts}, {"predicates", &g.predicates}, {"constants", &g.constants}};
    };
    switch (format) {
    case ReportFormat::Text: {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s %-10s %5s %8s  %-20s %-26s %-20s %-20s\n", "category", "size", "depth",
                      "datasets", "rules min/avg/max", "facts min/avg/max", "preds min/avg/max", "consts min/avg/max");
        os << buf;
        for (const auto& g : stats) {
            std::snprintf(buf, sizeof buf, "%-8s %-10s %5zu %8zu", g.category.c_str(), g.size.c_str(), g.depth,
                          g.datasets);
            os << buf;
            const int widths[] = {20, 26, 20, 20};
            int i = 0;
            for (const auto& [name, c] : cols(g)) {
                std::string cell = std::to_string(c->min) + "/" + c->mean.to_decimal(2) + "/" + std::to_string(c->max);
                std::snprintf(buf, sizeof buf, "  %-*s", widths[i++] - 1, cell.c_str());
                os << buf;
            }
            os << '\n';
        }
        break;
    }
    case ReportFormat::Csv: {
        os << "category,size,depth,datasets";
        for (const char* name : {"rules", "facts", "predicates", "constants"})
            os << ',' << name << "_min," << name << "_avg," << name << "_max";
        os << '\n';
        for (const auto& g : stats) {
            os << g.category << ',' << g.size << ',' << g.depth << ',' << g.datasets;
            for (const auto& [name, c] : cols(g)) os << ',' << c->min << ',' << c->mean.to_decimal(6) << ',' << c->max;
            os << '\n';
        }
        break;
    }
    case ReportFormat::Json: {
        os << "[";
        bool first = true;
        for (const auto& g : stats) {
            os << (first ? "\n" : ",\n") << "  {\"category\": " << json_string(g.category)
               << ", \"size\": " << json_string(g.size) << ", \"depth\": " << g.depth << ", \"datasets\": " << g.datasets;
            for (const auto& [name, c] : cols(g))
                os << ", \"" << name << "\": {\"min\": " << c->min << ", \"avg\": " << c->mean.to_decimal(6)
                   << ", \"max\": " << c->max << "}";
            os << "}";
            first = false;
        }
        os << (stats.empty() ? "]\n" : "\n]\n");
        break;
    }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string default_format() {
    const char* env = std::getenv("RULEBENCH_FORMAT");
    return env && *env ? env : "text";
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(list);
    while (std::getline(is, cur, ','))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

Program read_rules_file(const std::string& path, Signature& sig) {
    try {
        return parse_rules(read_text_file(path), sig);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), path);
    }
}

FactSet read_facts_file(const std::string& path, Signature& sig) {
    try {
        return parse_facts(read_text_file(path), sig);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), path);
    }
}

struct GenerateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t count = 1;
    std::vector<std::string> overrides;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    GeneratorConfig config = load_config(a.config);
    for (const auto& o : a.overrides) apply_override(config, o);
    if (a.seed) config.seed = *a.seed;
    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) throw IoError("cannot create " + a.out + ": " + ec.message());
    for (std::size_t i = 0; i < a.count; ++i) {
        GeneratedDataset d = generate_dataset(config, i);
        char name[32];
        std::snprintf(name, sizeof name, "dataset_%03zu", i);
        fs::path dir = fs::path(a.out) / name;
        write_bundle(d.bundle, dir);
        out << dir.string() << ": " << d.bundle.rules.size() << " rules, " << d.bundle.train.size()
            << " training facts\n";
    }
    return kExitOk;
}

struct InferArgs {
    std::string rules;
    std::string facts;
    bool exclude_input = false;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
    Signature sig;
    Program rules = read_rules_file(a.rules, sig);
    FactSet facts = read_facts_file(a.facts, sig);
    FactSet result = a.exclude_input ? inferred(rules, facts) : closure(rules, facts);
    out << serialize_facts(result, sig);
    return kExitOk;
}

struct EvalArgs {
    std::string dataset;
    std::string learned;
    std::string ignore;
    std::string format;
    std::optional<double> timeout;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    ReportFormat format = parse_format(a.format);
    DatasetBundle b = read_bundle(a.dataset);
    Program learned = read_rules_file(a.learned, b.signature);
    EvaluationOptions options;
    for (const auto& name : split_names(a.ignore)) {
        if (auto id = b.signature.find_predicate(name))
            options.ignore_predicates.push_back(*id);
        else
            err << "warning: ignored predicate " << name << " does not occur in the dataset or learned rules\n";
    }
    if (a.timeout) {
        if (*a.timeout <= 0) throw ConfigError("timeout", "must be positive");
        options.limits.deadline = std::chrono::steady_clock::now() +
                                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(*a.timeout));
    }
    MetricsReport report = evaluate_against(b.rules, learned, b.eval_support, b.eval_consequences, b.signature, options);
    out << format_report(report, format);
    return kExitOk;
}

int cmd_stats(const std::vector<std::string>& dirs, const std::string& format, std::ostream& out) {
    ReportFormat f = parse_format(format);
    std::vector<fs::path> paths(dirs.begin(), dirs.end());
    out << format_stats(dataset_stats(paths), f);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic rule-learning benchmark generator and evaluator", "rulebench"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate dataset directories from a JSON configuration");
    generate->add_option("config", gen.config, "Configuration file (flat JSON object)")->required();
    generate->add_option("--out,-o", gen.out, "Output directory; datasets go to <out>/dataset_NNN")->required();
    generate->add_option("--seed", gen.seed, "Override the configured seed");
    generate->add_option("--count,-n", gen.count, "Number of datasets")->check(CLI::PositiveNumber);
    generate->add_option("--set", gen.overrides, "Override a configuration key, key=value (repeatable)");

    InferArgs inf;
    auto* infer = app.add_subcommand("infer", "Print the closure of a fact file under a rule file");
    infer->add_option("--rules", inf.rules, "Rule file")->required();
    infer->add_option("--facts", inf.facts, "Fact file")->required();
    infer->add_flag("--exclude-input", inf.exclude_input, "Print only inferred facts");

    EvalArgs ev;
    ev.format = default_format();
    auto* eval = app.add_subcommand("eval", "Evaluate learned rules against a dataset");
    eval->add_option("--dataset", ev.dataset, "Dataset directory")->required();
    eval->add_option("--learned", ev.learned, "Learned rule file")->required();
    eval->add_option("--ignore-predicates", ev.ignore, "Comma-separated predicates whose learned facts are dropped");
    eval->add_option("--format", ev.format, "text, csv or json (default: $RULEBENCH_FORMAT or text)");
    eval->add_option("--timeout", ev.timeout, "Inference time limit in seconds");

    std::vector<std::string> stat_dirs;
    std::string stat_format = default_format();
    auto* stats = app.add_subcommand("stats", "Summarise dataset directories by category, size and depth");
    stats->add_option("dirs", stat_dirs, "Dataset directories")->required();
    stats->add_option("--format", stat_format, "text, csv or json (default: $RULEBENCH_FORMAT or text)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen, out);
        if (infer->parsed()) return cmd_infer(inf, out);
        if (eval->parsed()) return cmd_eval(ev, out, err);
        if (stats->parsed()) return cmd_stats(stat_dirs, stat_format, out);
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const BundleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBundle;
    } catch (const TimeoutError& e) {
        err << "error: " << e.what() << '\n';
        return kExitTimeout;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}

} // namespace rulebench
