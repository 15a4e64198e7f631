#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rulebench/metrics.hpp"

namespace rulebench {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInput = 2,      // parse, configuration or file errors
    kExitInfeasible = 3, // generation budget or size unreachable
    kExitBundle = 4,     // dataset fails its consistency checks
    kExitTimeout = 5,
};

enum class ReportFormat { Text, Csv, Json };

/// "text", "csv" or "json"; throws ConfigError otherwise.
ReportFormat parse_format(std::string_view name);

std::string format_report(const MetricsReport& report, ReportFormat format);

/// min / mean / max of one column over a group of datasets.
struct ColumnStats {
    std::size_t min = 0;
    Rational mean;
    std::size_t max = 0;
};

struct GroupStats {
    std::string category;
    std::string size;
    std::size_t depth = 0;
    std::size_t datasets = 0;
    ColumnStats rules;
    ColumnStats facts; // training facts
    ColumnStats predicates;
    ColumnStats constants;
};

/// Statistics of dataset directories grouped by category, size and depth.
std::vector<GroupStats> dataset_stats(const std::vector<std::filesystem::path>& dirs);
std::string format_stats(const std::vector<GroupStats>& stats, ReportFormat format);

/// Entry point of the command-line tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rulebench
