#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "govsim/analytics.hpp"
#include "govsim/scenarios.hpp"

namespace govsim::report {

enum class Format { JsonDoc, Csv };

Format parse_format(const std::string& s);

/// RFC-4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

/// Fractions are written with six decimals.
std::string fixed6(double v);

json metrics_json(const analytics::MetricsSummary& m);
json report_json(const scenarios::ScenarioReport& r);

/// key,value rows with dotted paths into the report document.
std::string report_csv(const scenarios::ScenarioReport& r);
std::string timeline_csv(const std::vector<scenarios::TimelineEntry>& t);
std::string series_csv(const scenarios::Series& s);
std::string metrics_csv(const analytics::MetricsSummary& m);

struct Manifest {
    std::string config_path;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string output_directory;
    std::vector<std::string> artifacts;
};

json manifest_json(const Manifest& m);

/// Writes events.jsonl, the report, metrics.csv, timeline.csv, one CSV per
/// series and manifest.json into `dir`.
Manifest write_artifacts(const scenarios::ScenarioRun& run, const std::filesystem::path& dir, Format format,
                         const std::string& config_path);

}  // namespace govsim::report
