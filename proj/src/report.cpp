#include "govsim/report.hpp"

#include <cstdio>
#include <fstream>

#include "govsim/config.hpp"

namespace govsim::report {

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return fixed6(v.get<double>());
    if (v.is_null()) return "";
    return v.dump();
}

void flatten(const json& v, const std::string& path, std::string& out) {
    if (v.is_object() && !v.empty()) {
        for (const auto& [k, child] : v.items()) flatten(child, path.empty() ? k : path + "." + k, out);
    } else if (v.is_array() && !v.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "." + std::to_string(i), out);
    } else {
        out += csv_field(path) + "," + csv_field(v.is_structured() ? v.dump() : scalar_text(v)) + "\n";
    }
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "json-doc") return Format::JsonDoc;
    if (s == "csv") return Format::Csv;
    throw PreconditionError("unknown format: " + s);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

json metrics_json(const analytics::MetricsSummary& m) {
    auto dist = [](const analytics::Distribution& d) {
        return json{{"mean", d.mean}, {"std", d.std}, {"min", d.min}, {"median", d.median}, {"max", d.max}};
    };
    json holders = json::array();
    for (const auto& h : m.holding_durations) {
        json intervals = json::array();
        for (const auto& iv : h.intervals)
            intervals.push_back({{"acquired", iv.acquired},
                                 {"disposed", iv.disposed ? json(*iv.disposed) : json(nullptr)},
                                 {"single_proposal_holder", iv.single_proposal_holder()}});
        holders.push_back({{"proposer", h.proposer}, {"proposal", h.proposal}, {"intervals", intervals}});
    }
    return {{"proposals_count", m.proposals_count},
            {"decided_count", m.decided_count},
            {"participation", dist(m.participation)},
            {"h_index", m.h_index},
            {"supermajority_rate", m.supermajority_rate},
            {"turnout_gas_corr", m.turnout_gas_corr},
            {"holding_durations", holders}};
}

json report_json(const scenarios::ScenarioReport& r) {
    json series = json::array();
    for (const auto& [name, s] : r.series) series.push_back({{"name", name}, {"points", s.size()}});
    return {{"scenario", r.scenario},
            {"seed", r.seed},
            {"succeeded", r.succeeded},
            {"attacker_profit", r.attacker_profit},
            {"platform_loss", r.platform_loss},
            {"details", r.details},
            {"metrics", r.metrics ? metrics_json(*r.metrics) : json(nullptr)},
            {"timeline_entries", r.timeline.size()},
            {"series", series}};
}

std::string report_csv(const scenarios::ScenarioReport& r) {
    std::string out = "key,value\n";
    flatten(report_json(r), "", out);
    return out;
}

std::string timeline_csv(const std::vector<scenarios::TimelineEntry>& t) {
    std::string out = "block,event,detail\n";
    for (const auto& e : t) out += std::to_string(e.block) + "," + csv_field(e.event) + "," + csv_field(e.detail) + "\n";
    return out;
}

std::string series_csv(const scenarios::Series& s) {
    std::string out = "x,y\n";
    for (const auto& [x, y] : s) out += fixed6(x) + "," + fixed6(y) + "\n";
    return out;
}

std::string metrics_csv(const analytics::MetricsSummary& m) { return analytics::csv_header() + "\n" + analytics::csv_row(m) + "\n"; }

json manifest_json(const Manifest& m) {
    return {{"config_path", m.config_path},
            {"config_hash", m.config_hash},
            {"seed", m.seed},
            {"output_directory", m.output_directory},
            {"artifacts", m.artifacts}};
}

Manifest write_artifacts(const scenarios::ScenarioRun& run, const std::filesystem::path& dir, Format format,
                         const std::string& config_path) {
    std::filesystem::create_directories(dir);
    Manifest m;
    m.config_path = config_path;
    m.config_hash = config::sha256_hex(config::canonical(run.config));
    m.seed = run.report.seed;
    m.output_directory = dir.generic_string();

    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        m.artifacts.push_back(name);
    };
    emit("resolved_config.json", run.config.dump(2) + "\n");
    emit("events.jsonl", to_jsonl(run.world.log()));
    if (format == Format::JsonDoc)
        emit("report.json", report_json(run.report).dump(2) + "\n");
    else
        emit("report.csv", report_csv(run.report));
    emit("metrics.csv", metrics_csv(run.report.metrics.value_or(analytics::summarize(run.world.log()))));
    emit("timeline.csv", timeline_csv(run.report.timeline));
    for (const auto& [name, s] : run.report.series) emit("series_" + name + ".csv", series_csv(s));
    write_file(dir / "manifest.json", manifest_json(m).dump(2) + "\n");
    return m;
}

}  // namespace govsim::report
