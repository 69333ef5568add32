#include "govsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <thread>

#include "govsim/config.hpp"
#include "govsim/report.hpp"
#include "govsim/scenarios.hpp"

namespace govsim::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || text.empty())
        throw UsageError(source + " is not a non-negative integer: " + text);
    return v;
}

struct Job {
    std::string scenario;
    json overrides;
    std::uint64_t seed = 0;
    std::filesystem::path dir;
};

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

int cmd_run(const std::optional<std::string>& config_path, const std::optional<std::string>& scenario_flag,
            const std::optional<std::uint64_t>& seed_flag, const std::string& out_dir, const std::string& format_name,
            unsigned jobs_flag, std::ostream& out, std::ostream& err) {
    const auto format = report::parse_format(format_name);
    json doc = config_path ? config::load_file(*config_path) : json::object();
    const auto runs = config::runs_of(doc);

    std::optional<std::uint64_t> env_seed;
    if (const char* env = std::getenv("GOVSIM_SEED"); env != nullptr) env_seed = parse_seed(env, "GOVSIM_SEED");

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        json r = runs[i];
        std::string name;
        if (scenario_flag)
            name = *scenario_flag;
        else if (r.contains("scenario") && r.at("scenario").is_string())
            name = r.at("scenario").get<std::string>();
        else
            throw UsageError("no scenario given: pass --scenario or set \"scenario\" in the config");
        const auto* info = scenarios::find(name);
        if (info == nullptr) throw UsageError("unknown scenario: " + name + " (see list-scenarios)");
        const auto bad = config::schema_errors(r, info->defaults);
        if (!bad.empty()) throw config::ConfigError("schema violation in offending keys: " + join(bad), bad);

        std::uint64_t seed = 0;
        if (seed_flag)
            seed = *seed_flag;
        else if (r.contains("seed"))
            seed = r.at("seed").get<std::uint64_t>();
        else if (env_seed)
            seed = *env_seed;
        r.erase("scenario");
        r.erase("seed");
        std::filesystem::path dir = out_dir;
        if (runs.size() > 1) {
            std::ostringstream sub;
            sub << std::setw(2) << std::setfill('0') << i + 1 << "_" << name;
            dir /= sub.str();
        }
        jobs.push_back({name, std::move(r), seed, dir});
    }

    std::vector<std::string> lines(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const auto& j = jobs[i];
                const auto run = scenarios::run(j.scenario, j.overrides, j.seed);
                report::write_artifacts(run, j.dir, format, config_path.value_or(""));
                lines[i] = j.scenario + " seed=" + std::to_string(j.seed) +
                           " succeeded=" + (run.report.succeeded ? "true" : "false") + " out=" + j.dir.generic_string();
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs_flag, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!failures[i]) {
            out << lines[i] << "\n";
            continue;
        }
        try {
            std::rethrow_exception(failures[i]);
        } catch (const PreconditionError& e) {
            err << "govsim: " << jobs[i].scenario << ": invalid configuration: " << e.what() << "\n";
            code = std::max(code, 2);
        } catch (const std::exception& e) {
            err << "govsim: " << jobs[i].scenario << ": " << e.what() << "\n";
            code = std::max(code, 1);
        }
    }
    return code;
}

int cmd_metrics(const std::string& log_path, const std::optional<Units>& supply, const std::optional<std::string>& out_path,
                std::ostream& out) {
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw UsageError("cannot read event log: " + log_path);
    EventLog log;
    try {
        log = parse_jsonl(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("malformed event log: ") + e.what());
    }
    const auto csv = report::metrics_csv(analytics::summarize(log, supply));
    if (out_path) {
        std::ofstream f(*out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + *out_path);
        f << csv;
    } else {
        out << csv;
    }
    return 0;
}

int cmd_list(std::ostream& out) {
    for (const auto& s : scenarios::registry()) out << std::left << std::setw(24) << s.name << s.description << "\n";
    return 0;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic DAO governance attack simulator", "govsim"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one or more scenarios and write artifacts");
    std::string config_path, scenario, out_dir = "out", format = "json-doc";
    std::uint64_t seed = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* config_opt = run->add_option("--config", config_path, "YAML or JSON scenario config");
    auto* scenario_opt = run->add_option("--scenario", scenario, "scenario name (overrides the config)");
    auto* seed_opt = run->add_option("--seed", seed, "RNG seed (falls back to config, then GOVSIM_SEED)");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--format", format, "report format")->check(CLI::IsMember({"json-doc", "csv"}))->capture_default_str();
    run->add_option("--jobs", jobs, "parallel runs for a multi-run config")->check(CLI::PositiveNumber);

    auto* metrics = app.add_subcommand("metrics", "recompute the metrics summary from an event log");
    std::string log_path, metrics_out;
    Units supply = 0;
    metrics->add_option("--log", log_path, "events.jsonl from a run")->required();
    auto* supply_opt = metrics->add_option("--supply", supply, "circulating supply for participation")
                           ->check(CLI::PositiveNumber);
    auto* metrics_out_opt = metrics->add_option("--out", metrics_out, "write the CSV here instead of stdout");

    app.add_subcommand("list-scenarios", "print scenario names with descriptions");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "govsim: " << e.what() << "\n";
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(*config_opt ? std::optional(config_path) : std::nullopt,
                           *scenario_opt ? std::optional(scenario) : std::nullopt,
                           *seed_opt ? std::optional(seed) : std::nullopt, out_dir, format, jobs, out, err);
        if (metrics->parsed())
            return cmd_metrics(log_path, *supply_opt ? std::optional(supply) : std::nullopt,
                               *metrics_out_opt ? std::optional(metrics_out) : std::nullopt, out);
        return cmd_list(out);
    } catch (const config::ConfigError& e) {
        err << "govsim: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "govsim: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "govsim: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "govsim: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace govsim::cli
