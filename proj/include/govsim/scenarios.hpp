#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "govsim/analytics.hpp"
#include "govsim/world.hpp"

namespace govsim::scenarios {

struct TimelineEntry {
    BlockHeight block = 0;
    std::string event;
    std::string detail;
};

using Series = std::vector<std::pair<double, double>>;

struct ScenarioReport {
    std::string scenario;
    std::uint64_t seed = 0;
    bool succeeded = false;
    /// Token units at price 1, from the event log.
    Units attacker_profit = 0;
    Units platform_loss = 0;
    std::vector<TimelineEntry> timeline;
    std::optional<analytics::MetricsSummary> metrics;
    /// Scenario-specific figures.
    json details = json::object();
    /// Plot data, x,y per row.
    std::map<std::string, Series> series;
};

struct ScenarioRun {
    ScenarioReport report;
    WorldState world;
    std::vector<Address> attackers;
    /// Fully resolved config the run used.
    json config;
};

/// Config document: {"scenario", "seed", "chain", "gas", "params"}.
/// Missing keys take the scenario's defaults.
struct ScenarioInfo {
    std::string name;
    std::string description;
    json defaults;
    std::function<ScenarioRun(const json& resolved)> run;
};

/// Sorted by name.
const std::vector<ScenarioInfo>& registry();
const ScenarioInfo* find(const std::string& name);

/// Recursively overlays `overrides` on `base`; arrays and scalars replace.
json merge(json base, const json& overrides);

/// Fills in defaults and runs. Throws PreconditionError for an unknown scenario.
ScenarioRun run(const std::string& name, const json& overrides = json::object(), std::uint64_t seed = 0);

/// Net change in `token` held by `accounts` over log[from..].
Units balance_delta(const EventLog& log, std::size_t from, const std::string& token, const std::vector<Address>& accounts);

/// Token mints to `accounts` over log[from..].
Units minted_to(const EventLog& log, std::size_t from, const std::string& token, const std::vector<Address>& accounts);

/// Every state-changing event except clock ticks and gas receipts.
std::vector<TimelineEntry> timeline_of(const EventLog& log);

ScenarioRun run_accidental_delegation(const json& cfg);
ScenarioRun run_beanstalk_flashloan(const json& cfg);
ScenarioRun run_humpy_gauge(const json& cfg);
ScenarioRun run_meta_governance(const json& cfg);
ScenarioRun run_negative_interest(const json& cfg);
ScenarioRun run_snapshot_proposer(const json& cfg);
ScenarioRun run_turnout(const json& cfg);

}  // namespace govsim::scenarios
