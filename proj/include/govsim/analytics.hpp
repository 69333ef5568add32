#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "govsim/events.hpp"
#include "govsim/gas.hpp"
#include "govsim/governor.hpp"
#include "govsim/types.hpp"
#include "govsim/world.hpp"

namespace govsim::analytics {

struct CastVote {
    Address voter;
    bool support = false;
    Units weight = 0;
    BlockHeight block = 0;
};

/// A proposal as reconstructed from the event log alone.
struct ProposalRecord {
    Address governor;
    std::uint64_t id = 0;
    Address proposer;
    BlockHeight created = 0;
    BlockHeight start = 0;
    BlockHeight end = 0;
    BlockHeight snapshot = 0;
    Units for_votes = 0;
    Units against_votes = 0;
    std::vector<CastVote> votes;
    std::optional<BlockHeight> queued_at;
    std::optional<BlockHeight> eta;
    std::optional<BlockHeight> executed_at;
    std::optional<BlockHeight> canceled_at;
    bool emergency = false;
    /// Chain height when the log ends.
    BlockHeight log_end = 0;

    /// Voting is over and the proposal was not canceled.
    bool decided() const { return !canceled_at && (log_end > end || executed_at.has_value()); }
    Units cast() const { return for_votes + against_votes; }
    /// Last block of the proposal's life: execution, cancellation, or end of voting.
    BlockHeight closed() const;
};

std::vector<ProposalRecord> fold_proposals(const EventLog& log);

struct Distribution {
    double mean = 0;
    double std = 0;  // population
    double min = 0;
    double median = 0;
    double max = 0;
};

Distribution describe(std::vector<double> values);

/// Pearson correlation; 0 when fewer than two points or either side is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct HoldingInterval {
    BlockHeight acquired = 0;
    std::optional<BlockHeight> disposed;
    std::vector<std::uint64_t> proposed;
    std::vector<std::uint64_t> voted;
    std::vector<std::uint64_t> overlapped;

    /// Held for the life of exactly one proposal, which it made.
    bool single_proposal_holder() const { return proposed.size() == 1 && overlapped.size() == 1; }
};

/// Intervals in which `account` held a positive balance of `token`, with the
/// proposals it made or voted on and every proposal whose life overlapped.
std::vector<HoldingInterval> holding_duration(const EventLog& log, const std::string& token, const Address& account);

/// Share of circulating supply that voted on a decided proposal.
double participation_rate(const EventLog& log, const Address& governor, std::uint64_t id, Units circulating_supply);

/// Largest integer h in [0, 100] such that at least h% of the values are >= h.
int h_index(const std::vector<double>& for_share_percents);

/// Fraction of decided proposals whose for-share of cast tokens reaches
/// `threshold`. A proposal with no votes does not qualify.
double supermajority_rate(const EventLog& log, double threshold = 0.99);

struct HolderProfile {
    Address proposer;
    std::uint64_t proposal = 0;
    std::vector<HoldingInterval> intervals;
};

struct MetricsSummary {
    std::size_t proposals_count = 0;
    std::size_t decided_count = 0;
    Distribution participation;
    int h_index = 0;
    double supermajority_rate = 0;
    double turnout_gas_corr = 0;
    std::vector<HolderProfile> holding_durations;
};

/// Everything is derived from the log. Participation divides by
/// `circulating_supply` when given, otherwise by the governor token's supply
/// at each proposal's snapshot block as folded from mint and burn events.
MetricsSummary summarize(const EventLog& log, std::optional<Units> circulating_supply = std::nullopt);

/// Gas series described by the log's genesis record.
GasSeries gas_from_log(const EventLog& log);

/// Mean gas price over each decided proposal's voting window paired with
/// the number of votes it received.
std::vector<std::pair<double, double>> gas_turnout_pairs(const EventLog& log);

std::string csv_header();
std::string csv_row(const MetricsSummary& m);

// ---- turnout model ----

struct VoterAgent {
    Address id;
    Units stake = 0;
    double value_per_vote = 0;
    double alignment = 1.0;  // probability of voting for
};

struct TurnoutSetup {
    ChainParams chain;
    GasGenerator gas = ConstantGas{1};
    std::vector<VoterAgent> agents;
    std::size_t proposals = 10;
    BlockHeight voting_delay = 1;
    BlockHeight voting_period = 20;
    /// Idle blocks between one proposal's end and the next one's creation.
    BlockHeight gap = 1;
    std::uint64_t seed = 0;
};

struct ProposalTurnout {
    std::uint64_t id = 0;
    BlockHeight start = 0;
    BlockHeight end = 0;
    double mean_gas = 0;
    std::size_t votes = 0;
    Units for_votes = 0;
    Units against_votes = 0;
};

struct TurnoutRun {
    std::vector<ProposalTurnout> proposals;
    MetricsSummary summary;
    WorldState world;
};

/// Runs proposals one after another. Each agent draws one block in every
/// voting window and a support bit, then votes through the governor at that
/// block only if its value_per_vote covers price × gas_per_call.
TurnoutRun simulate_turnout(const TurnoutSetup& setup);

}  // namespace govsim::analytics
