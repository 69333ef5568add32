#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "govsim/types.hpp"

namespace govsim {

struct TxContext;
class WorldState;

enum class ProposalState { Pending, Active, Canceled, Defeated, Succeeded, Queued, Expired, Executed };
enum class ExecutorClass { Short, Long };

NLOHMANN_JSON_SERIALIZE_ENUM(ProposalState, {{ProposalState::Pending, "Pending"},
                                             {ProposalState::Active, "Active"},
                                             {ProposalState::Canceled, "Canceled"},
                                             {ProposalState::Defeated, "Defeated"},
                                             {ProposalState::Succeeded, "Succeeded"},
                                             {ProposalState::Queued, "Queued"},
                                             {ProposalState::Expired, "Expired"},
                                             {ProposalState::Executed, "Executed"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ExecutorClass, {{ExecutorClass::Short, "short"}, {ExecutorClass::Long, "long"}})

const char* to_string(ProposalState s);
bool is_terminal(ProposalState s);

/// Either a fixed number of units or basis points of the power supply at
/// the block it is evaluated against.
struct Quantity {
    Units units = 0;
    Units bps = 0;
    bool relative = false;

    static Quantity absolute(Units u) { return {u, 0, false}; }
    static Quantity of_supply_bps(Units b) { return {0, b, true}; }

    Units resolve(Units supply) const { return relative ? apply_bps(supply, bps) : units; }

    friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct Guardian {
    std::set<Address> signers;
    std::size_t threshold = 0;  // k of |signers|; 0 disables
    friend bool operator==(const Guardian&, const Guardian&) = default;
};

/// Where voting and proposition power is read from: a token ledger's
/// checkpoints, or an escrow's ve-power when `escrow` is set.
struct PowerSource {
    std::string token;
    Address escrow;
    friend bool operator==(const PowerSource&, const PowerSource&) = default;
};

struct GovernorParams {
    PowerSource source;
    Quantity proposal_threshold;
    bool threshold_strict = true;  // proposer needs more than the threshold
    PowerKind proposition_kind = PowerKind::Voting;
    BlockHeight voting_delay = 1;
    BlockHeight voting_period = 1;
    Quantity quorum;
    Quantity vote_differential = Quantity::absolute(1);
    BlockHeight timelock_delay = 0;
    BlockHeight grace_period = 0;
    std::size_t max_actions = 10;
    Guardian guardian;
    ExecutorClass executor_class = ExecutorClass::Short;
    bool threshold_maintenance = false;
    /// Passing fraction (bps of snapshot supply) for the emergency path
    /// that executes an Active proposal immediately; 0 disables it.
    Units emergency_commit_bps = 0;

    friend bool operator==(const GovernorParams&, const GovernorParams&) = default;
};

void to_json(json& j, const GovernorParams& p);
void from_json(const json& j, GovernorParams& p);

/// One call a proposal makes when executed. `label` is what voters read;
/// nothing checks that it describes the call.
struct Action {
    Address target;
    std::string op;
    json args = json::object();
    std::string label;
    std::optional<ExecutorClass> executor;

    friend bool operator==(const Action&, const Action&) = default;
};

void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);

struct VoteReceipt {
    Address voter;
    bool support = false;
    Units weight = 0;
    friend bool operator==(const VoteReceipt&, const VoteReceipt&) = default;
};

struct Proposal {
    std::uint64_t id = 0;
    Address proposer;
    std::vector<Action> actions;
    std::string metadata_hash;
    BlockHeight created = 0;
    BlockHeight start = 0;
    BlockHeight end = 0;
    BlockHeight snapshot = 0;
    Units for_votes = 0;
    Units against_votes = 0;
    std::map<Address, VoteReceipt> receipts;
    std::optional<BlockHeight> eta;
    bool canceled = false;
    bool executed = false;

    friend bool operator==(const Proposal&, const Proposal&) = default;
};

struct Timelock {
    Address admin;
    BlockHeight delay = 0;
    std::map<std::uint64_t, BlockHeight> queue;  // proposal id -> eta
    friend bool operator==(const Timelock&, const Timelock&) = default;
};

class Governor {
public:
    Governor() = default;
    Governor(Address address, GovernorParams params);

    const Address& address() const { return address_; }
    const GovernorParams& params() const { return params_; }
    const Timelock& timelock() const { return timelock_; }
    std::size_t proposal_count() const { return proposals_.size(); }
    std::uint64_t next_proposal_id() const { return proposals_.size() + 1; }
    const Proposal& proposal(std::uint64_t id) const;
    const std::vector<Proposal>& proposals() const { return proposals_; }
    std::optional<std::uint64_t> latest_proposal_of(const Address& proposer) const;

    void apply_created(Proposal p);
    void apply_vote(std::uint64_t id, VoteReceipt receipt);
    void apply_queued(std::uint64_t id, BlockHeight eta);
    void apply_executed(std::uint64_t id);
    void apply_canceled(std::uint64_t id);

    friend bool operator==(const Governor&, const Governor&) = default;

private:
    Proposal& mutable_proposal(std::uint64_t id);

    Address address_;
    GovernorParams params_;
    std::vector<Proposal> proposals_;
    Timelock timelock_;
    std::map<Address, std::uint64_t> latest_by_proposer_;
};

namespace governor {

void create_governor(TxContext& tx, const Address& address, const GovernorParams& params);

std::uint64_t propose(TxContext& tx, const Address& gov, std::vector<Action> actions, std::string metadata_hash);

/// Pure function of the proposal record and the current block.
ProposalState state(const WorldState& world, const Address& gov, std::uint64_t id);

void cast_vote(TxContext& tx, const Address& gov, std::uint64_t id, bool support);
void queue(TxContext& tx, const Address& gov, std::uint64_t id);
void execute(TxContext& tx, const Address& gov, std::uint64_t id);
void cancel(TxContext& tx, const Address& gov, std::uint64_t id, const std::set<Address>& signatures);

/// Executes an Active proposal at once when its for-votes reach
/// emergency_commit_bps of the snapshot supply.
void emergency_commit(TxContext& tx, const Address& gov, std::uint64_t id);

/// Power of `account` at block b under the governor's power source.
Units power_at(const WorldState& world, const GovernorParams& params, const Address& account, PowerKind kind,
               BlockHeight b);
Units supply_at(const WorldState& world, const GovernorParams& params, BlockHeight b);

/// Whether `account` clears the proposal threshold, read at block b.
bool meets_threshold(const WorldState& world, const GovernorParams& params, const Address& account, BlockHeight b);

/// Parameter sets for "aave_short", "aave_long", "compound", "uniswap".
/// Day-denominated delays are converted with block_interval seconds per block.
GovernorParams preset_governor(std::string_view name, Units supply, Timestamp block_interval = 12);

void validate(const GovernorParams& params, Units supply);

json handle_governor_call(TxContext& tx, const Address& gov, const std::string& op, const json& args);

}  // namespace governor

}  // namespace govsim
