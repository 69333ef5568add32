#pragma once

// Event log schema. Every state transition of a WorldState is one of these
// records; applying them in order to an empty world reproduces the state.
// Records marked "informational" carry no state change.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "govsim/types.hpp"

namespace govsim::events {

// ---- chain ----

struct Genesis {
    static constexpr const char* name = "genesis";
    Timestamp genesis_time = 0;
    Timestamp block_interval = 12;
    Units gas_per_call = 1;
    json gas;  // generator descriptor
};

struct AccountCreated {
    static constexpr const char* name = "account_created";
    Address account;
    Units native = 0;
};

struct BlocksAdvanced {
    static constexpr const char* name = "blocks_advanced";
    std::uint64_t count = 0;
    BlockHeight height = 0;
};

struct NativeTransferred {
    static constexpr const char* name = "native_transferred";
    Address from;
    Address to;
    Units amount = 0;
};

struct TxCommitted {
    static constexpr const char* name = "tx_committed";
    Address sender;
    std::uint64_t calls = 0;
    Units gas_price = 0;
    Units gas_charged = 0;
};

struct TxReverted {
    static constexpr const char* name = "tx_reverted";
    Address sender;
    std::string reason;
    Units gas_price = 0;
    Units gas_charged = 0;
};

// ---- ledger ----

struct TokenCreated {
    static constexpr const char* name = "token_created";
    std::string token;
    std::vector<Address> authorities;
};

struct AuthorityGranted {
    static constexpr const char* name = "authority_granted";
    std::string token;
    Address authority;
};

struct Minted {
    static constexpr const char* name = "minted";
    std::string token;
    Address to;
    Units amount = 0;
};

struct Burned {
    static constexpr const char* name = "burned";
    std::string token;
    Address from;
    Units amount = 0;
};

struct Transferred {
    static constexpr const char* name = "transferred";
    std::string token;
    Address from;
    Address to;
    Units amount = 0;
};

struct Delegated {
    static constexpr const char* name = "delegated";
    std::string token;
    Address holder;
    Address delegatee;
    PowerKind kind = PowerKind::Voting;
};

struct FlashPoolCreated {
    static constexpr const char* name = "flash_pool_created";
    Address pool;
    std::string token;
    Units fee_bps = 0;
};

/// informational
struct FlashBorrowed {
    static constexpr const char* name = "flash_borrowed";
    Address pool;
    Address borrower;
    Units amount = 0;
    Units fee = 0;
};

// ---- contracts ----

struct ImplementationRegistered {
    static constexpr const char* name = "implementation_registered";
    Address implementation;
    std::string behavior;
    int version = 0;
};

struct ProxyDeployed {
    static constexpr const char* name = "proxy_deployed";
    Address proxy;
    Address admin;
    Address implementation;
    json storage = json::object();
};

struct ImplementationChanged {
    static constexpr const char* name = "implementation_changed";
    Address proxy;
    Address previous;
    Address implementation;
    Address caller;
};

struct AdminChanged {
    static constexpr const char* name = "admin_changed";
    Address proxy;
    Address previous;
    Address admin;
};

struct StorageWritten {
    static constexpr const char* name = "storage_written";
    Address proxy;
    std::string key;
    json value;
};

/// informational
struct DelegateCalled {
    static constexpr const char* name = "delegate_called";
    Address proxy;
    Address implementation;
    std::string op;
    Address sender;
    Units value = 0;
};

// ---- governor ----

struct GovernorCreated {
    static constexpr const char* name = "governor_created";
    Address governor;
    json params;
};

struct ProposalCreated {
    static constexpr const char* name = "proposal_created";
    Address governor;
    std::uint64_t id = 0;
    Address proposer;
    json actions = json::array();
    std::string metadata_hash;
    BlockHeight created = 0;
    BlockHeight start = 0;
    BlockHeight end = 0;
    BlockHeight snapshot = 0;
};

struct VoteCast {
    static constexpr const char* name = "vote_cast";
    Address governor;
    std::uint64_t id = 0;
    Address voter;
    bool support = false;
    Units weight = 0;
};

struct ProposalQueued {
    static constexpr const char* name = "proposal_queued";
    Address governor;
    std::uint64_t id = 0;
    BlockHeight eta = 0;
};

struct ProposalExecuted {
    static constexpr const char* name = "proposal_executed";
    Address governor;
    std::uint64_t id = 0;
    bool emergency = false;
};

struct ProposalCanceled {
    static constexpr const char* name = "proposal_canceled";
    Address governor;
    std::uint64_t id = 0;
    std::string path;
};

// ---- escrow ----

struct EscrowCreated {
    static constexpr const char* name = "escrow_created";
    Address escrow;
    json params;
};

struct LockCreated {
    static constexpr const char* name = "lock_created";
    Address escrow;
    std::uint64_t lock_id = 0;
    Address owner;
    Units amount = 0;
    Timestamp start = 0;
    Timestamp unlock = 0;
};

struct LockWithdrawn {
    static constexpr const char* name = "lock_withdrawn";
    Address escrow;
    std::uint64_t lock_id = 0;
};

struct PoolCreated {
    static constexpr const char* name = "pool_created";
    Address escrow;
    std::uint64_t pool_id = 0;
    Address owner;
    Units fee_bps = 0;
};

struct LpSharesSet {
    static constexpr const char* name = "lp_shares_set";
    Address escrow;
    std::uint64_t pool_id = 0;
    Address account;
    Units shares = 0;
};

struct GaugeAdded {
    static constexpr const char* name = "gauge_added";
    Address escrow;
    std::uint64_t gauge_id = 0;
    std::uint64_t pool_id = 0;
};

struct GaugeVoted {
    static constexpr const char* name = "gauge_voted";
    Address escrow;
    Address voter;
    std::uint64_t effective_epoch = 0;
    std::map<std::uint64_t, Units> allocation_bps;
};

struct GaugeKilled {
    static constexpr const char* name = "gauge_killed";
    Address escrow;
    std::uint64_t gauge_id = 0;
};

struct GaugeFixedShareSet {
    static constexpr const char* name = "gauge_fixed_share_set";
    Address escrow;
    std::uint64_t gauge_id = 0;
    Units bps = 0;
};

struct EmissionsDistributed {
    static constexpr const char* name = "emissions_distributed";
    Address escrow;
    std::uint64_t epoch = 0;
    std::map<std::uint64_t, Units> per_gauge;
    Units carried = 0;
};

struct SwapVolumeRecorded {
    static constexpr const char* name = "swap_volume_recorded";
    Address escrow;
    std::uint64_t pool_id = 0;
    Units volume = 0;
    Units revenue = 0;
};

}  // namespace govsim::events

namespace govsim {

using Event = std::variant<
    events::Genesis, events::AccountCreated, events::BlocksAdvanced, events::NativeTransferred,
    events::TxCommitted, events::TxReverted,
    events::TokenCreated, events::AuthorityGranted, events::Minted, events::Burned, events::Transferred,
    events::Delegated, events::FlashPoolCreated, events::FlashBorrowed,
    events::ImplementationRegistered, events::ProxyDeployed, events::ImplementationChanged,
    events::AdminChanged, events::StorageWritten, events::DelegateCalled,
    events::GovernorCreated, events::ProposalCreated, events::VoteCast, events::ProposalQueued,
    events::ProposalExecuted, events::ProposalCanceled,
    events::EscrowCreated, events::LockCreated, events::LockWithdrawn, events::PoolCreated,
    events::LpSharesSet, events::GaugeAdded, events::GaugeVoted, events::GaugeKilled,
    events::GaugeFixedShareSet, events::EmissionsDistributed, events::SwapVolumeRecorded>;

using EventLog = std::vector<Event>;

const char* event_name(const Event& e);

namespace events {
// Found by ADL through the variant's alternatives.
void to_json(json& j, const Event& e);
void from_json(const json& j, Event& e);
}  // namespace events

/// One JSON object per line, in log order.
std::string to_jsonl(const EventLog& log);
EventLog parse_jsonl(std::istream& in);

/// Height at which each event in the log happened.
std::vector<BlockHeight> event_heights(const EventLog& log);

}  // namespace govsim
