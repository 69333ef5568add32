#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "govsim/contracts.hpp"
#include "govsim/escrow.hpp"
#include "govsim/events.hpp"
#include "govsim/gas.hpp"
#include "govsim/governor.hpp"
#include "govsim/ledger.hpp"
#include "govsim/types.hpp"

namespace govsim {

struct ChainParams {
    Timestamp genesis_time = 0;
    Timestamp block_interval = 12;
    /// Flat gas units charged per call; the fee is this times the block's price.
    Units gas_per_call = 1;

    friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

constexpr BlockHeight blocks_per_day(Timestamp block_interval) {
    return static_cast<BlockHeight>(86'400 / block_interval);
}

struct Call {
    Address target;
    std::string op;
    json args = json::object();
    Units value = 0;
};

struct TxScript {
    Address sender;
    std::vector<Call> calls;
    /// Fee ceiling; exceeding it reverts and consumes the whole budget.
    std::optional<Units> gas_budget;
};

struct Committed {
    std::vector<Event> events;
    Units gas_charged = 0;
};

struct Reverted {
    std::string reason;
    Units gas_charged = 0;
};

using TxOutcome = std::variant<Committed, Reverted>;

inline bool committed(const TxOutcome& o) { return std::holds_alternative<Committed>(o); }
inline std::string revert_reason(const TxOutcome& o) {
    const auto* r = std::get_if<Reverted>(&o);
    return r ? r->reason : std::string{};
}

struct FlashLoan {
    Address pool;
    Units amount = 0;
    Units fee = 0;
    Units reserve_before = 0;
};

/// Everything the event log can rebuild. Compared for replay checks.
struct WorldData {
    ChainParams chain;
    GasSeries gas;
    BlockHeight height = 0;
    std::map<Address, Units> native;
    std::map<std::string, TokenLedger> tokens;
    std::map<Address, FlashPool> flash_pools;
    ContractRegistry registry;
    std::map<Address, Governor> governors;
    std::map<Address, Escrow> escrows;

    friend bool operator==(const WorldData&, const WorldData&) = default;
};

/// Execution frame of one call inside an atomic transaction.
struct TxContext {
    WorldState& world;
    Address origin;
    /// msg.sender of the current frame.
    Address sender;
    Units value = 0;
    std::vector<FlashLoan>* loans = nullptr;

    /// Applies the event to the world and appends it to the log.
    void emit(Event e) const;

    /// Frame for an outbound call made by `caller`.
    TxContext as(const Address& caller, Units call_value = 0) const;

    BlockHeight height() const;
    Timestamp timestamp() const;
};

/// Single-owner simulated chain. Every mutation is an event: operations
/// validate, then emit; `apply` is the only code that changes WorldData.
class WorldState {
public:
    static inline const Address coinbase{"coinbase"};

    explicit WorldState(ChainParams chain = {}, GasGenerator gas = ConstantGas{0});

    WorldState(const WorldState&) = default;
    WorldState& operator=(const WorldState&) = default;
    WorldState(WorldState&&) = default;
    WorldState& operator=(WorldState&&) = default;

    BlockHeight height() const { return data_.height; }
    Timestamp timestamp() const { return timestamp_at(data_.height); }
    Timestamp timestamp_at(BlockHeight b) const {
        return data_.chain.genesis_time + static_cast<Timestamp>(b) * data_.chain.block_interval;
    }
    const ChainParams& chain() const { return data_.chain; }
    const GasSeries& gas() const { return data_.gas; }

    /// Throws PreconditionError for a block past the chain head when the
    /// series is a walk.
    Units gas_price_at(BlockHeight b) const;

    void advance_blocks(std::uint64_t n);
    void advance_to(BlockHeight b);

    void create_account(const Address& account, Units native = 0);
    bool has_account(const Address& account) const { return data_.native.contains(account); }
    Units native_balance(const Address& account) const;

    TxOutcome execute_atomic(const TxScript& tx);

    /// Atomic transaction whose body is native code instead of a call list;
    /// charged as `calls` calls.
    TxOutcome run(const Address& sender, const std::function<void(TxContext&)>& body, std::uint64_t calls = 1);

    /// Routes a call to the token, pool, governor, escrow or proxy at its target.
    json dispatch(TxContext& tx, const Call& call);

    bool has_token(const std::string& name) const { return data_.tokens.contains(name); }
    const TokenLedger& token(const std::string& name) const;
    const FlashPool& flash_pool(const Address& pool) const;
    const ContractRegistry& registry() const { return data_.registry; }
    bool has_governor(const Address& gov) const { return data_.governors.contains(gov); }
    const Governor& governor(const Address& gov) const;
    bool has_escrow(const Address& e) const { return data_.escrows.contains(e); }
    const Escrow& escrow(const Address& e) const;

    const WorldData& data() const { return data_; }
    const EventLog& log() const { return log_; }
    CodeBook& code() { return code_; }
    const CodeBook& code() const { return code_; }

    /// Applies one event. The only mutation path for WorldData.
    void apply(const Event& e);

    /// Folds a log over an empty world. The log must begin with Genesis.
    static WorldState replay(const EventLog& log, const CodeBook& code);

private:
    friend struct TxContext;

    struct ReplayTag {};
    explicit WorldState(ReplayTag) {}

    void record(Event e);
    TxOutcome transact(const Address& sender, std::uint64_t calls, std::optional<Units> budget,
                       const std::function<void(TxContext&)>& body);
    void settle_flash_loans(const std::vector<FlashLoan>& loans) const;

    WorldData data_;
    EventLog log_;
    CodeBook code_;
};

}  // namespace govsim
