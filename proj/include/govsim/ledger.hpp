#pragma once

#include <array>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "govsim/types.hpp"

namespace govsim {

struct TxContext;

struct Checkpoint {
    BlockHeight block = 0;
    Units value = 0;
    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Step function of a value over blocks. Entries are strictly increasing in
/// block; a second write in the same block overwrites the first.
class CheckpointHistory {
public:
    void write(BlockHeight block, Units value);

    /// Value recorded at the greatest checkpoint <= block, or 0 before the first.
    Units at(BlockHeight block) const;
    Units latest() const { return points_.empty() ? 0 : points_.back().value; }

    std::span<const Checkpoint> points() const { return points_; }

    friend bool operator==(const CheckpointHistory&, const CheckpointHistory&) = default;

private:
    std::vector<Checkpoint> points_;
};

/// Governance token with per-account checkpoints for raw balance and for
/// each delegated power kind. Accounts self-delegate until told otherwise.
class TokenLedger {
public:
    TokenLedger() = default;
    TokenLedger(std::string name, std::vector<Address> authorities);

    const std::string& name() const { return name_; }
    Units total_supply() const { return total_supply_; }
    Units supply_at(BlockHeight b) const { return supply_history_.at(b); }

    Units balance(const Address& a) const;
    Units balance_at(const Address& a, BlockHeight b) const;
    Units power(const Address& a, PowerKind kind) const;
    Units power_at(const Address& a, PowerKind kind, BlockHeight b) const;
    Address delegatee(const Address& holder, PowerKind kind) const;

    bool is_authority(const Address& a) const { return authorities_.contains(a); }
    const std::map<Address, Units>& balances() const { return balances_; }

    /// Every account that has ever held a power checkpoint of this kind.
    std::vector<Address> power_holders(PowerKind kind) const;
    const CheckpointHistory* power_history(const Address& a, PowerKind kind) const;

    // State transitions; only called when applying events.
    void apply_transfer(const Address& from, const Address& to, Units amount, BlockHeight b);
    void apply_mint(const Address& to, Units amount, BlockHeight b);
    void apply_burn(const Address& from, Units amount, BlockHeight b);
    void apply_delegate(const Address& holder, const Address& delegatee, PowerKind kind, BlockHeight b);
    void apply_grant_authority(const Address& a) { authorities_.insert(a); }

    friend bool operator==(const TokenLedger&, const TokenLedger&) = default;

private:
    void move_power(const Address& from, const Address& to, PowerKind kind, Units amount, BlockHeight b);
    void adjust_balance(const Address& a, Units delta, BlockHeight b);

    std::string name_;
    std::set<Address> authorities_;
    Units total_supply_ = 0;
    std::map<Address, Units> balances_;
    std::map<Address, CheckpointHistory> balance_history_;
    std::map<Address, std::array<CheckpointHistory, 2>> power_history_;
    std::map<Address, std::array<Address, 2>> delegation_;
    CheckpointHistory supply_history_;
};

/// Lender of a governance token for the duration of one transaction. The
/// reserve is the pool's own token balance.
struct FlashPool {
    Address address;
    std::string token;
    Units fee_bps = 0;

    Units fee_for(Units amount) const { return apply_bps(amount, fee_bps); }

    friend bool operator==(const FlashPool&, const FlashPool&) = default;
};

namespace ledger {

void create_token(TxContext& tx, const std::string& token, std::vector<Address> authorities);
void grant_authority(TxContext& tx, const std::string& token, const Address& authority);

/// Moves tokens from the current caller.
void transfer(TxContext& tx, const std::string& token, const Address& to, Units amount);
void delegate(TxContext& tx, const std::string& token, const Address& delegatee, PowerKind kind);
void mint(TxContext& tx, const std::string& token, const Address& to, Units amount);
void burn(TxContext& tx, const std::string& token, const Address& from, Units amount);

void create_flash_pool(TxContext& tx, const Address& pool, const std::string& token, Units fee_bps);

/// Lends to the caller for the rest of the transaction. Repayment of
/// amount + fee is checked when the transaction ends.
void flash_borrow(TxContext& tx, const Address& pool, Units amount);

/// Lends, runs body, then requires amount + fee back in the pool.
void flash_borrow(TxContext& tx, const Address& pool, Units amount, const std::function<void(TxContext&)>& body);

/// Pays amount from the caller back into the pool.
void repay(TxContext& tx, const Address& pool, Units amount);

json handle_token_call(TxContext& tx, const std::string& token, const std::string& op, const json& args);
json handle_pool_call(TxContext& tx, const Address& pool, const std::string& op, const json& args);

}  // namespace ledger

}  // namespace govsim
