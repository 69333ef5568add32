#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "govsim/types.hpp"

namespace govsim {

struct TxContext;
class WorldState;

constexpr Timestamp seconds_per_week = 7 * 24 * 3600;

struct EscrowParams {
    std::string token;
    Timestamp max_lock_duration = 52 * seconds_per_week;
    /// Emission epoch; ve-power also steps down once per epoch.
    Timestamp epoch_length = seconds_per_week;
    Units tokens_per_epoch = 0;
    Units protocol_fee_share_bps = bps_denominator;
    /// Only this address may kill gauges or pin gauge shares.
    Address governance;

    friend bool operator==(const EscrowParams&, const EscrowParams&) = default;
};

void to_json(json& j, const EscrowParams& p);
void from_json(const json& j, EscrowParams& p);

struct EscrowLock {
    std::uint64_t id = 0;
    Address owner;
    Units amount = 0;
    Timestamp lock_start = 0;
    Timestamp unlock_time = 0;
    bool withdrawn = false;
    friend bool operator==(const EscrowLock&, const EscrowLock&) = default;
};

struct Pool {
    std::uint64_t id = 0;
    Address owner;
    Units swap_fee_bps = 0;
    Units cumulative_volume = 0;
    Units protocol_revenue = 0;
    std::map<Address, Units> lp_shares;
    friend bool operator==(const Pool&, const Pool&) = default;
};

struct Gauge {
    std::uint64_t id = 0;
    std::uint64_t pool = 0;
    bool killed = false;
    /// Fixed cut of every epoch's emissions taken before the vote split.
    Units fixed_share_bps = 0;
    friend bool operator==(const Gauge&, const Gauge&) = default;
};

struct GaugeVote {
    std::uint64_t effective_epoch = 0;
    std::map<std::uint64_t, Units> allocation_bps;
    friend bool operator==(const GaugeVote&, const GaugeVote&) = default;
};

class Escrow {
public:
    Escrow() = default;
    Escrow(Address address, EscrowParams params);

    const Address& address() const { return address_; }
    const EscrowParams& params() const { return params_; }

    std::uint64_t epoch_of(Timestamp t) const { return static_cast<std::uint64_t>(t / params_.epoch_length); }
    Timestamp epoch_start(std::uint64_t epoch) const { return static_cast<Timestamp>(epoch) * params_.epoch_length; }

    /// Σ amount × remaining / max_lock_duration over the user's locks, with t
    /// rounded down to its epoch boundary (never before the lock began).
    Units ve_power(const Address& user, Timestamp t) const;
    Units total_ve_power(Timestamp t) const;
    Units locked_amount(const Address& user, Timestamp t) const;

    /// Allocation in force for `user` during `epoch`.
    const std::map<std::uint64_t, Units>* allocation_at(const Address& user, std::uint64_t epoch) const;

    /// Vote-weighted gauge weights at the start of `epoch`, scaled by 10^4.
    std::map<std::uint64_t, __int128> gauge_weights(std::uint64_t epoch) const;

    const std::vector<EscrowLock>& locks() const { return locks_; }
    const std::map<std::uint64_t, Pool>& pools() const { return pools_; }
    const std::map<std::uint64_t, Gauge>& gauges() const { return gauges_; }
    const Pool& pool(std::uint64_t id) const;
    const Gauge& gauge(std::uint64_t id) const;
    Units carried() const { return carried_; }
    std::optional<std::uint64_t> last_distributed_epoch() const { return last_distributed_; }
    std::vector<Address> voters() const;

    void apply_lock(EscrowLock lock);
    void apply_withdraw(std::uint64_t lock_id);
    void apply_pool(Pool pool);
    void apply_lp_shares(std::uint64_t pool, const Address& account, Units shares);
    void apply_gauge(Gauge gauge);
    void apply_gauge_vote(const Address& voter, GaugeVote vote);
    void apply_kill(std::uint64_t gauge);
    void apply_fixed_share(std::uint64_t gauge, Units bps);
    void apply_distributed(std::uint64_t epoch, Units carried);
    void apply_swap(std::uint64_t pool, Units volume, Units revenue);

    friend bool operator==(const Escrow&, const Escrow&) = default;

private:
    Address address_;
    EscrowParams params_;
    std::vector<EscrowLock> locks_;
    std::map<std::uint64_t, Pool> pools_;
    std::map<std::uint64_t, Gauge> gauges_;
    std::map<Address, std::vector<GaugeVote>> votes_;
    Units carried_ = 0;
    std::optional<std::uint64_t> last_distributed_;
};

/// Splits `total` in proportion to `weights` with floor division, handing
/// the leftover units one each to the largest fractional remainders (ties
/// to the larger weight, then the lower key). Conserves `total` exactly
/// when any weight is positive.
std::map<std::uint64_t, Units> largest_remainder_split(Units total, const std::map<std::uint64_t, __int128>& weights);

namespace escrow {

void create_escrow(TxContext& tx, const Address& address, const EscrowParams& params);

/// Unlock time is rounded down to the epoch grid.
std::uint64_t create_lock(TxContext& tx, const Address& escrow, Units amount, Timestamp unlock_time);
void withdraw(TxContext& tx, const Address& escrow, std::uint64_t lock_id);

std::uint64_t create_pool(TxContext& tx, const Address& escrow, Units swap_fee_bps);
void set_lp_shares(TxContext& tx, const Address& escrow, std::uint64_t pool, const Address& account, Units shares);
std::uint64_t add_gauge(TxContext& tx, const Address& escrow, std::uint64_t pool);

/// Allocation in basis points of the caller's ve-power; takes effect at the
/// next epoch boundary.
void vote_gauge_weight(TxContext& tx, const Address& escrow, const std::map<std::uint64_t, Units>& allocation_bps);

std::map<std::uint64_t, Units> distribute_emissions(TxContext& tx, const Address& escrow, std::uint64_t epoch);
void record_swap_volume(TxContext& tx, const Address& escrow, std::uint64_t pool, Units volume);
void kill_gauge(TxContext& tx, const Address& escrow, std::uint64_t gauge);
void set_fixed_share(TxContext& tx, const Address& escrow, std::uint64_t gauge, Units bps);

json handle_escrow_call(TxContext& tx, const Address& escrow, const std::string& op, const json& args);

}  // namespace escrow

}  // namespace govsim
