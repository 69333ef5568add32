#include "govsim/escrow.hpp"

#include <algorithm>
#include <numeric>

#include "govsim/world.hpp"

namespace govsim {

void to_json(json& j, const EscrowParams& p) {
    j = json{{"token", p.token},
             {"max_lock_duration", p.max_lock_duration},
             {"epoch_length", p.epoch_length},
             {"tokens_per_epoch", p.tokens_per_epoch},
             {"protocol_fee_share_bps", p.protocol_fee_share_bps},
             {"governance", p.governance}};
}

void from_json(const json& j, EscrowParams& p) {
    EscrowParams d;
    d.token = j.at("token").get<std::string>();
    d.max_lock_duration = j.value("max_lock_duration", d.max_lock_duration);
    d.epoch_length = j.value("epoch_length", d.epoch_length);
    d.tokens_per_epoch = j.value("tokens_per_epoch", d.tokens_per_epoch);
    d.protocol_fee_share_bps = j.value("protocol_fee_share_bps", d.protocol_fee_share_bps);
    d.governance = j.value("governance", Address{});
    p = std::move(d);
}

Escrow::Escrow(Address address, EscrowParams params) : address_(std::move(address)), params_(std::move(params)) {}

namespace {

Units lock_power(const EscrowLock& lock, Timestamp t, Timestamp epoch_length, Timestamp max_duration) {
    if (t < lock.lock_start || t >= lock.unlock_time) return 0;
    const Timestamp from = std::max(t - t % epoch_length, lock.lock_start);
    return static_cast<Units>(static_cast<__int128>(lock.amount) * (lock.unlock_time - from) / max_duration);
}

}  // namespace

Units Escrow::ve_power(const Address& user, Timestamp t) const {
    Units total = 0;
    for (const auto& lock : locks_)
        if (lock.owner == user) total += lock_power(lock, t, params_.epoch_length, params_.max_lock_duration);
    return total;
}

Units Escrow::total_ve_power(Timestamp t) const {
    Units total = 0;
    for (const auto& lock : locks_) total += lock_power(lock, t, params_.epoch_length, params_.max_lock_duration);
    return total;
}

Units Escrow::locked_amount(const Address& user, Timestamp t) const {
    Units total = 0;
    for (const auto& lock : locks_)
        if (lock.owner == user && lock.lock_start <= t && t < lock.unlock_time) total += lock.amount;
    return total;
}

const std::map<std::uint64_t, Units>* Escrow::allocation_at(const Address& user, std::uint64_t epoch) const {
    auto it = votes_.find(user);
    if (it == votes_.end()) return nullptr;
    const std::map<std::uint64_t, Units>* found = nullptr;
    for (const auto& v : it->second) {
        if (v.effective_epoch > epoch) break;
        found = &v.allocation_bps;
    }
    return found;
}

std::map<std::uint64_t, __int128> Escrow::gauge_weights(std::uint64_t epoch) const {
    std::map<std::uint64_t, __int128> weights;
    for (const auto& [id, g] : gauges_) weights[id] = 0;
    const Timestamp t = epoch_start(epoch);
    for (const auto& [user, history] : votes_) {
        const auto* alloc = allocation_at(user, epoch);
        if (alloc == nullptr) continue;
        const Units power = ve_power(user, t);
        for (const auto& [gauge, bps] : *alloc) weights[gauge] += static_cast<__int128>(power) * bps;
    }
    return weights;
}

const Pool& Escrow::pool(std::uint64_t id) const {
    auto it = pools_.find(id);
    if (it == pools_.end()) throw PreconditionError("unknown pool " + std::to_string(id));
    return it->second;
}

const Gauge& Escrow::gauge(std::uint64_t id) const {
    auto it = gauges_.find(id);
    if (it == gauges_.end()) throw PreconditionError("unknown gauge " + std::to_string(id));
    return it->second;
}

std::vector<Address> Escrow::voters() const {
    std::vector<Address> out;
    for (const auto& [user, history] : votes_) out.push_back(user);
    return out;
}

void Escrow::apply_lock(EscrowLock lock) { locks_.push_back(std::move(lock)); }

void Escrow::apply_withdraw(std::uint64_t lock_id) { locks_.at(lock_id - 1).withdrawn = true; }

void Escrow::apply_pool(Pool pool) { pools_.emplace(pool.id, std::move(pool)); }

void Escrow::apply_lp_shares(std::uint64_t pool, const Address& account, Units shares) {
    auto& lp = pools_.at(pool).lp_shares;
    if (shares == 0)
        lp.erase(account);
    else
        lp[account] = shares;
}

void Escrow::apply_gauge(Gauge gauge) { gauges_.emplace(gauge.id, std::move(gauge)); }

void Escrow::apply_gauge_vote(const Address& voter, GaugeVote vote) {
    auto& history = votes_[voter];
    if (!history.empty() && history.back().effective_epoch == vote.effective_epoch)
        history.back() = std::move(vote);
    else
        history.push_back(std::move(vote));
}

void Escrow::apply_kill(std::uint64_t gauge) { gauges_.at(gauge).killed = true; }

void Escrow::apply_fixed_share(std::uint64_t gauge, Units bps) { gauges_.at(gauge).fixed_share_bps = bps; }

void Escrow::apply_distributed(std::uint64_t epoch, Units carried) {
    last_distributed_ = epoch;
    carried_ = carried;
}

void Escrow::apply_swap(std::uint64_t pool, Units volume, Units revenue) {
    auto& p = pools_.at(pool);
    p.cumulative_volume += volume;
    p.protocol_revenue += revenue;
}

std::map<std::uint64_t, Units> largest_remainder_split(Units total, const std::map<std::uint64_t, __int128>& weights) {
    std::map<std::uint64_t, Units> out;
    __int128 sum = 0;
    for (const auto& [k, w] : weights) {
        out[k] = 0;
        if (w > 0) sum += w;
    }
    if (sum == 0 || total <= 0) return out;

    struct Part {
        std::uint64_t key;
        __int128 weight;
        __int128 rem;
    };
    std::vector<Part> parts;
    Units handed = 0;
    for (const auto& [k, w] : weights) {
        if (w <= 0) continue;
        const __int128 num = static_cast<__int128>(total) * w;
        out[k] = static_cast<Units>(num / sum);
        handed += out[k];
        parts.push_back({k, w, num % sum});
    }
    std::sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) {
        if (a.rem != b.rem) return a.rem > b.rem;
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.key < b.key;
    });
    for (Units left = total - handed, i = 0; left > 0; --left, ++i) out[parts[static_cast<std::size_t>(i)].key] += 1;
    return out;
}

namespace escrow {

namespace {

const Escrow& escrow_of(const TxContext& tx, const Address& e) {
    if (!tx.world.has_escrow(e)) throw Revert("unknown escrow");
    return tx.world.escrow(e);
}

std::map<std::uint64_t, Units> parse_allocation(const json& j) {
    std::map<std::uint64_t, Units> out;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) out[std::stoull(k)] = v.get<Units>();
    } else {
        out = j.get<std::map<std::uint64_t, Units>>();
    }
    return out;
}

/// Credits `amount` of fresh tokens to a pool's LPs, or its owner when it has none.
void mint_to_pool(TxContext& tx, const Escrow& e, const Pool& pool, Units amount) {
    if (amount <= 0) return;
    if (pool.lp_shares.empty()) {
        tx.emit(events::Minted{e.params().token, pool.owner, amount});
        return;
    }
    std::map<std::uint64_t, __int128> weights;
    std::vector<Address> holders;
    for (const auto& [account, shares] : pool.lp_shares) {
        weights[holders.size()] = shares;
        holders.push_back(account);
    }
    for (const auto& [idx, part] : largest_remainder_split(amount, weights))
        if (part > 0) tx.emit(events::Minted{e.params().token, holders[idx], part});
}

}  // namespace

void create_escrow(TxContext& tx, const Address& address, const EscrowParams& params) {
    require(!address.empty(), "empty escrow address");
    require(!tx.world.has_escrow(address), "escrow already exists");
    require(tx.world.has_token(params.token), "unknown token");
    require(params.epoch_length > 0, "epoch_length must be positive");
    require(params.max_lock_duration > 0, "max_lock_duration must be positive");
    require(params.tokens_per_epoch >= 0, "tokens_per_epoch must be non-negative");
    require(params.protocol_fee_share_bps >= 0 && params.protocol_fee_share_bps <= bps_denominator,
            "protocol_fee_share_bps out of range");
    tx.emit(events::EscrowCreated{address, params});
}

std::uint64_t create_lock(TxContext& tx, const Address& escrow, Units amount, Timestamp unlock_time) {
    const auto& e = escrow_of(tx, escrow);
    const Timestamp now = tx.timestamp();
    require(amount > 0, "lock amount must be positive");
    require(unlock_time - now <= e.params().max_lock_duration, "lock exceeds max duration");
    const Timestamp unlock = unlock_time - unlock_time % e.params().epoch_length;
    require(unlock > now, "unlock time must be in the future");
    require(tx.world.token(e.params().token).balance(tx.sender) >= amount, "insufficient balance");
    const std::uint64_t id = e.locks().size() + 1;
    tx.emit(events::Transferred{e.params().token, tx.sender, escrow, amount});
    tx.emit(events::LockCreated{escrow, id, tx.sender, amount, now, unlock});
    return id;
}

void withdraw(TxContext& tx, const Address& escrow, std::uint64_t lock_id) {
    const auto& e = escrow_of(tx, escrow);
    require(lock_id >= 1 && lock_id <= e.locks().size(), "unknown lock");
    const auto lock = e.locks()[lock_id - 1];
    require(lock.owner == tx.sender, "not lock owner");
    require(!lock.withdrawn, "already withdrawn");
    require(tx.timestamp() >= lock.unlock_time, "lock not expired");
    tx.emit(events::LockWithdrawn{escrow, lock_id});
    tx.emit(events::Transferred{e.params().token, escrow, lock.owner, lock.amount});
}

std::uint64_t create_pool(TxContext& tx, const Address& escrow, Units swap_fee_bps) {
    const auto& e = escrow_of(tx, escrow);
    require(swap_fee_bps >= 0 && swap_fee_bps <= bps_denominator, "swap fee out of range");
    const std::uint64_t id = e.pools().size() + 1;
    tx.emit(events::PoolCreated{escrow, id, tx.sender, swap_fee_bps});
    return id;
}

void set_lp_shares(TxContext& tx, const Address& escrow, std::uint64_t pool, const Address& account, Units shares) {
    const auto& e = escrow_of(tx, escrow);
    require(e.pools().contains(pool), "unknown pool");
    require(e.pool(pool).owner == tx.sender, "not pool owner");
    require(shares >= 0, "negative shares");
    tx.emit(events::LpSharesSet{escrow, pool, account, shares});
}

std::uint64_t add_gauge(TxContext& tx, const Address& escrow, std::uint64_t pool) {
    const auto& e = escrow_of(tx, escrow);
    require(e.pools().contains(pool), "unknown pool");
    for (const auto& [id, g] : e.gauges()) require(g.pool != pool, "pool already has a gauge");
    const std::uint64_t id = e.gauges().size() + 1;
    tx.emit(events::GaugeAdded{escrow, id, pool});
    return id;
}

void vote_gauge_weight(TxContext& tx, const Address& escrow, const std::map<std::uint64_t, Units>& allocation_bps) {
    const auto& e = escrow_of(tx, escrow);
    Units sum = 0;
    for (const auto& [gauge, bps] : allocation_bps) {
        require(e.gauges().contains(gauge), "unknown gauge");
        require(bps >= 0, "negative allocation");
        sum += bps;
    }
    require(sum <= bps_denominator, "allocation exceeds 100%");
    tx.emit(events::GaugeVoted{escrow, tx.sender, e.epoch_of(tx.timestamp()) + 1, allocation_bps});
}

std::map<std::uint64_t, Units> distribute_emissions(TxContext& tx, const Address& escrow, std::uint64_t epoch) {
    const auto& e = escrow_of(tx, escrow);
    require(e.epoch_of(tx.timestamp()) > epoch, "epoch not complete");
    require(!e.last_distributed_epoch() || epoch > *e.last_distributed_epoch(), "epoch already distributed");
    require(tx.world.token(e.params().token).is_authority(escrow), "escrow cannot mint");

    const Units emission = e.params().tokens_per_epoch + e.carried();
    std::map<std::uint64_t, Units> per_gauge;
    Units fixed_total = 0;
    for (const auto& [id, g] : e.gauges()) {
        per_gauge[id] = 0;
        if (!g.killed && g.fixed_share_bps > 0) {
            per_gauge[id] = apply_bps(emission, g.fixed_share_bps);
            fixed_total += per_gauge[id];
        }
    }
    auto weights = e.gauge_weights(epoch);
    for (auto& [id, w] : weights) {
        const auto& g = e.gauge(id);
        if (g.killed || g.fixed_share_bps > 0) w = 0;
    }
    const Units remainder = emission - fixed_total;
    const bool any_weight = std::any_of(weights.begin(), weights.end(), [](const auto& kv) { return kv.second > 0; });
    Units carried = remainder;
    if (any_weight) {
        for (const auto& [id, amount] : largest_remainder_split(remainder, weights)) per_gauge[id] += amount;
        carried = 0;
    }
    tx.emit(events::EmissionsDistributed{escrow, epoch, per_gauge, carried});
    for (const auto& [id, amount] : per_gauge) mint_to_pool(tx, e, e.pool(e.gauge(id).pool), amount);
    return per_gauge;
}

void record_swap_volume(TxContext& tx, const Address& escrow, std::uint64_t pool, Units volume) {
    const auto& e = escrow_of(tx, escrow);
    require(e.pools().contains(pool), "unknown pool");
    require(volume >= 0, "negative volume");
    const auto revenue = static_cast<Units>(static_cast<__int128>(volume) * e.pool(pool).swap_fee_bps *
                                            e.params().protocol_fee_share_bps / (bps_denominator * bps_denominator));
    tx.emit(events::SwapVolumeRecorded{escrow, pool, volume, revenue});
}

void kill_gauge(TxContext& tx, const Address& escrow, std::uint64_t gauge) {
    const auto& e = escrow_of(tx, escrow);
    require(!e.params().governance.empty() && tx.sender == e.params().governance, "not governance");
    require(e.gauges().contains(gauge), "unknown gauge");
    if (e.gauge(gauge).killed) return;
    tx.emit(events::GaugeKilled{escrow, gauge});
}

void set_fixed_share(TxContext& tx, const Address& escrow, std::uint64_t gauge, Units bps) {
    const auto& e = escrow_of(tx, escrow);
    require(!e.params().governance.empty() && tx.sender == e.params().governance, "not governance");
    require(e.gauges().contains(gauge), "unknown gauge");
    require(bps >= 0 && bps <= bps_denominator, "share out of range");
    Units others = 0;
    for (const auto& [id, g] : e.gauges())
        if (id != gauge) others += g.fixed_share_bps;
    require(others + bps <= bps_denominator, "fixed shares exceed 100%");
    tx.emit(events::GaugeFixedShareSet{escrow, gauge, bps});
}

json handle_escrow_call(TxContext& tx, const Address& escrow, const std::string& op, const json& args) {
    if (op == "create_lock")
        return create_lock(tx, escrow, args.at("amount").get<Units>(), args.at("unlock_time").get<Timestamp>());
    if (op == "withdraw") {
        withdraw(tx, escrow, args.at("lock_id").get<std::uint64_t>());
        return nullptr;
    }
    if (op == "create_pool") return create_pool(tx, escrow, args.at("swap_fee_bps").get<Units>());
    if (op == "set_lp_shares") {
        set_lp_shares(tx, escrow, args.at("pool").get<std::uint64_t>(), args.at("account").get<Address>(),
                      args.at("shares").get<Units>());
        return nullptr;
    }
    if (op == "add_gauge") return add_gauge(tx, escrow, args.at("pool").get<std::uint64_t>());
    if (op == "vote_gauge_weight") {
        vote_gauge_weight(tx, escrow, parse_allocation(args.at("allocation_bps")));
        return nullptr;
    }
    if (op == "distribute_emissions") return distribute_emissions(tx, escrow, args.at("epoch").get<std::uint64_t>());
    if (op == "record_swap_volume") {
        record_swap_volume(tx, escrow, args.at("pool").get<std::uint64_t>(), args.at("volume").get<Units>());
        return nullptr;
    }
    if (op == "kill_gauge") {
        kill_gauge(tx, escrow, args.at("gauge").get<std::uint64_t>());
        return nullptr;
    }
    if (op == "set_fixed_share") {
        set_fixed_share(tx, escrow, args.at("gauge").get<std::uint64_t>(), args.at("bps").get<Units>());
        return nullptr;
    }
    throw Revert("no such function");
}

}  // namespace escrow

}  // namespace govsim
