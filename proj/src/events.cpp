#include "govsim/events.hpp"

#include <istream>
#include <sstream>

namespace govsim {

const char* to_string(PowerKind kind) {
    return kind == PowerKind::Voting ? "voting" : "proposition";
}

namespace events {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Genesis, genesis_time, block_interval, gas_per_call, gas)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AccountCreated, account, native)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BlocksAdvanced, count, height)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NativeTransferred, from, to, amount)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TxCommitted, sender, calls, gas_price, gas_charged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TxReverted, sender, reason, gas_price, gas_charged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TokenCreated, token, authorities)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AuthorityGranted, token, authority)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Minted, token, to, amount)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Burned, token, from, amount)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Transferred, token, from, to, amount)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Delegated, token, holder, delegatee, kind)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FlashPoolCreated, pool, token, fee_bps)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FlashBorrowed, pool, borrower, amount, fee)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ImplementationRegistered, implementation, behavior, version)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProxyDeployed, proxy, admin, implementation, storage)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ImplementationChanged, proxy, previous, implementation, caller)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AdminChanged, proxy, previous, admin)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StorageWritten, proxy, key, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DelegateCalled, proxy, implementation, op, sender, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GovernorCreated, governor, params)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProposalCreated, governor, id, proposer, actions, metadata_hash, created, start, end,
                                   snapshot)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VoteCast, governor, id, voter, support, weight)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProposalQueued, governor, id, eta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProposalExecuted, governor, id, emergency)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProposalCanceled, governor, id, path)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EscrowCreated, escrow, params)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LockCreated, escrow, lock_id, owner, amount, start, unlock)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LockWithdrawn, escrow, lock_id)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PoolCreated, escrow, pool_id, owner, fee_bps)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LpSharesSet, escrow, pool_id, account, shares)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GaugeAdded, escrow, gauge_id, pool_id)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GaugeVoted, escrow, voter, effective_epoch, allocation_bps)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GaugeKilled, escrow, gauge_id)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GaugeFixedShareSet, escrow, gauge_id, bps)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EmissionsDistributed, escrow, epoch, per_gauge, carried)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SwapVolumeRecorded, escrow, pool_id, volume, revenue)

}  // namespace events

namespace {

template <std::size_t I = 0>
bool parse_alternative(const std::string& type, const json& j, Event& out) {
    if constexpr (I < std::variant_size_v<Event>) {
        using Alt = std::variant_alternative_t<I, Event>;
        if (type == Alt::name) {
            out = j.get<Alt>();
            return true;
        }
        return parse_alternative<I + 1>(type, j, out);
    } else {
        return false;
    }
}

}  // namespace

const char* event_name(const Event& e) {
    return std::visit([](const auto& ev) { return std::decay_t<decltype(ev)>::name; }, e);
}

void events::to_json(json& j, const Event& e) {
    std::visit(
        [&](const auto& ev) {
            j = ev;
            j["type"] = std::decay_t<decltype(ev)>::name;
        },
        e);
}

void events::from_json(const json& j, Event& e) {
    const auto type = j.at("type").get<std::string>();
    if (!parse_alternative(type, j, e)) throw std::invalid_argument("unknown event type: " + type);
}

std::string to_jsonl(const EventLog& log) {
    std::string out;
    for (const auto& e : log) {
        out += json(e).dump();
        out += '\n';
    }
    return out;
}

EventLog parse_jsonl(std::istream& in) {
    EventLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        log.push_back(json::parse(line).get<Event>());
    }
    return log;
}

std::vector<BlockHeight> event_heights(const EventLog& log) {
    std::vector<BlockHeight> heights;
    heights.reserve(log.size());
    BlockHeight h = 0;
    for (const auto& e : log) {
        if (const auto* adv = std::get_if<events::BlocksAdvanced>(&e)) h = adv->height;
        heights.push_back(h);
    }
    return heights;
}

}  // namespace govsim
