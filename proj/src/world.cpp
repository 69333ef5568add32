#include "govsim/world.hpp"

#include <map>

namespace govsim {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

// ---- TxContext ----

void TxContext::emit(Event e) const { world.record(std::move(e)); }

TxContext TxContext::as(const Address& caller, Units call_value) const {
    return TxContext{world, origin, caller, call_value, loans};
}

BlockHeight TxContext::height() const { return world.height(); }
Timestamp TxContext::timestamp() const { return world.timestamp(); }

// ---- WorldState ----

WorldState::WorldState(ChainParams chain, GasGenerator gas) {
    if (chain.block_interval <= 0) throw PreconditionError("block_interval must be positive");
    if (chain.gas_per_call < 0) throw PreconditionError("gas_per_call must be non-negative");
    record(events::Genesis{chain.genesis_time, chain.block_interval, chain.gas_per_call, gas_descriptor(gas)});
}

Units WorldState::gas_price_at(BlockHeight b) const {
    if (b > data_.height && !data_.gas.closed_form())
        throw PreconditionError("gas price requested beyond chain head for a walk series");
    return data_.gas.price_at(b);
}

void WorldState::advance_blocks(std::uint64_t n) {
    if (n == 0) throw PreconditionError("advance_blocks needs n >= 1");
    record(events::BlocksAdvanced{n, data_.height + n});
}

void WorldState::advance_to(BlockHeight b) {
    if (b < data_.height) throw PreconditionError("cannot move the clock backwards");
    if (b > data_.height) advance_blocks(b - data_.height);
}

void WorldState::create_account(const Address& account, Units native) {
    if (has_account(account)) throw PreconditionError("account already exists: " + account.str());
    if (native < 0) throw PreconditionError("native balance must be non-negative");
    record(events::AccountCreated{account, native});
}

Units WorldState::native_balance(const Address& account) const {
    auto it = data_.native.find(account);
    return it == data_.native.end() ? 0 : it->second;
}

const TokenLedger& WorldState::token(const std::string& name) const {
    auto it = data_.tokens.find(name);
    if (it == data_.tokens.end()) throw PreconditionError("unknown token: " + name);
    return it->second;
}

const FlashPool& WorldState::flash_pool(const Address& pool) const {
    auto it = data_.flash_pools.find(pool);
    if (it == data_.flash_pools.end()) throw PreconditionError("unknown flash pool: " + pool.str());
    return it->second;
}

const Governor& WorldState::governor(const Address& gov) const {
    auto it = data_.governors.find(gov);
    if (it == data_.governors.end()) throw PreconditionError("unknown governor: " + gov.str());
    return it->second;
}

const Escrow& WorldState::escrow(const Address& e) const {
    auto it = data_.escrows.find(e);
    if (it == data_.escrows.end()) throw PreconditionError("unknown escrow: " + e.str());
    return it->second;
}

void WorldState::record(Event e) {
    apply(e);
    log_.push_back(std::move(e));
}

TxOutcome WorldState::execute_atomic(const TxScript& tx) {
    if (tx.calls.empty()) throw PreconditionError("transaction has no calls");
    return transact(tx.sender, tx.calls.size(), tx.gas_budget, [&](TxContext& ctx) {
        for (const auto& call : tx.calls) dispatch(ctx, call);
    });
}

TxOutcome WorldState::run(const Address& sender, const std::function<void(TxContext&)>& body, std::uint64_t calls) {
    if (calls == 0) throw PreconditionError("transaction has no calls");
    return transact(sender, calls, std::nullopt, body);
}

TxOutcome WorldState::transact(const Address& sender, std::uint64_t calls, std::optional<Units> budget,
                               const std::function<void(TxContext&)>& body) {
    if (!has_account(sender)) throw PreconditionError("unknown sender: " + sender.str());

    const Units price = data_.gas.price_at(data_.height);
    const Units gas = price * data_.chain.gas_per_call * static_cast<Units>(calls);

    auto revert = [&](std::string reason, Units charged) -> TxOutcome {
        record(events::TxReverted{sender, reason, price, charged});
        return Reverted{std::move(reason), charged};
    };

    if (budget && gas > *budget) return revert("gas budget exceeded", std::min(*budget, native_balance(sender)));
    if (native_balance(sender) < gas) return revert("insufficient funds for gas", 0);

    WorldData snapshot = data_;
    const std::size_t mark = log_.size();
    std::vector<FlashLoan> loans;
    TxContext ctx{*this, sender, sender, 0, &loans};
    std::string failure;
    try {
        body(ctx);
        settle_flash_loans(loans);
        if (native_balance(sender) < gas) throw Revert("insufficient funds for gas");
    } catch (const std::exception& e) {
        failure = e.what();
        if (failure.empty()) failure = "reverted";
    }
    if (!failure.empty()) {
        data_ = std::move(snapshot);
        log_.resize(mark);
        return revert(std::move(failure), gas);
    }
    std::vector<Event> emitted(log_.begin() + static_cast<std::ptrdiff_t>(mark), log_.end());
    record(events::TxCommitted{sender, calls, price, gas});
    return Committed{std::move(emitted), gas};
}

void WorldState::settle_flash_loans(const std::vector<FlashLoan>& loans) const {
    std::map<Address, std::pair<Units, Units>> owed;  // pool -> (reserve before first loan, fees)
    for (const auto& loan : loans) {
        auto [it, fresh] = owed.try_emplace(loan.pool, loan.reserve_before, 0);
        it->second.second += loan.fee;
    }
    for (const auto& [pool, due] : owed) {
        const auto& fp = flash_pool(pool);
        if (token(fp.token).balance(pool) < due.first + due.second) throw Revert("flashloan not repaid");
    }
}

json WorldState::dispatch(TxContext& tx, const Call& call) {
    if (call.value < 0) throw Revert("negative call value");
    if (call.value > 0) {
        if (native_balance(tx.sender) < call.value) throw Revert("insufficient native balance for call value");
        tx.emit(events::NativeTransferred{tx.sender, call.target, call.value});
    }
    TxContext frame = tx.as(tx.sender, call.value);
    if (data_.tokens.contains(call.target.str()))
        return ledger::handle_token_call(frame, call.target.str(), call.op, call.args);
    if (data_.flash_pools.contains(call.target)) return ledger::handle_pool_call(frame, call.target, call.op, call.args);
    if (data_.governors.contains(call.target))
        return governor::handle_governor_call(frame, call.target, call.op, call.args);
    if (data_.escrows.contains(call.target)) return escrow::handle_escrow_call(frame, call.target, call.op, call.args);
    if (data_.registry.has_proxy(call.target))
        return contracts::handle_proxy_call(frame, call.target, call.op, call.args);
    throw Revert("unknown target");
}

void WorldState::apply(const Event& event) {
    auto& d = data_;
    const BlockHeight h = d.height;
    std::visit(
        overloaded{
            [&](const events::Genesis& e) {
                d.chain = ChainParams{e.genesis_time, e.block_interval, e.gas_per_call};
                d.gas = GasSeries(parse_gas_descriptor(e.gas));
            },
            [&](const events::AccountCreated& e) { d.native[e.account] += e.native; },
            [&](const events::BlocksAdvanced& e) { d.height = e.height; },
            [&](const events::NativeTransferred& e) {
                d.native[e.from] -= e.amount;
                d.native[e.to] += e.amount;
            },
            [&](const events::TxCommitted& e) {
                d.native[e.sender] -= e.gas_charged;
                d.native[coinbase] += e.gas_charged;
            },
            [&](const events::TxReverted& e) {
                d.native[e.sender] -= e.gas_charged;
                d.native[coinbase] += e.gas_charged;
            },
            [&](const events::TokenCreated& e) { d.tokens.emplace(e.token, TokenLedger(e.token, e.authorities)); },
            [&](const events::AuthorityGranted& e) { d.tokens.at(e.token).apply_grant_authority(e.authority); },
            [&](const events::Minted& e) { d.tokens.at(e.token).apply_mint(e.to, e.amount, h); },
            [&](const events::Burned& e) { d.tokens.at(e.token).apply_burn(e.from, e.amount, h); },
            [&](const events::Transferred& e) { d.tokens.at(e.token).apply_transfer(e.from, e.to, e.amount, h); },
            [&](const events::Delegated& e) { d.tokens.at(e.token).apply_delegate(e.holder, e.delegatee, e.kind, h); },
            [&](const events::FlashPoolCreated& e) { d.flash_pools[e.pool] = FlashPool{e.pool, e.token, e.fee_bps}; },
            [&](const events::FlashBorrowed&) {},
            [&](const events::ImplementationRegistered& e) {
                d.registry.apply_register(ImplementationRecord{e.implementation, e.behavior, e.version});
            },
            [&](const events::ProxyDeployed& e) {
                Proxy p{e.proxy, e.admin, e.implementation, {}};
                for (const auto& [k, v] : e.storage.items()) p.storage[k] = v;
                d.registry.apply_deploy(std::move(p));
            },
            [&](const events::ImplementationChanged& e) {
                d.registry.apply_set_implementation(e.proxy, e.implementation);
            },
            [&](const events::AdminChanged& e) { d.registry.apply_set_admin(e.proxy, e.admin); },
            [&](const events::StorageWritten& e) { d.registry.apply_store(e.proxy, e.key, e.value); },
            [&](const events::DelegateCalled&) {},
            [&](const events::GovernorCreated& e) {
                d.governors.emplace(e.governor, Governor(e.governor, e.params.get<GovernorParams>()));
            },
            [&](const events::ProposalCreated& e) {
                Proposal p;
                p.id = e.id;
                p.proposer = e.proposer;
                p.actions = e.actions.get<std::vector<Action>>();
                p.metadata_hash = e.metadata_hash;
                p.created = e.created;
                p.start = e.start;
                p.end = e.end;
                p.snapshot = e.snapshot;
                d.governors.at(e.governor).apply_created(std::move(p));
            },
            [&](const events::VoteCast& e) {
                d.governors.at(e.governor).apply_vote(e.id, VoteReceipt{e.voter, e.support, e.weight});
            },
            [&](const events::ProposalQueued& e) { d.governors.at(e.governor).apply_queued(e.id, e.eta); },
            [&](const events::ProposalExecuted& e) { d.governors.at(e.governor).apply_executed(e.id); },
            [&](const events::ProposalCanceled& e) { d.governors.at(e.governor).apply_canceled(e.id); },
            [&](const events::EscrowCreated& e) {
                d.escrows.emplace(e.escrow, Escrow(e.escrow, e.params.get<EscrowParams>()));
            },
            [&](const events::LockCreated& e) {
                d.escrows.at(e.escrow).apply_lock(EscrowLock{e.lock_id, e.owner, e.amount, e.start, e.unlock, false});
            },
            [&](const events::LockWithdrawn& e) { d.escrows.at(e.escrow).apply_withdraw(e.lock_id); },
            [&](const events::PoolCreated& e) {
                d.escrows.at(e.escrow).apply_pool(Pool{e.pool_id, e.owner, e.fee_bps, 0, 0, {}});
            },
            [&](const events::LpSharesSet& e) { d.escrows.at(e.escrow).apply_lp_shares(e.pool_id, e.account, e.shares); },
            [&](const events::GaugeAdded& e) { d.escrows.at(e.escrow).apply_gauge(Gauge{e.gauge_id, e.pool_id, false, 0}); },
            [&](const events::GaugeVoted& e) {
                d.escrows.at(e.escrow).apply_gauge_vote(e.voter, GaugeVote{e.effective_epoch, e.allocation_bps});
            },
            [&](const events::GaugeKilled& e) { d.escrows.at(e.escrow).apply_kill(e.gauge_id); },
            [&](const events::GaugeFixedShareSet& e) { d.escrows.at(e.escrow).apply_fixed_share(e.gauge_id, e.bps); },
            [&](const events::EmissionsDistributed& e) { d.escrows.at(e.escrow).apply_distributed(e.epoch, e.carried); },
            [&](const events::SwapVolumeRecorded& e) {
                d.escrows.at(e.escrow).apply_swap(e.pool_id, e.volume, e.revenue);
            },
        },
        event);
}

WorldState WorldState::replay(const EventLog& log, const CodeBook& code) {
    if (log.empty() || !std::holds_alternative<events::Genesis>(log.front()))
        throw PreconditionError("event log must begin with genesis");
    WorldState world{ReplayTag{}};
    world.code_ = code;
    for (const auto& e : log) world.record(e);
    return world;
}

}  // namespace govsim
