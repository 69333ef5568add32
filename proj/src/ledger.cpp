#include "govsim/ledger.hpp"

#include <algorithm>

#include "govsim/world.hpp"

namespace govsim {

// ---- CheckpointHistory ----

void CheckpointHistory::write(BlockHeight block, Units value) {
    if (!points_.empty()) {
        if (block < points_.back().block) throw std::logic_error("checkpoint written out of order");
        if (block == points_.back().block) {
            points_.back().value = value;
            return;
        }
    }
    points_.push_back({block, value});
}

Units CheckpointHistory::at(BlockHeight block) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), block,
                               [](BlockHeight b, const Checkpoint& c) { return b < c.block; });
    return it == points_.begin() ? 0 : std::prev(it)->value;
}

// ---- TokenLedger ----

TokenLedger::TokenLedger(std::string name, std::vector<Address> authorities)
    : name_(std::move(name)), authorities_(authorities.begin(), authorities.end()) {}

Units TokenLedger::balance(const Address& a) const {
    auto it = balances_.find(a);
    return it == balances_.end() ? 0 : it->second;
}

Units TokenLedger::balance_at(const Address& a, BlockHeight b) const {
    auto it = balance_history_.find(a);
    return it == balance_history_.end() ? 0 : it->second.at(b);
}

Units TokenLedger::power(const Address& a, PowerKind kind) const {
    auto it = power_history_.find(a);
    return it == power_history_.end() ? 0 : it->second[static_cast<int>(kind)].latest();
}

Units TokenLedger::power_at(const Address& a, PowerKind kind, BlockHeight b) const {
    auto it = power_history_.find(a);
    return it == power_history_.end() ? 0 : it->second[static_cast<int>(kind)].at(b);
}

const CheckpointHistory* TokenLedger::power_history(const Address& a, PowerKind kind) const {
    auto it = power_history_.find(a);
    return it == power_history_.end() ? nullptr : &it->second[static_cast<int>(kind)];
}

Address TokenLedger::delegatee(const Address& holder, PowerKind kind) const {
    auto it = delegation_.find(holder);
    if (it == delegation_.end()) return holder;
    return it->second[static_cast<int>(kind)];
}

std::vector<Address> TokenLedger::power_holders(PowerKind kind) const {
    std::vector<Address> out;
    for (const auto& [addr, hist] : power_history_)
        if (!hist[static_cast<int>(kind)].points().empty()) out.push_back(addr);
    return out;
}

void TokenLedger::move_power(const Address& from, const Address& to, PowerKind kind, Units amount, BlockHeight b) {
    if (amount == 0 || from == to) return;
    const int k = static_cast<int>(kind);
    if (!from.empty()) {
        auto& h = power_history_[from][k];
        h.write(b, h.latest() - amount);
    }
    if (!to.empty()) {
        auto& h = power_history_[to][k];
        h.write(b, h.latest() + amount);
    }
}

void TokenLedger::adjust_balance(const Address& a, Units delta, BlockHeight b) {
    auto& bal = balances_[a];
    bal += delta;
    balance_history_[a].write(b, bal);
    if (bal == 0) balances_.erase(a);
}

void TokenLedger::apply_transfer(const Address& from, const Address& to, Units amount, BlockHeight b) {
    adjust_balance(from, -amount, b);
    adjust_balance(to, amount, b);
    for (auto kind : {PowerKind::Voting, PowerKind::Proposition})
        move_power(delegatee(from, kind), delegatee(to, kind), kind, amount, b);
}

void TokenLedger::apply_mint(const Address& to, Units amount, BlockHeight b) {
    total_supply_ += amount;
    supply_history_.write(b, total_supply_);
    adjust_balance(to, amount, b);
    for (auto kind : {PowerKind::Voting, PowerKind::Proposition}) move_power({}, delegatee(to, kind), kind, amount, b);
}

void TokenLedger::apply_burn(const Address& from, Units amount, BlockHeight b) {
    total_supply_ -= amount;
    supply_history_.write(b, total_supply_);
    adjust_balance(from, -amount, b);
    for (auto kind : {PowerKind::Voting, PowerKind::Proposition}) move_power(delegatee(from, kind), {}, kind, amount, b);
}

void TokenLedger::apply_delegate(const Address& holder, const Address& to, PowerKind kind, BlockHeight b) {
    const Address previous = delegatee(holder, kind);
    auto [it, fresh] = delegation_.try_emplace(holder, std::array<Address, 2>{holder, holder});
    it->second[static_cast<int>(kind)] = to;
    move_power(previous, to, kind, balance(holder), b);
}

namespace ledger {

namespace {

const TokenLedger& token_of(const TxContext& tx, const std::string& token) {
    if (!tx.world.has_token(token)) throw Revert("unknown token");
    return tx.world.token(token);
}

Units amount_arg(const json& args) {
    const Units a = args.at("amount").get<Units>();
    require(a >= 0, "negative amount");
    return a;
}

}  // namespace

void create_token(TxContext& tx, const std::string& token, std::vector<Address> authorities) {
    require(!token.empty(), "empty token name");
    require(!tx.world.has_token(token), "token already exists");
    if (authorities.empty()) authorities.push_back(tx.sender);
    tx.emit(events::TokenCreated{token, std::move(authorities)});
}

void grant_authority(TxContext& tx, const std::string& token, const Address& authority) {
    require(token_of(tx, token).is_authority(tx.sender), "not token authority");
    tx.emit(events::AuthorityGranted{token, authority});
}

void transfer(TxContext& tx, const std::string& token, const Address& to, Units amount) {
    const auto& led = token_of(tx, token);
    require(amount >= 0, "negative amount");
    require(!to.empty(), "transfer to empty address");
    require(led.balance(tx.sender) >= amount, "insufficient balance");
    if (amount == 0 || to == tx.sender) return;
    tx.emit(events::Transferred{token, tx.sender, to, amount});
}

void delegate(TxContext& tx, const std::string& token, const Address& delegatee, PowerKind kind) {
    token_of(tx, token);
    require(!delegatee.empty(), "delegate to empty address");
    tx.emit(events::Delegated{token, tx.sender, delegatee, kind});
}

void mint(TxContext& tx, const std::string& token, const Address& to, Units amount) {
    const auto& led = token_of(tx, token);
    require(led.is_authority(tx.sender), "not token authority");
    require(amount >= 0, "negative amount");
    require(!to.empty(), "mint to empty address");
    if (amount == 0) return;
    tx.emit(events::Minted{token, to, amount});
}

void burn(TxContext& tx, const std::string& token, const Address& from, Units amount) {
    const auto& led = token_of(tx, token);
    require(led.is_authority(tx.sender), "not token authority");
    require(amount >= 0, "negative amount");
    require(led.balance(from) >= amount, "burn exceeds balance");
    if (amount == 0) return;
    tx.emit(events::Burned{token, from, amount});
}

void create_flash_pool(TxContext& tx, const Address& pool, const std::string& token, Units fee_bps) {
    token_of(tx, token);
    require(fee_bps >= 0 && fee_bps <= bps_denominator, "fee out of range");
    require(!tx.world.data().flash_pools.contains(pool), "flash pool already exists");
    tx.emit(events::FlashPoolCreated{pool, token, fee_bps});
}

void flash_borrow(TxContext& tx, const Address& pool, Units amount) {
    if (!tx.world.data().flash_pools.contains(pool)) throw Revert("unknown flash pool");
    const auto& fp = tx.world.flash_pool(pool);
    require(amount > 0, "flash borrow needs a positive amount");
    const Units reserve = tx.world.token(fp.token).balance(pool);
    require(amount <= reserve, "insufficient liquidity");
    if (tx.loans == nullptr) throw Revert("flash borrow outside a transaction");
    const Units fee = fp.fee_for(amount);
    tx.loans->push_back(FlashLoan{pool, amount, fee, reserve});
    tx.emit(events::FlashBorrowed{pool, tx.sender, amount, fee});
    tx.emit(events::Transferred{fp.token, pool, tx.sender, amount});
}

void flash_borrow(TxContext& tx, const Address& pool, Units amount, const std::function<void(TxContext&)>& body) {
    if (!tx.world.data().flash_pools.contains(pool)) throw Revert("unknown flash pool");
    const auto& fp = tx.world.flash_pool(pool);
    const std::string token = fp.token;
    const Units reserve = tx.world.token(token).balance(pool);
    require(amount > 0, "flash borrow needs a positive amount");
    require(amount <= reserve, "insufficient liquidity");
    const Units fee = fp.fee_for(amount);
    tx.emit(events::FlashBorrowed{pool, tx.sender, amount, fee});
    tx.emit(events::Transferred{token, pool, tx.sender, amount});
    body(tx);
    require(tx.world.token(token).balance(pool) >= reserve + fee, "flashloan not repaid");
}

void repay(TxContext& tx, const Address& pool, Units amount) {
    if (!tx.world.data().flash_pools.contains(pool)) throw Revert("unknown flash pool");
    transfer(tx, tx.world.flash_pool(pool).token, pool, amount);
}

json handle_token_call(TxContext& tx, const std::string& token, const std::string& op, const json& args) {
    if (op == "transfer") {
        transfer(tx, token, args.at("to").get<Address>(), amount_arg(args));
        return nullptr;
    }
    if (op == "delegate") {
        const auto kind = args.value("kind", PowerKind::Voting);
        delegate(tx, token, args.at("delegatee").get<Address>(), kind);
        return nullptr;
    }
    if (op == "mint") {
        mint(tx, token, args.at("to").get<Address>(), amount_arg(args));
        return nullptr;
    }
    if (op == "burn") {
        burn(tx, token, args.at("from").get<Address>(), amount_arg(args));
        return nullptr;
    }
    if (op == "grant_authority") {
        grant_authority(tx, token, args.at("authority").get<Address>());
        return nullptr;
    }
    if (op == "balance_of") return tx.world.token(token).balance(args.at("account").get<Address>());
    throw Revert("no such function");
}

json handle_pool_call(TxContext& tx, const Address& pool, const std::string& op, const json& args) {
    if (op == "flash_borrow") {
        const Units amount = amount_arg(args);
        if (args.contains("body")) {
            flash_borrow(tx, pool, amount, [&](TxContext& inner) {
                for (const auto& c : args.at("body")) {
                    Call call{c.at("target").get<Address>(), c.at("op").get<std::string>(),
                              c.value("args", json::object()), c.value("value", Units{0})};
                    inner.world.dispatch(inner, call);
                }
            });
        } else {
            flash_borrow(tx, pool, amount);
        }
        return nullptr;
    }
    if (op == "repay") {
        repay(tx, pool, amount_arg(args));
        return nullptr;
    }
    throw Revert("no such function");
}

}  // namespace ledger

}  // namespace govsim
