#include "govsim/behaviors.hpp"

#include "govsim/world.hpp"

namespace govsim::behaviors {

namespace {

void only(const ExecutionContext& ctx, const char* key) {
    const json who = ctx.load(key);
    require(!who.is_null() && who.get<Address>() == ctx.sender(), std::string("caller is not ") + key);
}

const WorldState& chain(const ExecutionContext& ctx) {
    const WorldState* w = ctx.world();
    if (w == nullptr) throw Revert("no chain attached");
    return *w;
}

json object_or_empty(json j) { return j.is_null() ? json::object() : j; }

}  // namespace

std::shared_ptr<const Behavior> collateral_vault_v1() {
    auto b = std::make_shared<Behavior>();
    b->name = "collateral_vault";
    b->version = 1;
    b->ops["owner"] = [](ExecutionContext& ctx, const json&) { return ctx.load("owner"); };
    b->ops["set_owner"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "owner");
        ctx.store("owner", args.at("owner"));
        return nullptr;
    };
    b->ops["balance"] = [](ExecutionContext& ctx, const json& args) -> json {
        return chain(ctx).token(args.at("token").get<std::string>()).balance(ctx.self());
    };
    b->ops["transfer_out"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "owner");
        ctx.call(args.at("token").get<Address>(), "transfer", {{"to", args.at("to")}, {"amount", args.at("amount")}});
        return nullptr;
    };
    b->ops["sweep"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "owner");
        const auto token = args.at("token").get<std::string>();
        const Units amount = chain(ctx).token(token).balance(ctx.self());
        ctx.call(Address{token}, "transfer", {{"to", args.at("to")}, {"amount", amount}});
        return amount;
    };
    return b;
}

std::shared_ptr<const Behavior> asset_registry_v1() {
    auto b = std::make_shared<Behavior>();
    b->name = "asset_registry";
    b->version = 1;
    b->ops["add_asset"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "owner");
        json assets = object_or_empty(ctx.load("assets"));
        assets[args.at("symbol").get<std::string>()] = "listed";
        ctx.store("assets", std::move(assets));
        return nullptr;
    };
    b->ops["freeze_asset"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "owner");
        json assets = object_or_empty(ctx.load("assets"));
        const auto symbol = args.at("symbol").get<std::string>();
        require(assets.contains(symbol), "asset not listed");
        assets[symbol] = "frozen";
        ctx.store("assets", std::move(assets));
        return nullptr;
    };
    b->ops["is_listed"] = [](ExecutionContext& ctx, const json& args) -> json {
        const json assets = object_or_empty(ctx.load("assets"));
        const auto symbol = args.at("symbol").get<std::string>();
        return assets.contains(symbol) && assets.at(symbol) == "listed";
    };
    return b;
}

std::shared_ptr<const Behavior> lending_market_v1() {
    auto b = std::make_shared<Behavior>();
    b->name = "lending_market";
    b->version = 1;
    b->ops["borrow"] = [](ExecutionContext& ctx, const json& args) -> json {
        const Units amount = args.at("amount").get<Units>();
        require(amount > 0, "borrow amount must be positive");
        const Address token = ctx.load("token").get<Address>();
        ctx.call(token, "transfer", {{"to", ctx.sender()}, {"amount", amount}});
        json debt = object_or_empty(ctx.load("debt"));
        debt[ctx.sender().str()] = debt.value(ctx.sender().str(), Units{0}) + amount;
        ctx.store("debt", std::move(debt));
        return nullptr;
    };
    b->ops["debt_of"] = [](ExecutionContext& ctx, const json& args) -> json {
        return object_or_empty(ctx.load("debt")).value(args.at("account").get<std::string>(), Units{0});
    };
    b->ops["accrue_interest"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "operator");
        const Units bps = args.at("bps").get<Units>();
        json debt = object_or_empty(ctx.load("debt"));
        for (auto& [account, owed] : debt.items()) owed = owed.get<Units>() + apply_bps(owed.get<Units>(), bps);
        ctx.store("debt", std::move(debt));
        return nullptr;
    };
    b->ops["distribute_rewards"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "operator");
        const Units bps = args.at("bps").get<Units>();
        const Address token = ctx.load("token").get<Address>();
        const json debt = object_or_empty(ctx.load("debt"));
        Units total = 0;
        for (const auto& [account, owed] : debt.items()) {
            const Units reward = apply_bps(owed.get<Units>(), bps);
            if (reward > 0) ctx.call(token, "mint", {{"to", account}, {"amount", reward}});
            total += reward;
        }
        return total;
    };
    return b;
}

std::shared_ptr<const Behavior> meta_index_v1() {
    auto b = std::make_shared<Behavior>();
    b->name = "meta_index";
    b->version = 1;
    b->ops["internal_vote"] = [](ExecutionContext& ctx, const json& args) -> json {
        const auto id = std::to_string(args.at("host_id").get<std::uint64_t>());
        const bool support = args.at("support").get<bool>();
        json voted = ctx.load("voted:" + id);
        if (voted.is_null()) voted = json::array();
        for (const auto& v : voted) require(v.get<Address>() != ctx.sender(), "already voted");
        const Units weight = chain(ctx).token(ctx.load("index_token").get<std::string>()).balance(ctx.sender());
        json tally = ctx.load("tally:" + id);
        if (tally.is_null()) tally = json{{"for", 0}, {"against", 0}};
        tally[support ? "for" : "against"] = tally[support ? "for" : "against"].get<Units>() + weight;
        voted.push_back(ctx.sender());
        ctx.store("tally:" + id, std::move(tally));
        ctx.store("voted:" + id, std::move(voted));
        return weight;
    };
    b->ops["pass_through"] = [](ExecutionContext& ctx, const json& args) -> json {
        const auto host_id = args.at("host_id").get<std::uint64_t>();
        const auto id = std::to_string(host_id);
        require(ctx.load("relayed:" + id).is_null(), "already relayed");
        const json tally = ctx.load("tally:" + id);
        const Units yes = tally.is_null() ? 0 : tally.at("for").get<Units>();
        const Units no = tally.is_null() ? 0 : tally.at("against").get<Units>();
        ctx.store("relayed:" + id, true);
        if (yes == no) return "abstain";
        ctx.call(ctx.load("host_governor").get<Address>(), "cast_vote", {{"id", host_id}, {"support", yes > no}});
        return yes > no ? "for" : "against";
    };
    b->ops["relay_propose"] = [](ExecutionContext& ctx, const json& args) -> json {
        only(ctx, "operator");
        return ctx.call(ctx.load("host_governor").get<Address>(), "propose",
                        {{"actions", args.at("actions")}, {"metadata_hash", args.value("metadata_hash", "")}});
    };
    return b;
}

std::vector<std::shared_ptr<const Behavior>> all() {
    return {asset_registry_v1(), collateral_vault_v1(), lending_market_v1(), meta_index_v1()};
}

CodeBook code_book() {
    CodeBook book;
    for (auto& b : all()) book.add(std::move(b));
    return book;
}

}  // namespace govsim::behaviors
