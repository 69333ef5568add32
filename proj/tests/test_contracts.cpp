#include <doctest.h>

#include "govsim/behaviors.hpp"
#include "govsim/world.hpp"
#include "support/oracles.hpp"

using namespace govsim;

namespace {

std::shared_ptr<const Behavior> counter(int version, Units bias) {
    auto b = std::make_shared<Behavior>();
    b->name = "counter";
    b->version = version;
    b->ops["get"] = [bias](ExecutionContext& ctx, const json&) -> json {
        const json x = ctx.load("x");
        return (x.is_null() ? 0 : x.get<Units>()) + bias;
    };
    b->ops["set"] = [](ExecutionContext& ctx, const json& args) -> json {
        ctx.store("x", args.at("x"));
        return nullptr;
    };
    b->ops["whoami"] = [](ExecutionContext& ctx, const json&) -> json {
        return json{{"sender", ctx.sender()}, {"self", ctx.self()}, {"value", ctx.value()}};
    };
    return b;
}

/// Storage-only context for evaluating an operation table directly.
class Bench : public ExecutionContext {
public:
    Bench(Address sender, Address self, Storage storage) : sender_(std::move(sender)), self_(std::move(self)), storage_(std::move(storage)) {}
    const Address& sender() const override { return sender_; }
    Units value() const override { return 0; }
    const Address& self() const override { return self_; }
    json load(const std::string& key) const override {
        auto it = storage_.find(key);
        return it == storage_.end() ? json(nullptr) : it->second;
    }
    void store(const std::string& key, json value) override { storage_[key] = std::move(value); }
    json call(const Address&, const std::string&, const json&) override { throw Revert("no calls on the bench"); }
    const WorldState* world() const override { return nullptr; }
    const Storage& storage() const { return storage_; }

private:
    Address sender_, self_;
    Storage storage_;
};

json call_proxy(WorldState& w, const Address& from, const std::string& op, json args = json::object(), Units value = 0) {
    json result;
    const auto out = w.run(from, [&](TxContext& tx) {
        TxContext frame = tx.as(from, value);
        result = contracts::handle_proxy_call(frame, "P", op, args);
    });
    REQUIRE(committed(out));
    return result;
}

WorldState proxy_world(ContractId& v1, ContractId& v2) {
    auto w = oracle::world_with({"admin", "user", "mallory", "G"});
    const auto b1 = counter(1, 0), b2 = counter(2, 1);
    oracle::must(w, "admin", [&](TxContext& tx) {
        v1 = contracts::register_implementation(tx, b1);
        v2 = contracts::register_implementation(tx, b2);
        contracts::deploy_proxy(tx, "P", "admin", v1, {{"x", 7}});
    });
    return w;
}

}  // namespace

TEST_CASE("registering code") {
    ContractId v1, v2;
    auto w = proxy_world(v1, v2);
    CHECK(v1 != v2);
    CHECK(v1 == Address{"counter@v1"});
    CHECK(w.registry().implementations().size() == 2);
    CHECK(oracle::revert_of(w, "admin", [](TxContext& tx) { contracts::register_implementation(tx, counter(1, 5)); }) ==
          "implementation already registered");
    oracle::must(w, "admin", [](TxContext& tx) { contracts::register_implementation(tx, counter(3, 2)); });
    CHECK(w.registry().implementations().size() == 3);
}

TEST_CASE("delegate_call reads the proxy's storage with the caller's environment") {
    ContractId v1, v2;
    auto w = proxy_world(v1, v2);
    CHECK(call_proxy(w, "user", "get") == 7);
    const auto env = call_proxy(w, "user", "whoami", json::object(), 0);
    CHECK(env.at("sender") == "user");
    CHECK(env.at("self") == "P");

    const auto storage_before = w.registry().proxy("P").storage;
    oracle::must(w, "admin", [&](TxContext& tx) { contracts::set_implementation(tx, "P", v2); });
    CHECK(w.registry().proxy("P").storage == storage_before);
    CHECK(call_proxy(w, "user", "get") == 8);

    CHECK(oracle::revert_of(w, "user", [](TxContext& tx) { contracts::delegate_call(tx, "P", "selfdestruct", {}); }) ==
          "no such function");
}

TEST_CASE("admin gate") {
    ContractId v1, v2;
    auto w = proxy_world(v1, v2);
    CHECK(oracle::revert_of(w, "mallory", [&](TxContext& tx) { contracts::set_implementation(tx, "P", v2); }) ==
          "not admin");
    CHECK(w.registry().proxy("P").implementation == v1);
    CHECK(oracle::revert_of(w, "mallory", [](TxContext& tx) { contracts::set_admin(tx, "P", "mallory"); }) == "not admin");

    oracle::must(w, "admin", [](TxContext& tx) { contracts::set_admin(tx, "P", "G"); });
    CHECK(w.registry().proxy("P").admin == Address{"G"});
    CHECK(oracle::revert_of(w, "admin", [&](TxContext& tx) { contracts::set_implementation(tx, "P", v2); }) ==
          "not admin");
    oracle::must(w, "G", [&](TxContext& tx) { contracts::set_implementation(tx, "P", v2); });
    CHECK(w.registry().proxy("P").implementation == v2);
}

TEST_CASE("property: randomized upgrade and call sequences") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        oracle::Rng rng(seed);
        ContractId v1, v2;
        auto w = proxy_world(v1, v2);
        const std::vector<Address> callers{"admin", "user", "mallory", "G"};
        const std::vector<ContractId> impls{v1, v2};
        auto book = CodeBook{};
        book.add(counter(1, 0));
        book.add(counter(2, 1));
        for (int step = 0; step < 60; ++step) {
            const Address who = rng.pick(callers);
            const auto before = w.registry().proxy("P");
            switch (rng.below(4)) {
                case 0: {
                    const auto target = rng.pick(impls);
                    const bool ok = committed(w.run(who, [&](TxContext& tx) { contracts::set_implementation(tx, "P", target); }));
                    CHECK(ok == (who == before.admin));
                    CHECK(w.registry().proxy("P").storage == before.storage);
                    CHECK(w.registry().proxy("P").implementation == (ok ? target : before.implementation));
                    break;
                }
                case 1: {
                    const Address next = rng.pick(callers);
                    const bool ok = committed(w.run(who, [&](TxContext& tx) { contracts::set_admin(tx, "P", next); }));
                    CHECK(ok == (who == before.admin));
                    CHECK(w.registry().proxy("P").admin == (ok ? next : before.admin));
                    break;
                }
                case 2: {
                    const json args{{"x", rng.range(-100, 100)}};
                    Bench bench(who, "P", before.storage);
                    book.find(before.implementation)->ops.at("set")(bench, args);
                    call_proxy(w, who, "set", args);
                    CHECK(w.registry().proxy("P").storage == bench.storage());
                    break;
                }
                default: {
                    Bench bench(who, "P", before.storage);
                    const json want = book.find(before.implementation)->ops.at("get")(bench, {});
                    CHECK(call_proxy(w, who, "get") == want);
                }
            }
        }
    }
}

TEST_CASE("a governance-executed upgrade changes behavior in the same block") {
    ContractId v1, v2;
    auto w = proxy_world(v1, v2);
    GovernorParams p;
    p.source.token = "GOV";
    p.proposal_threshold = Quantity::absolute(0);
    p.voting_delay = 1;
    p.voting_period = 5;
    p.quorum = Quantity::absolute(1);
    p.timelock_delay = 2;
    p.grace_period = 100;
    oracle::must(w, "admin", [&](TxContext& tx) {
        ledger::create_token(tx, "GOV", {"admin"});
        ledger::mint(tx, "GOV", "user", 10);
        governor::create_governor(tx, "G", p);
        contracts::set_admin(tx, "P", "G");
    });
    w.advance_blocks(1);
    std::uint64_t id = 0;
    oracle::must(w, "user", [&](TxContext& tx) {
        id = governor::propose(tx, "G", {Action{"P", "set_implementation", {{"implementation", v2}}, "upgrade", {}}}, "");
    });
    w.advance_blocks(1);
    oracle::must(w, "user", [&](TxContext& tx) { governor::cast_vote(tx, "G", id, true); });
    w.advance_to(w.governor("G").proposal(id).end + 1);
    oracle::must(w, "user", [&](TxContext& tx) { governor::queue(tx, "G", id); });
    w.advance_to(*w.governor("G").proposal(id).eta);
    const auto block = w.height();
    CHECK(call_proxy(w, "user", "get") == 7);
    json after;
    oracle::must(w, "user", [&](TxContext& tx) {
        governor::execute(tx, "G", id);
        after = contracts::handle_proxy_call(tx, "P", "get", {});
    });
    CHECK(w.height() == block);
    CHECK(after == 8);
    CHECK(w.registry().proxy("P").implementation == v2);
}

TEST_CASE("shipped behaviors") {
    auto w = oracle::world_with({"owner", "x"});
    oracle::must(w, "owner", [](TxContext& tx) {
        const auto id = contracts::register_implementation(tx, behaviors::asset_registry_v1());
        contracts::deploy_proxy(tx, "reg", "owner", id, {{"owner", json("owner")}});
    });
    oracle::must(w, "owner", [](TxContext& tx) { contracts::delegate_call(tx, "reg", "add_asset", {{"symbol", "UST"}}); });
    CHECK(oracle::revert_of(w, "x", [](TxContext& tx) { contracts::delegate_call(tx, "reg", "add_asset", {{"symbol", "X"}}); }) ==
          "caller is not owner");
    CHECK(oracle::revert_of(w, "owner", [](TxContext& tx) {
              contracts::delegate_call(tx, "reg", "freeze_asset", {{"symbol", "DPI"}});
          }) == "asset not listed");
    oracle::must(w, "owner", [](TxContext& tx) { contracts::delegate_call(tx, "reg", "freeze_asset", {{"symbol", "UST"}}); });
    CHECK(w.registry().proxy("reg").storage.at("assets").at("UST") == "frozen");
    CHECK(behaviors::code_book().find("meta_index@v1") != nullptr);
}
