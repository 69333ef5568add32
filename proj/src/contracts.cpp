#include "govsim/contracts.hpp"

#include "govsim/world.hpp"

namespace govsim {

void CodeBook::add(std::shared_ptr<const Behavior> behavior) {
    if (!behavior) throw PreconditionError("null behavior");
    code_[behavior->id()] = std::move(behavior);
}

const Behavior* CodeBook::find(const ContractId& id) const {
    auto it = code_.find(id);
    return it == code_.end() ? nullptr : it->second.get();
}

const Proxy& ContractRegistry::proxy(const ContractId& id) const {
    auto it = proxies_.find(id);
    if (it == proxies_.end()) throw PreconditionError("unknown proxy: " + id.str());
    return it->second;
}

void ContractRegistry::apply_register(ImplementationRecord record) {
    implementations_.emplace(record.id, std::move(record));
}

void ContractRegistry::apply_deploy(Proxy proxy) { proxies_.emplace(proxy.id, std::move(proxy)); }

void ContractRegistry::apply_set_implementation(const ContractId& proxy, const ContractId& impl) {
    proxies_.at(proxy).implementation = impl;
}

void ContractRegistry::apply_set_admin(const ContractId& proxy, const Address& admin) { proxies_.at(proxy).admin = admin; }

void ContractRegistry::apply_store(const ContractId& proxy, const std::string& key, json value) {
    proxies_.at(proxy).storage[key] = std::move(value);
}

namespace {

/// Delegatecall frame: storage of the proxy, sender and value of the caller.
class ProxyFrame final : public ExecutionContext {
public:
    ProxyFrame(TxContext& tx, ContractId proxy) : tx_(tx), proxy_(std::move(proxy)) {}

    const Address& sender() const override { return tx_.sender; }
    Units value() const override { return tx_.value; }
    const Address& self() const override { return proxy_; }

    json load(const std::string& key) const override {
        const auto& storage = tx_.world.registry().proxy(proxy_).storage;
        auto it = storage.find(key);
        return it == storage.end() ? json(nullptr) : it->second;
    }

    void store(const std::string& key, json value) override {
        tx_.emit(events::StorageWritten{proxy_, key, std::move(value)});
    }

    json call(const Address& target, const std::string& op, const json& args) override {
        TxContext frame = tx_.as(proxy_);
        return tx_.world.dispatch(frame, Call{target, op, args, 0});
    }

    const WorldState* world() const override { return &tx_.world; }

private:
    TxContext& tx_;
    ContractId proxy_;
};

}  // namespace

namespace contracts {

ContractId register_implementation(TxContext& tx, std::shared_ptr<const Behavior> behavior) {
    if (!behavior) throw Revert("null behavior");
    const ContractId id = behavior->id();
    require(!tx.world.registry().has_implementation(id), "implementation already registered");
    const Behavior* existing = tx.world.code().find(id);
    require(existing == nullptr || existing == behavior.get(), "code id collision");
    tx.world.code().add(behavior);
    tx.emit(events::ImplementationRegistered{id, behavior->name, behavior->version});
    return id;
}

void deploy_proxy(TxContext& tx, const ContractId& proxy, const Address& admin, const ContractId& implementation,
                  Storage initial) {
    require(!proxy.empty(), "empty proxy address");
    require(!tx.world.registry().has_proxy(proxy), "proxy already deployed");
    require(tx.world.registry().has_implementation(implementation), "unknown implementation");
    json storage = json::object();
    for (auto& [k, v] : initial) storage[k] = std::move(v);
    tx.emit(events::ProxyDeployed{proxy, admin, implementation, std::move(storage)});
}

json delegate_call(TxContext& tx, const ContractId& proxy, const std::string& op, const json& args) {
    require(tx.world.registry().has_proxy(proxy), "unknown proxy");
    const ContractId impl = tx.world.registry().proxy(proxy).implementation;
    const Behavior* code = tx.world.code().find(impl);
    require(code != nullptr, "implementation code missing");
    auto it = code->ops.find(op);
    require(it != code->ops.end(), "no such function");
    tx.emit(events::DelegateCalled{proxy, impl, op, tx.sender, tx.value});
    ProxyFrame frame(tx, proxy);
    return it->second(frame, args);
}

void set_implementation(TxContext& tx, const ContractId& proxy, const ContractId& implementation) {
    require(tx.world.registry().has_proxy(proxy), "unknown proxy");
    const auto& p = tx.world.registry().proxy(proxy);
    require(p.admin == tx.sender, "not admin");
    require(tx.world.registry().has_implementation(implementation), "unknown implementation");
    tx.emit(events::ImplementationChanged{proxy, p.implementation, implementation, tx.sender});
}

void set_admin(TxContext& tx, const ContractId& proxy, const Address& admin) {
    require(tx.world.registry().has_proxy(proxy), "unknown proxy");
    const auto& p = tx.world.registry().proxy(proxy);
    require(p.admin == tx.sender, "not admin");
    require(!admin.empty(), "empty admin");
    tx.emit(events::AdminChanged{proxy, p.admin, admin});
}

json handle_proxy_call(TxContext& tx, const ContractId& proxy, const std::string& op, const json& args) {
    if (op == "set_implementation") {
        set_implementation(tx, proxy, args.at("implementation").get<Address>());
        return nullptr;
    }
    if (op == "set_admin") {
        set_admin(tx, proxy, args.at("admin").get<Address>());
        return nullptr;
    }
    return delegate_call(tx, proxy, op, args);
}

}  // namespace contracts

}  // namespace govsim
