#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "govsim/types.hpp"

namespace govsim {

struct TxContext;
class WorldState;

/// What an implementation's code sees while it runs under delegatecall:
/// the proxy's storage, and the caller's sender and value unchanged.
class ExecutionContext {
public:
    virtual ~ExecutionContext() = default;

    virtual const Address& sender() const = 0;
    virtual Units value() const = 0;
    /// The proxy whose storage is in scope.
    virtual const Address& self() const = 0;

    /// null when the key was never written.
    virtual json load(const std::string& key) const = 0;
    virtual void store(const std::string& key, json value) = 0;

    /// Outbound call made by the proxy (msg.sender becomes self()).
    virtual json call(const Address& target, const std::string& op, const json& args) = 0;

    /// Read-only view of the chain; null when run outside a world.
    virtual const WorldState* world() const = 0;
};

using Operation = std::function<json(ExecutionContext&, const json& args)>;

/// Named, versioned table of operations. Holds no storage of its own.
struct Behavior {
    std::string name;
    int version = 1;
    std::map<std::string, Operation> ops;

    ContractId id() const { return Address{name + "@v" + std::to_string(version)}; }
};

using Storage = std::map<std::string, json>;

struct ImplementationRecord {
    ContractId id;
    std::string behavior;
    int version = 0;
    friend bool operator==(const ImplementationRecord&, const ImplementationRecord&) = default;
};

struct Proxy {
    ContractId id;
    Address admin;
    ContractId implementation;
    Storage storage;
    friend bool operator==(const Proxy&, const Proxy&) = default;
};

/// Code for registered implementations. Code is not part of world state
/// (as bytecode is not part of an event log); replay needs the same book.
class CodeBook {
public:
    void add(std::shared_ptr<const Behavior> behavior);
    const Behavior* find(const ContractId& id) const;

private:
    std::map<ContractId, std::shared_ptr<const Behavior>> code_;
};

class ContractRegistry {
public:
    bool has_implementation(const ContractId& id) const { return implementations_.contains(id); }
    bool has_proxy(const ContractId& id) const { return proxies_.contains(id); }
    const Proxy& proxy(const ContractId& id) const;
    const std::map<ContractId, ImplementationRecord>& implementations() const { return implementations_; }
    const std::map<ContractId, Proxy>& proxies() const { return proxies_; }

    void apply_register(ImplementationRecord record);
    void apply_deploy(Proxy proxy);
    void apply_set_implementation(const ContractId& proxy, const ContractId& impl);
    void apply_set_admin(const ContractId& proxy, const Address& admin);
    void apply_store(const ContractId& proxy, const std::string& key, json value);

    friend bool operator==(const ContractRegistry&, const ContractRegistry&) = default;

private:
    std::map<ContractId, ImplementationRecord> implementations_;
    std::map<ContractId, Proxy> proxies_;
};

namespace contracts {

/// Registers immutable code. Reverts if the id is already taken.
ContractId register_implementation(TxContext& tx, std::shared_ptr<const Behavior> behavior);

void deploy_proxy(TxContext& tx, const ContractId& proxy, const Address& admin, const ContractId& implementation,
                  Storage initial = {});

/// Runs op from the proxy's current implementation against the proxy's
/// storage, keeping the caller's sender and value.
json delegate_call(TxContext& tx, const ContractId& proxy, const std::string& op, const json& args);

/// Admin-only. The caller is tx.sender.
void set_implementation(TxContext& tx, const ContractId& proxy, const ContractId& implementation);
void set_admin(TxContext& tx, const ContractId& proxy, const Address& admin);

/// Proxy entry point: admin functions are answered by the proxy itself,
/// everything else is delegated.
json handle_proxy_call(TxContext& tx, const ContractId& proxy, const std::string& op, const json& args);

}  // namespace contracts

}  // namespace govsim
