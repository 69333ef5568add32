#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace govsim {

using json = nlohmann::json;

/// Token amounts in the smallest denomination.
using Units = std::int64_t;

/// Block index on the simulated chain.
using BlockHeight = std::uint64_t;

/// Seconds since the simulated epoch.
using Timestamp = std::int64_t;

constexpr Units bps_denominator = 10'000;

/// Accounts and contracts share one address space, as on an EVM chain:
/// a contract can hold balances, delegate, vote and administer proxies.
struct Address {
    std::string value;

    Address() = default;
    Address(std::string v) : value(std::move(v)) {}
    Address(const char* v) : value(v) {}

    bool empty() const { return value.empty(); }
    const std::string& str() const { return value; }

    friend auto operator<=>(const Address&, const Address&) = default;
    friend bool operator==(const Address&, const Address&) = default;

    /// Sink for tokens or power nobody can use.
    static Address null() { return Address{"0x0"}; }
};

using AccountId = Address;
using ContractId = Address;

inline void to_json(json& j, const Address& a) { j = a.value; }
inline void from_json(const json& j, Address& a) { a.value = j.get<std::string>(); }

enum class PowerKind { Voting = 0, Proposition = 1 };

NLOHMANN_JSON_SERIALIZE_ENUM(PowerKind, {{PowerKind::Voting, "voting"}, {PowerKind::Proposition, "proposition"}})

const char* to_string(PowerKind kind);

/// A failed call inside a transaction. The enclosing atomic transaction
/// rolls back and reports this as a Reverted outcome.
class Revert : public std::runtime_error {
public:
    explicit Revert(const std::string& reason) : std::runtime_error(reason) {}
    const char* reason() const noexcept { return what(); }
};

/// Caller broke an operation's precondition outside of any transaction.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& reason) {
    if (!cond) throw Revert(reason);
}

/// floor(amount * bps / 10000) without intermediate overflow.
inline Units apply_bps(Units amount, Units bps) {
    return static_cast<Units>(static_cast<__int128>(amount) * bps / bps_denominator);
}

}  // namespace govsim

template <>
struct std::hash<govsim::Address> {
    std::size_t operator()(const govsim::Address& a) const noexcept { return std::hash<std::string>{}(a.value); }
};
