#include <doctest.h>

#include <numeric>

#include "govsim/world.hpp"
#include "support/oracles.hpp"

using namespace govsim;

namespace {

constexpr Timestamp day = 86'400;
constexpr Timestamp week = seconds_per_week;
constexpr Timestamp year = 52 * week;

/// One block per day, so a week is seven blocks.
WorldState escrow_world(Units tokens_per_epoch = 0) {
    auto w = oracle::world_with({"harness", "dao", "alice", "bob", "carol", "lp_a", "lp_b"}, ChainParams{0, day, 1});
    oracle::must(w, "harness", [&](TxContext& tx) {
        ledger::create_token(tx, "BAL", {"harness"});
        for (const char* who : {"alice", "bob", "carol"}) ledger::mint(tx, "BAL", who, 1'000'000);
        EscrowParams p;
        p.token = "BAL";
        p.tokens_per_epoch = tokens_per_epoch;
        p.governance = "dao";
        escrow::create_escrow(tx, "ve", p);
        ledger::grant_authority(tx, "BAL", "ve");
    });
    return w;
}

void advance_to_time(WorldState& w, Timestamp t) {
    const auto b = static_cast<BlockHeight>(t / day);
    if (b > w.height()) w.advance_to(b);
}

}  // namespace

TEST_CASE("ve power: full lock equals the amount and halves at mid-term") {
    auto w = escrow_world();
    oracle::must(w, "alice", [](TxContext& tx) { escrow::create_lock(tx, "ve", 100, year); });
    const auto& e = w.escrow("ve");
    CHECK(e.ve_power("alice", 0) == 100);
    CHECK(e.ve_power("alice", 26 * week) == 50);
    CHECK(e.ve_power("alice", 26 * week + 6 * day) == 50);
    CHECK(e.ve_power("alice", 27 * week) == 48);
    CHECK(e.ve_power("alice", year - 1) == 1);
    CHECK(e.ve_power("alice", year) == 0);
    CHECK(e.locked_amount("alice", 0) == 100);
    CHECK(w.token("BAL").balance("ve") == 100);
}

TEST_CASE("lock validation and withdrawal") {
    auto w = escrow_world();
    CHECK(oracle::revert_of(w, "alice", [](TxContext& tx) { escrow::create_lock(tx, "ve", 1, year + week); }) ==
          "lock exceeds max duration");
    CHECK(oracle::revert_of(w, "alice", [](TxContext& tx) { escrow::create_lock(tx, "ve", 1, 3 * day); }) ==
          "unlock time must be in the future");
    CHECK(oracle::revert_of(w, "alice", [](TxContext& tx) { escrow::create_lock(tx, "ve", 2'000'000, week); }) ==
          "insufficient balance");
    std::uint64_t id = 0;
    oracle::must(w, "alice", [&](TxContext& tx) { id = escrow::create_lock(tx, "ve", 500, 2 * week + 3 * day); });
    CHECK(w.escrow("ve").locks()[id - 1].unlock_time == 2 * week);
    CHECK(oracle::revert_of(w, "alice", [&](TxContext& tx) { escrow::withdraw(tx, "ve", id); }) == "lock not expired");
    advance_to_time(w, 2 * week);
    CHECK(oracle::revert_of(w, "bob", [&](TxContext& tx) { escrow::withdraw(tx, "ve", id); }) == "not lock owner");
    oracle::must(w, "alice", [&](TxContext& tx) { escrow::withdraw(tx, "ve", id); });
    CHECK(w.token("BAL").balance("alice") == 1'000'000);
}

TEST_CASE("property: ve decay is a non-increasing weekly step matching the closed form") {
    oracle::Rng rng(5);
    for (int round = 0; round < 300; ++round) {
        auto w = escrow_world();
        const Timestamp start = static_cast<Timestamp>(rng.below(20)) * day;
        advance_to_time(w, start);
        const Units amount = rng.range(1, 1'000'000);
        const Timestamp unlock = start + rng.range(14, year / day) * day;
        oracle::must(w, "alice", [&](TxContext& tx) { escrow::create_lock(tx, "ve", amount, unlock); });
        const auto& lock = w.escrow("ve").locks().back();
        if (start % week == 0 && unlock - start == year) CHECK(w.escrow("ve").ve_power("alice", start) == amount);

        Units prev = w.escrow("ve").ve_power("alice", start);
        for (Timestamp t = start; t <= lock.unlock_time + week; t += day) {
            const Units v = w.escrow("ve").ve_power("alice", t);
            CHECK(v == oracle::ve_closed_form(amount, start, lock.unlock_time, t, week, year));
            CHECK(v <= prev);
            if (t % week != 0 && t > start) CHECK(v == prev);
            if (t >= lock.unlock_time) CHECK(v == 0);
            prev = v;
        }
    }
}

TEST_CASE("largest remainder split") {
    CHECK(largest_remainder_split(1'000, {{1, 35}, {2, 65}}) == std::map<std::uint64_t, Units>{{1, 350}, {2, 650}});
    CHECK(largest_remainder_split(10, {{1, 1}, {2, 1}, {3, 1}}) ==
          std::map<std::uint64_t, Units>{{1, 4}, {2, 3}, {3, 3}});
    CHECK(largest_remainder_split(10, {{1, 0}, {2, 0}}) == std::map<std::uint64_t, Units>{{1, 0}, {2, 0}});

    oracle::Rng rng(3);
    for (int i = 0; i < 2'000; ++i) {
        std::map<std::uint64_t, __int128> weights;
        const auto n = 1 + rng.below(8);
        __int128 sum = 0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            weights[k] = rng.range(0, 1'000'000'000);
            sum += weights[k];
        }
        const Units total = rng.range(0, 10'000'000);
        const auto parts = largest_remainder_split(total, weights);
        if (sum == 0) continue;
        Units got = 0;
        for (const auto& [k, v] : parts) {
            const __int128 floor_share = static_cast<__int128>(total) * weights[k] / sum;
            CHECK(v >= static_cast<Units>(floor_share));
            CHECK(v <= static_cast<Units>(floor_share) + 1);
            got += v;
        }
        CHECK(got == total);
    }
}

namespace {

struct Gauges {
    WorldState w;
    std::uint64_t g1 = 0, g2 = 0;

    explicit Gauges(Units per_epoch) : w(escrow_world(per_epoch)) {
        oracle::must(w, "harness", [&](TxContext& tx) {
            const auto p1 = escrow::create_pool(tx, "ve", 1'000);
            const auto p2 = escrow::create_pool(tx, "ve", 30);
            g1 = escrow::add_gauge(tx, "ve", p1);
            g2 = escrow::add_gauge(tx, "ve", p2);
            escrow::set_lp_shares(tx, "ve", p1, "lp_a", 1);
            escrow::set_lp_shares(tx, "ve", p2, "lp_b", 1);
        });
        oracle::must(w, "alice", [](TxContext& tx) { escrow::create_lock(tx, "ve", 350, year); });
        oracle::must(w, "bob", [](TxContext& tx) { escrow::create_lock(tx, "ve", 650, year); });
    }

    void vote(const Address& who, std::map<std::uint64_t, Units> alloc) {
        oracle::must(w, who, [&](TxContext& tx) { escrow::vote_gauge_weight(tx, "ve", alloc); });
    }
    std::map<std::uint64_t, Units> distribute(std::uint64_t epoch) {
        std::map<std::uint64_t, Units> out;
        advance_to_time(w, static_cast<Timestamp>(epoch + 1) * week);
        oracle::must(w, "carol", [&](TxContext& tx) { out = escrow::distribute_emissions(tx, "ve", epoch); });
        return out;
    }
};

}  // namespace

TEST_CASE("emissions follow ve-weighted votes from the next epoch on") {
    Gauges f(1'000);
    f.vote("alice", {{f.g1, 10'000}});
    f.vote("bob", {{f.g2, 10'000}});
    // Votes cast in epoch 0 count from epoch 1; epoch 0 has no weight and carries over.
    const auto e0 = f.distribute(0);
    CHECK(e0.at(f.g1) + e0.at(f.g2) == 0);
    CHECK(f.w.escrow("ve").carried() == 1'000);
    const auto e1 = f.distribute(1);
    CHECK(e1.at(f.g1) + e1.at(f.g2) == 2'000);
    CHECK(e1.at(f.g1) == 700);
    CHECK(e1.at(f.g2) == 1'300);
    CHECK(f.w.token("BAL").balance("lp_a") == 700);
    CHECK(f.w.escrow("ve").carried() == 0);
    CHECK(oracle::revert_of(f.w, "carol", [](TxContext& tx) { escrow::distribute_emissions(tx, "ve", 1); }) ==
          "epoch already distributed");
    CHECK(oracle::revert_of(f.w, "carol", [](TxContext& tx) { escrow::distribute_emissions(tx, "ve", 5); }) ==
          "epoch not complete");
}

TEST_CASE("a killed gauge receives nothing and its weight is redistributed") {
    Gauges f(1'000);
    f.vote("alice", {{f.g1, 10'000}});
    f.vote("bob", {{f.g2, 10'000}});
    f.distribute(0);
    CHECK(oracle::revert_of(f.w, "alice", [&](TxContext& tx) { escrow::kill_gauge(tx, "ve", f.g1); }) ==
          "not governance");
    oracle::must(f.w, "dao", [&](TxContext& tx) { escrow::kill_gauge(tx, "ve", f.g1); });
    const auto e1 = f.distribute(1);
    CHECK(e1.at(f.g1) == 0);
    CHECK(e1.at(f.g2) == 2'000);
}

TEST_CASE("a fixed share comes off the top before the vote split") {
    Gauges f(1'000'000);
    f.vote("alice", {{f.g1, 10'000}});
    f.vote("bob", {{f.g2, 10'000}});
    f.distribute(0);
    oracle::must(f.w, "dao", [&](TxContext& tx) { escrow::set_fixed_share(tx, "ve", f.g1, 1'750); });
    const auto before = f.w.token("BAL").balance("lp_a");
    const auto e1 = f.distribute(1);
    // Epoch 1 emits 1,000,000 plus the 1,000,000 carried from epoch 0.
    CHECK(e1.at(f.g1) == 350'000);
    CHECK(e1.at(f.g2) == 1'650'000);
    const auto e2 = f.distribute(2);
    CHECK(e2.at(f.g1) * 10'000 == 1'000'000 * 1'750);
    CHECK(f.w.token("BAL").balance("lp_a") - before == 350'000 + 175'000);
    CHECK(oracle::revert_of(f.w, "dao", [&](TxContext& tx) { escrow::set_fixed_share(tx, "ve", f.g2, 8'251); }) ==
          "fixed shares exceed 100%");
}

TEST_CASE("protocol revenue is volume times pool fee times protocol share") {
    Gauges f(0);
    oracle::must(f.w, "harness", [](TxContext& tx) {
        for (int i = 0; i < 10; ++i) escrow::record_swap_volume(tx, "ve", 1, 17'000);
        escrow::record_swap_volume(tx, "ve", 2, 1'000'000);
    });
    CHECK(f.w.escrow("ve").pool(1).protocol_revenue == 17'000);
    CHECK(f.w.escrow("ve").pool(1).cumulative_volume == 170'000);
    CHECK(f.w.escrow("ve").pool(2).protocol_revenue == 3'000);
}

TEST_CASE("property: every epoch's emission is conserved in integer units") {
    oracle::Rng rng(9);
    for (int round = 0; round < 40; ++round) {
        const Units per_epoch = rng.range(1, 5'000'000);
        Gauges f(per_epoch);
        const std::vector<Address> voters{"alice", "bob"};
        Units emitted = 0, minted_before = f.w.token("BAL").total_supply();
        for (std::uint64_t epoch = 0; epoch < 6; ++epoch) {
            for (const auto& v : voters) {
                if (!rng.coin()) continue;
                const Units a = rng.range(0, 10'000);
                f.vote(v, {{f.g1, a}, {f.g2, rng.range(0, 10'000 - a)}});
            }
            if (rng.coin(0.1)) oracle::must(f.w, "dao", [&](TxContext& tx) { escrow::kill_gauge(tx, "ve", f.g1); });
            const Units carried_in = f.w.escrow("ve").carried();
            const auto out = f.distribute(epoch);
            const Units paid = std::accumulate(out.begin(), out.end(), Units{0},
                                               [](Units s, const auto& kv) { return s + kv.second; });
            CHECK(paid + f.w.escrow("ve").carried() == per_epoch + carried_in);
            emitted += paid;
        }
        CHECK(f.w.token("BAL").total_supply() - minted_before == emitted);
    }
}
