#include <doctest.h>

#include <algorithm>
#include <map>

#include "govsim/world.hpp"
#include "support/oracles.hpp"

using namespace govsim;

namespace {

const Action noop{"GOV", "balance_of", {{"account", "prop"}}, "read a balance", {}};

struct Fixture {
    WorldState w = oracle::world_with({"harness", "prop", "yes", "no", "buyer", "guardian_1", "guardian_2", "guardian_3",
                                       "guardian_4", "guardian_5", "guardian_6", "guardian_7", "guardian_8",
                                       "guardian_9", "guardian_10"});

    Fixture(const GovernorParams& p, const std::map<Address, Units>& balances) {
        oracle::must(w, "harness", [&](TxContext& tx) {
            ledger::create_token(tx, "GOV", {"harness"});
            for (const auto& [a, b] : balances) ledger::mint(tx, "GOV", a, b);
            governor::create_governor(tx, "G", p);
        });
        w.advance_blocks(1);
    }

    std::uint64_t propose(std::vector<Action> actions = {noop}) {
        std::uint64_t id = 0;
        oracle::must(w, "prop", [&](TxContext& tx) { id = governor::propose(tx, "G", actions, "ipfs://x"); });
        return id;
    }
    void vote(const Address& who, std::uint64_t id, bool support) {
        oracle::must(w, who, [&](TxContext& tx) { governor::cast_vote(tx, "G", id, support); });
    }
    ProposalState state(std::uint64_t id) const { return governor::state(w, "G", id); }
    const Proposal& proposal(std::uint64_t id) const { return w.governor("G").proposal(id); }
};

GovernorParams simple(Units quorum, Units differential) {
    GovernorParams p;
    p.source.token = "GOV";
    p.proposal_threshold = Quantity::absolute(0);
    p.voting_delay = 1;
    p.voting_period = 10;
    p.quorum = Quantity::absolute(quorum);
    p.vote_differential = Quantity::absolute(differential);
    p.timelock_delay = 14'400;
    p.grace_period = 100;
    return p;
}

}  // namespace

TEST_CASE("compound preset: threshold, action cap and delays") {
    const Units supply = 1'000'000;
    auto p = governor::preset_governor("compound", supply);
    p.source.token = "GOV";
    CHECK(p.proposal_threshold.resolve(supply) == 10'000);
    CHECK(p.quorum.resolve(supply) == 40'000);
    CHECK(p.max_actions == 10);
    CHECK(p.voting_period == 3 * 7'200);
    CHECK(p.timelock_delay == 2 * 7'200);

    SUBCASE("exactly one percent is rejected") {
        Fixture f(p, {{"prop", 10'000}, {"harness", supply - 10'000}});
        CHECK(oracle::revert_of(f.w, "prop", [](TxContext& tx) { governor::propose(tx, "G", {noop}, ""); }) ==
              "proposition power below threshold");
    }
    SUBCASE("one percent plus one unit is accepted") {
        Fixture f(p, {{"prop", 10'001}, {"harness", supply - 10'001}});
        CHECK(f.propose() == 1);
    }
    SUBCASE("eleven actions are rejected, ten accepted") {
        Fixture f(p, {{"prop", 10'001}, {"harness", supply - 10'001}});
        CHECK(oracle::revert_of(f.w, "prop", [](TxContext& tx) {
                  governor::propose(tx, "G", std::vector<Action>(11, noop), "");
              }) == "too many actions");
        CHECK(f.propose(std::vector<Action>(10, noop)) == 1);
    }
}

TEST_CASE("uniswap preset: quorum 4,000,000, three-day vote, two-day timelock") {
    const Units supply = 1'000'000'000;
    auto p = governor::preset_governor("uniswap", supply, 12);
    p.source.token = "GOV";
    CHECK(p.proposal_threshold.resolve(supply) == 2'500'000);
    CHECK(p.quorum.resolve(supply) == 4'000'000);
    CHECK(p.voting_period == 21'600);
    CHECK(p.timelock_delay == 14'400);

    for (const Units for_votes : {Units{3'999'999}, Units{4'000'000}}) {
        Fixture f(p, {{"prop", 2'500'001}, {"yes", for_votes}, {"harness", supply - 2'500'001 - for_votes}});
        const auto id = f.propose();
        CHECK(f.proposal(id).end - f.proposal(id).start == 21'600);
        f.w.advance_to(f.proposal(id).start);
        f.vote("yes", id, true);
        f.w.advance_to(f.proposal(id).end + 1);
        if (for_votes < 4'000'000) {
            CHECK(f.state(id) == ProposalState::Defeated);
            continue;
        }
        REQUIRE(f.state(id) == ProposalState::Succeeded);
        const auto queued_at = f.w.height();
        oracle::must(f.w, "yes", [&](TxContext& tx) { governor::queue(tx, "G", id); });
        CHECK(*f.proposal(id).eta == queued_at + 14'400);
    }
}

TEST_CASE("aave presets differ in threshold, quorum and executor") {
    const Units supply = 16'000'000;
    const auto s = governor::preset_governor("aave_short", supply);
    const auto l = governor::preset_governor("aave_long", supply);
    CHECK(s.proposal_threshold.resolve(supply) == 80'000);
    CHECK(l.proposal_threshold.resolve(supply) == 320'000);
    CHECK(s.quorum.resolve(supply) == 320'000);
    CHECK(l.quorum.resolve(supply) == 3'200'000);
    CHECK(s.guardian.threshold == 6);
    CHECK(s.guardian.signers.size() == 10);
    CHECK(s.executor_class == ExecutorClass::Short);
    CHECK(l.executor_class == ExecutorClass::Long);
    CHECK(s.proposition_kind == PowerKind::Proposition);
    CHECK_THROWS_AS(governor::preset_governor("maker", supply), PreconditionError);
}

TEST_CASE("lifecycle: pending, active, succeeded, queued, executed") {
    Fixture f(simple(400, 50), {{"prop", 1}, {"yes", 450}, {"no", 390}});
    const auto id = f.propose();
    CHECK(f.state(id) == ProposalState::Pending);
    CHECK(f.proposal(id).snapshot == f.proposal(id).start);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::cast_vote(tx, "G", id, true); }) ==
          "voting closed");
    f.w.advance_to(f.proposal(id).start);
    CHECK(f.state(id) == ProposalState::Active);
    f.vote("yes", id, true);
    f.vote("no", id, false);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::cast_vote(tx, "G", id, true); }) ==
          "already voted");
    f.w.advance_to(f.proposal(id).end);
    CHECK(f.state(id) == ProposalState::Active);
    f.w.advance_blocks(1);
    CHECK(f.state(id) == ProposalState::Succeeded);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::execute(tx, "G", id); }) ==
          "proposal not queued");

    f.w.advance_to(1'000);
    oracle::must(f.w, "yes", [&](TxContext& tx) { governor::queue(tx, "G", id); });
    CHECK(*f.proposal(id).eta == 15'400);
    CHECK(f.state(id) == ProposalState::Queued);
    f.w.advance_to(15'399);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::execute(tx, "G", id); }) == "timelock");
    f.w.advance_to(15'400);
    oracle::must(f.w, "yes", [&](TxContext& tx) { governor::execute(tx, "G", id); });
    CHECK(f.state(id) == ProposalState::Executed);
}

TEST_CASE("a queued proposal expires after the grace period") {
    Fixture f(simple(1, 1), {{"prop", 1}, {"yes", 10}});
    const auto id = f.propose();
    f.w.advance_to(f.proposal(id).start);
    f.vote("yes", id, true);
    f.w.advance_to(f.proposal(id).end + 1);
    oracle::must(f.w, "yes", [&](TxContext& tx) { governor::queue(tx, "G", id); });
    const auto eta = *f.proposal(id).eta;
    f.w.advance_to(eta + 100);
    CHECK(f.state(id) == ProposalState::Queued);
    f.w.advance_blocks(1);
    CHECK(f.state(id) == ProposalState::Expired);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::execute(tx, "G", id); }) == "proposal expired");
}

TEST_CASE("quorum and differential against a grid oracle") {
    SUBCASE("fixed points") {
        for (const auto& [yes, no, want] : std::vector<std::tuple<Units, Units, ProposalState>>{
                 {450, 390, ProposalState::Succeeded},
                 {410, 390, ProposalState::Defeated},
                 {399, 0, ProposalState::Defeated},
                 {400, 350, ProposalState::Succeeded},
                 {400, 351, ProposalState::Defeated}}) {
            Fixture f(simple(400, 50), {{"prop", 1}, {"yes", yes}, {"no", no}});
            const auto id = f.propose();
            f.w.advance_to(f.proposal(id).start);
            f.vote("yes", id, true);
            f.vote("no", id, false);
            f.w.advance_to(f.proposal(id).end + 1);
            CHECK(f.state(id) == want);
        }
    }
    SUBCASE("random parameters") {
        oracle::Rng rng(11);
        for (int i = 0; i < 300; ++i) {
            const Units yes = rng.range(0, 1'000), no = rng.range(0, 1'000);
            const Units q = rng.range(0, 1'000), d = rng.range(0, 300);
            Fixture f(simple(q, d), {{"prop", 1}, {"yes", yes}, {"no", no}});
            const auto id = f.propose();
            f.w.advance_to(f.proposal(id).start);
            if (yes > 0) f.vote("yes", id, true);
            if (no > 0) f.vote("no", id, false);
            f.w.advance_to(f.proposal(id).end + 1);
            const bool pass = yes >= q && yes - no >= d;
            CHECK(f.state(id) == (pass ? ProposalState::Succeeded : ProposalState::Defeated));
        }
    }
}

TEST_CASE("relative quantities resolve against supply at the snapshot") {
    auto p = simple(0, 1);
    p.quorum = Quantity::of_supply_bps(400);
    Fixture f(p, {{"prop", 1}, {"yes", 39}, {"harness", 960}});
    const auto id = f.propose();
    f.w.advance_to(f.proposal(id).start);
    f.vote("yes", id, true);
    // Supply minted after the snapshot does not move the bar.
    oracle::must(f.w, "harness", [](TxContext& tx) { ledger::mint(tx, "GOV", "harness", 1'000'000); });
    f.w.advance_to(f.proposal(id).end + 1);
    CHECK(f.state(id) == ProposalState::Defeated);

    Fixture g(p, {{"prop", 1}, {"yes", 40}, {"harness", 959}});
    const auto id2 = g.propose();
    g.w.advance_to(g.proposal(id2).start);
    g.vote("yes", id2, true);
    g.w.advance_to(g.proposal(id2).end + 1);
    CHECK(g.state(id2) == ProposalState::Succeeded);
}

TEST_CASE("guardian cancel needs k of n valid signatures") {
    const Units supply = 16'000'000;
    auto p = governor::preset_governor("aave_short", supply);
    p.source.token = "GOV";
    Fixture f(p, {{"prop", 1'000'000}, {"harness", supply - 1'000'000}});
    const auto id = f.propose();
    const std::set<Address> five{"guardian_1", "guardian_2", "guardian_3", "guardian_4", "guardian_5"};
    auto with_forged = five;
    with_forged.insert("mallory");
    CHECK(oracle::revert_of(f.w, "harness", [&](TxContext& tx) { governor::cancel(tx, "G", id, five); }) ==
          "cancel not authorized");
    CHECK(oracle::revert_of(f.w, "harness", [&](TxContext& tx) { governor::cancel(tx, "G", id, with_forged); }) ==
          "cancel not authorized");
    auto six = five;
    six.insert("guardian_6");
    oracle::must(f.w, "harness", [&](TxContext& tx) { governor::cancel(tx, "G", id, six); });
    CHECK(f.state(id) == ProposalState::Canceled);
    const auto& e = std::get<events::ProposalCanceled>(f.w.log()[f.w.log().size() - 2]);
    CHECK(e.path == "guardian");
    CHECK(oracle::revert_of(f.w, "harness", [&](TxContext& tx) { governor::cancel(tx, "G", id, six); }) ==
          "proposal is final");
}

TEST_CASE("anyone may cancel once the proposer drops below the threshold") {
    const Units supply = 1'000'000;
    auto p = governor::preset_governor("compound", supply);
    p.source.token = "GOV";
    Fixture f(p, {{"prop", 20'000}, {"harness", supply - 20'000}});
    const auto id = f.propose();
    CHECK(oracle::revert_of(f.w, "buyer", [&](TxContext& tx) { governor::cancel(tx, "G", id, {}); }) ==
          "cancel not authorized");
    oracle::must(f.w, "prop", [](TxContext& tx) { ledger::transfer(tx, "GOV", "buyer", 10'000); });
    // Read at the previous block, the proposer still clears the bar.
    CHECK(oracle::revert_of(f.w, "buyer", [&](TxContext& tx) { governor::cancel(tx, "G", id, {}); }) ==
          "cancel not authorized");
    f.w.advance_blocks(1);
    oracle::must(f.w, "buyer", [&](TxContext& tx) { governor::cancel(tx, "G", id, {}); });
    CHECK(f.state(id) == ProposalState::Canceled);
    CHECK(std::get<events::ProposalCanceled>(f.w.log()[f.w.log().size() - 2]).path == "below_threshold");
}

TEST_CASE("one live proposal per proposer") {
    Fixture f(simple(1, 1), {{"prop", 5}});
    const auto id = f.propose();
    CHECK(oracle::revert_of(f.w, "prop", [](TxContext& tx) { governor::propose(tx, "G", {noop}, ""); }) ==
          "proposer already has a live proposal");
    f.w.advance_to(f.proposal(id).end + 1);
    CHECK(f.propose() == 2);
}

TEST_CASE("emergency commit") {
    auto p = simple(1, 1);
    p.emergency_commit_bps = 6'700;
    Fixture f(p, {{"prop", 1}, {"yes", 669}, {"no", 330}});
    const auto id = f.propose();
    f.w.advance_to(f.proposal(id).start);
    f.vote("yes", id, true);
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::emergency_commit(tx, "G", id); }) ==
          "emergency commit needs a supermajority");
    oracle::must(f.w, "prop", [](TxContext& tx) { ledger::transfer(tx, "GOV", "yes", 1); });
    // Power moved after the snapshot does not count.
    CHECK(oracle::revert_of(f.w, "yes", [&](TxContext& tx) { governor::emergency_commit(tx, "G", id); }) ==
          "emergency commit needs a supermajority");

    Fixture g(p, {{"prop", 1}, {"yes", 670}, {"no", 329}});
    const auto id2 = g.propose();
    g.w.advance_to(g.proposal(id2).start);
    g.vote("yes", id2, true);
    oracle::must(g.w, "no", [&](TxContext& tx) { governor::emergency_commit(tx, "G", id2); });
    CHECK(g.state(id2) == ProposalState::Executed);
}

TEST_CASE("borrowed power cannot vote in the block it arrives") {
    Fixture f(simple(1, 1), {{"prop", 1}, {"harness", 1'000'000}});
    oracle::must(f.w, "harness", [](TxContext& tx) { ledger::create_flash_pool(tx, "harness", "GOV", 0); });
    const auto outcome = f.w.run("buyer", [](TxContext& tx) {
        ledger::flash_borrow(tx, "harness", 1'000'000, [](TxContext& inner) {
            const auto id = governor::propose(inner, "G", {noop}, "");
            governor::cast_vote(inner, "G", id, true);
        });
    });
    CHECK(revert_reason(outcome) == "proposition power below threshold");
    CHECK(f.w.governor("G").proposal_count() == 0);

    const auto id = f.propose();
    const auto vote = f.w.run("buyer", [&](TxContext& tx) {
        ledger::flash_borrow(tx, "harness", 1'000'000, [&](TxContext& inner) {
            governor::cast_vote(inner, "G", id, true);
            ledger::repay(inner, "harness", 1'000'000);
        });
    });
    CHECK(revert_reason(vote) == "voting closed");
}

TEST_CASE("property: snapshot weights never exceed supply and late buyers weigh nothing") {
    // 10,000 random interleavings of transfers, delegations and votes around
    // one proposal's snapshot block.
    const std::vector<Address> holders{"yes", "no", "prop", "harness"};
    const std::vector<Address> voters{"yes", "no", "prop", "harness", "buyer"};
    int buyer_votes = 0;
    for (std::uint64_t seed = 1; seed <= 10'000; ++seed) {
        oracle::Rng rng(seed);
        auto p = simple(1, 1);
        p.voting_delay = 1 + rng.below(3);
        p.voting_period = 2 + rng.below(4);
        std::map<Address, Units> balances;
        for (const auto& h : holders) balances[h] = rng.range(1, 1'000);
        Fixture f(p, balances);
        const auto id = f.propose();
        const auto& start = f.proposal(id).start;
        const auto end = f.proposal(id).end;
        const auto snapshot = f.proposal(id).snapshot;
        bool buyer_bought = false;
        for (BlockHeight b = f.w.height(); b <= end; ++b) {
            if (b > f.w.height()) f.w.advance_to(b);
            std::vector<std::uint64_t> kinds(rng.below(5));
            for (auto& k : kinds) k = rng.below(3);
            // The snapshot block closes before any vote reads it; every later
            // block interleaves freely.
            if (b == snapshot) std::stable_sort(kinds.begin(), kinds.end());
            for (const auto kind : kinds) {
                const Address who = rng.pick(holders);
                switch (kind) {
                    case 0: {
                        // The buyer only ever receives tokens after the snapshot block.
                        const bool to_buyer = b > start && rng.coin(0.3);
                        const Address to = to_buyer ? Address{"buyer"} : rng.pick(holders);
                        const Units amt = rng.range(0, 400);
                        const bool ok =
                            committed(f.w.run(who, [&](TxContext& tx) { ledger::transfer(tx, "GOV", to, amt); }));
                        buyer_bought = buyer_bought || (ok && to_buyer && amt > 0);
                        break;
                    }
                    case 1: {
                        const Address to = rng.pick(holders);
                        oracle::must(f.w, who, [&](TxContext& tx) { ledger::delegate(tx, "GOV", to, PowerKind::Voting); });
                        break;
                    }
                    default: {
                        const Address v = b > start && buyer_bought && rng.coin() ? Address{"buyer"} : rng.pick(voters);
                        f.w.run(v, [&](TxContext& tx) { governor::cast_vote(tx, "G", id, rng.coin()); });
                    }
                }
            }
        }
        const auto& prop = f.proposal(id);
        const auto& token = f.w.token("GOV");
        Units cast = 0;
        for (const auto& [voter, r] : prop.receipts) {
            CHECK(r.weight == token.power_at(voter, PowerKind::Voting, snapshot));
            cast += r.weight;
            if (voter == Address{"buyer"}) {
                CHECK(r.weight == 0);
                ++buyer_votes;
            }
        }
        CHECK(cast == prop.for_votes + prop.against_votes);
        CHECK(cast <= token.supply_at(snapshot));
    }
    CHECK(buyer_votes > 1'000);
}

TEST_CASE("a vote cast while the snapshot block is still open reads it as it stands") {
    // With voting_delay 0 the snapshot block is the proposal's own block; a
    // transfer after a vote in that block lets the same tokens count twice.
    auto p = simple(1, 1);
    p.voting_delay = 0;
    Fixture f(p, {{"prop", 1}, {"yes", 100}});
    std::uint64_t id = 0;
    oracle::must(f.w, "yes", [&](TxContext& tx) {
        id = governor::propose(tx, "G", {noop}, "");
        governor::cast_vote(tx, "G", id, true);
    });
    oracle::must(f.w, "yes", [](TxContext& tx) { ledger::transfer(tx, "GOV", "no", 100); });
    f.vote("no", id, true);
    CHECK(f.proposal(id).for_votes == 200);
    CHECK(f.w.token("GOV").supply_at(f.proposal(id).snapshot) == 101);
}
